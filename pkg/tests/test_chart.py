"""Charts, jets, derivative extraction, normalization and projection."""

import math
import random
from fractions import Fraction as F

import pytest

from terracini.catalog import make_random_variety, make_veronese
from terracini.chart import (
    BadTargetError,
    Chart,
    ChartFormatError,
    CurvilinearJet,
    DegenerateJetError,
    FiveJet,
    chart_to_obj,
    composed_curve_series,
    curve_derivatives,
    jet_normalize,
    load_chart,
    multi_indices,
    obj_to_chart,
    project_generic,
    save_chart,
)
from terracini.curvilinear import tangent_along
from terracini.exactlin import BadIndexError, MultiPoly, span_rank


def rand_fivejet(rng, n, base_hi=2, hi=4):
    def vec(lo, hi_):
        return tuple(F(rng.randint(lo, hi_)) for _ in range(n))

    lam = vec(-hi, hi)
    while all(c == 0 for c in lam):
        lam = vec(-hi, hi)
    return FiveJet(base=vec(-base_hi, base_hi), lam=lam, mu=vec(-hi, hi),
                   nu=vec(-hi, hi), rho=vec(-hi, hi), sigma=vec(-hi, hi))


# ---------------------------------------------------------------------------
# derivative vectors
# ---------------------------------------------------------------------------

def test_empty_index_gives_coords():
    c = make_veronese(2, 2)
    pt = (F(1), F(2))
    assert c.derivative_vector(pt, ()) == tuple(p.eval(pt) for p in c.coords)


def test_veronese_second_derivative_at_origin():
    # coords 1, u1, u2, u1^2, u1*u2, u2^2; d^2/du1^2 at 0 -> (0,0,0,2,0,0)
    c = make_veronese(2, 2)
    assert c.derivative_vector((F(0), F(0)), (0, 0)) == \
        (F(0), F(0), F(0), F(2), F(0), F(0))


def test_derivative_symmetric_in_index_order():
    rng = random.Random(40)
    c = make_random_variety(3, 4, 7, 2)
    pt = tuple(F(rng.randint(-3, 3)) for _ in range(3))
    idx = [0, 2, 1, 2]
    perms = [(0, 2, 1, 2), (2, 2, 1, 0), (1, 2, 2, 0)]
    base = c.derivative_vector(pt, tuple(idx))
    for p in perms:
        assert c.derivative_vector(pt, p) == base


def test_derivative_bad_index():
    c = make_veronese(2, 2)
    with pytest.raises(BadIndexError):
        c.derivative_vector((F(0), F(0)), (2,))


# ---------------------------------------------------------------------------
# taylor blocks
# ---------------------------------------------------------------------------

def test_taylor_block_h0():
    c = make_veronese(2, 2)
    block = c.taylor_block((F(1), F(1)), 0)
    assert len(block) == 1 and block[0][0] == ()


def test_taylor_block_count_and_smooth_rank():
    c = make_random_variety(3, 3, 9, 4)
    pt = (F(0), F(0), F(0))
    block = c.taylor_block(pt, 2)
    assert len(block) == math.comb(3 + 2, 2)
    order1 = [vec for idx, vec in block if len(idx) <= 1]
    assert span_rank(order1) == 4  # n+1 on a smooth chart


def test_quadratic_veronese_fills_ambient_at_order_2():
    c = make_veronese(4, 2)
    pt = (F(1), F(-2), F(3), F(1))
    block = [vec for _, vec in c.taylor_block(pt, 2)]
    assert len(block) == 15 and span_rank(block) == 15


def test_multi_indices_sorted_and_complete():
    idx = multi_indices(2, 2)
    assert idx == [(), (0,), (1,), (0, 0), (0, 1), (1, 1)]


# ---------------------------------------------------------------------------
# jet normalization
# ---------------------------------------------------------------------------

def test_normalize_of_normalized_jet_is_identity():
    c = make_veronese(2, 2)
    jet = CurvilinearJet(base=(F(0), F(0)), lam=(F(1), F(0)), mu=(F(0), F(3)),
                         length=3)
    nc, nj = jet_normalize(c, jet)
    assert nc is c and nj is jet


def test_normalize_two_variable_swap_case():
    c = make_veronese(2, 2)
    jet = CurvilinearJet(base=(F(0), F(0)), lam=(F(0), F(1)), mu=(F(1), F(0)),
                         length=3)
    _, nj = jet_normalize(c, jet)
    assert nj.lam == (F(1), F(0))
    assert nj.mu[0] == 0
    assert nj.mu == (F(0), F(1))


def test_normalize_rejects_zero_lambda():
    with pytest.raises(DegenerateJetError):
        CurvilinearJet(base=(F(0),), lam=(F(0),), mu=(F(1),), length=3)


def test_normalized_jet_spans_same_tangent_dimension():
    rng = random.Random(41)
    c = make_veronese(4, 2)
    for _ in range(5):
        lam = tuple(F(rng.randint(-4, 4)) for _ in range(4))
        if all(x == 0 for x in lam):
            lam = (F(1), F(0), F(0), F(0))
        jet = CurvilinearJet(base=tuple(F(rng.randint(-2, 2)) for _ in range(4)),
                             lam=lam,
                             mu=tuple(F(rng.randint(-4, 4)) for _ in range(4)),
                             length=3)
        nc, nj = jet_normalize(c, jet)
        assert nj.is_normalized()
        # tangent_along normalizes internally, so both routes must agree
        assert tangent_along(c, jet).dim == tangent_along(nc, nj).dim


# ---------------------------------------------------------------------------
# generic projection
# ---------------------------------------------------------------------------

def test_project_identity_when_target_equals_r():
    c = make_veronese(2, 3)
    assert project_generic(c, c.r, seed=1) is c


def test_project_rejects_bad_targets():
    c = make_veronese(2, 3)
    with pytest.raises(BadTargetError):
        project_generic(c, c.r + 1, seed=1)
    with pytest.raises(BadTargetError):
        project_generic(c, 2 * c.n - 1, seed=1)


def test_projection_keeps_jacobian_rank():
    c = make_veronese(2, 3)
    proj = project_generic(c, 8, seed=5)
    assert proj.r == 8
    for pt in [(F(0), F(0)), (F(2), F(-1)), (F(1), F(3))]:
        assert proj.jacobian_rank(pt) == 2


def test_projection_preserves_span_ranks():
    rng = random.Random(42)
    c = make_veronese(2, 3)
    proj = project_generic(c, 8, seed=7)
    for _ in range(5):
        pt = (F(rng.randint(-3, 3)), F(rng.randint(-3, 3)))
        before = [vec for _, vec in c.taylor_block(pt, 2)]
        after = [vec for _, vec in proj.taylor_block(pt, 2)]
        assert span_rank(before) >= span_rank(after)
        # a generic projection to P^8 cannot lose a 6-dimensional span
        assert span_rank(after) == min(span_rank(before), 9)


def test_projection_commutes_with_differentiation():
    c = make_veronese(2, 3)
    proj = project_generic(c, 8, seed=9)
    # the Veronese coords are distinct monomials, so the projection matrix can
    # be read back off the projected coordinate polynomials
    mons = [next(iter(p.terms)) for p in c.coords]
    pmat = [[q.terms.get(e, F(0)) for e in mons] for q in proj.coords]
    for pt in [(F(2), F(1)), (F(-1), F(3))]:
        for idx in [(), (0,), (1,), (0, 1), (0, 0, 1)]:
            lifted = c.derivative_vector(pt, idx)
            direct = proj.derivative_vector(pt, idx)
            applied = tuple(sum(row[j] * lifted[j] for j in range(len(lifted)))
                            for row in pmat)
            assert direct == applied


# ---------------------------------------------------------------------------
# curve derivatives and the composition oracle
# ---------------------------------------------------------------------------

def test_coordinate_curve_derivatives_are_pure_partials():
    c = make_random_variety(2, 5, 8, 3)
    n = 2
    zero = (F(0), F(0))
    jet = FiveJet(base=zero, lam=(F(1), F(0)), mu=zero, nu=zero, rho=zero,
                  sigma=zero)
    d1, d2, d3, d4, d5 = curve_derivatives(c, jet)
    assert d1 == c.derivative_vector(zero, (0,))
    assert d2 == c.derivative_vector(zero, (0, 0))
    assert d3 == c.derivative_vector(zero, (0, 0, 0))
    assert d4 == c.derivative_vector(zero, (0, 0, 0, 0))
    assert d5 == c.derivative_vector(zero, (0, 0, 0, 0, 0))


def test_third_derivative_picks_up_6_nu():
    c = make_random_variety(2, 4, 7, 8)
    zero = (F(0), F(0))
    nu = (F(3), F(-2))
    base_jet = FiveJet(base=zero, lam=(F(1), F(2)), mu=(F(1), F(1)), nu=zero,
                       rho=zero, sigma=zero)
    nu_jet = FiveJet(base=zero, lam=(F(1), F(2)), mu=(F(1), F(1)), nu=nu,
                     rho=zero, sigma=zero)
    _, _, d3a, _, _ = curve_derivatives(c, base_jet)
    _, _, d3b, _, _ = curve_derivatives(c, nu_jet)
    x1 = c.derivative_vector(zero, (0,))
    x2 = c.derivative_vector(zero, (1,))
    expect = tuple(a + 6 * (nu[0] * b1 + nu[1] * b2)
                   for a, b1, b2 in zip(d3a, x1, x2))
    assert d3b == expect


def test_taylor_consistency_against_composition():
    rng = random.Random(43)
    for n, d, r, seed in [(1, 5, 5, 1), (2, 3, 6, 2), (3, 3, 9, 3)]:
        c = make_random_variety(n, d, r, seed)
        jet = rand_fivejet(rng, n)
        derivs = curve_derivatives(c, jet)
        series = composed_curve_series(c, jet)
        for k in range(1, 6):
            assembled = derivs[k - 1]
            from_series = tuple(math.factorial(k) * s[k] for s in series)
            assert assembled == from_series


# ---------------------------------------------------------------------------
# chart JSON format
# ---------------------------------------------------------------------------

def test_chart_json_roundtrip_bit_exact(tmp_path):
    c = make_random_variety(2, 3, 6, 12)
    path = tmp_path / "chart.json"
    save_chart(c, path)
    c2 = load_chart(path)
    assert c2.label == c.label and c2.n == c.n and c2.r == c.r
    assert all(p == q for p, q in zip(c.coords, c2.coords))
    # a second round trip produces identical bytes
    path2 = tmp_path / "chart2.json"
    save_chart(c2, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_chart_json_big_integers():
    big = 10 ** 50 + 7
    c = Chart("big", 1, 1, (MultiPoly.constant(1, F(big, 3)),
                            MultiPoly.variable(1, 0)))
    c2 = obj_to_chart(chart_to_obj(c))
    assert c2.coords[0].coefficient((0,)) == F(big, 3)


@pytest.mark.parametrize("mutate, fragment", [
    (lambda o: o.pop("label"), "label"),
    (lambda o: o.__setitem__("n", 0), "n must be"),
    (lambda o: o.__setitem__("coords", []), "polynomials"),
    (lambda o: o["coords"][0].__setitem__(0, {"exp": [1], "num": "x", "den": "1"}),
     "num/den"),
    (lambda o: o["coords"][0][0].__setitem__("exp", [1, 2, 3]), "exp"),
])
def test_chart_json_errors(mutate, fragment):
    obj = chart_to_obj(make_veronese(1, 2))
    mutate(obj)
    with pytest.raises(ChartFormatError, match=fragment):
        obj_to_chart(obj)
