import random

import pytest

from conftest import DUAL, DUAL2, GROUP_RING, TWO_EPS, G, L, S
from localdrr.cocycles import named_two_cocycle
from localdrr.detext import (
    NotInG0Error,
    block_window,
    closed_form,
    d_window,
    det_cocycle_D,
    det_cocycle_report,
    lie_extract,
    lie_rr_combination,
    lie_trace,
    reach_bound,
    solve_direct_sum,
)
from localdrr.groupg import GroupElem, LieElem, g_act, g_inv, g_mul, random_group_elem, random_lie_elem
from localdrr.laurent import LaurentSeries, working_precision
from localdrr.nilring import QQ, invert_unit

RING = TWO_EPS


# -- a dense reference for the determinant cocycle -------------------------------------


def dense_d_block(x: GroupElem, size: int, prec: int):
    """Rows/columns t^0..t^(size-1) of f -> h f(phi), each column computed by g_act."""
    ring = x.ring
    cols = []
    with working_precision(prec):
        for k in range(size):
            col = g_act(x, LaurentSeries.monomial(ring, k), prec=prec)
            assert col.prec >= size
            cols.append([col[j] for j in range(size)])
    return [[cols[k][j] for k in range(size)] for j in range(size)]


def gauss_solve(a, b, ring):
    """a^-1 b by elimination; every pivot along the diagonal is a unit here."""
    n = len(a)
    m = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    for p in range(n):
        ip = invert_unit(m[p][p])
        m[p] = [v * ip for v in m[p]]
        for r in range(n):
            if r != p and not m[r][p].is_zero():
                f = m[r][p]
                m[r] = [v - f * w for v, w in zip(m[r], m[p])]
    return [row[n:] for row in m]


def gauss_det(a, ring):
    n = len(a)
    m = [list(r) for r in a]
    det = ring.one
    for p in range(n):
        det = det * m[p][p]
        ip = invert_unit(m[p][p])
        for r in range(p + 1, n):
            f = m[r][p] * ip
            m[r] = [v - f * w for v, w in zip(m[r], m[p])]
    return det


def matmul(a, b, ring):
    return [[sum((a[i][l] * b[l][j] for l in range(len(b))), ring.zero) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(a):
    return [list(r) for r in zip(*a)]


def dense_D(x, y, size):
    """det of d_x d_y d_xy^-1 over a square window of the given size."""
    ring = x.ring
    prec = 4 * size
    with working_precision(prec):
        xy = g_mul(x, y, prec=prec)
    dx, dy, dxy = (dense_d_block(g, 2 * size, prec) for g in (x, y, xy))
    dxdy = matmul(dx, dy, ring)
    # m = dxdy dxy^-1, i.e. m^T = (dxy^T)^-1 dxdy^T
    m = transpose(gauss_solve(transpose(dxy), transpose(dxdy), ring))
    corner = [row[:size] for row in m[:size]]
    return corner, gauss_det(corner, ring)


def identity_beyond(corner, n):
    size = len(corner)
    return all((corner[j][k] == 1) if j == k else corner[j][k].is_zero()
               for j in range(size) for k in range(n, size))


class TestReach:
    def test_gplus(self):
        assert reach_bound(G("(h=1+t; phi=t+t^2)")) == 0

    def test_phi_negative(self):
        assert reach_bound(G("(h=1; phi=t+e t^-1)", DUAL)) == 2

    def test_h_negative(self):
        assert reach_bound(G("(h=1+e t^-3; phi=t)", DUAL)) == 3

    @pytest.mark.parametrize("text,bound", [("(h=1; phi=t+e t^-1)", 2), ("(h=1+e t^-3; phi=t)", 3)])
    def test_probe(self, text, bound):
        # g(t^k) never reaches below t^(k - bound), and reaches it for some k
        x = G(text, DUAL)
        lows = []
        for k in range(12):
            col = g_act(x, LaurentSeries.monomial(DUAL, k), prec=30)
            lows.append(col.min_deg - k)
        assert min(lows) == -bound

    def test_not_g0(self):
        with pytest.raises(NotInG0Error):
            reach_bound(G("(h=t; phi=t)"))


class TestWindows:
    def test_identity(self):
        w = d_window(GroupElem.identity(QQ), 4)
        assert w == [[QQ.one if j == k else QQ.zero for k in range(4)] for j in range(4)]

    def test_gplus_b_block(self):
        for seed in range(5):
            x = random_group_elem(GROUP_RING, "Gplus", seed=seed)
            b = block_window(x, "b", 6).matrix
            assert all(c.is_zero() for row in b for c in row)

    def test_scaling(self):
        w = d_window(G("(h=1; phi=2t)"), 3)
        assert w == [[QQ.const(v if j == k else 0) for k, v in enumerate((1, 2, 4))] for j in range(3)]

    def test_bad_block(self):
        with pytest.raises(ValueError):
            block_window(GroupElem.identity(QQ), "e", 3)


class TestDeterminantCocycle:
    def test_gplus(self):
        for seed in range(5):
            x = random_group_elem(GROUP_RING, "Gplus", seed=2 * seed)
            y = random_group_elem(GROUP_RING, "Gplus", seed=2 * seed + 1)
            assert det_cocycle_D(x, y) == GROUP_RING.one

    def test_normalized(self):
        y = random_group_elem(RING, "G0", seed=4)
        assert det_cocycle_D(GroupElem.identity(RING), y) == RING.one
        assert det_cocycle_D(y, GroupElem.identity(RING)) == RING.one

    @pytest.mark.parametrize("xt,yt", [
        ("(h=1; phi=t+e t^-1)", "(h=1+d t^-1; phi=t)"),
        ("(h=1+d t^-1; phi=t)", "(h=1; phi=t+e t^-1)"),
        ("(h=1+e t^-1; phi=t)", "(h=1+d t; phi=t)"),
        ("(h=1+d t; phi=t)", "(h=1+e t^-1; phi=t)"),
    ])
    def test_dense_oracle_examples(self, xt, yt):
        x, y = G(xt, DUAL2), G(yt, DUAL2)
        rep = det_cocycle_report(x, y)
        size = 2 * max(rep.L, rep.n + rep.reach + 2, 2)
        corner, oracle = dense_D(x, y, size)
        assert identity_beyond(corner, rep.n)
        assert rep.value == oracle

    def test_commutator_of_examples(self):
        # multipliers 1 + e t^-1 and 1 + d t: the commutator is 1 + e d (trace of t^-1, t)
        x, y = G("(h=1+e t^-1; phi=t)", DUAL2), G("(h=1+d t; phi=t)", DUAL2)
        q = det_cocycle_D(x, y) * invert_unit(det_cocycle_D(y, x))
        assert q == DUAL2.one + DUAL2.gen("e") * DUAL2.gen("d")

    @pytest.mark.parametrize("seed", range(3))
    def test_dense_oracle_random(self, seed):
        x = random_group_elem(DUAL2, "G0", seed=10 + 2 * seed)
        y = random_group_elem(DUAL2, "G0", seed=11 + 2 * seed)
        rep = det_cocycle_report(x, y)
        size = 2 * max(rep.L, rep.n + rep.reach + 2, 2)
        corner, oracle = dense_D(x, y, size)
        assert identity_beyond(corner, rep.n)
        assert rep.value == oracle

    @pytest.mark.parametrize("seed", range(5))
    def test_window_stability(self, seed):
        x = random_group_elem(RING, "G0", seed=2 * seed)
        y = random_group_elem(RING, "G0", seed=2 * seed + 1)
        rep = det_cocycle_report(x, y)
        assert det_cocycle_D(x, y, window=rep.L + 4) == rep.value

    @pytest.mark.parametrize("seed", range(4))
    def test_block_identity(self, seed):
        x = random_group_elem(RING, "G0", seed=30 + 2 * seed)
        y = random_group_elem(RING, "G0", seed=31 + 2 * seed)
        n = 5
        K = reach_bound(y) + 1
        P = n + reach_bound(x) + 1
        c_x = block_window(x, "c", max(P, K)).matrix
        d_x = block_window(x, "d", P).matrix
        b_y = block_window(y, "b", max(P, K)).matrix
        d_y = block_window(y, "d", P).matrix
        with working_precision(8 * P):
            d_xy = dense_d_block(g_mul(x, y, prec=8 * P), n, 8 * P)
        for j in range(n):
            for k in range(n):
                rhs = sum((c_x[j][m] * b_y[m][k] for m in range(K)), RING.zero)
                rhs = rhs + sum((d_x[j][m] * d_y[m][k] for m in range(P)), RING.zero)
                assert d_xy[j][k] == rhs

    @pytest.mark.parametrize("seed", range(4))
    def test_triangular_mod_nil(self, seed):
        w = d_window(random_group_elem(RING, "G0", seed=seed), 8)
        for j in range(8):
            for k in range(8):
                if j < k:
                    assert w[j][k].is_nilpotent()
                elif j == k:
                    assert w[j][k].is_unit()

    def test_not_g0(self):
        with pytest.raises(NotInG0Error):
            det_cocycle_D(G("(h=t; phi=t)"), GroupElem.identity(QQ))


class TestLie:
    @pytest.mark.parametrize("n,m,kind,value", [(-3, 3, "ee", 3), (-1, 1, "ed", -1), (-2, 2, "dd", -1)])
    def test_table_examples(self, n, m, kind, value):
        z = LieElem.e(QQ, n) if kind in ("ee", "ed") else LieElem.d(QQ, n)
        w = LieElem.e(QQ, m) if kind == "ee" else LieElem.d(QQ, m)
        assert lie_trace(z, w) == QQ.const(value)

    def test_extract_detd(self):
        z, w = LieElem.e(QQ, -1), LieElem.e(QQ, 1)
        assert lie_extract(named_two_cocycle("D"), z, w) == QQ.one
        assert lie_trace(z, w) == QQ.one

    @pytest.mark.parametrize("seed", range(4))
    def test_cup_closed_forms(self, seed):
        z, w = random_lie_elem(QQ, 2 * seed), random_lie_elem(QQ, 2 * seed + 1)
        for name in ("LL", "LO", "OO", "D"):
            assert lie_extract(named_two_cocycle(name), z, w) == closed_form(name, z, w)

    def test_ll_formula(self):
        z, w = L("(s=t^-2 + 3t; r=t)"), L("(s=2t^2 - t^-1; r=1)")
        # s1 ds2 = (t^-2 + 3t)(4t + t^-2) = 4t^-1 + t^-4 + 12t^2 + 3t^-1
        assert closed_form("LL", z, w) == QQ.const(2 * 7)

    @pytest.mark.parametrize("seed", range(4))
    def test_trace_matches_combination(self, seed):
        z, w = random_lie_elem(QQ, 50 + 2 * seed), random_lie_elem(QQ, 51 + 2 * seed)
        assert lie_trace(z, w) == lie_rr_combination(z, w)


class TestDirectSum:
    def test_identity(self):
        u, v = solve_direct_sum(GroupElem.identity(QQ), S("t^-1 + 1 + t"))
        assert (u, v) == (S("t^-1"), S("1 + t"))

    def test_gplus(self):
        x = random_group_elem(GROUP_RING, "Gplus", seed=3)
        f = S("1 + e1 t - 2 t^2", GROUP_RING)
        u, v = solve_direct_sum(x, f, prec=10)
        assert u.is_known_zero()
        with working_precision(10):
            expected = g_act(g_inv(x), f)
        assert v.agrees(expected)

    @pytest.mark.parametrize("seed", range(5))
    def test_reconstruction(self, seed):
        rng = random.Random(seed)
        x = random_group_elem(RING, "G0", seed=seed)
        f = LaurentSeries(RING, {d: RING.const(rng.randint(-3, 3)) for d in range(-3, 4)})
        u, v = solve_direct_sum(x, f, prec=10)
        assert all(d < 0 for d in u.coeffs) and all(d >= 0 for d in v.coeffs)
        residual = f - u - g_act(x, v, prec=30)
        assert residual.is_known_zero() and residual.prec >= 1
