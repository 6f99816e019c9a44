from fractions import Fraction

import numpy as np
import pytest

from rlwelab.lattice import (
    LllParams,
    ReductionBudgetError,
    _IntegralGso,
    extract_independent,
    gso,
    hnf,
    is_lll_reduced,
    lll_reduce,
    root_hermite_factor,
    size_reduce,
)
from rlwelab.ring import RingContext, multiplication_matrix, sample_uniform

from oracles import det_bareiss, same_lattice, shortest_norm_sq_enum, span_of


def random_basis(rng, n, m=None, lo=-1000, hi=1000):
    m = m or n
    while True:
        b = rng.integers(lo, hi + 1, size=(n, m)).tolist()
        if n != m or det_bareiss(b) != 0:
            return b


def qary_stack(d, q, seed):
    ctx = RingContext(d, q)
    rng = np.random.default_rng(seed)
    a1 = multiplication_matrix(sample_uniform(ctx, rng))
    a2 = multiplication_matrix(sample_uniform(ctx, rng))
    top = np.hstack([a1.T, a2.T])
    qi = q * np.eye(d, dtype=np.int64)
    z = np.zeros((d, d), dtype=np.int64)
    return np.vstack([top, np.hstack([qi, z]), np.hstack([z, qi])]).tolist()


class TestGso:
    def test_hand_example(self):
        g = gso([[1, 0], [1, 1]])
        assert g.ortho == [[1, 0], [0, 1]]
        assert g.mu[1][0] == 1
        assert g.norms_sq == [1, 1]

    def test_orthogonal_input(self):
        rows = [[2, 0, 0], [0, -3, 0], [0, 0, 5]]
        g = gso(rows)
        assert all(all(x == 0 for x in row) for row in g.mu)
        assert g.ortho == [[Fraction(x) for x in r] for r in rows]

    def test_norm_product_is_determinant(self):
        # oracle: exact determinant via fraction-free elimination
        rng = np.random.default_rng(0)
        for _ in range(10):
            b = random_basis(rng, 5, lo=-30, hi=30)
            g = gso(b)
            prod = Fraction(1)
            for n2 in g.norms_sq:
                prod *= n2
            assert prod == Fraction(det_bareiss(b)) ** 2

    def test_reconstruction_identity_exact(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            b = random_basis(rng, 6, lo=-50, hi=50)
            g = gso(b)
            for i, row in enumerate(b):
                rebuilt = list(g.ortho[i])
                for j in range(i):
                    rebuilt = [r + g.mu[i][j] * o for r, o in zip(rebuilt, g.ortho[j])]
                assert rebuilt == [Fraction(x) for x in row]

    def test_dependent_rows_error(self):
        with pytest.raises(ValueError):
            gso([[1, 2], [2, 4]])


class TestIntegralState:
    """The incremental lambda/D updates must match full recomputation exactly,
    which is what licenses them in place of recomputing the GSO each step."""

    def test_matches_fraction_gso(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            b = random_basis(rng, 5, lo=-40, hi=40)
            st = _IntegralGso([r[:] for r in b])
            g = gso(b)
            for i in range(5):
                for j in range(i):
                    assert Fraction(st.lam[i][j], st.D[j + 1]) == g.mu[i][j]
                assert Fraction(st.D[i + 1], st.D[i]) == g.norms_sq[i]

    def test_swap_update_equals_recompute(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n = int(rng.integers(2, 7))
            b = random_basis(rng, n, lo=-30, hi=30)
            st = _IntegralGso([r[:] for r in b])
            for _ in range(6):
                k = int(rng.integers(1, n))
                st.swap(k)
                fresh = _IntegralGso([r[:] for r in st.rows])
                assert st.D == fresh.D
                assert st.lam == fresh.lam

    def test_size_reduce_update_equals_recompute(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            n = int(rng.integers(2, 7))
            b = random_basis(rng, n, lo=-30, hi=30)
            st = _IntegralGso([r[:] for r in b])
            k = int(rng.integers(1, n))
            for l in range(k - 1, -1, -1):
                st.size_reduce_step(k, l)
            fresh = _IntegralGso([r[:] for r in st.rows])
            assert st.D == fresh.D
            assert st.lam == fresh.lam


class TestSizeReduce:
    def test_hand_example(self):
        assert size_reduce([[1, 0], [1, 1]]) == [[1, 0], [0, 1]]

    def test_fixpoint(self):
        rows = [[5, 1], [1, -4]]
        assert size_reduce(rows) == rows

    def test_lattice_preserved(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            b = random_basis(rng, 6, lo=-100, hi=100)
            out = size_reduce(b)
            assert same_lattice(b, out)

    def test_all_mu_small(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            b = random_basis(rng, 5, lo=-100, hi=100)
            g = gso(size_reduce(b))
            for row in g.mu:
                for m in row:
                    assert abs(m) <= Fraction(1, 2)


class TestLllReduce:
    def test_identity_fixpoint(self):
        eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert lll_reduce(eye) == eye

    def test_two_dim_reaches_minimum(self):
        # oracle: exhaustive enumeration over |c| <= 100
        out = lll_reduce([[201, 37], [1648, 297]])
        first_sq = out[0][0] ** 2 + out[0][1] ** 2
        assert first_sq == shortest_norm_sq_enum([[201, 37], [1648, 297]])

    @pytest.mark.parametrize("method", ["exact", "fp"])
    def test_outputs_reduced_and_same_lattice(self, method):
        rng = np.random.default_rng(7)
        for _ in range(15):
            b = random_basis(rng, 8, lo=-1000, hi=1000)
            out = lll_reduce(b, method=method)
            assert is_lll_reduced(out)
            assert same_lattice(b, out)

    def test_first_vector_bound(self):
        rng = np.random.default_rng(8)
        params = LllParams(delta=0.99)
        for n in (2, 4, 6):
            b = random_basis(rng, n, lo=-500, hi=500)
            out = lll_reduce(b, params)
            norm1 = sum(x * x for x in out[0]) ** 0.5
            det = abs(det_bareiss(b))
            bound = (1.0 / (params.delta - 0.25)) ** ((n - 1) / 4.0) * det ** (1.0 / n)
            assert norm1 <= bound * (1 + 1e-9)

    def test_dependent_rows_rejected(self):
        with pytest.raises(ValueError):
            lll_reduce([[1, 2], [2, 4]])

    def test_budget_error(self):
        rng = np.random.default_rng(9)
        b = random_basis(rng, 8, lo=-1000, hi=1000)
        with pytest.raises(ReductionBudgetError):
            lll_reduce(b, LllParams(delta=0.99, max_iterations=2), method="exact")

    def test_qary_termination_within_budget(self):
        # 32-dim q-ary basis completes without tripping the backstop
        stack = qary_stack(16, 1997, seed=10)
        basis = extract_independent(stack, qary_modulus=1997)
        out = lll_reduce(basis, LllParams())
        assert is_lll_reduced(out)
        assert same_lattice(basis, out)

    def test_methods_agree_on_contract(self):
        rng = np.random.default_rng(11)
        b = random_basis(rng, 6, lo=-200, hi=200)
        exact = lll_reduce(b, method="exact")
        fp = lll_reduce(b, method="fp")
        assert same_lattice(exact, fp)
        assert is_lll_reduced(exact) and is_lll_reduced(fp)

    def test_single_row(self):
        assert lll_reduce([[3, 4]]) == [[3, 4]]

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            lll_reduce([[1]], method="approx")


class TestIsLllReduced:
    def test_identity(self):
        assert is_lll_reduced([[1, 0], [0, 1]])

    def test_size_violation(self):
        assert not is_lll_reduced([[1, 0], [1, 1]], LllParams(delta=0.99))

    def test_reduce_then_check(self):
        rng = np.random.default_rng(12)
        b = random_basis(rng, 7, lo=-300, hi=300)
        assert is_lll_reduced(lll_reduce(b))


class TestParams:
    @pytest.mark.parametrize("delta", [0.25, 1.0, -1.0, 1.5])
    def test_delta_range(self, delta):
        with pytest.raises(ValueError):
            LllParams(delta=delta)

    def test_defaults(self):
        p = LllParams()
        assert p.delta == 0.99
        assert p.max_iterations == 10_000_000


class TestExtractIndependent:
    def test_redundant_rows(self):
        out = extract_independent([[2, 0], [4, 0], [0, 3]])
        assert len(out) == 2
        assert same_lattice(out, [[2, 0], [4, 0], [0, 3]])

    def test_independent_input_same_lattice(self):
        rng = np.random.default_rng(13)
        b = random_basis(rng, 5, lo=-50, hi=50)
        out = extract_independent(b)
        assert len(out) == 5
        assert same_lattice(b, out)

    def test_duplicate_row(self):
        assert extract_independent([[1, 1], [1, 1]]) == [[1, 1]]

    def test_all_zero(self):
        assert extract_independent([[0, 0], [0, 0]]) == []

    def test_qary_fast_path_matches_general(self):
        stack = qary_stack(5, 97, seed=14)
        fast = extract_independent(stack, qary_modulus=97)
        general = extract_independent(stack)
        assert len(fast) == 10
        assert same_lattice(fast, general)
        assert same_lattice(fast, stack)


class TestHnf:
    def test_canonical_for_same_lattice(self):
        # two generating sets of one lattice get identical HNFs
        rng = np.random.default_rng(15)
        b = random_basis(rng, 4, lo=-20, hi=20)
        transformed = [
            [x + 3 * y for x, y in zip(b[0], b[1])],
            b[1],
            [x - y for x, y in zip(b[2], b[3])],
            b[3],
        ]
        assert hnf(b) == hnf(transformed)

    def test_lattice_preserved(self):
        rng = np.random.default_rng(16)
        rows = rng.integers(-30, 31, size=(6, 4)).tolist()
        assert same_lattice(hnf(rows), rows)


class TestRootHermiteFactor:
    def test_identity(self):
        assert root_hermite_factor([[1, 0], [0, 1]]) == pytest.approx(1.0)

    def test_scaled_identity(self):
        assert root_hermite_factor([[2, 0], [0, 2]]) == pytest.approx(1.0)

    def test_reduced_qary_quality(self):
        stack = qary_stack(10, 1997, seed=17)
        basis = extract_independent(stack, qary_modulus=1997)
        out = lll_reduce(basis)
        gamma = root_hermite_factor(out)
        assert gamma <= 1.06

    def test_rank_deficient(self):
        with pytest.raises(ValueError):
            root_hermite_factor([[1, 2], [2, 4]])


class TestLatticePreservation:
    @pytest.mark.parametrize("dim", [2, 4, 8])
    def test_reduction_preserves_lattice(self, dim):
        rng = np.random.default_rng(18 + dim)
        for _ in range(8):
            b = random_basis(rng, dim, lo=-1000, hi=1000)
            out = lll_reduce(b)
            assert same_lattice(b, out)

    def test_oracle_span_membership(self):
        # sanity of the membership oracle itself
        span = span_of([[2, 0], [0, 3]])
        assert span.contains([4, 3])
        assert not span.contains([1, 0])
        assert span.rank == 2
