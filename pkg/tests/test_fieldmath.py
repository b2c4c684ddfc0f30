import numpy as np
import pytest

from pkpkit.fieldmath import (
    PrimeField,
    identity,
    kernel_basis,
    matmul_mod,
    random_full_rank,
    rank,
    rref,
    solve_row_combination,
)


def oracle_rank(mat, q):
    """Independent elimination: plain Python lists, counts pivots."""
    rows = [[int(v) % q for v in row] for row in mat]
    pivots = 0
    for col in range(len(rows[0]) if rows else 0):
        pivot_row = None
        for i in range(pivots, len(rows)):
            if rows[i][col] % q:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[pivots], rows[pivot_row] = rows[pivot_row], rows[pivots]
        inv = pow(rows[pivots][col], -1, q)
        rows[pivots] = [(v * inv) % q for v in rows[pivots]]
        for i in range(len(rows)):
            if i != pivots and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[pivots])]
        pivots += 1
    return pivots


class TestRref:
    def test_identity_unchanged(self, kernel_impl):
        out = rref(identity(2), [0, 1], 7)
        assert np.array_equal(out, identity(2))

    def test_proportional_columns_fail(self, kernel_impl):
        out = rref(np.array([[1, 1], [2, 2]]), [0, 1], 3)
        assert out is None

    def test_random_full_rank_columns(self, kernel_impl, rng):
        q = 251
        mat = random_full_rank(3, 5, q, rng)
        cols = [1, 3, 4]
        out = rref(mat, cols, q)
        assert out is not None
        assert np.array_equal(out[:, cols], identity(3))
        # same row space: stacking does not raise the rank (independent oracle)
        stacked = np.vstack([mat, out])
        assert oracle_rank(stacked, q) == oracle_rank(mat, q) == 3

    def test_idempotent(self, kernel_impl, rng):
        q = 13
        for _ in range(10):
            mat = random_full_rank(3, 6, q, rng)
            cols = sorted(rng.choice(6, 3, replace=False).tolist())
            once = rref(mat, cols, q)
            if once is None:
                continue
            again = rref(once, cols, q)
            assert np.array_equal(once, again)

    def test_column_order_defines_identity_order(self, kernel_impl, rng):
        q = 11
        mat = random_full_rank(3, 5, q, rng)
        out = rref(mat, [4, 0, 2], q)
        if out is not None:
            assert np.array_equal(out[:, [4, 0, 2]], identity(3))

    def test_rejects_bad_pivot_count(self, kernel_impl):
        with pytest.raises(ValueError):
            rref(identity(3), [0, 1], 5)


class TestRank:
    def test_zero_matrix(self, kernel_impl):
        assert rank(np.zeros((3, 4), dtype=np.int64), 5) == 0

    def test_identity(self, kernel_impl):
        assert rank(identity(4), 7) == 4

    def test_against_oracle(self, kernel_impl, rng):
        q = 251
        for _ in range(100):
            mat = rng.integers(0, q, size=(5, 8), dtype=np.int64)
            assert rank(mat, q) == oracle_rank(mat, q)

    def test_rank_transpose(self, kernel_impl, rng):
        q = 31
        for _ in range(25):
            mat = rng.integers(0, q, size=(4, 7), dtype=np.int64)
            assert rank(mat, q) == rank(mat.T, q)


class TestRandomFullRank:
    def test_gf2_one_by_one(self, rng):
        assert np.array_equal(random_full_rank(1, 1, 2, rng), [[1]])

    def test_postcondition(self, rng):
        assert rank(random_full_rank(3, 5, 251, rng), 251) == 3

    def test_gf2_square_acceptance_rate(self, rng):
        # fraction of uniform 3x3 GF(2) matrices with full rank is
        # prod_{i=0..2} (1 - 2^(i-3)) = 0.328125
        expected = (1 - 2**-3) * (1 - 2**-2) * (1 - 2**-1)
        draws = 10_000
        hits = sum(
            rank(rng.integers(0, 2, size=(3, 3), dtype=np.int64), 2) == 3
            for _ in range(draws)
        )
        sigma = np.sqrt(expected * (1 - expected) / draws)
        assert abs(hits / draws - expected) < 3 * sigma


class TestSolveRowCombination:
    def test_identity_case(self, rng):
        basis = random_full_rank(3, 6, 7, rng)
        S = solve_row_combination(basis, basis, 7)
        assert np.array_equal(S, identity(3))

    def test_scalar_row(self, rng):
        basis = random_full_rank(3, 6, 5, rng)
        target = (2 * basis[0]) % 5
        S = solve_row_combination(target, basis, 5)
        assert np.array_equal(S, [[2, 0, 0]])

    def test_multiply_back(self, rng):
        q = 251
        for _ in range(20):
            basis = random_full_rank(4, 9, q, rng)
            S0 = rng.integers(0, q, size=(2, 4), dtype=np.int64)
            target = matmul_mod(S0, basis, q)
            S = solve_row_combination(target, basis, q)
            assert S is not None
            assert np.array_equal(matmul_mod(S, basis, q), target)

    def test_outside_row_space(self, rng):
        q = 13
        basis = identity(2)
        basis = np.hstack([basis, np.zeros((2, 1), dtype=np.int64)])
        target = np.array([[0, 0, 1]])
        assert solve_row_combination(target, basis, q) is None


class TestKernelBasis:
    def test_identity_has_trivial_kernel(self):
        assert kernel_basis(identity(3), 7).shape == (0, 3)

    def test_forced_up_to_scalar(self):
        basis = kernel_basis(np.array([[1, 1]]), 3)
        assert basis.shape == (1, 2)
        v = basis[0]
        assert (v[0] + v[1]) % 3 == 0 and v.any()

    def test_random_annihilation_and_rank(self, kernel_impl, rng):
        q = 251
        mat = random_full_rank(4, 9, q, rng)
        basis = kernel_basis(mat, q)
        assert basis.shape == (5, 9)
        assert not matmul_mod(mat, basis.T, q).any()
        assert rank(basis, q) == 5

    def test_rank_sum_property(self, rng):
        q = 11
        for _ in range(20):
            mat = rng.integers(0, q, size=(3, 7), dtype=np.int64)
            basis = kernel_basis(mat, q)
            assert rank(basis, q) + rank(mat, q) == 7


class TestPrimeField:
    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            PrimeField(4)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            PrimeField(2)
        with pytest.raises(ValueError):
            PrimeField(2**31 + 11)

    @pytest.mark.parametrize("q", [3, 251, 509])
    def test_field_axioms_randomized(self, q, rng):
        f = PrimeField(q)
        for _ in range(200):
            a, b, c = (int(v) for v in rng.integers(0, q, 3))
            assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            assert f.mul(a, b) == f.mul(b, a)
            if a:
                assert f.mul(a, f.inv(a)) == 1
        assert f.add(5, f.neg(5)) == 0

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            PrimeField(7).inv(0)
