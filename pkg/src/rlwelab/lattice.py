"""Integer lattice bases: Gram-Schmidt data, LLL reduction, quality metrics.

A basis is a plain ``list[list[int]]`` of row vectors (arbitrary-precision
Python integers), so every operation here is exact.  The LLL implementation
follows the classic two-condition loop (size reduction, Lovasz test with a
swap on failure) and comes in two engines:

* an exact engine on the integral Gram-Schmidt representation
  (lambda / d of de Weger), used for small inputs, for verification, and
  as the final word on every output;
* a float-GSO kernel (``_lll_kernel``) for attack-scale inputs, whose output
  is always re-run through the exact engine, so the published postcondition
  (both LLL conditions hold exactly) is guaranteed no matter which path ran.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _lll_kernel

__all__ = [
    "LllParams",
    "GsoData",
    "ReductionBudgetError",
    "gso",
    "size_reduce",
    "lll_reduce",
    "is_lll_reduced",
    "extract_independent",
    "hnf",
    "root_hermite_factor",
]

# below this many rows the exact engine is cheap enough to use directly
_FP_MIN_ROWS = 26
# float64 GSO is trustworthy well past this entry size; larger goes exact
_FP_MAX_ENTRY = 1 << 24


class ReductionBudgetError(RuntimeError):
    """Raised when lll_reduce exceeds its iteration budget."""


@dataclass(frozen=True)
class LllParams:
    """Reduction parameters: Lovasz delta and the iteration backstop."""

    delta: float = 0.99
    max_iterations: int = 10_000_000

    def __post_init__(self):
        if not 0.25 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (1/4, 1), got {self.delta}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass
class GsoData:
    """Exact Gram-Schmidt data: orthogonal vectors, mu coefficients, norms.

    ``mu[i][j]`` is defined for j < i; ``norms_sq[i]`` is ||b_i*||^2.
    """

    ortho: list = field(repr=False)
    mu: list = field(repr=False)
    norms_sq: list = field(default_factory=list)


def _copy_rows(basis) -> list[list[int]]:
    rows = [[int(x) for x in row] for row in basis]
    if rows:
        m = len(rows[0])
        if any(len(r) != m for r in rows):
            raise ValueError("all basis rows must have the same length")
    return rows


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def gso(basis) -> GsoData:
    """Exact (rational) Gram-Schmidt orthogonalization of the rows.

    Raises ValueError on linearly dependent rows, which show up as a zero
    orthogonal norm.
    """
    rows = _copy_rows(basis)
    ortho: list[list[Fraction]] = []
    mu: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for i, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        mu_row = []
        for j in range(i):
            m_ij = (
                Fraction(sum(a * b for a, b in zip(row, ortho[j]))) / norms[j]
            )
            mu_row.append(m_ij)
            v = [a - m_ij * b for a, b in zip(v, ortho[j])]
        n2 = sum(a * a for a in v)
        if n2 == 0:
            raise ValueError(f"rows are linearly dependent (row {i} has zero projection)")
        ortho.append(v)
        mu.append(mu_row)
        norms.append(n2)
    return GsoData(ortho=ortho, mu=mu, norms_sq=norms)


class _IntegralGso:
    """Integral lambda/d Gram-Schmidt bookkeeping for the exact LLL engine.

    With D[0] = 1 and D[i+1] = det(Gram(b_0..b_i)):
        mu[i][j]      = lam[i][j] / D[j+1]
        ||b_i*||^2    = D[i+1] / D[i]
    All updates stay in integers; every division below is exact.
    """

    def __init__(self, rows: list[list[int]]):
        n = len(rows)
        self.rows = rows
        self.lam = [[0] * i for i in range(n)]
        self.D = [1] * (n + 1)
        for i in range(n):
            for j in range(i + 1):
                u = _dot(rows[i], rows[j])
                for k in range(j):
                    u = (self.D[k + 1] * u - self.lam[i][k] * self.lam[j][k]) // self.D[k]
                if j < i:
                    self.lam[i][j] = u
                else:
                    if u <= 0:
                        raise ValueError(
                            f"rows are linearly dependent (Gram determinant vanishes at row {i})"
                        )
                    self.D[i + 1] = u

    def size_reduce_step(self, k: int, l: int) -> None:
        """Make |mu[k][l]| <= 1/2 by subtracting a rounded multiple of row l."""
        lam, D = self.lam, self.D
        if 2 * abs(lam[k][l]) > D[l + 1]:
            r = (2 * lam[k][l] + D[l + 1]) // (2 * D[l + 1])  # round half up
            bk, bl = self.rows[k], self.rows[l]
            for t in range(len(bk)):
                bk[t] -= r * bl[t]
            lam[k][l] -= r * D[l + 1]
            for j in range(l):
                lam[k][j] -= r * lam[l][j]

    def swap(self, k: int) -> None:
        """Swap rows k-1 and k, updating lambda/D (Cohen's integral formulas)."""
        lam, D = self.lam, self.D
        self.rows[k - 1], self.rows[k] = self.rows[k], self.rows[k - 1]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lam_k = lam[k][k - 1]
        b_new = (D[k - 1] * D[k + 1] + lam_k * lam_k) // D[k]
        for i in range(k + 1, len(self.rows)):
            t = lam[i][k]
            lam[i][k] = (D[k + 1] * lam[i][k - 1] - lam_k * t) // D[k]
            lam[i][k - 1] = (b_new * t + lam_k * lam[i][k]) // D[k + 1]
        D[k] = b_new

    def lovasz_holds(self, k: int, dnum: int, dden: int) -> bool:
        """Exact test of (delta - mu[k][k-1]^2)||b_{k-1}*||^2 <= ||b_k*||^2."""
        lam, D = self.lam, self.D
        lhs = dnum * D[k] * D[k] - dden * lam[k][k - 1] * lam[k][k - 1]
        return lhs <= dden * D[k + 1] * D[k - 1]

    def mu_abs_ok(self, i: int, j: int) -> bool:
        return 2 * abs(self.lam[i][j]) <= self.D[j + 1]


def _delta_as_ratio(delta: float) -> tuple[int, int]:
    f = Fraction(delta)  # exact value of the float
    return f.numerator, f.denominator


def _exact_lll(rows: list[list[int]], params: LllParams) -> list[list[int]]:
    n = len(rows)
    if n <= 1:
        return rows
    state = _IntegralGso(rows)
    dnum, dden = _delta_as_ratio(params.delta)
    k = 1
    iters = 0
    while k < n:
        iters += 1
        if iters > params.max_iterations:
            raise ReductionBudgetError(
                f"LLL exceeded {params.max_iterations} iterations at dimension {n}"
            )
        for l in range(k - 1, -1, -1):
            state.size_reduce_step(k, l)
        if state.lovasz_holds(k, dnum, dden):
            k += 1
        else:
            state.swap(k)
            k = max(k - 1, 1)
    return state.rows


def size_reduce(basis) -> list[list[int]]:
    """Size-reduce only: after this every |mu[i][j]| <= 1/2, lattice unchanged."""
    rows = _copy_rows(basis)
    if len(rows) <= 1:
        return rows
    state = _IntegralGso(rows)
    for k in range(1, len(rows)):
        for l in range(k - 1, -1, -1):
            state.size_reduce_step(k, l)
    return state.rows


def is_lll_reduced(basis, params: LllParams | None = None) -> bool:
    """Exact check of both LLL conditions (size reduction and Lovasz)."""
    params = params or LllParams()
    rows = _copy_rows(basis)
    if len(rows) <= 1:
        return True
    state = _IntegralGso(rows)
    dnum, dden = _delta_as_ratio(params.delta)
    n = len(rows)
    for i in range(1, n):
        for j in range(i):
            if not state.mu_abs_ok(i, j):
                return False
    for k in range(1, n):
        if not state.lovasz_holds(k, dnum, dden):
            return False
    return True


def lll_reduce(basis, params: LllParams | None = None, method: str = "auto") -> list[list[int]]:
    """LLL-reduce the rows; the output spans the same lattice and satisfies
    both reduction conditions exactly.

    method:
        "auto"  - float kernel for large inputs, exact engine otherwise
        "exact" - integral-arithmetic engine only
        "fp"    - float kernel first (falls back to exact when unusable)

    The float kernel's output is always finished by the exact engine, so the
    method only affects speed, never the postcondition.  Raises
    ReductionBudgetError when the iteration backstop is exhausted and
    ValueError on linearly dependent rows.
    """
    if method not in ("auto", "exact", "fp"):
        raise ValueError(f"unknown method {method!r}")
    params = params or LllParams()
    rows = _copy_rows(basis)
    n = len(rows)
    if n == 0:
        return rows

    use_fp = method == "fp" or (method == "auto" and n >= _FP_MIN_ROWS)
    if use_fp and _lll_kernel.kernel_available() and n >= 2:
        if all(abs(x) <= _FP_MAX_ENTRY for row in rows for x in row):
            B = np.array(rows, dtype=np.int64)
            status, _ = _lll_kernel.run(B, params.delta, params.max_iterations)
            if status == _lll_kernel.STATUS_BUDGET:
                raise ReductionBudgetError(
                    f"LLL exceeded {params.max_iterations} iterations at dimension {n}"
                )
            # every kernel row op was unimodular, so whatever state it reached
            # is a valid same-lattice starting point for the exact finish
            rows = [[int(x) for x in row] for row in B]
    return _exact_lll(rows, params)


def hnf(rows) -> list[list[int]]:
    """Row-style Hermite normal form: canonical basis of the row lattice.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot), zero rows are dropped.  Accepts dependent generator rows.
    """
    A = _copy_rows(rows)
    A = [r for r in A if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for col in range(n):
        while True:
            nz = [i for i in range(r, m) if A[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[i0] = A[i0], A[r]
            done = True
            for i in range(r + 1, m):
                if A[i][col] != 0:
                    t = A[i][col] // A[r][col]
                    A[i] = [a - t * b for a, b in zip(A[i], A[r])]
                    if A[i][col] != 0:
                        done = False
            if done:
                break
        if r < m and A[r][col] != 0:
            if A[r][col] < 0:
                A[r] = [-x for x in A[r]]
            for i in range(r):
                t = A[i][col] // A[r][col]
                if t:
                    A[i] = [a - t * b for a, b in zip(A[i], A[r])]
            r += 1
            if r == m:
                break
    return A[:r]


def extract_independent(generators, qary_modulus: int | None = None) -> list[list[int]]:
    """A basis (independent rows, same lattice) from a generating row set.

    With ``qary_modulus=q`` the caller asserts the generated lattice already
    contains q*Z^n (true for q-ary generator stacks, which carry the qI
    blocks); the basis is then built by prime-field echelon reduction, which
    is much faster than integer elimination at attack sizes.
    """
    rows = _copy_rows(generators)
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    if qary_modulus is None:
        return hnf(rows)
    return _qary_basis(rows, qary_modulus)


def _qary_basis(rows: list[list[int]], q: int) -> list[list[int]]:
    m = len(rows[0])
    E = np.array(rows, dtype=np.int64) % q
    nrows = E.shape[0]
    pivots = []
    r = 0
    for col in range(m):
        piv = -1
        for i in range(r, nrows):
            if E[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            E[[r, piv]] = E[[piv, r]]
        inv = pow(int(E[r, col]), -1, q)
        E[r] = (E[r] * inv) % q
        for i in range(nrows):
            if i != r and E[i, col] != 0:
                E[i] = (E[i] - E[i, col] * E[r]) % q
        pivots.append(col)
        r += 1
        if r == nrows:
            break

    half = (q - 1) // 2
    basis: list[list[int]] = []
    pivset = set(pivots)
    ei = 0
    for col in range(m):
        if col in pivset:
            # centering an echelon row shifts entries by multiples of q; each
            # shifted column either has its q*e_col row in the basis or holds
            # a 0/1 pivot, so the span is unchanged
            row = (((E[ei] + half) % q) - half).tolist()
            basis.append([int(x) for x in row])
            ei += 1
        else:
            row = [0] * m
            row[col] = q
            basis.append(row)
    return basis


def root_hermite_factor(basis) -> float:
    """gamma such that ||b_1|| = gamma^n * |det L|^(1/n), via float GSO.

    Works for any full-row-rank basis (det L = product of the Gram-Schmidt
    norms).  This is a quality metric, so extended-precision floats are
    plenty; rank deficiency is reported as ValueError.
    """
    rows = _copy_rows(basis)
    if not rows:
        raise ValueError("empty basis")
    B = np.array(rows, dtype=np.longdouble)
    n = len(rows)
    log_det = 0.0
    first_norm_sq = float(np.dot(B[0], B[0]))
    if first_norm_sq == 0.0:
        raise ValueError("zero first row")
    ortho = np.zeros_like(B)
    for i in range(n):
        v = B[i].copy()
        for j in range(i):
            nj = np.dot(ortho[j], ortho[j])
            v -= (np.dot(v, ortho[j]) / nj) * ortho[j]
        n2 = float(np.dot(v, v))
        if n2 <= 1e-18 * float(np.dot(B[i], B[i])):
            raise ValueError(f"basis is rank-deficient at row {i}")
        ortho[i] = v
        log_det += 0.5 * math.log(n2)
    log_b1 = 0.5 * math.log(first_norm_sq)
    return math.exp((log_b1 - log_det / n) / n)
