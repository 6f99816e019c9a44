"""Independent reference implementations used only to check the library.

Nothing in here may call into rlwelab: these are the second route of every
dual-route check (membership-based lattice equality, brute-force SVP,
fraction-free determinants, quadrature tails, pair-counting U).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad


def _xgcd(a: int, b: int):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


class LatticeSpan:
    """Incremental integer row span with exact membership tests.

    Rows are kept in echelon form via extended-gcd elimination; a vector is
    in the lattice iff it reduces to zero against the pivots.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[int]] = []  # echelon rows, pivot cols increasing

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _pivot_col(self, row) -> int:
        for j, x in enumerate(row):
            if x:
                return j
        return -1

    def add(self, vec) -> None:
        vec = [int(x) for x in vec]
        assert len(vec) == self.dim
        i = 0
        while True:
            p = self._pivot_col(vec)
            if p < 0:
                return
            while i < len(self.rows) and self._pivot_col(self.rows[i]) < p:
                i += 1
            if i == len(self.rows) or self._pivot_col(self.rows[i]) > p:
                if vec[p] < 0:
                    vec = [-x for x in vec]
                self.rows.insert(i, vec)
                return
            row = self.rows[i]
            a, b = row[p], vec[p]
            if b % a == 0:
                q = b // a
                vec = [v - q * r for v, r in zip(vec, row)]
            else:
                g, x, y = _xgcd(a, b)
                new_row = [x * r + y * v for r, v in zip(row, vec)]
                new_vec = [(a // g) * v - (b // g) * r for r, v in zip(row, vec)]
                self.rows[i] = new_row
                vec = new_vec

    def contains(self, vec) -> bool:
        vec = [int(x) for x in vec]
        assert len(vec) == self.dim
        for row in self.rows:
            p = self._pivot_col(row)
            if vec[p] == 0:
                continue
            if vec[p] % row[p] != 0:
                return False
            q = vec[p] // row[p]
            vec = [v - q * r for v, r in zip(vec, row)]
        return not any(vec)


def span_of(rows, dim=None) -> LatticeSpan:
    rows = [list(map(int, r)) for r in rows]
    if dim is None:
        dim = len(rows[0])
    span = LatticeSpan(dim)
    for r in rows:
        span.add(r)
    return span


def same_lattice(rows_a, rows_b) -> bool:
    """Mutual membership plus equal rank: exactly lattice equality."""
    rows_a = [list(map(int, r)) for r in rows_a]
    rows_b = [list(map(int, r)) for r in rows_b]
    if not rows_a and not rows_b:
        return True
    dim = len(rows_a[0]) if rows_a else len(rows_b[0])
    sa = span_of(rows_a, dim)
    sb = span_of(rows_b, dim)
    if sa.rank != sb.rank:
        return False
    return all(sb.contains(r) for r in rows_a) and all(sa.contains(r) for r in rows_b)


def det_bareiss(matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [[int(x) for x in row] for row in matrix]
    n = len(m)
    assert all(len(r) == n for r in m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def shortest_norm_sq_enum(basis, bound: int = 100) -> int:
    """Brute-force SVP oracle: min ||c . B||^2 over 0 < |c_i| <= bound.

    Dimension 2 or 3 only; everything vectorized per c_1 slice so the 3-dim
    case stays affordable.
    """
    B = np.asarray(basis, dtype=np.int64)
    n = B.shape[0]
    rng_c = np.arange(-bound, bound + 1, dtype=np.int64)
    best = None
    if n == 2:
        c1 = rng_c[:, None, None]
        c2 = rng_c[None, :, None]
        vecs = c1 * B[0][None, None, :] + c2 * B[1][None, None, :]
        norms = np.sum(vecs * vecs, axis=-1)
        norms[bound, bound] = np.iinfo(np.int64).max  # exclude zero vector
        return int(norms.min())
    if n == 3:
        c2 = rng_c[:, None, None]
        c3 = rng_c[None, :, None]
        plane = c2 * B[1][None, None, :] + c3 * B[2][None, None, :]
        for c1 in rng_c:
            vecs = plane + c1 * B[0][None, None, :]
            norms = np.sum(vecs * vecs, axis=-1)
            if c1 == 0:
                norms[bound, bound] = np.iinfo(np.int64).max
            m = int(norms.min())
            if best is None or m < best:
                best = m
        return best
    raise ValueError("enumeration oracle supports dimensions 2 and 3 only")


def rounded_gaussian_variance(sigma: float) -> float:
    """Variance of round(X), X ~ N(0, sigma^2), by direct probability sums."""
    if sigma == 0:
        return 0.0

    def cdf(x):
        return 0.5 * (1.0 + math.erf(x / (sigma * math.sqrt(2.0))))

    kmax = int(math.ceil(10 * sigma)) + 2
    var = 0.0
    for k in range(1, kmax + 1):
        p = cdf(k + 0.5) - cdf(k - 0.5)
        var += 2.0 * k * k * p  # symmetric, mean zero
    return var


def chi2_sf_quad(x: float, df: int) -> float:
    """Chi-squared survival function by numerical integration of the density."""
    if x <= 0:
        return 1.0
    norm = 2.0 ** (df / 2.0) * math.gamma(df / 2.0)

    def pdf(t):
        return t ** (df / 2.0 - 1.0) * math.exp(-t / 2.0) / norm

    val, _err = quad(pdf, x, np.inf, limit=200)
    return float(val)


def pair_count_u(a, b) -> float:
    """U statistic of a by definition: #{a_i > b_j} + 0.5 #{a_i == b_j}."""
    u = 0.0
    for x in a:
        for y in b:
            if x > y:
                u += 1.0
            elif x == y:
                u += 0.5
    return u
