"""Negacyclic quotient ring Z_q[x]/(x^d + 1) with centered coefficients.

Every element keeps its coefficient vector inside the centered range
(-q/2, q/2], i.e. {-(q-1)/2, ..., (q-1)/2} for odd prime q.  The three
samplers below (uniform / binary secret / rounded Gaussian error) are
what an RLWE instance is made of.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RingContext",
    "RingElement",
    "GaussianParams",
    "sample_uniform",
    "sample_secret",
    "sample_error",
    "multiplication_matrix",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class RingContext:
    """Parameters of the ring: extension degree and odd prime modulus.

    Reduction rule is fixed negacyclic (x^degree = -1) for every degree,
    so all degrees in a sweep share one multiplication rule.
    """

    degree: int
    modulus_q: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")
        if self.modulus_q < 3 or not is_prime(self.modulus_q):
            raise ValueError(f"modulus must be an odd prime >= 3, got {self.modulus_q}")

    @property
    def half(self) -> int:
        return (self.modulus_q - 1) // 2

    def center(self, values) -> np.ndarray:
        """Reduce integers into the centered range (-q/2, q/2]."""
        q = self.modulus_q
        return ((np.asarray(values, dtype=np.int64) + self.half) % q) - self.half

    def element(self, coeffs) -> "RingElement":
        return RingElement(self, coeffs)

    def zero(self) -> "RingElement":
        return RingElement(self, np.zeros(self.degree, dtype=np.int64))

    def one(self) -> "RingElement":
        c = np.zeros(self.degree, dtype=np.int64)
        c[0] = 1
        return RingElement(self, c)


@dataclass(frozen=True)
class GaussianParams:
    """Standard deviation of the continuous Gaussian that errors are rounded from.

    sigma = 0 is admitted as the degenerate zero-noise limit (the sampler
    then returns the zero element), which some trial protocols use.
    """

    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")


class RingElement:
    """Element of Z_q[x]/(x^d + 1), stored as a centered int64 coefficient vector."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: RingContext, coeffs):
        coeffs = ctx.center(coeffs)
        if coeffs.shape != (ctx.degree,):
            raise ValueError(
                f"expected {ctx.degree} coefficients, got shape {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        self.ctx = ctx
        self.coeffs = coeffs

    def _check_ctx(self, other: "RingElement"):
        if self.ctx != other.ctx:
            raise ValueError(f"ring context mismatch: {self.ctx} vs {other.ctx}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check_ctx(other)
        return RingElement(self.ctx, self.coeffs + other.coeffs)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check_ctx(other)
        return RingElement(self.ctx, self.coeffs - other.coeffs)

    def __neg__(self) -> "RingElement":
        return RingElement(self.ctx, -self.coeffs)

    def __mul__(self, other: "RingElement") -> "RingElement":
        """Schoolbook product reduced by x^d = -1.

        Exact in int64: |coeff| <= q/2 and d <= a few hundred keep every
        intermediate far below 2^63.
        """
        self._check_ctx(other)
        d = self.ctx.degree
        full = np.convolve(self.coeffs, other.coeffs)
        low = full[:d].copy()
        if d > 1:
            low[: d - 1] -= full[d:]
        return RingElement(self.ctx, low)

    def scale(self, k: int) -> "RingElement":
        return RingElement(self.ctx, self.coeffs * np.int64(k))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingElement)
            and self.ctx == other.ctx
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.ctx, self.coeffs.tobytes()))

    def __repr__(self):
        return f"RingElement(d={self.ctx.degree}, q={self.ctx.modulus_q}, {self.coeffs.tolist()})"


def sample_uniform(ctx: RingContext, rng: np.random.Generator) -> RingElement:
    """Each coefficient independently uniform over the centered range."""
    c = rng.integers(-ctx.half, ctx.half + 1, size=ctx.degree, dtype=np.int64)
    return RingElement(ctx, c)


def sample_secret(ctx: RingContext, rng: np.random.Generator) -> RingElement:
    """Binary secret: each coefficient uniform over {0, 1}."""
    c = rng.integers(0, 2, size=ctx.degree, dtype=np.int64)
    return RingElement(ctx, c)


def sample_error(
    ctx: RingContext, rng: np.random.Generator, params: GaussianParams
) -> RingElement:
    """Rounded continuous Gaussian: round(N(0, sigma^2)) per coefficient."""
    c = np.rint(rng.normal(0.0, params.sigma, size=ctx.degree)).astype(np.int64)
    return RingElement(ctx, c)


def multiplication_matrix(a: RingElement) -> np.ndarray:
    """The d x d matrix whose column j holds the coefficients of a * x^j.

    Satisfies M @ s.coeffs == (a * s).coeffs (mod q) for every s, which is
    what turns ring multiplication into matrix-vector arithmetic.
    """
    d = a.ctx.degree
    c = a.coeffs
    m = np.empty((d, d), dtype=np.int64)
    for j in range(d):
        # a * x^j: shift down by j, wrapped part picks up the x^d = -1 sign
        m[j:, j] = c[: d - j]
        m[:j, j] = -c[d - j :]
    return a.ctx.center(m)
