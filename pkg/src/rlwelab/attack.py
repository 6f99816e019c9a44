"""Lattice attack on two stacked RLWE samples sharing one secret.

Pipeline: build the q-ary lattice the two samples define, LLL-reduce it,
append the target row with the embedding constant (Kannan), reduce again,
read the error off the row ending in the constant, then invert the sample
matrix mod q to get the secret back.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .lattice import (
    LllParams,
    ReductionBudgetError,
    extract_independent,
    lll_reduce,
    root_hermite_factor,
)
from .ring import GaussianParams, RingContext, RingElement, multiplication_matrix, sample_error, sample_uniform

__all__ = [
    "AttackInstance",
    "EmbeddingLattice",
    "AttackResult",
    "build_instance",
    "build_qary_generators",
    "kannan_embed",
    "extract_error",
    "recover_secret",
    "attack",
]


@dataclass(frozen=True)
class AttackInstance:
    """Two RLWE samples with a common secret, in matrix form.

    A and A_prime are the multiplication matrices of the two uniform ring
    elements (so their first columns are those elements' coefficient
    vectors); b and b_prime are the noisy products.  All entries centered
    mod q.
    """

    ctx: RingContext
    A: np.ndarray
    A_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray
    embedding_m: int = 1

    def __post_init__(self):
        d = self.ctx.degree
        for name in ("A", "A_prime"):
            mat = getattr(self, name)
            if mat.shape != (d, d):
                raise ValueError(f"{name} must be {d}x{d}, got {mat.shape}")
        for name in ("b", "b_prime"):
            vec = getattr(self, name)
            if vec.shape != (d,):
                raise ValueError(f"{name} must have length {d}, got {vec.shape}")
        if self.embedding_m < 1:
            raise ValueError("embedding constant must be a positive integer")

    @property
    def a_element(self) -> RingElement:
        """The ring element behind A (its first column is a * x^0 = a)."""
        return RingElement(self.ctx, self.A[:, 0])

    @property
    def b_element(self) -> RingElement:
        return RingElement(self.ctx, self.b)

    @property
    def target(self) -> np.ndarray:
        """Concatenated target vector for the embedding step."""
        return np.concatenate([self.b, self.b_prime])


@dataclass
class EmbeddingLattice:
    """Intermediate lattices of one attack, kept for inspection and tests."""

    q_ary_generators: list
    target: list
    reduced_basis: list
    embedded: list
    reduced_embedded: list | None = None


@dataclass
class AttackResult:
    success: bool
    failure_kind: str  # "none", "no_short_vector", "singular_matrix", "budget_exhausted"
    wall_time_s: float
    recovered_error: tuple[np.ndarray, np.ndarray] | None = None
    recovered_secret: np.ndarray | None = None
    secret_is_binary: bool = False
    shortest_norm: float = float("nan")
    root_hermite: float = float("nan")
    lattices: EmbeddingLattice | None = None


def build_instance(
    ctx: RingContext,
    secret: RingElement,
    rng: np.random.Generator,
    gauss: GaussianParams,
) -> tuple[AttackInstance, tuple[RingElement, RingElement]]:
    """Sample two fresh RLWE samples under ``secret``.

    Returns the instance plus the planted errors, which exist only so tests
    can check recovery against ground truth.
    """
    if not np.all((secret.coeffs == 0) | (secret.coeffs == 1)):
        raise ValueError("secret must have 0/1 coefficients")
    a1 = sample_uniform(ctx, rng)
    a2 = sample_uniform(ctx, rng)
    e1 = sample_error(ctx, rng, gauss)
    e2 = sample_error(ctx, rng, gauss)
    b1 = a1 * secret + e1
    b2 = a2 * secret + e2
    inst = AttackInstance(
        ctx=ctx,
        A=multiplication_matrix(a1),
        A_prime=multiplication_matrix(a2),
        b=b1.coeffs.copy(),
        b_prime=b2.coeffs.copy(),
    )
    return inst, (e1, e2)


def build_qary_generators(inst: AttackInstance) -> list[list[int]]:
    """Generator rows (3d x 2d) of the lattice containing every
    ((A s)^T | (A' s)^T) mod q.

    The sample block is stored transposed so that integer row combinations
    u^T [A^T | A'^T] produce exactly (A u | A' u); the two q-identity blocks
    supply the mod-q wraparound.
    """
    d = inst.ctx.degree
    q = inst.ctx.modulus_q
    top = np.hstack([inst.A.T, inst.A_prime.T])
    qi = q * np.eye(d, dtype=np.int64)
    zero = np.zeros((d, d), dtype=np.int64)
    stack = np.vstack([top, np.hstack([qi, zero]), np.hstack([zero, qi])])
    return stack.tolist()


def kannan_embed(reduced, target, embedding_m: int = 1) -> list[list[int]]:
    """Append the target as a new row with the embedding constant in the corner.

    Input is an n x n reduced basis and a length-n target; output is the
    (n+1) x (n+1) block matrix [[reduced, 0], [target, M]].
    """
    rows = [list(map(int, r)) for r in reduced]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("reduced basis must be square")
    target = [int(x) for x in target]
    if len(target) != n:
        raise ValueError(f"target length {len(target)} != basis dimension {n}")
    if embedding_m < 1:
        raise ValueError("embedding constant must be a positive integer")
    out = [r + [0] for r in rows]
    out.append(target + [int(embedding_m)])
    return out


def extract_error(reduced_embedded, d: int, embedding_m: int = 1):
    """Pick the error candidate out of a reduced embedded basis.

    Scans for rows whose last coordinate is +-M, sign-normalizes to +M, and
    among candidates keeps the one whose leading 2d block is shortest (the
    planted error is the shortest by construction).  Returns (e, e') as
    int64 arrays, or None when no row qualifies.
    """
    best = None
    best_norm = None
    for row in reduced_embedded:
        last = int(row[-1])
        if abs(last) != embedding_m:
            continue
        lead = np.array(row[:-1], dtype=np.int64)
        if last < 0:
            lead = -lead
        norm = float(lead @ lead)
        if best_norm is None or norm < best_norm:
            best, best_norm = lead, norm
    if best is None:
        return None
    return best[:d].copy(), best[d:].copy()


def recover_secret(A: np.ndarray, b: np.ndarray, e: np.ndarray, q: int):
    """Solve A s = b - e (mod q); None when A is singular mod q.

    The solution is reported with coefficients in {0, ..., q-1}; the caller
    decides whether non-binary coefficients disqualify it.
    """
    d = A.shape[0]
    aug = np.hstack([A % q, ((b - e) % q).reshape(-1, 1)]).astype(np.int64)
    r = 0
    for col in range(d):
        piv = -1
        for i in range(r, d):
            if aug[i, col] % q != 0:
                piv = i
                break
        if piv < 0:
            return None
        if piv != r:
            aug[[r, piv]] = aug[[piv, r]]
        inv = pow(int(aug[r, col]), -1, q)
        aug[r] = (aug[r] * inv) % q
        for i in range(d):
            if i != r and aug[i, col] != 0:
                aug[i] = (aug[i] - aug[i, col] * aug[r]) % q
        r += 1
    return aug[:, d].copy()


def attack(
    inst: AttackInstance,
    params: LllParams | None = None,
    keep_lattices: bool = False,
) -> AttackResult:
    """Run the full pipeline on one instance.

    The clock starts with the embedding pipeline (q-ary basis construction)
    and stops once the secret is recovered, matching the experiment's
    timing window; success here only means the pipeline produced a secret
    candidate, the end-to-end decryption check lives with the caller.
    """
    params = params or LllParams()
    ctx = inst.ctx
    d, q = ctx.degree, ctx.modulus_q
    m_const = inst.embedding_m

    t0 = time.perf_counter()
    lattices = None
    try:
        generators = build_qary_generators(inst)
        basis = extract_independent(generators, qary_modulus=q)
        reduced = lll_reduce(basis, params)
        target = ctx.center(inst.target).tolist()
        embedded = kannan_embed(reduced, target, m_const)
        reduced_embedded = lll_reduce(embedded, params)
    except ReductionBudgetError:
        return AttackResult(
            success=False,
            failure_kind="budget_exhausted",
            wall_time_s=time.perf_counter() - t0,
        )
    if keep_lattices:
        lattices = EmbeddingLattice(
            q_ary_generators=generators,
            target=target,
            reduced_basis=reduced,
            embedded=embedded,
            reduced_embedded=reduced_embedded,
        )

    first = np.array(reduced_embedded[0], dtype=float)
    shortest_norm = float(np.sqrt(first @ first))
    gamma = root_hermite_factor(reduced_embedded)

    pair = extract_error(reduced_embedded, d, m_const)
    if pair is None:
        return AttackResult(
            success=False,
            failure_kind="no_short_vector",
            wall_time_s=time.perf_counter() - t0,
            shortest_norm=shortest_norm,
            root_hermite=gamma,
            lattices=lattices,
        )
    err, err_prime = pair

    secret = recover_secret(inst.A, inst.b, err, q)
    wall = time.perf_counter() - t0
    if secret is None:
        return AttackResult(
            success=False,
            failure_kind="singular_matrix",
            wall_time_s=wall,
            recovered_error=(err, err_prime),
            shortest_norm=shortest_norm,
            root_hermite=gamma,
            lattices=lattices,
        )
    return AttackResult(
        success=True,
        failure_kind="none",
        wall_time_s=wall,
        recovered_error=(err, err_prime),
        recovered_secret=secret,
        secret_is_binary=bool(np.all((secret == 0) | (secret == 1))),
        shortest_norm=shortest_norm,
        root_hermite=gamma,
        lattices=lattices,
    )
