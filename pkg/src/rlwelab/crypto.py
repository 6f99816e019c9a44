"""Toy RLWE public-key scheme used as the attack's end-to-end success check.

Keygen plants a binary secret behind two RLWE samples; encryption masks a
bit vector as c0 = b*v + 2*e0 + m, c1 = a*v + 2*e1; decryption computes
c0 - s*c1, whose centered coefficients equal m plus an even noise term, so
parity recovers the bits whenever the noise stays below q/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attack import AttackInstance, AttackResult, build_instance
from .ring import GaussianParams, RingContext, RingElement, sample_error, sample_secret

__all__ = [
    "KeyPair",
    "Plaintext",
    "Ciphertext",
    "keygen",
    "encrypt",
    "encrypt_with",
    "decrypt",
    "random_plaintext",
    "attack_succeeds",
]


@dataclass(frozen=True)
class Plaintext:
    """A 0/1 vector of length d, embedded as the ring element sum(m_i x^i)."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.int64)
        if not np.all((bits == 0) | (bits == 1)):
            raise ValueError("plaintext bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    def as_element(self, ctx: RingContext) -> RingElement:
        return RingElement(ctx, self.bits)

    def __eq__(self, other):
        return isinstance(other, Plaintext) and np.array_equal(self.bits, other.bits)


@dataclass(frozen=True)
class Ciphertext:
    c0: RingElement
    c1: RingElement

    def __post_init__(self):
        if self.c0.ctx != self.c1.ctx:
            raise ValueError("ciphertext halves must share a context")


@dataclass(frozen=True)
class KeyPair:
    """Public: the two-sample attack instance. Secret: the binary ring element."""

    public: AttackInstance
    secret: RingElement

    def __post_init__(self):
        if not np.all((self.secret.coeffs == 0) | (self.secret.coeffs == 1)):
            raise ValueError("secret coefficients must be 0/1")


def keygen(ctx: RingContext, rng: np.random.Generator, gauss: GaussianParams) -> KeyPair:
    secret = sample_secret(ctx, rng)
    inst, _planted = build_instance(ctx, secret, rng, gauss)
    return KeyPair(public=inst, secret=secret)


def random_plaintext(ctx: RingContext, rng: np.random.Generator) -> Plaintext:
    return Plaintext(rng.integers(0, 2, size=ctx.degree, dtype=np.int64))


def encrypt_with(
    pk: AttackInstance,
    m: Plaintext,
    v: RingElement,
    e0: RingElement,
    e1: RingElement,
) -> Ciphertext:
    """Deterministic encryption core given explicit randomness.

    c0 = b*v + 2*e0 + m and c1 = a*v + 2*e1, all in the ring; a and b are
    the ring elements of the first public sample.
    """
    ctx = pk.ctx
    a = pk.a_element
    b = pk.b_element
    m_el = m.as_element(ctx)
    c0 = b * v + e0.scale(2) + m_el
    c1 = a * v + e1.scale(2)
    return Ciphertext(c0=c0, c1=c1)


def encrypt(
    pk: AttackInstance,
    m: Plaintext,
    rng: np.random.Generator,
    gauss: GaussianParams,
) -> Ciphertext:
    """Encrypt with fresh randomness: small even v, rounded-Gaussian e0 and e1.

    v is twice a fair bit per coefficient.  Evenness matters: the public key
    carries b = a*s + e with an unscaled error, so the decryption difference
    picks up e*v, and only an even v keeps that term out of the parity bits.
    With v in {0, 2} the identity c0 - s*c1 = m + 2*(noise) holds exactly and
    the noise stays far below q/2 at this lab's parameters.
    """
    ctx = pk.ctx
    v = sample_secret(ctx, rng).scale(2)
    e0 = sample_error(ctx, rng, gauss)
    e1 = sample_error(ctx, rng, gauss)
    return encrypt_with(pk, m, v, e0, e1)


def decrypt(secret: RingElement, c: Ciphertext) -> Plaintext:
    """Parity of the centered coefficients of c0 - s*c1.

    Centered negatives decode via their nonnegative residue mod 2, so a
    coefficient of -3 still reads as bit 1.  Wrong keys or oversized noise
    simply produce garbage bits.
    """
    w = c.c0 - secret * c.c1
    bits = np.mod(w.coeffs, 2)
    return Plaintext(bits)


def attack_succeeds(kp: KeyPair, m: Plaintext, c: Ciphertext, result: AttackResult) -> bool:
    """The experiment's success test: does the recovered secret decrypt c to m?

    The ciphertext is the one produced during the trial; comparison is
    bit-exact.  An attack that recovered no secret fails outright.
    """
    if result.recovered_secret is None:
        return False
    candidate = RingElement(kp.public.ctx, result.recovered_secret)
    return decrypt(candidate, c) == m
