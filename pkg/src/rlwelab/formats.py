"""Plain-text file formats for elements, bases, instances and keys.

Everything is line-oriented signed decimal integers so dumps stay diffable
and reproducible:

* ring element / vector: one line of d space-separated integers
* basis file: first line "m n", then m rows of n integers
* instance dump: header "d q M seed", then the d rows of A, the d rows of
  A', one line b, one line b'
* keypair file: an instance dump plus one trailing secret line
* ciphertext file: two element lines (c0, c1)
"""

from __future__ import annotations

import numpy as np

from .attack import AttackInstance
from .crypto import Ciphertext, KeyPair, Plaintext
from .ring import RingContext, RingElement

__all__ = [
    "element_to_line",
    "element_from_line",
    "write_basis",
    "read_basis",
    "write_instance",
    "read_instance",
    "write_keypair",
    "read_keypair",
    "write_ciphertext",
    "read_ciphertext",
    "write_plaintext",
    "read_plaintext",
]


def element_to_line(el: RingElement) -> str:
    return " ".join(str(int(c)) for c in el.coeffs)


def element_from_line(ctx: RingContext, line: str) -> RingElement:
    values = [int(tok) for tok in line.split()]
    if len(values) != ctx.degree:
        raise ValueError(f"expected {ctx.degree} coefficients, got {len(values)}")
    return RingElement(ctx, values)


def _vector_line(vec) -> str:
    return " ".join(str(int(x)) for x in vec)


def _parse_vector(line: str, length: int) -> np.ndarray:
    values = [int(tok) for tok in line.split()]
    if len(values) != length:
        raise ValueError(f"expected {length} integers, got {len(values)}")
    return np.array(values, dtype=np.int64)


def write_basis(path: str, rows) -> None:
    rows = [list(map(int, r)) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    with open(path, "w") as fh:
        fh.write(f"{m} {n}\n")
        for row in rows:
            fh.write(" ".join(str(x) for x in row) + "\n")


def read_basis(path: str) -> list[list[int]]:
    with open(path) as fh:
        first = fh.readline().split()
        if len(first) != 2:
            raise ValueError("basis file must start with 'm n'")
        m, n = int(first[0]), int(first[1])
        rows = []
        for i in range(m):
            row = [int(tok) for tok in fh.readline().split()]
            if len(row) != n:
                raise ValueError(f"basis row {i} has {len(row)} entries, expected {n}")
            rows.append(row)
    return rows


def write_instance(path: str, inst: AttackInstance, seed: int = 0) -> None:
    with open(path, "w") as fh:
        _write_instance_body(fh, inst, seed)


def _write_instance_body(fh, inst: AttackInstance, seed: int) -> None:
    d = inst.ctx.degree
    fh.write(f"{d} {inst.ctx.modulus_q} {inst.embedding_m} {seed}\n")
    for row in inst.A:
        fh.write(_vector_line(row) + "\n")
    for row in inst.A_prime:
        fh.write(_vector_line(row) + "\n")
    fh.write(_vector_line(inst.b) + "\n")
    fh.write(_vector_line(inst.b_prime) + "\n")


def _read_instance_body(fh) -> tuple[AttackInstance, int]:
    header = fh.readline().split()
    if len(header) != 4:
        raise ValueError("instance dump must start with 'd q M seed'")
    d, q, m_const, seed = (int(tok) for tok in header)
    ctx = RingContext(d, q)
    a = np.vstack([_parse_vector(fh.readline(), d) for _ in range(d)])
    a_prime = np.vstack([_parse_vector(fh.readline(), d) for _ in range(d)])
    b = _parse_vector(fh.readline(), d)
    b_prime = _parse_vector(fh.readline(), d)
    inst = AttackInstance(
        ctx=ctx, A=a, A_prime=a_prime, b=b, b_prime=b_prime, embedding_m=m_const
    )
    return inst, seed


def read_instance(path: str) -> tuple[AttackInstance, int]:
    with open(path) as fh:
        return _read_instance_body(fh)


def write_keypair(path: str, kp: KeyPair, seed: int = 0) -> None:
    with open(path, "w") as fh:
        _write_instance_body(fh, kp.public, seed)
        fh.write(element_to_line(kp.secret) + "\n")


def read_keypair(path: str) -> tuple[KeyPair, int]:
    with open(path) as fh:
        inst, seed = _read_instance_body(fh)
        secret = element_from_line(inst.ctx, fh.readline())
    return KeyPair(public=inst, secret=secret), seed


def write_ciphertext(path: str, c: Ciphertext) -> None:
    with open(path, "w") as fh:
        fh.write(element_to_line(c.c0) + "\n")
        fh.write(element_to_line(c.c1) + "\n")


def read_ciphertext(path: str, ctx: RingContext) -> Ciphertext:
    with open(path) as fh:
        c0 = element_from_line(ctx, fh.readline())
        c1 = element_from_line(ctx, fh.readline())
    return Ciphertext(c0=c0, c1=c1)


def write_plaintext(path: str, m: Plaintext) -> None:
    with open(path, "w") as fh:
        fh.write(" ".join(str(int(b)) for b in m.bits) + "\n")


def read_plaintext(path: str) -> Plaintext:
    with open(path) as fh:
        bits = [int(tok) for tok in fh.readline().split()]
    return Plaintext(np.array(bits, dtype=np.int64))
