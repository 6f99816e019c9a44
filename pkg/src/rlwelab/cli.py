"""Command-line surface: keygen, encrypt, decrypt, attack, reduce, sweep, report.

Human-readable output goes to stdout; data artifacts are only written to
paths given via --out.  Exit codes: 0 success, 1 usage error, 2 runtime
failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import formats
from .attack import attack
from .crypto import decrypt, encrypt, random_plaintext
from .experiment import (
    DEFAULT_Q,
    DEFAULT_SIGMA,
    SweepConfig,
    aggregate,
    read_records_csv,
    run_sweep,
)
from .crypto import keygen as _keygen
from .lattice import LllParams, lll_reduce
from .ring import GaussianParams, RingContext, is_prime
from .stats import SampleGroup, kruskal_wallis, mann_whitney_u

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rlwelab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a keypair file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--q", type=int, default=DEFAULT_Q)
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a plaintext under a keypair file")
    p.add_argument("--key", required=True)
    p.add_argument("--message", help="plaintext file; omit to sample a random one")
    p.add_argument("--message-out", help="where to save a sampled random plaintext")
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext with the secret key")
    p.add_argument("--key", required=True)
    p.add_argument("--cipher", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_decrypt)

    p = sub.add_parser("attack", help="run the lattice attack on an instance dump")
    p.add_argument("--instance", required=True)
    p.add_argument("--delta", type=float, default=0.99)
    p.add_argument("--M", type=int, default=None, help="override the embedding constant")
    p.set_defaults(func=_cmd_attack)

    p = sub.add_parser("reduce", help="LLL-reduce a basis file")
    p.add_argument("--basis", required=True)
    p.add_argument("--delta", type=float, default=0.99)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("sweep", help="run the degree sweep experiment")
    p.add_argument("--degrees", required=True, help="comma-separated degrees, e.g. 23,29,31")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--q", type=int, default=DEFAULT_Q)
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    p.add_argument("--delta", type=float, default=0.99)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path for the per-trial records")
    p.add_argument("--jobs", type=int, default=0, help="worker processes (0 = all cores)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("report", help="aggregate a sweep CSV into tables and tests")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument(
        "--compare",
        choices=["primes-vs-rest"],
        default="primes-vs-rest",
        help="which success-rate comparison to run",
    )
    p.set_defaults(func=_cmd_report)
    return parser


def _cmd_keygen(args) -> int:
    ctx = RingContext(args.degree, args.q)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    kp = _keygen(ctx, rng, GaussianParams(args.sigma))
    formats.write_keypair(args.out, kp, seed=args.seed)
    print(f"wrote keypair (degree={args.degree}, q={args.q}) to {args.out}")
    return 0


def _cmd_encrypt(args) -> int:
    kp, _seed = formats.read_keypair(args.key)
    ctx = kp.public.ctx
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    if args.message:
        m = formats.read_plaintext(args.message)
    else:
        m = random_plaintext(ctx, rng)
        if args.message_out:
            formats.write_plaintext(args.message_out, m)
    c = encrypt(kp.public, m, rng, GaussianParams(args.sigma))
    formats.write_ciphertext(args.out, c)
    print(f"wrote ciphertext to {args.out}")
    return 0


def _cmd_decrypt(args) -> int:
    kp, _seed = formats.read_keypair(args.key)
    c = formats.read_ciphertext(args.cipher, kp.public.ctx)
    m = decrypt(kp.secret, c)
    line = " ".join(str(int(b)) for b in m.bits)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(line + "\n")
    print(line)
    return 0


def _cmd_attack(args) -> int:
    inst, _seed = formats.read_instance(args.instance)
    if args.M is not None:
        from dataclasses import replace

        inst = replace(inst, embedding_m=args.M)
    result = attack(inst, LllParams(delta=args.delta))
    print(f"success={'true' if result.success else 'false'}")
    print(f"failure_kind={result.failure_kind}")
    print(f"wall_time_s={result.wall_time_s!r}")
    print(f"shortest_norm={result.shortest_norm!r}")
    print(f"root_hermite={result.root_hermite!r}")
    print(f"secret_is_binary={'true' if result.secret_is_binary else 'false'}")
    if result.recovered_error is not None:
        e, e_prime = result.recovered_error
        print("recovered_error=" + " ".join(str(int(x)) for x in e))
        print("recovered_error_prime=" + " ".join(str(int(x)) for x in e_prime))
    if result.recovered_secret is not None:
        print("recovered_secret=" + " ".join(str(int(x)) for x in result.recovered_secret))
    return 0


def _cmd_reduce(args) -> int:
    rows = formats.read_basis(args.basis)
    reduced = lll_reduce(rows, LllParams(delta=args.delta))
    lines = [f"{len(reduced)} {len(reduced[0]) if reduced else 0}"]
    lines += [" ".join(str(x) for x in row) for row in reduced]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote reduced basis to {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_sweep(args) -> int:
    degrees = [int(tok) for tok in args.degrees.split(",") if tok.strip()]
    cfg = SweepConfig(
        degrees=tuple(degrees),
        q=args.q,
        sigma=args.sigma,
        trials_per_degree=args.trials,
        delta=args.delta,
        master_seed=args.seed,
        output_path=args.out,
        parallelism=args.jobs,
    )

    def progress(rec):
        status = "ok " if rec.success else "FAIL"
        print(
            f"degree={rec.degree} trial={rec.trial_index} {status} "
            f"time={rec.wall_time_s:.3f}s",
            flush=True,
        )

    report = run_sweep(cfg, progress=progress)
    print()
    for s in report.summaries:
        print(
            f"degree {s.degree}: {s.successes}/{s.trials} succeeded "
            f"(rate {s.success_rate:.2f}), mean time {s.mean_time_s:.2f}s"
        )
    if args.out:
        print(f"records written to {args.out}")
    return 0


def _family_reference(degree: int) -> int:
    return 2 ** round(math.log2(degree))


def _adjacent_primes(ref: int) -> tuple[int, int]:
    lo = ref - 1
    while lo > 1 and not is_prime(lo):
        lo -= 1
    hi = ref + 1
    while not is_prime(hi):
        hi += 1
    return lo, hi


def _cmd_report(args) -> int:
    records = read_records_csv(args.input)
    report = aggregate(records)

    families: dict[int, list] = {}
    for s in report.summaries:
        families.setdefault(_family_reference(s.degree), []).append(s)

    for ref in sorted(families):
        print(f"## Attack results, degrees around {ref}")
        print()
        print("| Field extension | Success rate | Average time [s] |")
        print("|---|---|---|")
        for s in families[ref]:
            print(f"| {s.degree} | {s.success_rate:.2f} | {s.mean_time_s:.2f} |")
        print()

    if args.compare == "primes-vs-rest":
        adjacent = set()
        for ref in families:
            adjacent.update(_adjacent_primes(ref))
        prime_rates = [s.success_rate for s in report.summaries if s.degree in adjacent]
        rest_rates = [s.success_rate for s in report.summaries if s.degree not in adjacent]
        if prime_rates and rest_rates:
            outcome = mann_whitney_u(
                SampleGroup("adjacent-primes", prime_rates),
                SampleGroup("rest", rest_rates),
            )
            print(
                f"Mann-Whitney U (success rates, adjacent primes vs rest): "
                f"U={outcome.statistic:.4g}, p={outcome.p_value:.3g}, r={outcome.effect_size_r:.2f}"
            )
        else:
            print("Mann-Whitney U: not enough degree classes for the primes-vs-rest split")

    for ref in sorted(families):
        if len(families[ref]) < 2:
            continue
        groups = []
        for s in families[ref]:
            times = [r.wall_time_s for r in records if r.degree == s.degree]
            groups.append(SampleGroup(str(s.degree), times))
        outcome = kruskal_wallis(groups)
        print(
            f"Kruskal-Wallis (times, degrees around {ref}): "
            f"H={outcome.statistic:.4g}, p={outcome.p_value:.3g}"
        )

    print(
        "Shapiro-Wilk normality and Steel-Dwass pairwise comparisons are outside "
        "this tool's scope; use an external statistics package for those."
    )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError, KeyError) as exc:
        print(f"rlwelab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
