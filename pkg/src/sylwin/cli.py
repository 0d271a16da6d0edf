"""Command line front end: generate instances, check identities, benchmark.

Subcommands
-----------
gen
    Emit seeded random valid instances as JSON lines. Deterministic:
    the same seed and flags reproduce the stream byte for byte.
check
    Run the full identity suite on instances read from a file (or
    generated on the fly) and emit a JSON-lines report. Exit code 0
    when every instance is valid and every check passes, 1 when an
    identity check fails, 2 on input or validation errors.
bench
    Time the structured Sylvester inverse against the dense oracle
    inverse of the same matrix over float64, after verifying both agree
    within tolerance.

Interchange format
------------------
One JSON object per line: {"m": int, "d": [str, ...], "n": [str, ...],
"seed": int}. Coefficients are rational strings (optional minus sign,
digits, optional "/digits"), never floats, so the exact hypothesis
class survives the round trip.

Randomness
----------
All draws come from splitmix64 (stated constants below), not from the
standard library, so streams are reproducible across platforms and
Python versions. Instance k of a run uses its own generator seeded with
the k-th output of a master splitmix64 stream seeded with --seed;
rejected draws advance instance k's stream only.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from statistics import median

import numpy as np

from . import builders, oracle, verify
from .builders import Instance, validate
from .numeric import (
    DEFAULT_TOL,
    FIELDS,
    FLOAT64,
    RATIONAL,
    EqPolicy,
    Field,
    matrices_equal,
)

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

MAX_CONSECUTIVE_REJECTIONS = 10_000


class GenerationExhaustedError(RuntimeError):
    """The rejection sampler failed too many times in a row."""


class InstanceFormatError(ValueError):
    """An instance file line violates the interchange schema."""


class SplitMix64:
    """splitmix64: 64-bit state advanced by a fixed odd constant, output
    finalized by two xor-shift multiplies. Unbiased bounded draws use
    rejection below the largest multiple of the bound."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by gen and check."""

    m: int
    seed: int
    count: int = 1
    coeff_range: int = 9
    mode: str = "strict"
    field: Field = RATIONAL
    tol: float | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.count < 0:
            raise ValueError("count must be >= 0")
        if self.coeff_range < 1:
            raise ValueError("coefficient range must be >= 1")
        if self.tol is not None and self.field.exact:
            raise ValueError("tol only applies to the float64 field")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")


def _draw_coeff(rng: SplitMix64, bound: int, allow_zero: bool) -> int:
    """Uniform integer in [-bound, bound], excluding 0 unless allowed."""
    if allow_zero:
        return rng.below(2 * bound + 1) - bound
    v = rng.below(2 * bound) - bound
    return v + 1 if v >= 0 else v


def draw_instance(rng: SplitMix64, m: int, bound: int, mode: str) -> Instance:
    """One valid rational instance; rejection loop bounded.

    Strict mode draws nonzero coefficients and requires strict
    validity; relaxed mode allows zero draws and requires only relaxed
    validity. Validation is exact regardless of the checking field.
    """
    allow_zero = mode == "relaxed"
    for _ in range(MAX_CONSECUTIVE_REJECTIONS):
        d = [_draw_coeff(rng, bound, allow_zero) for _ in range(m + 1)]
        n = [_draw_coeff(rng, bound, allow_zero) for _ in range(m + 1)]
        inst = Instance.from_coeffs(d, n, RATIONAL)
        if validate(inst, mode).ok(mode):
            return inst
    raise GenerationExhaustedError(
        f"no valid instance after {MAX_CONSECUTIVE_REJECTIONS} draws "
        f"(m={m}, range={bound}, mode={mode})"
    )


def generate_instances(config: RunConfig) -> list[Instance]:
    """The deterministic instance stream for a config (always rational)."""
    master = SplitMix64(config.seed)
    sub_seeds = [master.next_u64() for _ in range(config.count)]
    return [
        draw_instance(SplitMix64(s), config.m, config.coeff_range, config.mode)
        for s in sub_seeds
    ]


def instance_to_json(inst: Instance, seed: int | None) -> str:
    payload = {
        "m": inst.m,
        "d": [str(v) for v in inst.d],
        "n": [str(v) for v in inst.n],
    }
    if seed is not None:
        payload["seed"] = seed
    return json.dumps(payload)


def parse_instance_obj(obj, where: str, field: Field) -> tuple[Instance, int | None]:
    """Validate one interchange object and coerce it into the field."""
    if not isinstance(obj, dict):
        raise InstanceFormatError(f"{where}: expected a JSON object")
    m = obj.get("m")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InstanceFormatError(f"{where}: field 'm': need a positive integer")
    coeffs = {}
    for key in ("d", "n"):
        raw = obj.get(key)
        if not isinstance(raw, list) or len(raw) != m + 1:
            raise InstanceFormatError(
                f"{where}: field {key!r}: need an array of {m + 1} rational strings"
            )
        try:
            coeffs[key] = tuple(field.parse(text) for text in raw)
        except (ValueError, TypeError) as exc:
            raise InstanceFormatError(f"{where}: field {key!r}: {exc}") from exc
    seed = obj.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise InstanceFormatError(f"{where}: field 'seed': need an integer")
    return Instance(coeffs["d"], coeffs["n"], field), seed


def read_instance_file(path: str, field: Field) -> list[tuple[Instance, int | None]]:
    out = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InstanceFormatError(f"{where}: not valid JSON: {exc}") from exc
            out.append(parse_instance_obj(obj, where, field))
    return out


def _residual_str(value) -> str:
    return str(value)


def report_lines(index: int, report: verify.IdentityReport):
    """Serialize one IdentityReport: a summary line, then one line per check."""
    reason = report.failure_reason.name.lower() if report.failure_reason else None
    yield json.dumps(
        {
            "instance": index,
            "m": report.m,
            "field": report.field_name,
            "mode": report.mode,
            "tol": report.tol,
            "seed": report.seed,
            "valid": report.valid,
            "failure_reason": reason,
        }
    )
    for rec in report.records:
        yield json.dumps(
            {
                "check": rec.name,
                "pass": rec.passed,
                "max_residual": _residual_str(rec.max_residual),
                "counterexample": list(rec.counterexample) if rec.counterexample else None,
            }
        )


def cmd_gen(args) -> int:
    config = RunConfig(
        m=args.m,
        seed=args.seed,
        count=args.count,
        coeff_range=args.range,
        mode="relaxed" if args.relaxed else "strict",
    )
    for inst in generate_instances(config):
        print(instance_to_json(inst, config.seed))
    return 0


def cmd_check(args) -> int:
    field = FIELDS[args.field]
    mode = "relaxed" if args.relaxed else "strict"
    if args.tol is not None and field.exact:
        raise ValueError("--tol only applies to --field float64")
    if args.input is not None:
        pairs = read_instance_file(args.input, field)
    else:
        config = RunConfig(
            m=args.m,
            seed=args.seed,
            count=args.count,
            coeff_range=args.range,
            mode=mode,
            field=field,
            tol=args.tol,
        )
        pairs = [
            (
                inst
                if field.exact
                else Instance.from_coeffs(inst.d, inst.n, field),
                config.seed,
            )
            for inst in generate_instances(config)
        ]

    any_invalid = False
    any_failed = False
    for index, (inst, seed) in enumerate(pairs):
        report = verify.run_all(inst, tol=args.tol, mode=mode, seed=seed)
        for line in report_lines(index, report):
            print(line)
        any_invalid = any_invalid or not report.valid
        any_failed = any_failed or not all(r.passed for r in report.records)
    if any_invalid:
        return 2
    if any_failed:
        return 1
    return 0


def _bench_instance(rng: SplitMix64, m: int, bound: int) -> Instance:
    """Float instance with nonzero integer coefficients; no Bezoutian
    pre-check (an exact determinant at bench sizes would dwarf the
    benchmark itself; singularity would surface as an inversion error)."""
    d = [_draw_coeff(rng, bound, False) for _ in range(m + 1)]
    n = [_draw_coeff(rng, bound, False) for _ in range(m + 1)]
    return Instance.from_coeffs(d, n, FLOAT64)


def cmd_bench(args) -> int:
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    policy = EqPolicy.approx(tol)
    master = SplitMix64(args.seed)
    print(f"{'m':>6} {'count':>6} {'structured_s':>14} {'dense_s':>14} "
          f"{'speedup':>8} {'max_residual':>13}")
    for m in args.m:
        sub_seeds = [master.next_u64() for _ in range(args.count)]
        structured_times = []
        dense_times = []
        worst = 0.0
        for s in sub_seeds:
            inst = _bench_instance(SplitMix64(s), m, args.range)
            t0 = time.perf_counter()
            structured = builders.invert_s_structured(inst)
            t1 = time.perf_counter()
            sylvester = builders.build_s(inst)
            t2 = time.perf_counter()
            dense = oracle.dense_inverse(sylvester)
            t3 = time.perf_counter()
            if args.inject_fault:
                structured = np.array(structured, copy=True)
                structured[0, 0] += 1.0
            result = matrices_equal(structured, dense, policy)
            worst = max(worst, result.residual)
            if not result.equal:
                print(
                    f"bench aborted: structured and dense inverses disagree at "
                    f"m={m} (residual {result.residual:.3e} > tol {tol:.3e})",
                    file=sys.stderr,
                )
                return 1
            structured_times.append(t1 - t0)
            dense_times.append(t3 - t2)
        med_s = median(structured_times)
        med_d = median(dense_times)
        print(f"{m:>6} {args.count:>6} {med_s:>14.6f} {med_d:>14.6f} "
              f"{med_d / med_s:>7.2f}x {worst:>13.3e}")
    return 0


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("orders must be positive integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sylwin",
        description="Sylvester/Toeplitz windowed-inverse identity toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit seeded random valid instances as JSON lines")
    gen.add_argument("--m", type=int, default=2, help="order (default 2)")
    gen.add_argument("--count", type=int, default=1, help="instances to emit (default 1)")
    gen.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    gen.add_argument("--range", type=int, default=9,
                     help="coefficients drawn from [-range, range] (default 9)")
    gen.add_argument("--relaxed", action="store_true",
                     help="allow zero coefficients, require only relaxed validity")
    gen.set_defaults(func=cmd_gen)

    check = sub.add_parser("check", help="run the identity suite, emit a JSON-lines report")
    check.add_argument("--input", help="instance file (JSON lines); omit to generate")
    check.add_argument("--m", type=int, default=2)
    check.add_argument("--count", type=int, default=1)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--range", type=int, default=9)
    check.add_argument("--field", choices=sorted(FIELDS), default="rational")
    check.add_argument("--tol", type=float, default=None,
                       help="relative Frobenius tolerance (float64 only)")
    check.add_argument("--relaxed", action="store_true")
    check.set_defaults(func=cmd_check)

    bench = sub.add_parser("bench", help="structured vs dense inverse timing (float64)")
    bench.add_argument("--m", type=_int_list, required=True,
                       help="comma-separated list of orders, e.g. 64,256")
    bench.add_argument("--count", type=int, default=5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--range", type=int, default=9)
    bench.add_argument("--tol", type=float, default=None)
    bench.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, GenerationExhaustedError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
