"""Command-line front end.

::

    wmono verify    --spec JSON | --input FILE  [--partition JSON] [--focus S] [--p P]
                    [--mode closed|numeric] [--budget N] [--seed N] [--tol X]
                    [--format json|csv] [--out FILE]
    wmono sweep     --n-range 3-5 --d-range 2 --p-list 0.5,1 --trials 20 [--seed N] ...
    wmono decompose --spec JSON | --input FILE  --pair S,T [--samples N] [--seed N] ...

Exit status: 0 when every residual is within tolerance, 2 when some residual
is not, 1 on malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances, derive_seed
from .entanglement import BipartiteCut, pair_concurrence_closed, rank2_basis, reduced_pair_state
from .errors import WMonoError
from .linalg import haar_unitary
from .monogamy import CSV_FIELDS, build_reports, report_row, sweep_rows
from .partitions import Partition
from .states import MixtureSpec, mixture_from_json

EXIT_OK, EXIT_INPUT, EXIT_RESIDUAL = 0, 1, 2


class UsageError(WMonoError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: MixtureSpec | None = None
    partition: Partition | None = None
    focus: int | None = None
    mode: str = "closed"
    budget: int = 16
    seed: int = 0
    tolerances: Tolerances = DEFAULT_TOLERANCES
    fmt: str = "json"
    out: str | None = None
    # sweep
    n_values: tuple[int, ...] = ()
    d_values: tuple[int, ...] = ()
    p_values: tuple[float, ...] = ()
    trials: int = 1
    # decompose
    pair: tuple[int, int] | None = None
    samples: int = 500

    def __post_init__(self):
        if self.budget < 1:
            raise UsageError("--budget must be >= 1")
        if self.fmt not in ("json", "csv"):
            raise UsageError("--format must be json or csv")


def _int_list(text: str, what: str) -> tuple[int, ...]:
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"{what}: cannot parse {text!r}") from None
    if not out:
        raise UsageError(f"{what} is empty")
    return tuple(out)


def _float_list(text: str, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"{what}: cannot parse {text!r}") from None
    if not vals:
        raise UsageError(f"{what} is empty")
    return vals


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {what}: {exc}") from None


def _read_spec(args) -> MixtureSpec:
    if (args.spec is None) == (args.input is None):
        raise UsageError("give exactly one of --spec or --input")
    if args.input is not None:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
        obj = _load_json(text, args.input)
    else:
        obj = _load_json(args.spec, "--spec")
    m = mixture_from_json(obj)
    if args.p is not None:
        m = replace(m, p=args.p)
    return m


def _tolerances(args) -> Tolerances:
    if args.tol is None:
        return DEFAULT_TOLERANCES
    if args.tol < 0 or math.isnan(args.tol):
        raise UsageError("--tol must be non-negative")
    return replace(DEFAULT_TOLERANCES, algebraic=args.tol)


def config_from_args(args) -> RunConfig:
    common = dict(command=args.command, seed=args.seed, fmt=args.format, out=args.out)
    if args.command == "sweep":
        return RunConfig(
            **common,
            mode=args.mode,
            budget=args.budget,
            tolerances=_tolerances(args),
            n_values=_int_list(args.n_range, "--n-range"),
            d_values=_int_list(args.d_range, "--d-range"),
            p_values=_float_list(args.p_list, "--p-list"),
            trials=args.trials,
        )
    spec = _read_spec(args)
    if args.command == "verify":
        if args.partition is None:
            part = Partition.finest(spec.n)
        else:
            part = Partition.from_json(_load_json(args.partition, "--partition"))
        return RunConfig(
            **common,
            spec=spec,
            partition=part,
            focus=args.focus,
            mode=args.mode,
            budget=args.budget,
            tolerances=_tolerances(args),
        )
    pair = _int_list(args.pair, "--pair")
    if len(pair) != 2:
        raise UsageError("--pair needs two subsystem labels, e.g. 1,2")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    return RunConfig(**common, spec=spec, pair=(pair[0], pair[1]), samples=args.samples)


def _csv_text(rows: list[dict], fields) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_verify(cfg: RunConfig) -> int:
    m, part = cfg.spec, cfg.partition
    foci = None if cfg.focus is None else [cfg.focus]
    reports = build_reports(
        m, part, foci, mode=cfg.mode, budget=cfg.budget, seed=cfg.seed, tolerances=cfg.tolerances
    )
    if cfg.fmt == "json":
        doc = {
            "n": m.n,
            "d": m.d,
            "p": m.p,
            "partition": part.to_json(),
            "reports": [r.to_json() for r in reports],
        }
        _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    else:
        inst = {"n": m.n, "d": m.d, "p": m.p, "seed": cfg.seed, "partition": str(part)}
        _emit(_csv_text([report_row(inst, r) for r in reports], CSV_FIELDS), cfg.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_RESIDUAL


def cmd_sweep(cfg: RunConfig) -> int:
    rows = sweep_rows(
        cfg.n_values, cfg.d_values, cfg.p_values, cfg.trials, cfg.seed,
        mode=cfg.mode, budget=cfg.budget, tolerances=cfg.tolerances,
    )
    if cfg.fmt == "csv":
        _emit(_csv_text(rows, CSV_FIELDS), cfg.out)
    else:
        _emit(json.dumps(rows, indent=2) + "\n", cfg.out)
    return EXIT_OK if all(r["passed"] for r in rows) else EXIT_RESIDUAL


def decomposition_statistics(m: MixtureSpec, s: int, t: int, samples: int, seed: int) -> dict:
    """Ensemble-average concurrence of the (s, t) reduction over random HJW decompositions."""
    rho = reduced_pair_state(m, s, t)
    basis = rank2_basis(rho, BipartiteCut.of([0], 2), (m.d, m.d))
    vals = np.array(
        [basis.average(haar_unitary(2 + j % 3, derive_seed(seed, "decompose", j))) for j in range(samples)]
    )
    closed = pair_concurrence_closed(m, s, t)[0]
    return {
        "pair": [s, t],
        "samples": samples,
        "min": float(vals.min()),
        "max": float(vals.max()),
        "mean": float(vals.mean()),
        "stddev": float(vals.std()),
        "closed_form": closed,
    }


def cmd_decompose(cfg: RunConfig) -> int:
    s, t = cfg.pair
    stats = decomposition_statistics(cfg.spec, s, t, cfg.samples, cfg.seed)
    if cfg.fmt == "json":
        _emit(json.dumps(stats, indent=2) + "\n", cfg.out)
    else:
        row = {**stats, "pair": f"{s},{t}"}
        _emit(_csv_text([row], list(row)), cfg.out)
    spread_ok = stats["max"] - stats["min"] < cfg.tolerances.spread
    mean_ok = abs(stats["mean"] - stats["closed_form"]) < cfg.tolerances.algebraic
    return EXIT_OK if spread_ok and mean_ok else EXIT_RESIDUAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wmono", description="W-class monogamy saturation checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_spec=True):
        if with_spec:
            src = p.add_argument_group("input (exactly one)")
            src.add_argument("--input", metavar="FILE", help="JSON spec file")
            src.add_argument("--spec", metavar="JSON", help="inline JSON spec")
            p.add_argument("--p", type=float, help="override the spec's mixing weight")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, help="algebraic equality tolerance (default 1e-9)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", metavar="FILE")

    v = sub.add_parser("verify", help="saturation report for one spec")
    common(v)
    v.add_argument("--partition", metavar="JSON", help="list of lists of 1-based subsystems")
    v.add_argument("--focus", type=int, help="1-based focus block (default: all)")
    v.add_argument("--mode", choices=("closed", "numeric"), default="closed")
    v.add_argument("--budget", type=int, default=16)

    s = sub.add_parser("sweep", help="random specs and partitions over n, d, p")
    common(s, with_spec=False)
    s.add_argument("--n-range", required=True)
    s.add_argument("--d-range", default="2")
    s.add_argument("--p-list", default="1")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--mode", choices=("closed", "numeric"), default="closed")
    s.add_argument("--budget", type=int, default=16)
    s.set_defaults(format="csv")

    d = sub.add_parser("decompose", help="decomposition statistics for a pair reduction")
    common(d)
    d.add_argument("--pair", required=True, metavar="S,T")
    d.add_argument("--samples", type=int, default=500)
    return parser


COMMANDS = {"verify": cmd_verify, "sweep": cmd_sweep, "decompose": cmd_decompose}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except WMonoError as exc:
        print(f"wmono: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
