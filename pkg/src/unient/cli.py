"""``unient`` command line: measures, Werner sweeps, property suites, partitions.

Exit codes: 0 success, 2 unreadable input, 3 parameters out of domain,
4 usage error or unknown suite, 5 suite failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

import numpy as np

from .bipartite import entanglement_pure, two_qubit_measure, werner_concurrence, werner_state
from .entropy import DomainError, Family, MeasureParams
from .multipartite import Form, GlobalMeasureKind, gem_mixed, gem_pure, glmem
from .partitions import (
    Partition,
    PartitionError,
    XiUndefinedError,
    coarser,
    coarser_a,
    coarser_b,
    coarser_c,
    enumerate_partitions,
    xi_set,
)
from .roof import RoofConfig, roof_entanglement
from .states import RNG_ALGORITHM, DensityMatrix, PureState, StateError
from .verify import SUITES, CorpusSpec, SuiteError, run_suite

SCHEMA = "unient/1"
EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_USAGE, EXIT_SUITE = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _g17(x: float) -> float:
    return float(f"{x:.17g}")


def _g7(x: float) -> str:
    return f"{x:.7g}"


# --- state files ------------------------------------------------------------


def state_to_dict(state: PureState | DensityMatrix) -> dict:
    """JSON-ready dict; mixed matrices are flattened row-major."""
    if isinstance(state, PureState):
        data, kind = state.amplitudes, "pure"
    else:
        data, kind = state.matrix.reshape(-1), "mixed"
    return {
        "schema": SCHEMA,
        "dims": list(state.dims),
        "kind": kind,
        "re": [float(v) for v in data.real],
        "im": [float(v) for v in data.imag],
    }


def state_from_dict(obj: dict) -> PureState | DensityMatrix:
    try:
        dims = tuple(int(d) for d in obj["dims"])
        kind = obj["kind"]
        data = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj.get("im", [0.0] * len(obj["re"])), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed state record: {exc}") from exc
    d = int(np.prod(dims))
    try:
        if kind == "pure":
            return PureState(data, dims)
        if kind == "mixed":
            if data.size != d * d:
                raise InputError(f"mixed state needs {d * d} entries, got {data.size}")
            return DensityMatrix(data.reshape(d, d), dims)
    except StateError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"kind must be 'pure' or 'mixed', got {kind!r}")


def load_state(path: str) -> PureState | DensityMatrix:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    return state_from_dict(obj)


def dump_state(state: PureState | DensityMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh)
        fh.write("\n")


def _emit_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2)
    if out in (None, "-"):
        print(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


# --- commands ---------------------------------------------------------------


def _roof_cfg(args) -> RoofConfig:
    return RoofConfig(
        ensemble_size=args.ensemble_size,
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        tolerance=args.tolerance,
        seed=args.seed,
        stream=args.stream,
    )


def _params(args, family: Family | None) -> MeasureParams:
    fam = family or (Family(args.family) if args.family else None)
    if fam is None:
        raise UsageError("--family is required for this measure")
    if args.family and Family(args.family) is not fam:
        raise DomainError(f"--kind {args.kind} needs family {fam.value}, got {args.family}")
    return MeasureParams(fam, args.a, args.b)


def cmd_measure(args) -> int:
    state = load_state(args.state)
    n = state.n_parties
    gamma = Partition.parse(args.partition, n) if args.partition else Partition.finest(n)
    cfg = _roof_cfg(args)
    record: dict = {"schema": SCHEMA, "command": "measure", "dims": list(state.dims), "partition": str(gamma)}
    closed = None
    if args.kind == "E":
        p = _params(args, None)
        if gamma.k != 2 or not gamma.covers():
            raise UsageError(f"bipartite measure needs a two-block partition of all parties, got {gamma}")
        if isinstance(state, PureState):
            value, exact = entanglement_pure(state, gamma, p), True
        else:
            res = roof_entanglement(state, p, gamma.blocks[0], cfg)
            value, exact = res.value, len(res.witness) == 1
            if state.dims == (2, 2):
                closed = two_qubit_measure(state, p)
    elif args.kind == "GEM":
        p = _params(args, None)
        if isinstance(state, PureState):
            value, exact = gem_pure(state, p), True
        else:
            value, exact = gem_mixed(state, p, cfg), False
        record["note"] = "mixed-state values are upper bounds and cannot certify genuine entanglement"
    else:
        form = Form(args.kind)
        p = _params(args, form.family)
        value, exact = glmem(state, gamma, GlobalMeasureKind(form, p), cfg)
    record.update(
        {
            "kind": args.kind,
            "family": p.family.value,
            "a": p.a,
            "b": p.b,
            "value": _g17(value),
            "provenance": "exact" if exact else "upper-bound",
            "seed": args.seed,
            "rng": RNG_ALGORITHM,
        }
    )
    if closed is not None:
        record["closed_form"] = _g17(closed)
    if args.json:
        _emit_json(record, None)
    else:
        print(_g7(value))
    if args.out:
        _emit_json(record, args.out)
    return EXIT_OK


WERNER_COLUMNS = ("p", "E_2_2", "E_2_1/2", "E_1/2_1/2", "ordered")
WERNER_PARAMS = (MeasureParams.qs(2, 2), MeasureParams.qs(2, 0.5), MeasureParams.rt(0.5, 0.5))


def werner_rows(p_min: float, p_max: float, steps: int) -> list[tuple]:
    """Rows ``(p, E_{2,2}, E_{2,1/2}, E_{1/2,1/2}, ordered)`` from the concurrence closed form.

    ``ordered`` is ``"true"``/``"false"`` for entangled states and ``""`` at
    ``p <= 1/3`` where all three vanish.
    """
    if not 0 <= p_min < p_max <= 1:
        raise DomainError(f"need 0 <= p-min < p-max <= 1, got {p_min}, {p_max}")
    if steps < 2:
        raise DomainError("steps must be at least 2")
    rows = []
    for p in np.linspace(p_min, p_max, steps):
        p = float(p)
        vals = [two_qubit_measure(werner_state(p), mp) for mp in WERNER_PARAMS]
        if werner_concurrence(p) > 0:
            ordered = "true" if vals[0] < vals[1] < vals[2] else "false"
        else:
            ordered = ""
        rows.append((p, *vals, ordered))
    return rows


def cmd_werner_scan(args) -> int:
    rows = werner_rows(args.p_min, args.p_max, args.steps)
    fh = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(WERNER_COLUMNS)
        for row in rows:
            w.writerow([f"{x:.17g}" for x in row[:4]] + [row[4]])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    report = run_suite(args.suite, CorpusSpec(args.cases), (args.seed, args.stream))
    r = report.residuals
    print(f"suite     {report.name}")
    print(f"rule      {report.rule}")
    print(f"cases     {len(report.cases)}")
    print(f"failures  {report.failures}")
    print(f"min       {_g7(float(r.min()))}")
    print(f"max       {_g7(float(r.max()))}")
    print(f"elapsed   {_g7(report.elapsed)} s")
    print(f"status    {'PASS' if report.ok else 'FAIL'}")
    if args.out:
        obj = {"schema": SCHEMA, **report.to_dict()}
        _emit_json(json.loads(json.dumps(obj, default=str)), args.out)
    return EXIT_OK if report.ok else EXIT_SUITE


def cmd_partitions(args) -> int:
    if args.xi:
        n = max(Partition.parse(s).universe for s in args.xi)
        g, h = (Partition.parse(s, n) for s in args.xi)
        if not coarser(g, h):
            raise DomainError(f"{h} is not coarser than {g}")
        for x in xi_set(g, h):
            print(x)
    elif args.coarser:
        n = max(Partition.parse(s).universe for s in args.coarser)
        g, h = (Partition.parse(s, n) for s in args.coarser)
        via = [tag for tag, rel in (("a", coarser_a), ("b", coarser_b), ("c", coarser_c)) if rel(g, h)]
        ok = coarser(g, h)
        print("true" if ok else "false", end="")
        print(f" (via {','.join(via)})" if ok and via else (" (via a sequence of moves)" if ok else ""))
    elif args.n is not None and args.k is not None:
        for g in enumerate_partitions(args.n, args.k):
            print(g)
    else:
        raise UsageError("give --n and --k, --xi G H, or --coarser G H")
    return EXIT_OK


# --- parser -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("UNIENT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"UNIENT_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="unient", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=None, help="RNG seed (default: $UNIENT_SEED or 0)")
    ap.add_argument("--stream", type=int, default=0, help="RNG stream id")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="evaluate a measure on a state file")
    m.add_argument("state", help="JSON state file")
    m.add_argument("--partition", help='partition such as "A|BC" (default: one block per party)')
    m.add_argument("--kind", default="E", choices=["E", "GEM"] + [f.value for f in Form])
    m.add_argument("--family", choices=[f.value for f in Family])
    m.add_argument("--a", type=float, required=True, help="q (QS) or r (RT)")
    m.add_argument("--b", type=float, required=True, help="s (QS) or t (RT)")
    m.add_argument("--restarts", type=int, default=20)
    m.add_argument("--max-iterations", type=int, default=1000)
    m.add_argument("--tolerance", type=float, default=1e-6)
    m.add_argument("--ensemble-size", type=int, default=None)
    m.add_argument("--seed", type=int, default=None, dest="sub_seed", help="roof restart seed")
    m.add_argument("--json", action="store_true", help="print the JSON record instead of the bare value")
    m.add_argument("--out", help="also write the JSON record here")
    m.set_defaults(func=cmd_measure)

    w = sub.add_parser("werner-scan", help="closed-form measures along the Werner family (CSV)")
    w.add_argument("--p-min", type=float, default=0.0)
    w.add_argument("--p-max", type=float, default=1.0)
    w.add_argument("--steps", type=int, default=101)
    w.add_argument("--out", help="CSV path (default stdout)")
    w.set_defaults(func=cmd_werner_scan)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", required=True, help=", ".join(sorted(SUITES)))
    v.add_argument("--cases", type=int, default=None)
    v.add_argument("--seed", type=int, default=None, dest="sub_seed")
    v.add_argument("--out", help="JSON report path")
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("partitions", help="list or relate partitions")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--xi", nargs=2, metavar=("G", "H"))
    p.add_argument("--coarser", nargs=2, metavar=("G", "H"))
    p.set_defaults(func=cmd_partitions)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        seed = getattr(args, "sub_seed", None)
        args.seed = seed if seed is not None else (args.seed if args.seed is not None else _default_seed())
        return args.func(args)
    except UsageError as exc:
        print(f"unient: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SuiteError as exc:
        print(f"unient: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"unient: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PartitionError as exc:
        print(f"unient: {exc}", file=sys.stderr)
        return EXIT_DOMAIN if isinstance(exc, XiUndefinedError) else EXIT_USAGE
    except (DomainError, StateError, ValueError) as exc:
        print(f"unient: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
