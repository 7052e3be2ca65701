"""``ptmom`` command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 infeasible input,
3 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from .bounds3d import Class3D, classify_triple, classify_triple_many, delta_and_pq, p4_bounds, p4_bounds_many
from .config import DEFAULT
from .errors import InconsistentMomentsError, PTMomentError, ResolutionError
from .moments import (PTMomentVector, Spectrum, bell_diagonal_moments, concurrence_interval, negativity,
                      pt_moments, reconstruct_spectrum, werner_moments)
from .oracle import oracle_s_range
from .qstate import BellDiagonalParams, DensityMatrix, is_bell_separable, partial_transpose, sample_random_state
from .region2d import Class2D, classify_2d, f_bounds, in_region_A, phi4

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INFEASIBLE = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- serialization ---------------------------------------------------------

def fmt(x) -> str:
    """17 significant digits: exact round trip for doubles."""
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return f"{x:.17g}"


def to_json_text(obj, indent: int = 0, step: int = 2) -> str:
    """JSON with every float written by :func:`fmt` (the stdlib uses repr)."""
    pad = " " * (indent + step)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json_text(v, indent + step, step)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json_text(v) for v in obj) + "]"
        items = [pad + to_json_text(v, indent + step, step) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)) and not isinstance(obj, float):
        return json.dumps(obj)
    return fmt(obj)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def _eps(arg) -> float:
    if arg is not None:
        return arg
    env = os.environ.get("PTMOM_EPS")
    if env is None:
        return DEFAULT.classify
    try:
        val = float(env)
    except ValueError:
        raise UsageError(f"PTMOM_EPS is not a number: {env!r}") from None
    if not val >= 0.0:
        raise UsageError(f"PTMOM_EPS must be non-negative, got {env!r}")
    return val


# -- classify / bounds ----------------------------------------------------

def _bounds_fields(p2, p3) -> dict:
    if not in_region_A((p2, p3)):
        return {"F_minus": None, "F_mid": None, "F_plus": None}
    b = p4_bounds((p2, p3))
    return {"F_minus": b.F_minus, "F_mid": b.F_mid, "F_plus": b.F_plus}


def cmd_classify(args) -> int:
    eps = _eps(args.eps)
    if args.state is not None:
        if any(v is not None for v in (args.p2, args.p3, args.p4)):
            raise UsageError("give either --state or --p2/--p3/--p4, not both")
        try:
            rho = DensityMatrix.load(args.state)
        except OSError as exc:
            raise UsageError(f"cannot read {args.state}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.state}: invalid JSON ({exc.msg})") from None
        gamma = partial_transpose(rho)
        p = pt_moments(gamma)
        spec = Spectrum(*gamma.eigenvalues())
    else:
        if any(v is None for v in (args.p2, args.p3, args.p4)):
            raise UsageError("need --state FILE or all of --p2, --p3, --p4")
        p = PTMomentVector(1.0, args.p2, args.p3, args.p4)
        spec = None
    cls = classify_triple(p.p2, p.p3, p.p4, eps)
    if spec is None and cls is not Class3D.INFEASIBLE:
        try:
            spec = reconstruct_spectrum(p)
        except InconsistentMomentsError:
            spec = None
    report = {"classification": cls.value, "p": list(p.as_tuple())}
    report.update(_bounds_fields(p.p2, p.p3))
    if spec is not None:
        n = negativity(spec)
        report["spectrum"] = list(spec.as_tuple())
        report["negativity"] = n
        report["concurrence_interval"] = list(concurrence_interval(min(1.0, n)))
    else:
        report["negativity"] = None
        report["concurrence_interval"] = None
    report["eps"] = eps
    _emit(to_json_text(report) + "\n", None)
    return EXIT_INFEASIBLE if cls is Class3D.INFEASIBLE else EXIT_OK


def cmd_bounds(args) -> int:
    pair = (args.p2, args.p3)
    if not in_region_A(pair):
        _emit(to_json_text({"classification": "Infeasible", "p2": args.p2, "p3": args.p3}) + "\n", None)
        return EXIT_INFEASIBLE
    b = p4_bounds(pair)
    report = {"p2": args.p2, "p3": args.p3, **b.to_json(),
              "classification_2d": classify_2d(pair).value}
    _emit(to_json_text(report) + "\n", None)
    return EXIT_OK


# -- surface ---------------------------------------------------------------

@dataclass(frozen=True)
class MeshRow:
    p2: float
    p3: float
    f_minus_2d: float
    f_plus_2d: float
    phi4: float
    s_min: float
    s_max: float
    delta: float
    F_minus: float
    F_mid: float
    F_plus: float


MESH_COLUMNS = tuple(f.name for f in fields(MeshRow))


def mesh_pairs(n: int) -> list[tuple[float, float]]:
    """``n`` columns in p2, ``n`` rows in p3 between f- and f+ per column;
    the degenerate column p2 = 1/4 contributes a single pair."""
    if n < 2:
        raise UsageError(f"grid resolution must be >= 2, got {n}")
    pairs = []
    for p2 in np.linspace(0.25, 1.0, n):
        lo, hi = f_bounds(float(p2))
        if hi - lo <= 0.0:
            pairs.append((float(p2), lo))
            continue
        pairs.extend((float(p2), float(p3)) for p3 in np.linspace(lo, hi, n))
    return pairs


def surface_rows(n: int) -> list[MeshRow]:
    pairs = mesh_pairs(n)
    bounds = p4_bounds_many([a for a, _ in pairs], [b for _, b in pairs])
    rows = []
    for (p2, p3), b in zip(pairs, bounds):
        lo, hi = f_bounds(p2)
        rows.append(MeshRow(p2, p3, lo, hi, phi4(p2), b.srange.s_min, b.srange.s_max,
                            delta_and_pq((p2, p3))[0], b.F_minus, b.F_mid, b.F_plus))
    return rows


def _table(columns, rows, fmt_name: str) -> str:
    if fmt_name == "json":
        return to_json_text([dict(zip(columns, r)) for r in rows]) + "\n"
    lines = [",".join(columns)]
    for r in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in r))
    return "\n".join(lines) + "\n"


def cmd_surface(args) -> int:
    rows = surface_rows(args.n)
    _emit(_table(MESH_COLUMNS, [tuple(asdict(r).values()) for r in rows], args.format), args.out)
    return EXIT_OK


# -- family ----------------------------------------------------------------

def _parse_t(text: str) -> BellDiagonalParams:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--t expects three comma-separated numbers, got {text!r}") from None
    if len(vals) != 3:
        raise UsageError(f"--t expects three comma-separated numbers, got {text!r}")
    return BellDiagonalParams(*vals)


def _bell_samples(k: int, seed: int) -> list[BellDiagonalParams]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < k:
        t = rng.uniform(-1.0, 1.0, size=3)
        c = (1 - t[0] - t[1] - t[2], 1 - t[0] + t[1] + t[2], 1 + t[0] - t[1] + t[2], 1 + t[0] + t[1] - t[2])
        if min(c) >= 0.0:
            out.append(BellDiagonalParams(*(float(v) for v in t)))
    return out


def family_rows(family: str, samples: int | None = None, t: str | None = None,
                seed: int = 0, eps: float = DEFAULT.classify):
    """Column names and rows of (parameters, p2, p3, p4, classification)."""
    if family == "werner":
        if t is not None:
            raise UsageError("--t applies to the bell family only")
        ws = np.linspace(0.0, 1.0, samples if samples is not None else 101)
        params = [(float(w),) for w in ws]
        moments = [werner_moments(w) for (w,) in params]
        columns = ("w", "p2", "p3", "p4", "classification")
        extra = [()] * len(params)
    elif family == "bell":
        if t is not None:
            ts = [_parse_t(t)]
        else:
            ts = _bell_samples(samples if samples is not None else 100, seed)
        params = [(b.t1, b.t2, b.t3) for b in ts]
        moments = [bell_diagonal_moments(b) for b in ts]
        columns = ("t1", "t2", "t3", "p2", "p3", "p4", "classification", "bell_separable")
        extra = [(str(is_bell_separable(b)).lower(),) for b in ts]
    else:
        raise UsageError(f"unknown family {family!r}")
    if not params:
        return columns, []
    cls = classify_triple_many([m.p2 for m in moments], [m.p3 for m in moments],
                               [m.p4 for m in moments], eps)
    rows = [par + (m.p2, m.p3, m.p4, c.value) + ex for par, m, c, ex in zip(params, moments, cls, extra)]
    return columns, rows


def cmd_family(args) -> int:
    if args.samples is not None and args.samples < 1:
        raise UsageError(f"--samples must be >= 1, got {args.samples}")
    columns, rows = family_rows(args.family, args.samples, args.t, args.seed, _eps(args.eps))
    _emit(_table(columns, rows, args.format), args.out)
    return EXIT_OK


# -- verify ----------------------------------------------------------------

def _state_json(rho: DensityMatrix) -> dict:
    return rho.to_json()


def run_verify(n: int, seed: int, delta: float = 1e-2, oracle_samples: int = 10,
               eps: float = DEFAULT.classify) -> dict:
    """Monte Carlo check of the p4 bounds and the PPT agreement, plus an
    oracle comparison of the s-range on the first ``oracle_samples`` states."""
    states = [sample_random_state(seed, i) for i in range(n)]
    gammas = [partial_transpose(r).matrix for r in states]
    moments = np.array([pt_moments(g).as_tuple() for g in gammas])
    lam_min = np.array([np.linalg.eigvalsh(g)[0] for g in gammas])
    p2, p3, p4 = moments[:, 1], moments[:, 2], moments[:, 3]
    inside = np.array([in_region_A((a, b)) for a, b in zip(p2, p3)])
    violations = []

    def bad(kind, i, **info):
        violations.append({"kind": kind, "index": i, "state": _state_json(states[i]), **info})

    for i in np.nonzero(~inside)[0]:
        bad("outside_region_A", int(i), p=list(moments[i]))
    idx = np.nonzero(inside)[0]
    bounds = p4_bounds_many(p2[idx], p3[idx])
    worst_feas = -math.inf
    excluded = 0
    for i, b in zip(idx, bounds):
        i = int(i)
        margin = max(b.F_minus - p4[i], p4[i] - b.F_plus)
        worst_feas = max(worst_feas, margin)
        if margin > DEFAULT.p4_feasible:
            bad("p4_outside_bounds", i, p=list(moments[i]), F_minus=b.F_minus, F_plus=b.F_plus)
            continue
        if abs(lam_min[i]) <= 1e-8:
            excluded += 1
            continue
        entangled = p4[i] > b.F_mid + eps
        if entangled != (lam_min[i] < 0.0):
            bad("ppt_disagreement", i, p=list(moments[i]), lambda_min=float(lam_min[i]))
        elif classify_2d((p2[i], p3[i])) is Class2D.CERTIFIED_ENTANGLED and not entangled:
            bad("2d_not_dominated", i, p=list(moments[i]))

    oracle_dev = []
    skipped = 0
    for i in idx[:oracle_samples]:
        i = int(i)
        try:
            o = oracle_s_range((p2[i], p3[i]), delta)
        except ResolutionError:
            skipped += 1
            continue
        b = bounds[list(idx).index(i)]
        dev = max(abs(o.s_min - b.srange.s_min), abs(o.s_max - b.srange.s_max))
        oracle_dev.append(dev)
        if dev > 10.0 * delta:
            bad("oracle_s_range", i, p=list(moments[i]), deviation=dev)
    return {
        "n": n, "seed": seed, "delta": delta,
        "violations": len(violations),
        "excluded_boundary_band": excluded,
        "worst_p4_margin": worst_feas if len(idx) else None,
        "oracle_checked": len(oracle_dev), "oracle_skipped": skipped,
        "worst_oracle_deviation": max(oracle_dev) if oracle_dev else None,
        "entangled": int(np.count_nonzero(lam_min < -1e-8)),
        "details": violations,
    }


def cmd_verify(args) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    summary = run_verify(args.n, args.seed, args.delta, args.oracle_samples, _eps(args.eps))
    _emit(to_json_text(summary) + "\n", None)
    return EXIT_VERIFY if summary["violations"] else EXIT_OK


# -- reconstruct -----------------------------------------------------------

def cmd_reconstruct(args) -> int:
    try:
        vals = [float(v) for v in args.p.split(",")]
    except ValueError:
        raise UsageError(f"--p expects comma-separated numbers, got {args.p!r}") from None
    if len(vals) == 3:
        vals = [1.0] + vals
    p = PTMomentVector.from_sequence(vals)
    try:
        spec = reconstruct_spectrum(p)
    except InconsistentMomentsError as exc:
        _emit(to_json_text({"classification": "Infeasible", "p": list(p.as_tuple()), "error": str(exc)}) + "\n", None)
        return EXIT_INFEASIBLE
    n = negativity(spec)
    _emit(to_json_text({"p": list(p.as_tuple()), "spectrum": list(spec.as_tuple()), "negativity": n,
                        "concurrence_interval": list(concurrence_interval(min(1.0, n)))}) + "\n", None)
    return EXIT_OK


# -- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptmom", description="Entanglement tests and bounds from PT-moments of two-qubit states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify a state file or a (p2, p3, p4) triple")
    c.add_argument("--state", help="state JSON file")
    c.add_argument("--p2", type=float)
    c.add_argument("--p3", type=float)
    c.add_argument("--p4", type=float)
    c.add_argument("--eps", type=float, help="band around the dividing surface (env PTMOM_EPS)")
    c.set_defaults(func=cmd_classify)

    b = sub.add_parser("bounds", help="p4 bounds and s-range for (p2, p3)")
    b.add_argument("--p2", type=float, required=True)
    b.add_argument("--p3", type=float, required=True)
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("surface", help="export the bound surfaces over region A")
    s.add_argument("--n", type=int, default=64, help="grid resolution per axis")
    s.add_argument("--out", help="output file (default stdout)")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_surface)

    f = sub.add_parser("family", help="moments and classification along Werner or Bell-diagonal states")
    f.add_argument("family", choices=("werner", "bell"))
    f.add_argument("--samples", type=int)
    f.add_argument("--t", help="explicit Bell-diagonal parameters 't1,t2,t3'")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--eps", type=float)
    f.add_argument("--out")
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.set_defaults(func=cmd_family)

    v = sub.add_parser("verify", help="Monte Carlo and oracle self-check")
    v.add_argument("--n", type=int, default=1000)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--delta", type=float, default=1e-2, help="oracle grid step")
    v.add_argument("--oracle-samples", type=int, default=10)
    v.add_argument("--eps", type=float)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reconstruct", help="spectrum and negativity from moments")
    r.add_argument("--p", required=True, help="'p1,p2,p3,p4' or 'p2,p3,p4'")
    r.set_defaults(func=cmd_reconstruct)
    return parser


def _glue_values(argv):
    # let "--t -1,-1,-1" through; argparse would read the value as a flag
    out = []
    it = iter(argv)
    for a in it:
        if a in ("--t", "--p"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_values(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, PTMomentError, ValueError) as exc:
        print(f"ptmom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
