"""Command-line front end.

Subcommands: construct, verify, unlock, discriminate, noisy-scan, report.
Every command assembles one report object; JSON is the single structured
output (floats at 17 significant digits, negative zeros normalized, fixed
key order) and the text mode is the same object rendered for a terminal.
Exit codes: 0 pass, 1 verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json as _json
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from . import analyze, protocol
from .basis import BasisError
from .config import DEFAULT_TOLERANCES, MAX_QUBITS_ENV, Tolerances, max_qubits
from .construct import (
    ConstructError,
    NoisyWeights,
    RHO_PLUS,
    STATE_CLASSES,
    StateClass,
    bell_diagonal,
    noisy_state,
    pauli_relate,
    projector_direct,
    projector_recursive,
)
from .linalg import (
    Bipartition,
    DensityMatrix,
    LinalgError,
    dump_matrix,
    format_float,
    frobenius_distance,
    hermitian_eigenvalues,
)
from .protocol import ProtocolError
from .analyze import AnalyzeError

USAGE_ERROR = 2
CHECK_FAILED = 1


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------


def render_json(obj, indent: int = 0) -> str:
    """Byte-stable JSON: insertion-ordered keys, %.17g floats, no -0.0."""
    pad = "  " * indent
    child = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f"{child}{_json.dumps(str(k))}: {render_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{child}{render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if isinstance(obj, bool) or obj is None:
        return _json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return _json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def render_text(obj, indent: int = 0) -> list[str]:
    """Terminal rendering of the same report object."""
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list, tuple)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            if isinstance(v, (dict, list, tuple)):
                lines.append(f"{pad}-")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(f"{pad}{_scalar_text(obj)}")
    return lines


def _scalar_text(v) -> str:
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, (dict, list, tuple)) and not v:
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    command: str
    state_class: StateClass | None = None
    weights: NoisyWeights | None = None
    n: int = 4
    keep: tuple[int, int] | None = None
    pairing: tuple[tuple[int, int], ...] | None = None
    tolerances: Tolerances = DEFAULT_TOLERANCES
    json_path: str | None = None
    dump_path: str | None = None
    scan_mode: str = "auto"
    seed: int | None = None
    line: str = "two-term"
    points: int = 101
    include_timings: bool = False

    @property
    def descriptor(self) -> str:
        if self.state_class is not None:
            return f"{self.state_class.descriptor} n={self.n}"
        if self.weights is not None:
            return f"{self.weights.descriptor} n={self.n}"
        return f"n={self.n}"

    def state(self) -> DensityMatrix:
        if self.state_class is not None:
            return projector_direct(self.state_class, self.n)
        if self.weights is not None:
            return noisy_state(self.weights, self.n)
        raise ConfigError("no state given: use --class or --noisy")


def _parse_pair(text: str) -> tuple[int, int]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 2:
        raise ConfigError(f"expected i,j — got {text!r}")
    return (int(parts[0]), int(parts[1]))


def _parse_pairing(text: str) -> tuple[tuple[int, int], ...]:
    return tuple(_parse_pair(chunk) for chunk in text.split(";") if chunk.strip())


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    state_class = StateClass.parse(args.state_class) if getattr(args, "state_class", None) else None
    weights = NoisyWeights.parse(args.noisy) if getattr(args, "noisy", None) else None
    if state_class is not None and weights is not None:
        raise ConfigError("--class and --noisy are mutually exclusive")
    n = getattr(args, "n", None)
    if n is not None:
        ceiling = max_qubits()
        if n % 2 or not 4 <= n <= ceiling:
            raise ConfigError(
                f"--n must be even with 4 <= n <= {ceiling} "
                f"(set {MAX_QUBITS_ENV} to raise the ceiling); got {n}"
            )
    tol = DEFAULT_TOLERANCES
    if getattr(args, "tol_ppt", None) is not None:
        if args.tol_ppt <= 0:
            raise ConfigError("--tol-ppt must be positive")
        tol = replace(tol, ppt=args.tol_ppt)
    scan_mode = "auto"
    if getattr(args, "exhaustive", False):
        scan_mode = "exhaustive"
    elif getattr(args, "sampled", False):
        scan_mode = "sampled"
    points = getattr(args, "points", 101)
    if points < 3:
        raise ConfigError("--points must be at least 3")
    return RunConfig(
        command=args.command,
        state_class=state_class,
        weights=weights,
        n=n if n is not None else 4,
        keep=_parse_pair(args.keep) if getattr(args, "keep", None) else None,
        pairing=_parse_pairing(args.pairing) if getattr(args, "pairing", None) else None,
        tolerances=tol,
        json_path=getattr(args, "json", None),
        dump_path=getattr(args, "dump", None),
        scan_mode=scan_mode,
        seed=getattr(args, "seed", None),
        line=getattr(args, "line", "two-term"),
        points=points,
        include_timings=getattr(args, "timings", False),
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_construct(cfg: RunConfig) -> tuple[dict, bool]:
    state = cfg.state()
    state.validate(cfg.tolerances)
    eigs = hermitian_eigenvalues(state.matrix, cfg.tolerances)
    rank = int((eigs > 1e-8).sum())
    dump = dump_matrix(state.matrix)
    if cfg.dump_path:
        with open(cfg.dump_path, "w") as fh:
            fh.write(dump)
    else:
        sys.stdout.write(dump)
    report = {
        "command": "construct",
        "state": cfg.descriptor,
        "qubits": cfg.n,
        "dim": state.dim,
        "trace": state.trace(),
        "rank": rank,
        "max_eigenvalue": float(eigs[-1]),
        "dump": cfg.dump_path or "stdout",
        "checks": ["trace-normalization", "rank"],
        "tolerances": cfg.tolerances.as_dict(),
    }
    return report, True


def _verify_checks(cfg: RunConfig) -> list[dict]:
    n = cfg.n
    tol = cfg.tolerances
    checks: list[dict] = []

    def record(name: str, state: str, passed: bool, **detail):
        entry = {"check": name, "state": state, "passed": bool(passed)}
        entry.update(detail)
        checks.append(entry)

    direct = {cls: projector_direct(cls, n) for cls in STATE_CLASSES}

    total = sum(2 ** (n - 2) * direct[cls].matrix for cls in STATE_CLASSES)
    err = float(np.abs(total - np.eye(2**n)).max())
    record("completeness", "all", err < tol.equality, max_error=err)

    worst = 0.0
    for i, a in enumerate(STATE_CLASSES):
        for b in STATE_CLASSES[i + 1 :]:
            worst = max(worst, float(np.abs(direct[a].matrix @ direct[b].matrix).max()))
    record("mutual-orthogonality", "all", worst < tol.equality, max_error=worst)

    base = direct[RHO_PLUS]
    for cls in STATE_CLASSES:
        rec = projector_recursive(cls, n)
        pau = pauli_relate(base, cls)
        d1 = frobenius_distance(direct[cls].matrix, rec.matrix)
        d2 = frobenius_distance(direct[cls].matrix, pau.matrix)
        d3 = frobenius_distance(rec.matrix, pau.matrix)
        record(
            "construction-triangle",
            cls.descriptor,
            max(d1, d2, d3) < tol.equality,
            direct_vs_recursive=d1,
            direct_vs_pauli=d2,
            recursive_vs_pauli=d3,
        )

    for cls in STATE_CLASSES:
        ok, dev = analyze.check_permutation_invariance(direct[cls], tol)
        record("permutation-invariance", cls.descriptor, ok, max_deviation=dev)

    for cls in STATE_CLASSES:
        verdicts = analyze.scan_all_cuts(direct[cls], cfg.scan_mode, tol, seed=cfg.seed)
        two = [v for v in verdicts if min(len(v.cut.left), len(v.cut.right)) == 2]
        ones = [v for v in verdicts if min(len(v.cut.left), len(v.cut.right)) == 1]
        record(
            "cut-scan",
            cls.descriptor,
            all(v.ppt for v in two) and all(not v.ppt for v in ones),
            cuts=len(verdicts),
            two_vs_rest_ppt=all(v.ppt for v in two),
            one_vs_rest_npt=all(not v.ppt for v in ones),
            one_vs_rest_negativity=ones[0].negativity if ones else None,
        )

    pairs = analyze.certificate_pairs(n)
    for cls in STATE_CLASSES:
        worst_err = 0.0
        ok = True
        for pair in pairs:
            cert = analyze.certify_two_vs_rest_separable(direct[cls], pair, tol)
            ok = ok and cert.ok
            worst_err = max(worst_err, cert.reconstruction_error)
        record(
            "two-vs-rest-certificates",
            cls.descriptor,
            ok,
            pairs=len(pairs),
            max_reconstruction_error=worst_err,
        )
    return checks


def cmd_verify(cfg: RunConfig) -> tuple[dict, bool]:
    t0 = time.perf_counter()
    checks = _verify_checks(cfg)
    elapsed = time.perf_counter() - t0
    failed = [c for c in checks if not c["passed"]]
    report = {
        "command": "verify",
        "qubits": cfg.n,
        "passed": not failed,
        "failed_checks": [f'{c["check"]}[{c["state"]}]' for c in failed],
        "checks": checks,
        "tolerances": cfg.tolerances.as_dict(),
    }
    if cfg.include_timings:
        report["timings"] = {"total": elapsed}
    return report, not failed


def cmd_unlock(cfg: RunConfig) -> tuple[dict, bool]:
    state = cfg.state()
    keep = cfg.keep or (1, 2)
    result = protocol.unlock_sequential(state, keep, cfg.pairing, cfg.tolerances)
    branches = []
    for b in result.branches:
        branches.append(
            {
                "labels": [lb.symbol for lb in b.labels],
                "probability": b.probability,
                "fidelity": b.fidelity,
                "best_label": b.best_label.symbol if b.best_label else None,
            }
        )
    ok = True
    if cfg.state_class is not None:
        ok = result.min_fidelity >= 1 - cfg.tolerances.fidelity
    report = {
        "command": "unlock",
        "state": cfg.descriptor,
        "keep": list(result.keep),
        "pairing": [list(p) for p in result.pairing],
        "branches": branches,
        "aggregate": {
            "branch_count": len(result.branches),
            "total_probability": result.total_probability,
            "min_fidelity": result.min_fidelity,
            "max_fidelity": max((b.fidelity for b in result.branches if b.fidelity is not None), default=0.0),
            "xor_rule_holds": result.xor_rule_holds,
        },
        "checks": ["branch-enumeration", "bell-fidelity", "xor-label-rule"],
        "tolerances": cfg.tolerances.as_dict(),
    }
    return report, ok


def cmd_discriminate(cfg: RunConfig) -> tuple[dict, bool]:
    state = cfg.state()
    keep = cfg.keep or (1, 2)
    group = tuple(q for q in range(1, cfg.n + 1) if q not in keep)
    outcomes = protocol.discriminate_subspace(state, group, cfg.tolerances)
    rows = []
    total = 0.0
    for o in outcomes:
        total += o.probability
        row = {"outcome": o.label.descriptor, "probability": o.probability}
        if o.post_state is not None:
            label, fid = protocol.bell_fidelity(o.post_state)
            row["kept_pair_best_bell"] = label.symbol
            row["kept_pair_fidelity"] = fid
        else:
            row["kept_pair_best_bell"] = None
            row["kept_pair_fidelity"] = None
        rows.append(row)
    ok = abs(total - 1.0) < cfg.tolerances.probability
    report = {
        "command": "discriminate",
        "state": cfg.descriptor,
        "keep": list(keep),
        "group": list(group),
        "outcomes": rows,
        "total_probability": total,
        "checks": ["subspace-discrimination", "bell-fidelity"],
        "tolerances": cfg.tolerances.as_dict(),
    }
    return report, ok


def cmd_noisy_scan(cfg: RunConfig) -> tuple[dict, bool]:
    tol = cfg.tolerances
    rows = []
    entangled_flags = []
    agree_everywhere = True
    for i in range(cfg.points):
        w = i / (cfg.points - 1)
        if cfg.line == "two-term":
            weights = NoisyWeights(w, 1.0 - w, 0.0, 0.0)
        elif cfg.line == "werner":
            rest = (1.0 - w) / 3.0
            weights = NoisyWeights(w, rest, rest, rest)
        else:
            raise ConfigError(f"unknown scan line {cfg.line!r} (want two-term|werner)")
        verdict = analyze.bell_diagonal_entangled(weights, tol)
        pi_plus = bell_diagonal(weights, "pi", +1)
        cut = Bipartition.of((1,), 2)
        ppt_rows = [analyze.is_ppt(pi_plus, cut, tol)]
        ppt_rows.append(analyze.is_ppt(bell_diagonal(weights, "pi", -1), cut, tol))
        ppt_rows.append(analyze.is_ppt(bell_diagonal(weights, "gamma", +1), cut, tol))
        ppt_rows.append(analyze.is_ppt(bell_diagonal(weights, "gamma", -1), cut, tol))
        agree = all((not v.ppt) == verdict.entangled for v in ppt_rows)
        agree_everywhere = agree_everywhere and agree
        unlocked = protocol.unlock_sequential(noisy_state(weights, cfg.n), (1, 2), tol=tol)
        best = max((b.fidelity for b in unlocked.branches if b.fidelity is not None), default=0.0)
        entangled_flags.append(verdict.entangled)
        rows.append(
            {
                "w": w,
                "w_max": verdict.w_max,
                "entangled": verdict.entangled,
                "ppt": ppt_rows[0].ppt,
                "min_pt_eigenvalue": ppt_rows[0].min_eigenvalue,
                "negativity": ppt_rows[0].negativity,
                "unlocked_pair_fidelity": best,
                "rule_agrees_with_ppt": agree,
            }
        )
    flips = []
    for i in range(len(rows) - 1):
        if entangled_flags[i] != entangled_flags[i + 1]:
            flips.append([rows[i]["w"], rows[i + 1]["w"]])
    flips_at_half = all(a <= 0.5 <= b for a, b in flips)
    ok = agree_everywhere and bool(flips) and flips_at_half
    report = {
        "command": "noisy-scan",
        "qubits": cfg.n,
        "line": cfg.line,
        "points": cfg.points,
        "rows": rows,
        "summary": {
            "flips": flips,
            "all_flips_bracket_half": flips_at_half,
            "rule_agrees_with_ppt_everywhere": agree_everywhere,
        },
        "checks": ["largest-weight-rule", "ppt-cross-check", "unlock-fidelity"],
        "tolerances": cfg.tolerances.as_dict(),
    }
    return report, ok


def cmd_report(cfg: RunConfig) -> tuple[dict, bool]:
    state = cfg.state()
    rep = analyze.classify_abe(state, cfg.descriptor, cfg.tolerances, cfg.scan_mode, cfg.seed)
    cuts = [
        {
            "left": list(v.cut.left),
            "min_eigenvalue": v.min_eigenvalue,
            "negativity": v.negativity,
            "ppt": v.ppt,
        }
        for v in rep.cut_verdicts
    ]
    certs = [
        {
            "pair": list(c.pair),
            "weights": {lb.symbol: c.weights[lb] for lb in sorted(c.weights, key=lambda b: (b.parity, b.phase))},
            "reconstruction_error": c.reconstruction_error,
            "ok": c.ok,
        }
        for c in rep.certificates
    ]
    report = {
        "command": "report",
        "state": rep.descriptor,
        "qubits": rep.qubits,
        "cuts": cuts,
        "permutation_invariant": rep.permutation_invariant,
        "max_permutation_deviation": rep.max_permutation_deviation,
        "certificates": certs,
        "two_vs_rest_separable_certified": rep.two_vs_rest_separable_certified,
        "activation": {
            "keep": list(rep.activation.keep),
            "branch_count": rep.activation.branch_count,
            "min_fidelity": rep.activation.min_fidelity,
            "xor_rule_holds": rep.activation.xor_rule_holds,
            "all_branches_entangled": rep.activation.all_branches_entangled,
        },
        "activable": rep.activable,
        "checks": [
            "cut-scan",
            "permutation-invariance",
            "two-vs-rest-certificates",
            "activation-protocol",
        ],
        "tolerances": cfg.tolerances.as_dict(),
    }
    if cfg.include_timings:
        report["timings"] = rep.timings
    return report, True


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "unlock": cmd_unlock,
    "discriminate": cmd_discriminate,
    "noisy-scan": cmd_noisy_scan,
    "report": cmd_report,
}


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcabe",
        description="Construct, verify, and activate the four bound-entangled projector states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_state_args(p, need_n=True):
        p.add_argument("--class", dest="state_class", metavar="CLS",
                       help="rho+ | rho- | sigma+ | sigma-")
        p.add_argument("--noisy", metavar="W", help="x+,x-,y+,y- convex weights")
        if need_n:
            p.add_argument("--n", type=int, required=True, help="even qubit count (4..ceiling)")
        p.add_argument("--tol-ppt", type=float, default=None, help="override the PPT eigenvalue tolerance")
        p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    p = sub.add_parser("construct", help="build a state and dump its matrix")
    add_state_args(p)
    p.add_argument("--dump", metavar="PATH", help="write the matrix dump here instead of stdout")

    p = sub.add_parser("verify", help="run the full verification checklist at one size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol-ppt", type=float, default=None)
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--timings", action="store_true")
    p.add_argument("--exhaustive", action="store_true", help="force the exhaustive cut scan")
    p.add_argument("--sampled", action="store_true", help="use the sampled cut scan")
    p.add_argument("--seed", type=int, default=None, help="seed for sampled modes only")

    p = sub.add_parser("unlock", help="sequential pairwise Bell measurements")
    add_state_args(p)
    p.add_argument("--keep", metavar="i,j", help="pair left untouched (default 1,2)")
    p.add_argument("--pairing", metavar="i,j;k,l", help="explicit measured pairing")

    p = sub.add_parser("discriminate", help="joint subspace discrimination by the grouped qubits")
    add_state_args(p)
    p.add_argument("--keep", metavar="i,j", help="pair left out of the group (default 1,2)")

    p = sub.add_parser("noisy-scan", help="sweep mixture weights and locate the w>1/2 transition")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--line", choices=("two-term", "werner"), default="two-term")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--tol-ppt", type=float, default=None)
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--timings", action="store_true")

    p = sub.add_parser("report", help="full classification report for one state")
    add_state_args(p)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--sampled", action="store_true")
    p.add_argument("--seed", type=int, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if cfg.command in ("unlock", "discriminate", "report") and cfg.state_class is None and cfg.weights is None:
            raise ConfigError(f"{cfg.command} needs --class or --noisy")
        if cfg.command == "construct" and cfg.state_class is None and cfg.weights is None:
            raise ConfigError("construct needs --class or --noisy")
        report, ok = COMMANDS[cfg.command](cfg)
    except (ConfigError, ConstructError, BasisError, LinalgError, AnalyzeError, ProtocolError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    payload = render_json(report) + "\n"
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            fh.write(payload)
    text = "\n".join(render_text(report)) + "\n"
    stream = sys.stderr if cfg.command == "construct" and not cfg.dump_path else sys.stdout
    stream.write(text)
    return 0 if ok else CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
