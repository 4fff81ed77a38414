"""Command-line front end.

Commands: verify, sympow, series, twist, defect-table, schur-cocycle,
normalize.  Exit codes: 0 all checks pass, 1 axiom failure or
ineligible input, 2 unreadable/unparseable input.  All output is
deterministic (sorted keys, sorted rows) for byte-identical reruns.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import frobenius, gfrob, sympow
from .cocycles import (FiniteGroupTable, SuperGrading, TwoCocycle,
                       cocycle_from_json_dict, length_defect_sign_cocycle,
                       normalize_nonabelian_sn, schur_cocycle_sn)
from .exact import format_rat
from .frobenius import AlgebraFormatError
from .reports import CheckReport
from .symgroup import all_permutations, graph_defect_table

DEFAULT_CAP = 5000


class FeasibilityRefused(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    n: int = 0
    parity: int = 0
    torsion: str = "none"
    out: str = None
    format: str = "text"
    workers: int = 1
    cap: int = DEFAULT_CAP
    seed: int = 0

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        if self.n < 0:
            raise ValueError("n must be >= 0")


def _cap_from_env(default):
    env = os.environ.get("ORBIFROB_CAP")
    if env:
        return int(env)
    return default


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_text(rep: CheckReport, fmt: str) -> str:
    if fmt == "json":
        return rep.to_json() + "\n"
    return rep.render_text() + "\n"


def _load_torsion(selector: str, group: FiniteGroupTable) -> TwoCocycle | None:
    if selector in (None, "none"):
        return None
    if selector == "schur":
        return schur_cocycle_sn(group.elements[0].n, group=group)
    if selector == "k3sign":
        return length_defect_sign_cocycle(group)
    with open(selector) as fh:
        return cocycle_from_json_dict(json.load(fh), group=group)


def cmd_verify(cfg: RunConfig) -> int:
    path = cfg.inputs[0]
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as err:
        print(f"error: {path}: line {err.lineno}: {err.msg}", file=sys.stderr)
        return 2
    try:
        if "group" in data:
            A = gfrob.from_json_dict(data)
            super_mode = any(A.sector_parity)
            rep = gfrob.verify_axioms(A, super_mode=super_mode, workers=cfg.workers)
        else:
            A = frobenius.from_json_dict(data, check=False)
            rep = frobenius.verify_frobenius(A)
    except (AlgebraFormatError, KeyError, ValueError) as err:
        print(f"error: {path}: {err}", file=sys.stderr)
        return 2
    if cfg.seed:
        rep.extend(_negative_controls(A, cfg.seed))
    _emit(_report_text(rep, cfg.format), cfg.out)
    return 0 if rep.ok else 1


def _negative_controls(A, seed: int) -> CheckReport:
    """Seeded corruptions that the verifier must catch: one structure
    constant, one sector-pair (gamma) block, one action sign."""
    rep = CheckReport("negative controls")
    if not isinstance(A, gfrob.GFrobeniusAlgebra):
        return rep
    rng = random.Random(seed)
    keys = sorted(A.mult)
    if not keys:
        return rep
    pick = keys[rng.randrange(len(keys))]
    bad = A.scaled_copy(mult_scale=lambda g, h: Fraction(2) if (g, h) == pick
                        else Fraction(1))
    caught = not gfrob.verify_axioms(bad, super_mode=any(A.sector_parity)).ok
    rep.add("corrupted_mult_block_caught", caught,
            None if caught else {"block": [A.element_str(pick[0]),
                                           A.element_str(pick[1])]},
            detail=f"seed={seed}")
    pick2 = sorted(A.action)[rng.randrange(len(A.action))]
    bad2 = A.scaled_copy(action_scale=lambda g, h: Fraction(-1) if (g, h) == pick2
                         else Fraction(1))
    caught2 = not gfrob.verify_axioms(bad2, super_mode=any(A.sector_parity)).ok
    rep.add("corrupted_action_sign_caught", caught2, detail=f"seed={seed}")
    return rep


def _load_base(path):
    with open(path) as fh:
        data = json.load(fh)
    return frobenius.from_json_dict(data)


def _builtin_base(name: str):
    if name == "pt":
        return frobenius.point_algebra()
    if name.startswith("z") and name[1:].isdigit():
        return frobenius.zn_algebra(int(name[1:]))
    return None


def _resolve_base(spec: str):
    A = _builtin_base(spec)
    if A is not None:
        return A
    return _load_base(spec)


def cmd_sympow(cfg: RunConfig) -> int:
    try:
        A = _resolve_base(cfg.inputs[0])
    except (OSError, json.JSONDecodeError, AlgebraFormatError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    total = sympow.total_dimension(A.dim, cfg.n)
    if total > cfg.cap:
        raise FeasibilityRefused(f"total dimension {total} exceeds cap {cfg.cap}")
    try:
        group = FiniteGroupTable.symmetric(cfg.n)
        torsion = _load_torsion(cfg.torsion, group)
        S = sympow.build(A, cfg.n, cfg.parity, torsion=torsion,
                         workers=cfg.workers)
    except sympow.BaseNotEligible as err:
        print(f"error: base not eligible: {err}", file=sys.stderr)
        return 1
    outdir = cfg.out or "."
    os.makedirs(outdir, exist_ok=True)
    gfrob.save_gfrob(S.algebra, os.path.join(outdir, "algebra.json"))
    with open(os.path.join(outdir, "verification.json"), "w") as fh:
        fh.write(S.verification.to_json() + "\n")
    _write_defect_csv(S, os.path.join(outdir, "defects.csv"))
    reports_ok = S.verification.ok
    trace = S.trace_report()
    with open(os.path.join(outdir, "trace.json"), "w") as fh:
        fh.write(trace.to_json() + "\n")
    reports_ok = reports_ok and trace.ok
    if torsion is None:
        ls = S.ls_compare()
        with open(os.path.join(outdir, "lscompare.json"), "w") as fh:
            fh.write(ls.to_json() + "\n")
        reports_ok = reports_ok and ls.ok
    else:
        with open(os.path.join(outdir, "lscompare.json"), "w") as fh:
            fh.write(json.dumps({"skipped": "torsion installed"}) + "\n")
    print(f"wrote artifacts to {outdir}; all checks "
          + ("PASS" if reports_ok else "FAIL"))
    return 0 if reports_ok else 1


def _write_defect_csv(S: sympow.SymmetricPowerAlgebra, path):
    rows = ["sigma,sigma_prime,block,defect"]
    G = S.group
    for gi in range(G.order):
        for hi in range(G.order):
            _, data = S.pair_data(gi, hi)
            for d in data:
                rows.append("%s,%s,%s,%d" % (
                    G.element_str(gi), G.element_str(hi),
                    " ".join(str(p) for p in d["block"]), d["defect"]))
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def cmd_series(cfg: RunConfig) -> int:
    try:
        A = _resolve_base(cfg.inputs[0])
    except (OSError, json.JSONDecodeError, AlgebraFormatError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    total = sympow.total_dimension(A.dim, cfg.n)
    if total > cfg.cap:
        raise FeasibilityRefused(
            f"level {cfg.n} needs total dimension {total} > cap {cfg.cap}")
    try:
        rep = sympow.second_quantization(A, cfg.n, cfg.parity)
    except sympow.BaseNotEligible as err:
        print(f"error: base not eligible: {err}", file=sys.stderr)
        return 1
    text = json.dumps(rep.to_json_dict(), indent=1, sort_keys=True) + "\n"
    if cfg.format == "text":
        lines = [f"second quantization of {rep.base_name}, parity {rep.parity}"]
        for lv in rep.levels:
            lines.append(f"  n={lv.n}: total dim {lv.total_dim}, "
                         f"invariants {lv.invariants_dim}")
        lines.append(f"coefficients: {rep.coefficients}")
        if rep.verdict:
            lines.append(f"product formula: {rep.product_coefficients} "
                         f"-> {rep.verdict}")
        text = "\n".join(lines) + "\n"
    _emit(text, cfg.out)
    return 0 if rep.verdict in (None, "MATCH") else 1


def cmd_twist(cfg: RunConfig) -> int:
    path = cfg.inputs[0]
    try:
        A = gfrob.load_gfrob(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as err:
        print(f"error: {path}: {err}", file=sys.stderr)
        return 2
    out = A
    if cfg.torsion != "none":
        alpha = _load_torsion(cfg.torsion, A.group)
        out = gfrob.twist_by_torsion(out, alpha)
    if getattr(cfg, "super_sign", False):
        out = gfrob.super_twist(out, SuperGrading.sign_grading(A.group))
    rep = gfrob.verify_axioms(out, super_mode=any(out.sector_parity),
                              workers=cfg.workers)
    if cfg.out:
        gfrob.save_gfrob(out, cfg.out)
    sys.stdout.write(_report_text(rep, cfg.format))
    return 0 if rep.ok else 1


def cmd_defect_table(cfg: RunConfig) -> int:
    rows = ["sigma,sigma_prime,block,defect"]
    perms = list(all_permutations(cfg.n))
    for s in perms:
        for t in perms:
            for block, g in sorted(graph_defect_table(s, t).items()):
                rows.append("%s,%s,%s,%d" % (
                    s.cycle_string(), t.cycle_string(),
                    " ".join(str(p) for p in block), g))
    _emit("\n".join(rows) + "\n", cfg.out)
    return 0


def cmd_schur_cocycle(cfg: RunConfig) -> int:
    alpha = schur_cocycle_sn(cfg.n)
    data = alpha.to_json_dict()
    cls = alpha.commuting_transposition_class()
    data["class_on_commuting_transpositions"] = (
        format_rat(cls) if cls is not None else None)
    data["note"] = ("nontrivial Schur class" if cls == -1 else
                    "class is trivial for n <= 3" if cls is None else
                    "trivial class")
    _emit(json.dumps(data, indent=1, sort_keys=True) + "\n", cfg.out)
    return 0


def cmd_normalize(cfg: RunConfig) -> int:
    path = cfg.inputs[0]
    try:
        A = gfrob.load_gfrob(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as err:
        print(f"error: {path}: {err}", file=sys.stderr)
        return 2
    try:
        S = gfrob.extract_special(A)
        lam, normalized = gfrob.normalize_gamma(S)
        _, phi_norm, p = normalize_nonabelian_sn(S.phi_cocycle())
    except (gfrob.NotCyclic, gfrob.NotNormalizable, gfrob.GroupMismatch) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    out = {
        "parity": p,
        "lambda": {A.element_str(gi): format_rat(lam[gi])
                   for gi in range(A.group.order)},
        "normalized_gamma_scalars": {
            f"{A.element_str(gi)}|{A.element_str(hi)}": format_rat(c)
            for gi in range(A.group.order) for hi in range(A.group.order)
            for c in [normalized.gamma_class_scalar(gi, hi)] if c is not None},
    }
    _emit(json.dumps(out, indent=1, sort_keys=True) + "\n", cfg.out)
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="orbifrob",
        description="exact G-twisted Frobenius algebras: build, twist, verify")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input", help="algebra file (or builtin: pt, z2, z3, ...)")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "text", "csv"], default="text")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--cap", type=int, default=None,
                       help=f"feasibility cap on total dimension "
                            f"(default {DEFAULT_CAP}, env ORBIFROB_CAP)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized negative controls")

    p = sub.add_parser("verify", help="verify Frobenius / G-Frobenius axioms")
    common(p)
    p = sub.add_parser("sympow", help="build the S_n-twisted symmetric power")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--parity", type=int, choices=[0, 1], default=0)
    p.add_argument("--torsion", default="none",
                   help="none | schur | k3sign | cocycle file")
    p = sub.add_parser("series", help="second-quantization dimension series")
    common(p)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--parity", type=int, choices=[0, 1], default=0)
    p = sub.add_parser("twist", help="twist a stored G-Frobenius algebra")
    common(p)
    p.add_argument("--torsion", default="none")
    p.add_argument("--super-sign", action="store_true",
                   help="also apply the super twist by the sign homomorphism")
    p = sub.add_parser("defect-table", help="graph defects of all sector pairs")
    common(p, with_input=False)
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("schur-cocycle", help="emit the Clifford-lift S_n cocycle")
    common(p, with_input=False)
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("normalize", help="extract and normalize special structure")
    common(p)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        inputs=[getattr(args, "input")] if hasattr(args, "input") else [],
        n=getattr(args, "n", getattr(args, "nmax", 0)) or 0,
        parity=getattr(args, "parity", 0),
        torsion=getattr(args, "torsion", "none"),
        out=args.out, format=args.format, workers=args.workers,
        cap=_cap_from_env(args.cap if args.cap is not None else DEFAULT_CAP),
        seed=args.seed)
    cfg.super_sign = getattr(args, "super_sign", False)
    handlers = {
        "verify": cmd_verify,
        "sympow": cmd_sympow,
        "series": cmd_series,
        "twist": cmd_twist,
        "defect-table": cmd_defect_table,
        "schur-cocycle": cmd_schur_cocycle,
        "normalize": cmd_normalize,
    }
    try:
        return handlers[cfg.command](cfg)
    except FeasibilityRefused as err:
        print(f"refused: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
