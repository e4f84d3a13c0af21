"""Command-line front end: ``crosslab verify | qsystem | invariants | demo``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on input errors.
Reports go to stdout as JSON; a human-readable summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import crossing, endomorphisms, modular, qsystem, symmetry
from .config import Tolerances, default_tolerances
from .errors import CrosslabError
from .groups import cyclic, symmetric
from .report import VerificationReport
from .tensor import flip, matrix_from_json, matrix_to_json, rel_residual

SUITES = ("crossing-basic", "crossing-powers", "kms", "endomorphism", "all")


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _write_json(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2))


def _tolerances(args) -> Tolerances:
    tol = default_tolerances()
    return tol.with_identity(args.tol) if args.tol is not None else tol


def endomorphism_suite(s: modular.Involution, t: np.ndarray, tol: float) -> VerificationReport:
    rep = VerificationReport("endomorphism")
    ch = endomorphisms.characterize(s, t, tol)
    rep.add("characterization_consistent", 0.0 if ch.consistent else 1.0, 0.0,
            endomorphic=ch.endomorphic, crossing_symmetric=ch.crossing_symmetric)
    rep.add("contractions_endomorphic", ch.endo_residual, tol)
    fam = endomorphisms.EndoFamily.of_operator(t)
    rep.add("reconstruct_roundtrip", rel_residual(endomorphisms.reconstruct_t(fam), t), tol)
    return rep


def run_suite(s: modular.Involution, t: np.ndarray, suite: str, seed: int) -> VerificationReport:
    n = s.dim
    tol = s.tol.identity_tol(n)
    rep = VerificationReport(suite)
    names = SUITES[:-1] if suite == "all" else (suite,)
    for name in names:
        if name == "crossing-basic":
            sub = crossing.crossing_basic_checks(s, t, tol)
        elif name == "crossing-powers":
            sub = crossing.cross_power_checks(s, t, tol=tol)
        elif name == "kms":
            r = np.random.default_rng(seed)
            vecs = [r.standard_normal(n) + 1j * r.standard_normal(n) for _ in range(4)]
            sub = crossing.kms_boundary_check(s, t, (-1.0, 0.0, 0.5, 1.0), vecs, tol=max(1e-8, tol))
        else:
            sub = endomorphism_suite(s, t, tol)
        rep.extend(sub, prefix=f"{name}/")
    return rep


def cmd_verify(args) -> VerificationReport:
    tol = _tolerances(args)
    t = matrix_from_json(_load_json(args.t_file))
    s = modular.involution_from_json(_load_json(args.s_file), tol)
    if t.shape != (s.dim**2, s.dim**2):
        raise InputError(f"T has shape {t.shape}, expected {(s.dim**2, s.dim**2)}")
    return run_suite(s, t, args.suite, args.seed)


def cmd_qsystem(args) -> VerificationReport:
    tol = _tolerances(args)
    q, source = qsystem.build_from_spec(_load_json(args.spec_file), tol)
    rep = VerificationReport("qsystem")
    axioms = qsystem.validate(q)
    rep.extend(axioms, prefix="axioms/")
    rep.extend(qsystem.twist_certificates(q), prefix="twist/")
    if qsystem.is_special(q):
        rep.extend(qsystem.jones_checks(q), prefix="jones/")
    rep.info.update({"name": q.name, "dim": q.dim, "special": axioms.info["special"],
                     "d": axioms.info["d"], "mm_star_spectrum": axioms.info["mm_star_spectrum"]})
    if isinstance(source, qsystem.MultiMatrixAlgebra):
        rep.info["trace_inverse_values"] = source.trace_inverse_values()
        rep.info["predicted_special"] = source.predicted_special()
        rep.info["predicted_standard"] = source.predicted_standard()
    data = qsystem.derived_data(q)
    if args.emit_twist:
        _write_json(args.emit_twist, matrix_to_json(data.t))
    if args.emit_involution:
        _write_json(args.emit_involution, modular.involution_parts_json(data.s))
    return rep


def _parse_delta(text: str):
    if text == "trivial":
        return None
    try:
        return [float(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"delta must be 'trivial' or a comma separated spectrum, got {text!r}") from exc


def build_invariants_case(group: str, delta, seed: int, tol: Tolerances):
    """(constraint, expected) for a named group and a trivial or diagonal modular operator."""
    families = {"o2": 2, "o3": 3, "o4": 4}
    if group in families:
        n = families[group]
    elif group == "unitary-random":
        n = len(delta) if delta else 3
    else:
        raise InputError(f"unknown group {group!r}")
    if delta is None:
        s = modular.conjugation(n, tol)
    else:
        if len(delta) != n:
            raise InputError(f"spectrum has {len(delta)} entries, expected {n}")
        s = modular.paired_involution(delta, tol)
    trivial = bool(np.allclose(s.modular_spectrum, 1.0))
    if group == "unitary-random":
        c = symmetry.unitary_group_case(n, 6, seed, s)
        return c, (1, [flip(n)])
    c = symmetry.SymmetryConstraint(s, tuple(symmetry.o_n_generators(s, seed)))
    return c, symmetry.o_n_expected(n, trivial, s.j)


def cmd_invariants(args) -> VerificationReport:
    tol = _tolerances(args)
    if args.case:
        case = _load_json(args.case)
        if not isinstance(case, dict) or "group" not in case:
            raise InputError("case file needs a 'group' entry")
        group = case["group"]
        raw = case.get("delta", "trivial")
        delta = None if raw == "trivial" else [float(x) for x in raw]
    else:
        group, delta = args.group, _parse_delta(args.delta)
    c, expected = build_invariants_case(group, delta, args.seed, tol)
    return symmetry.invariants_report(c, expected, {"group": group, "delta": delta or "trivial"})


def demo_items(seed: int, tol: Tolerances):
    """(label, report) pairs for the gallery of worked examples."""
    from .sampling import random_involution, random_operator

    r = np.random.default_rng(seed)
    s3 = random_involution(3, r, tol=tol)
    items = []
    items.append(("flip is crossing symmetric", crossing.crossing_basic_checks(s3, flip(3))))
    t = random_operator(9, r)
    items.append(("crossing powers and inverse", crossing.cross_power_checks(s3, t)))
    vecs = [random_operator(3, r)[:, 0] for _ in range(4)]
    items.append(("KMS boundary condition", crossing.kms_boundary_check(s3, t, (-1, 0, 0.5, 1), vecs)))
    klr, s_klr = symmetry.klr_matrix(2.0)
    items.append(("klR solution", run_suite(s_klr, klr, "all", seed)))
    for name, q in [
        ("C(Z2)", qsystem.qsystem_functions_on_group(cyclic(2), tol)),
        ("C(Z3)", qsystem.qsystem_functions_on_group(cyclic(3), tol)),
        ("L1(Z2)", qsystem.qsystem_group_algebra(cyclic(2), tol)),
        ("L1(Z3)", qsystem.qsystem_group_algebra(cyclic(3), tol)),
        ("L1(S3)", qsystem.qsystem_group_algebra(symmetric(3), tol)),
        ("M2 standard", qsystem.from_cstar(qsystem.MultiMatrixAlgebra.standard([2]))),
    ]:
        rep = qsystem.validate(q, require_special=True)
        rep.extend(qsystem.twist_certificates(q), prefix="twist/")
        rep.extend(qsystem.jones_checks(q), prefix="jones/")
        items.append((f"Q-system {name}", rep))
    for n, trivial in ((2, True), (2, False), (3, False)):
        c = symmetry.o_n_case(n, trivial, seed)
        rep = symmetry.invariants_report(c, symmetry.o_n_expected(n, trivial), {"n": n, "trivial": trivial})
        items.append((f"O({n}) invariants, Delta {'trivial' if trivial else 'nontrivial'}", rep))
    return items


def cmd_demo(args) -> VerificationReport:
    tol = _tolerances(args)
    rep = VerificationReport("demo")
    lines = []
    for label, sub in demo_items(args.seed, tol):
        rep.extend(sub, prefix=f"{label}/")
        worst = max((c.residual for c in sub.checks), default=0.0)
        lines.append(f"[{'PASS' if sub.passed else 'FAIL'}] {label} (worst residual {worst:.2e})")
    rep.info["verdicts"] = lines
    return rep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crosslab", description=__doc__.splitlines()[0])
    p.add_argument("--tol", type=float, default=None, help="identity-residual tolerance per dimension")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print only the JSON report")
    p.add_argument("--quiet", action="store_true", help="suppress the stderr summary")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run identity checks on an operator T and involution S")
    v.add_argument("t_file")
    v.add_argument("s_file")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("qsystem", help="build and certify a Q-system")
    q.add_argument("spec_file")
    q.add_argument("--emit-twist", dest="emit_twist")
    q.add_argument("--emit-involution", dest="emit_involution")
    q.set_defaults(func=cmd_qsystem)

    i = sub.add_parser("invariants", help="group-invariant crossing-symmetric operators")
    i.add_argument("--group", default="o2", help="o2 | o3 | o4 | unitary-random")
    i.add_argument("--delta", default="trivial", help="'trivial' or a spectrum such as 2,0.5,1")
    i.add_argument("--case", help="JSON file {group, delta}")
    i.set_defaults(func=cmd_invariants)

    d = sub.add_parser("demo", help="run the gallery of worked examples")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = args.func(args)
    except (InputError, CrosslabError, KeyError, TypeError, ValueError) as exc:
        print(f"crosslab: input error: {exc}", file=sys.stderr)
        return 2
    print(rep.dumps(include_time=args.timing))
    if not (args.quiet or args.json):
        verdicts = rep.info.get("verdicts")
        print("\n".join(verdicts) if verdicts else rep.summary(), file=sys.stderr)
        print(f"{'PASS' if rep.passed else 'FAIL'}: {len(rep.checks) - len(rep.failures())}/{len(rep.checks)} checks",
              file=sys.stderr)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
