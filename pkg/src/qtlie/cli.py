"""Command-line shell: configuration loading, verification commands, export.

Every command reads a JSON configuration (either a raw exponent matrix or a
normal form), runs an exact check or solver, and emits a deterministic JSON
report on stdout or to ``--out``: keys sorted, no whitespace variation, and
no wall-clock content, so identical config and command give byte-identical
bytes.  Wall time goes to stderr.  Exit codes: 0 all checks pass, 1 a
violation was found (the report carries the first witness), 2 usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from .algebras import TorusSetup
from .cohomology import solve_cocycles
from .lattice import NormalFormSpec, QMatrixSpec
from .scalars import Cyclotomic, GammaScalar, scalar_to_json
from .symmetry import CanonicalAutomorphism, Character, solve_derivation_space, verify_automorphism
from .verify import embedding_report, jacobi_report, virasoro_report


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


class Config:
    def __init__(self, setup: TorusSetup, box: int, out, threads: int, digest: str):
        self.setup = setup
        self.box = box
        self.out = out
        self.threads = threads
        self.digest = digest


def load_config(path: str) -> Config:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ConfigError(f"config: cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config: invalid JSON in {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be an object")
    has_nf = "normal_form" in raw
    has_q = any(k in raw for k in ("d", "N", "exps"))
    if has_nf and has_q:
        raise ConfigError("config: give either normal_form or d/N/exps, not both")
    if not has_nf and not has_q:
        raise ConfigError("config: one of normal_form or d/N/exps is required")
    try:
        if has_nf:
            nf = raw["normal_form"]
            for fieldname in ("d", "z", "orders"):
                if fieldname not in nf:
                    raise ConfigError(f"config: normal_form.{fieldname} is missing")
            spec = NormalFormSpec(int(nf["d"]), int(nf["z"]), tuple(nf["orders"]))
            setup = TorusSetup.from_normal_form(spec)
        else:
            for fieldname in ("d", "N", "exps"):
                if fieldname not in raw:
                    raise ConfigError(f"config: {fieldname} is missing")
            q = QMatrixSpec(
                int(raw["d"]), int(raw["N"]), tuple(tuple(r) for r in raw["exps"])
            )
            setup = TorusSetup.from_qmatrix(q)
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        field = "normal_form" if has_nf else "exps"
        raise ConfigError(f"config: invalid {field}: {e}") from e
    box = int(raw.get("box", 2))
    if box < 1:
        raise ConfigError("config: box must be >= 1")
    threads = int(raw.get("threads", 1))
    if threads < 1:
        raise ConfigError("config: threads must be >= 1")
    env = os.environ.get("QTL_THREADS")
    if env:
        try:
            threads = max(1, int(env))
        except ValueError:
            raise ConfigError("config: QTL_THREADS must be an integer")
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode()).hexdigest()
    return Config(setup, box, raw.get("out"), threads, digest)


def _report(config: Config, command: str, passed: bool, units: int, body: dict,
            counterexamples=()) -> dict:
    return {
        "command": command,
        "config_hash": config.digest,
        "passed": passed,
        "counterexamples": list(counterexamples),
        "timing": {"work_units": units},
        **body,
    }


def _emit(report: dict, out_path) -> None:
    blob = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(blob)
    else:
        sys.stdout.write(blob)


def _witness_json(witness):
    if witness is None:
        return []

    def conv(w):
        if isinstance(w, tuple):
            return [conv(x) for x in w]
        return w

    return [conv(witness)]


def cmd_verify_jacobi(config: Config, args) -> int:
    contexts = args.contexts.split(",") if args.contexts else ["g", "derqt"]
    if config.setup.nf is not None and not args.contexts:
        contexts.append("ext")
    passed = True
    units = 0
    witnesses = []
    results = {}
    for ctx in contexts:
        rep = jacobi_report(config.setup, args.box, ctx, config.threads)
        units += rep.checked
        results[ctx] = rep.passed
        if not rep.passed:
            passed = False
            witnesses.append({"context": ctx, "witness": _witness_json(rep.witness)})
    report = _report(config, "verify-jacobi", passed, units, {"contexts": results},
                     witnesses)
    _emit(report, args.out)
    return 0 if passed else 1


def cmd_verify_embedding(config: Config, args) -> int:
    rep = embedding_report(config.setup, args.box)
    report = _report(
        config, "verify-embedding", rep.passed, rep.checked, {},
        _witness_json(rep.witness),
    )
    _emit(report, args.out)
    return 0 if rep.passed else 1


def cmd_verify_virasoro(config: Config, args) -> int:
    rep = virasoro_report(config.setup, args.box)
    report = _report(
        config, "verify-virasoro", rep.passed, rep.checked, {},
        _witness_json(rep.witness),
    )
    _emit(report, args.out)
    return 0 if rep.passed else 1


def _parse_chi(setup: TorusSetup, text: str) -> Character:
    """Character values: rationals like ``-1`` or ``2/3``, or powers ``z^k``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != setup.d:
        raise ConfigError(f"chi needs {setup.d} comma-separated values")
    values = []
    for p in parts:
        neg = p.startswith("-z")
        body = p[1:] if neg else p
        if body.startswith("z"):
            exp = 1 if body == "z" else int(body[2:]) if body.startswith("z^") else None
            if exp is None:
                raise ConfigError(f"chi: cannot parse root power {p!r}")
            val = Cyclotomic.zeta(setup.field, exp)
            if neg:
                val = -val
        else:
            try:
                val = Cyclotomic.from_int(setup.field, Fraction(p))
            except ValueError:
                raise ConfigError(f"chi: cannot parse value {p!r}")
        if val.is_zero():
            raise ConfigError("chi: character values must be nonzero")
        values.append(val)
    return Character(tuple(values))


def cmd_automorphism(config: Config, args) -> int:
    lam = int(args.lam)
    if lam not in (1, -1):
        raise ConfigError("lambda must be 1 or -1")
    chi = _parse_chi(config.setup, args.chi)
    theta = CanonicalAutomorphism(lam, chi)
    box = args.box
    rep = verify_automorphism(config.setup, theta, box)
    units = rep.checked
    body = {"lambda": lam, "verified_box": box}
    witnesses = _witness_json(rep.witness)
    passed = rep.passed
    if passed:
        inv = theta.inverse(config.setup)
        rep_inv = verify_automorphism(config.setup, inv, box)
        comp = theta.compose(config.setup, inv)
        rep_comp = verify_automorphism(config.setup, comp, box)
        units += rep_inv.checked + rep_comp.checked
        body["inverse_verified"] = rep_inv.passed
        body["composition_verified"] = rep_comp.passed
        passed = rep_inv.passed and rep_comp.passed
    report = _report(config, "automorphism", passed, units, body, witnesses)
    _emit(report, args.out)
    return 0 if passed else 1


def _parse_degree(setup: TorusSetup, text: str):
    parts = [int(p) for p in text.split(",")]
    if len(parts) == 1 and setup.d > 1 and parts[0] == 0:
        return (0,) * setup.d
    if len(parts) != setup.d:
        raise ConfigError(f"degree needs {setup.d} comma-separated integers")
    return tuple(parts)


def cmd_derivations(config: Config, args) -> int:
    degree = _parse_degree(config.setup, args.degree)
    res = solve_derivation_space(config.setup, degree, args.box)
    expected = config.setup.d if degree == (0,) * config.setup.d else 1
    passed = res.dimension == expected and res.matched != "mismatch"
    basis_json = []
    for cand in res.basis:
        basis_json.append(
            {
                "degree": list(cand.degree),
                "table": [
                    [list(m), scalar_to_json(c)]
                    for m, c in sorted(cand.table.items())
                    if not c.is_zero()
                ],
            }
        )
    body = {
        "degree": list(degree),
        "dimension": res.dimension,
        "matched": res.matched,
        "basis": basis_json,
    }
    report = _report(config, "derivations", passed, len(res.basis), body)
    _emit(report, args.out)
    return 0 if passed else 1


def cmd_cocycle_solve(config: Config, args) -> int:
    setup = config.setup
    if setup.nf is None:
        raise ConfigError("cocycle-solve requires a normal-form configuration")
    res = solve_cocycles(setup, args.box)
    basis_json = []
    for e in res.entries:
        if not e.inner_support:
            continue
        entry = {"inner_support": e.inner_support, "matched": e.match.matched}
        if e.match.matched and not e.match.ambiguous:
            entry["matches"] = {
                "w1": scalar_to_json(e.match.w1) if e.match.w1 is not None else None,
                "w2": scalar_to_json(e.match.w2) if e.match.w2 is not None else None,
            }
        basis_json.append(entry)
    passed = res.mismatches == 0 and res.cf_independent_inner and res.cf_independent_box
    body = {
        "h2_dimension_inner": res.h2_dimension_inner,
        "solution_dimension": res.solution_dimension,
        "mismatches": res.mismatches,
        "cf_independent_inner": res.cf_independent_inner,
        "cf_independent_box": res.cf_independent_box,
        "basis": basis_json,
    }
    report = _report(config, "cocycle-solve", passed, res.solution_dimension, body)
    _emit(report, args.out)
    return 0 if passed else 1


def cmd_extension_check(config: Config, args) -> int:
    setup = config.setup
    if setup.nf is None:
        raise ConfigError("extension-check requires a normal-form configuration")
    rep = jacobi_report(setup, args.box, "ext", config.threads)
    report = _report(
        config, "extension-check", rep.passed, rep.checked, {},
        _witness_json(rep.witness),
    )
    _emit(report, args.out)
    return 0 if rep.passed else 1


def cmd_export_structure(config: Config, args) -> int:
    from .algebras import structure_records

    records = structure_records(config.setup, args.box)
    blob = json.dumps(records, sort_keys=True, separators=(",", ":")) + "\n"
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(blob)
        else:
            sys.stdout.write(blob)
    except OSError as e:
        print(f"export: cannot write {args.out}: {e}", file=sys.stderr)
        return 2
    return 0


COMMANDS = {
    "verify-jacobi": cmd_verify_jacobi,
    "verify-embedding": cmd_verify_embedding,
    "automorphism": cmd_automorphism,
    "derivations": cmd_derivations,
    "cocycle-solve": cmd_cocycle_solve,
    "extension-check": cmd_extension_check,
    "export-structure": cmd_export_structure,
    "verify-virasoro": cmd_verify_virasoro,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtl",
        description="exact verification toolkit for quantum-torus Lie algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, box_flag="--box"):
        p.add_argument("--config", required=True, help="path to the JSON configuration")
        p.add_argument("--out", default=None, help="write the JSON report here")
        p.add_argument(box_flag, dest="box", type=int, default=None)

    common(sub.add_parser("verify-jacobi"))
    sub.choices["verify-jacobi"].add_argument(
        "--contexts", default=None, help="comma list from g,derqt,ext"
    )
    common(sub.add_parser("verify-embedding"))
    common(sub.add_parser("verify-virasoro"))
    p = sub.add_parser("automorphism")
    common(p, box_flag="--verify-box")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--chi", required=True)
    p = sub.add_parser("derivations")
    common(p)
    p.add_argument("--degree", required=True)
    common(sub.add_parser("cocycle-solve"))
    common(sub.add_parser("extension-check"))
    common(sub.add_parser("export-structure"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        config = load_config(args.config)
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        return 2
    if args.box is None:
        args.box = config.box
    if args.box < 1:
        print("config: box must be >= 1", file=sys.stderr)
        return 2
    if args.out is None and config.out:
        args.out = config.out
    handler = COMMANDS[args.command]
    try:
        code = handler(config, args)
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        return 2
    print(f"{args.command}: {time.monotonic() - started:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
