"""Command-line front end for the uext toolkit.

Exit codes: 0 when the computation ran and any asked-for property holds,
1 when the input object is mathematically invalid, 2 for usage and I/O
problems.  Every command accepts ``--json``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .cohomology import Cocycle2, enumerate_extensions, extend_with_cocycle, format_matrix, h2
from .comm_algebra import (
    CommAlgebra,
    InvalidTensor,
    canonicalize,
    find_unit,
    is_nilpotent,
    power_filtration,
    split,
)
from .errors import (
    AsymmetricTensor,
    CoboundaryNotCocycle,
    ComplementNotClosed,
    InvalidTable,
    NoUnit,
    NotCanonical,
    NotCocycle,
    NotLieAlgebra,
    NotNilpotent,
    SingularMatrix,
    UextError,
)
from .exact_linalg import RationalMatrix, format_rational
from .lie_carrier import PRESETS, jacobi_check, load_lie, preset_algebra
from .monoid_gen import (
    crmhd,
    dumps_monoid,
    enumerate_se,
    is_valid_table,
    lambda_family,
    leibnitz,
    monoid_to_tensor,
    read_monoid,
    restrict_se,
    zp_additive,
    zp_multiplicative,
)
from .tensor_core import (
    _TensorBase,
    abelian_tail_depth,
    deunitize,
    dumps_tensor,
    is_canonical_solvable,
    read_raw_tensor,
    read_tensor,
    reduce,
    tensor_to_json,
    unitize,
    validate,
)

# errors that say "this object is invalid" rather than "could not run"
DOMAIN_ERRORS = (
    AsymmetricTensor,
    CoboundaryNotCocycle,
    ComplementNotClosed,
    InvalidTable,
    InvalidTensor,
    NoUnit,
    NotCanonical,
    NotCocycle,
    NotLieAlgebra,
    NotNilpotent,
    SingularMatrix,
)


@dataclass
class CommandResult:
    exit_code: int
    text: str = ""
    data: dict = field(default_factory=dict)


# -----------------------------------------------------------------------------
# helpers
# -----------------------------------------------------------------------------
def format_tensor(w: _TensorBase) -> str:
    lines = [f"n = {w.n} ({w.labeling} labels)"]
    entries = tensor_to_json(w)["entries"]
    if not entries:
        lines.append("  (zero tensor)")
    for e in entries:
        lines.append(f"  W^{{{e['i']},{e['j']}}}_{e['k']} = {e['value']}")
    return "\n".join(lines)


def _emit_tensor(w, out: str | None, data: dict, text: list[str]) -> None:
    """Write ``w`` to ``out``, or attach it to the report when no file is given."""
    if out:
        Path(out).write_text(dumps_tensor(w), encoding="utf-8")
        data["output"] = out
        text.append(f"wrote {out}")
    else:
        data["tensor"] = tensor_to_json(w)
        text.append(format_tensor(w))


def _violation_json(w, v) -> dict:
    kind, idx, lhs, rhs = v
    return {"kind": kind, "indices": list(w.label(*idx)),
            "lhs": format_rational(lhs), "rhs": format_rational(rhs)}


def _load_algebra(w):
    return CommAlgebra(w)


def _load_carrier(spec: str):
    if Path(spec).is_file():
        return load_lie(spec)
    return preset_algebra(spec)


def _read_matrix(path: str) -> RationalMatrix:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(obj, dict):
        obj = obj.get("matrix")
    if not isinstance(obj, list):
        raise ValueError("cocycle file must hold a matrix (list of rows)")
    return RationalMatrix(obj)


# -----------------------------------------------------------------------------
# commands
# -----------------------------------------------------------------------------
def cmd_validate(args) -> CommandResult:
    w = read_raw_tensor(args.tensor)
    report = validate(w)
    data = {
        "valid": report.valid,
        "symmetric": report.symmetric,
        "commuting": report.commuting,
        "violations": [_violation_json(w, v) for v in report.violations],
    }
    if report.valid:
        return CommandResult(0, "valid: symmetric, commuting slices", data)
    lines = [f"invalid: {len(report.violations)} violation(s)"]
    for v in data["violations"]:
        idx = ",".join(str(i) for i in v["indices"])
        lines.append(f"  {v['kind']} ({idx}): {v['lhs']} != {v['rhs']}")
    return CommandResult(1, "\n".join(lines), data)


def cmd_jacobi(args) -> CommandResult:
    w = read_raw_tensor(args.tensor)
    lie = _load_carrier(args.algebra)
    rep = jacobi_check(w, lie, max_dim=args.max_dim)
    witness = None
    if rep.witness is not None:
        witness = [[w.label(slot)[0], carrier] for slot, carrier in rep.witness]
    data = {
        "holds": rep.holds,
        "antisymmetric": rep.antisymmetric,
        "carrier": lie.name,
        "dimension": w.n * lie.dim,
        "triples": rep.triples,
        "witness": witness,
    }
    if rep.holds:
        text = f"jacobi: holds on {lie.name}^{w.n} (dimension {w.n * lie.dim}, {rep.triples} triples)"
        return CommandResult(0, text, data)
    what = "Jacobi identity" if rep.antisymmetric else "antisymmetry"
    return CommandResult(1, f"jacobi: {what} fails at basis elements {witness} (slot, carrier)", data)


def cmd_classify(args) -> CommandResult:
    w = read_tensor(args.tensor)
    a = _load_algebra(w)
    layers = power_filtration(a)
    nil, index = is_nilpotent(a)
    unit = find_unit(a)
    canonical = is_canonical_solvable(w)
    data = {
        "n": w.n,
        "labeling": w.labeling,
        "nilpotent": nil,
        "nilpotency_index": index,
        "unit": None if unit is None else [format_rational(c) for c in unit.coords],
        "filtration_dims": [len(layer) for layer in layers],
        "canonical_solvable": canonical,
        "abelian_tail": abelian_tail_depth(w) if canonical else None,
    }
    text = "\n".join([
        f"dimension: {w.n}",
        f"nilpotent: {'yes (A^%d = 0)' % index if nil else 'no'}",
        f"unit: {'none' if unit is None else ' '.join(data['unit'])}",
        f"filtration dims: {data['filtration_dims']}",
        f"canonical solvable: {'yes' if canonical else 'no'}",
        f"abelian tail: {'n/a' if data['abelian_tail'] is None else data['abelian_tail']}",
    ])
    return CommandResult(0, text, data)


def cmd_canonicalize(args) -> CommandResult:
    w = read_tensor(args.tensor)
    change, out = canonicalize(_load_algebra(w))
    data = {"change": change.A.to_strings()}
    text = [f"basis change (columns are new basis vectors): {format_matrix(change.A)}"]
    _emit_tensor(out, args.output, data, text)
    return CommandResult(0, "\n".join(text), data)


def cmd_split(args) -> CommandResult:
    w = read_tensor(args.tensor)
    rep = split(_load_algebra(w))
    data = rep.to_json()
    text = [f"blocks: {rep.dims}", f"complete over Q: {'yes' if rep.complete else 'no'}"]
    if args.output:
        Path(args.output).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
        text.append(f"wrote {args.output}")
    else:
        for d, t in rep.blocks:
            text.append(format_tensor(t))
    return CommandResult(0, "\n".join(text), data)


def cmd_h2(args) -> CommandResult:
    w = read_tensor(args.tensor)
    _load_algebra(w)
    rep = h2(w)
    data = rep.to_json()
    text = [f"dim Z2 = {rep.dim_Z2}", f"dim B2 = {rep.dim_B2}", f"dim H2 = {rep.dim_H2}"]
    for r in rep.representatives:
        text.append(f"  representative {format_matrix(r)}")
    return CommandResult(0, "\n".join(text), data)


def cmd_extend(args) -> CommandResult:
    w = read_tensor(args.tensor)
    _load_algebra(w)
    if args.cocycle:
        exts = [extend_with_cocycle(w, Cocycle2.of(w, _read_matrix(args.cocycle)))]
    else:
        exts = enumerate_extensions(w)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for t, ext in enumerate(exts, start=1):
        p = outdir / f"ext_{t}.uext.json"
        p.write_text(dumps_tensor(ext), encoding="utf-8")
        paths.append(str(p))
    data = {"count": len(exts), "outputs": paths}
    return CommandResult(0, "\n".join([f"{len(exts)} extension(s)"] + [f"wrote {p}" for p in paths]), data)


def _unary(fn):
    def run(args) -> CommandResult:
        data: dict = {}
        text: list[str] = []
        _emit_tensor(fn(read_tensor(args.tensor), args), args.output, data, text)
        return CommandResult(0, "\n".join(text), data)
    return run


cmd_unitize = _unary(lambda w, args: unitize(w))
cmd_deunitize = _unary(lambda w, args: deunitize(w))
cmd_reduce = _unary(lambda w, args: reduce(w, args.k))


def cmd_gen(args) -> CommandResult:
    fam = args.family

    def need(name):
        value = getattr(args, name)
        if value is None:
            raise _Usage(f"--family {fam} needs --{name.replace('_', '')}")
        return value

    if fam == "zp-add":
        w = monoid_to_tensor(zp_additive(need("p")))
    elif fam == "zp-mul":
        w = monoid_to_tensor(zp_multiplicative(need("p")))
    elif fam == "leibnitz":
        w = leibnitz(need("n"), args.l1 if args.l1 is not None else "1")
    elif fam == "lambda":
        w = lambda_family(need("n"), need("l1"), need("l2"))
    else:
        w = crmhd(need("beta"))
    data: dict = {"family": fam}
    text: list[str] = []
    _emit_tensor(w, args.output, data, text)
    return CommandResult(0, "\n".join(text), data)


def cmd_monoid(args) -> CommandResult:
    t = read_monoid(args.monoid)
    ok = is_valid_table(t)
    data: dict = {"kind": t.kind, "n": t.n, "valid": ok}
    if args.action == "validate":
        text = f"{'valid' if ok else 'invalid'} {t.kind}-function on labels 0..{t.n}"
        return CommandResult(0 if ok else 1, text, data)
    if not ok:
        raise InvalidTable(f"table is not a valid {t.kind}-function")
    text: list[str] = []
    if args.action == "to-tensor":
        _emit_tensor(monoid_to_tensor(t), args.output, data, text)
    else:
        r = restrict_se(t)
        data["table"] = r.to_json()
        if args.output:
            Path(args.output).write_text(dumps_monoid(r), encoding="utf-8")
            data["output"] = args.output
            text.append(f"wrote {args.output}")
        else:
            text.append(dumps_monoid(r).rstrip("\n"))
    return CommandResult(0, "\n".join(text), data)


def cmd_se_enum(args) -> CommandResult:
    census = enumerate_se(args.n, iso_reduce=args.iso_reduce)
    data: dict = {"n": census.n, "count": census.count, "iso_reduced": args.iso_reduce}
    text = [f"{census.count} SE-function(s) on I_{census.n}"]
    if args.output:
        Path(args.output).write_text(census.to_jsonl(), encoding="utf-8")
        data["output"] = args.output
        text.append(f"wrote {args.output}")
    else:
        data["tables"] = [t.to_json()["table"] for t in census.tables]
    return CommandResult(0, "\n".join(text), data)


# -----------------------------------------------------------------------------
# parser and entry point
# -----------------------------------------------------------------------------
class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let negative rationals such as -1/2 through as values
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$")

    def error(self, message):
        raise _Usage(f"{self.format_usage().rstrip()}\n{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="uext", description="Universal extension tensors: validation, structure, cohomology.")
    p.add_argument("--version", action="version", version=f"uext {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, tensor=True, output=False):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if tensor:
            sp.add_argument("tensor", help="tensor file (uext-tensor-v1)")
        if output:
            sp.add_argument("-o", "--output", help="output file")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check symmetry and commuting slices")
    sp = add("jacobi", cmd_jacobi, "brute-force Jacobi identity on a carrier")
    sp.add_argument("--algebra", required=True, help=f"preset ({', '.join(PRESETS[:4])}, abelian-k) or file")
    sp.add_argument("--max-dim", type=int, default=None, help="cap on n * carrier dimension")
    add("classify", cmd_classify, "nilpotency, unit, filtration, abelian tail")
    add("canonicalize", cmd_canonicalize, "canonical solvable form", output=True)
    add("split", cmd_split, "split into ideals over Q", output=True)
    add("h2", cmd_h2, "second cohomology")
    sp = add("extend", cmd_extend, "one-dimensional extensions")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--cocycle", help="JSON matrix file")
    g.add_argument("--all", action="store_true", help="one extension per H2 representative")
    sp.add_argument("-o", "--output", required=True, help="output directory")
    add("unitize", cmd_unitize, "adjoin a unit", output=True)
    add("deunitize", cmd_deunitize, "remove the unit at label 0", output=True)
    sp = add("reduce", cmd_reduce, "quotient by the top k indices", output=True)
    sp.add_argument("--k", type=int, required=True)

    sp = add("gen", cmd_gen, "generate a named family", tensor=False, output=True)
    sp.add_argument("--family", required=True, choices=["zp-add", "zp-mul", "leibnitz", "lambda", "crmhd"])
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--l1")
    sp.add_argument("--l2")
    sp.add_argument("--beta")

    sp = sub.add_parser("monoid", parents=[common], help="monoid table tools")
    sp.add_argument("action", choices=["validate", "to-tensor", "restrict"])
    sp.add_argument("monoid", help="monoid file (uext-monoid-v1)")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_monoid)

    sp = sub.add_parser("se-enum", parents=[common], help="census of SE-functions")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--iso-reduce", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_se_enum)
    return p


def run(argv: list[str] | None = None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _Usage as exc:
        return CommandResult(2, str(exc), {"error": str(exc)})
    except DOMAIN_ERRORS as exc:
        msg = f"{type(exc).__name__}: {exc}"
        return CommandResult(1, msg, {"error": msg})
    except (UextError, OSError, ValueError, KeyError) as exc:
        msg = f"{type(exc).__name__}: {exc}"
        return CommandResult(2, msg, {"error": msg})


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        result = run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if "--json" in argv:
        payload = dict(result.data)
        payload["exit_code"] = result.exit_code
        print(json.dumps(payload, sort_keys=True), file=sys.stdout)
    elif result.text:
        print(result.text, file=sys.stderr if result.exit_code == 2 else sys.stdout)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
