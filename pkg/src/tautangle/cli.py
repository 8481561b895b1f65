"""The ``tri`` command: JSON in, JSON out, meaningful exit codes.

Exit codes: 0 success or angle structure found, 1 usage or input error,
2 invalid triangulation, 3 no angle structure (certificate printed),
4 no semi-angle structure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .angle_solver import EXIT_CODES, enumerate_taut, solve_angle
from .bundles import build_layered, monodromy_matrix
from .exact_arith import format_rational
from .normal_q import NormalVector, chi_star
from .triangulation import Triangulation, TriangulationError, pachner_23, pachner_32

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2

SCHEMA = """\
triangulation JSON schema:
  {"tets":[{"nbr":[t0,t1,t2,t3],"perm":[[..4..],[..4..],[..4..],[..4..]]}, ...]}
  entry f of nbr/perm describes the gluing of face f (the face opposite
  vertex f): face f of this tetrahedron is glued to tetrahedron nbr[f],
  sending vertex v to vertex perm[f][v].

exit codes:
  0 success / AngleStructure   1 usage or input error
  2 invalid triangulation      3 NoAngleStructure   4 NoSemiAngle
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit(obj) -> None:
    sys.stdout.write(_dump(obj) + "\n")


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from exc


def _load(path: str) -> Triangulation:
    data = _read_json(path)
    try:
        return Triangulation.from_json(data)
    except TriangulationError:
        raise
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_valid(path: str) -> Triangulation:
    T = _load(path)
    T.validate()
    return T


def cmd_validate(args) -> int:
    _emit(_load_valid(args.file).validate().to_json())
    return EXIT_OK


def cmd_taut(args) -> int:
    _emit([list(s.pi_pair) for s in enumerate_taut(_load_valid(args.file))])
    return EXIT_OK


def cmd_angle(args) -> int:
    result = solve_angle(_load_valid(args.file))
    _emit(result.to_json())
    return EXIT_CODES[result.status]


def cmd_chi(args) -> int:
    T = _load_valid(args.file)
    try:
        v = NormalVector.from_json(_read_json(args.vector))
    except ValueError as exc:
        raise UsageError(f"{args.vector}: {exc}") from exc
    if v.k != T.k:
        raise UsageError(f"vector has {v.k} tetrahedra, triangulation has {T.k}")
    _emit(format_rational(chi_star(T, v)))
    return EXIT_OK


def cmd_bundle(args) -> int:
    try:
        if args.matrix:
            info = monodromy_matrix(args.word)
            _emit({"matrix": [list(r) for r in info.matrix], "trace": info.trace})
            return EXIT_OK
        bundle = build_layered(args.word, args.insert)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = bundle.triangulation.dumps() + "\n"
    taut = _dump(list(bundle.taut.pi_pair)) + "\n"
    if args.output is None:
        sys.stdout.write(text)
        return EXIT_OK
    out = Path(args.output)
    side = out.with_name(out.name.removesuffix(".json") + ".taut.json")
    try:
        out.write_text(text)
        side.write_text(taut)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror or exc}") from exc
    _emit({"triangulation": str(out), "taut": str(side)})
    return EXIT_OK


def cmd_pachner(args) -> int:
    T = _load_valid(args.file)
    try:
        if args.face is not None:
            t, f = args.face
            if not (0 <= t < T.k and 0 <= f < 4):
                raise ValueError(f"no face ({t},{f})")
            new = pachner_23(T, t, f)
        else:
            if not 0 <= args.edge < T.k:
                raise ValueError(f"no edge class {args.edge}")
            new = pachner_32(T, args.edge)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sys.stdout.write(new.dumps() + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = _Parser(
        prog="tri",
        description="Taut and angle structures on ideal triangulations.",
        epilog=SCHEMA,
        formatter_class=fmt,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help: str, func) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, description=help, epilog=SCHEMA, formatter_class=fmt)
        p.set_defaults(func=func)
        return p

    add("validate", "print the validation report", cmd_validate).add_argument("file")
    add("taut", "list every taut structure as piPair arrays", cmd_taut).add_argument("file")
    add("angle", "decide whether an angle structure exists", cmd_angle).add_argument("file")

    p = add("chi", "evaluate the Euler functional on a normal class", cmd_chi)
    p.add_argument("file")
    p.add_argument("--class", dest="vector", required=True, metavar="VECTOR_JSON")

    p = add("bundle", "layered triangulation of a punctured-torus bundle", cmd_bundle)
    p.add_argument("--word", required=True, help="monodromy word over R and L")
    p.add_argument("--insert", type=int, action="append", default=[], metavar="POS",
                   help="insert a cancelling pair after letter POS (repeatable)")
    p.add_argument("-o", "--output", help="write the triangulation here and the taut structure beside it")
    p.add_argument("--matrix", action="store_true", help="print the monodromy matrix and trace instead")

    p = add("pachner", "apply a 2-3 move at a face or a 3-2 move at an edge", cmd_pachner)
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--face", type=int, nargs=2, metavar=("T", "F"))
    g.add_argument("--edge", type=int, metavar="ID")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _emit({"error": str(exc)})
        return EXIT_USAGE
    except TriangulationError as exc:
        _emit({"valid": False, "errors": [{"kind": kind, "message": msg} for kind, _, msg in exc.problems]})
        return EXIT_INVALID


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
