"""Command-line interface.

Exit codes: 0 success, 1 a definite negative answer, 2 usage error,
3 search exhausted or a backend failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import bilinear, deformation, lie_ext, strata
from .jordan import IrreducibleFactor, jordan_structure
from .linalg import DEFAULT_EPS, EXACT, FLOAT, Matrix, parse_scalar

OK, NO, USAGE, EXHAUSTED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _emit(text: str, out=None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def read_matrix(path: str, backend: str = EXACT) -> Matrix:
    """Matrix JSON as written by ``matrix``, or a plain nested list of numbers/strings."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return matrix_from_data(data, backend)


def matrix_from_data(data, backend: str = EXACT) -> Matrix:
    if isinstance(data, dict):
        m = Matrix.from_json(data)
        return m.to_float() if backend == FLOAT else m
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise UsageError("a matrix is a JSON object or a list of rows")
    rows = [[parse_scalar(str(x), backend) for x in r] for r in data]
    return Matrix.from_rows(rows, DEFAULT_EPS if backend == FLOAT else None)


def _ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


# commands


def cmd_enum(args) -> int:
    sts = strata.enumerate_strata(args.n)
    if args.json:
        _emit(_dump([dict(s.to_json(), letter=strata.stratum_letter(args.n, s.index)) for s in sts]))
        return OK
    lines = []
    for s in sts:
        letter = strata.stratum_letter(args.n, s.index)
        syms = "p" + ":p".join(str(i) for i in range(1, s.param_count + 1))
        lines.append(f"{letter}({syms})  {s}  {s.orbifold}")
    _emit("\n".join(lines) + "\n")
    return OK


def cmd_matrix(args) -> int:
    index = _ints(args.index)
    backend = FLOAT if args.float else EXACT
    params = [parse_scalar(x, backend) for x in args.params.split(",") if x.strip()] if args.params else []
    m = strata.canonical_matrix(strata.normalize_index(index), params)
    _emit(m.dumps() + "\n", args.out)
    return OK


def _similarity_point(js):
    index, params = strata._segre_point(js)
    return index, params


def cmd_classify(args) -> int:
    m = read_matrix(args.input, FLOAT if args.float else EXACT)
    if args.action == "scalar-similarity":
        st, point = strata.classify_scalar_similarity(m)
        result = {"stratum": list(st.index), "point": [c.to_json() for c in point],
                  "orbifold": st.orbifold}
        text = f"stratum [{','.join(map(str, st.index))}], point {strata.format_point(point)}\n"
    elif args.action == "similarity":
        js = jordan_structure(m)
        index, params = _similarity_point(js)
        result = {"stratum": list(index), "coordinates": [c.to_json() for c in params],
                  "jordan": js.to_json()}
        text = (f"stratum [{','.join(map(str, index))}], coordinates "
                f"({', '.join(str(c) for c in params)}), jordan {js}\n")
    else:
        cls = _congruence_class(m, args.seed)
        if cls is None:
            inv = bilinear.cogredient_invariants(m)
            result = {"invariants": inv.to_json()}
            text = f"invariants {json.dumps(inv.to_json(), sort_keys=True)}\n"
        else:
            result = {"class": cls.to_json()}
            text = f"class {cls}\n"
    _emit(_dump(result) if args.json else text)
    return OK


def _congruence_class(m: Matrix, seed: int):
    if m.rows == 1:
        return bilinear.FormClass("[0]" if m[0, 0].is_zero() else "[1]")
    if m.rows == 2:
        return bilinear.classify_bilinear_2(m)
    if m.rows == 3:
        return bilinear.classify_bilinear_3(m, seed=seed)
    return None


def cmd_arnold(args) -> int:
    m = read_matrix(args.input, FLOAT if args.float else EXACT)
    js = jordan_structure(m)
    result = {"centralizer_dim": deformation.centralizer_dim(m),
              "arnold_count": deformation.arnold_count(js),
              "scalar_similarity_params": deformation.scalar_similarity_param_count(m)}
    _emit(_dump(result))
    return OK


def cmd_miniversal(args) -> int:
    m = read_matrix(args.input, FLOAT if args.float else EXACT)
    action = deformation.SIMILARITY if args.action == "similarity" else deformation.COGREDIENT
    basis = deformation.miniversal_complement(m, action)
    _emit(_dump({"action": args.action, "count": len(basis), "basis": [b.to_json() for b in basis]}))
    return OK


def cmd_graph(args) -> int:
    if args.forms:
        if args.n != 3:
            raise UsageError("the bilinear-form graph exists for n = 3 only")
        g = bilinear.bilinear_deformation_graph_3()
    else:
        g = deformation.deformation_graph(args.n)
    _emit(g.dumps() if args.json else g.to_dot(), args.out)
    return OK


def cmd_bilinear_classify(args) -> int:
    m = read_matrix(args.input, FLOAT if args.float else EXACT)
    if m.rows > 3 or not m.is_square:
        raise UsageError("bilinear-classify handles square matrices up to 3 x 3")
    cls = _congruence_class(m, args.seed)
    _emit(_dump(cls.to_json()) if args.json else f"{cls}\n")
    return OK


def cmd_dictionary(args) -> int:
    if args.dim != 2:
        raise UsageError("the dictionary is stated for dimension 2")
    report = bilinear.dictionary_check(seed=args.seed)
    if args.json:
        _emit(_dump(report.to_json()))
    else:
        lines = [f"{i.number}. {i.left} ~ {i.right}: {'verified' if i.ok else 'FAILED'}"
                 for i in report.items]
        numbers = sorted({i.number for i in report.items})
        ok = sum(all(i.ok for i in report.items if i.number == k) for k in numbers)
        lines.append(f"{ok}/{len(numbers)} verified")
        _emit("\n".join(lines) + "\n")
    return OK if report.all_ok else NO


def cmd_certify(args) -> int:
    backend = FLOAT if args.float else EXACT
    a, b = read_matrix(args.a, backend), read_matrix(args.b, backend)
    if a.rows != b.rows or not (a.is_square and b.is_square):
        raise UsageError("certify needs two square matrices of equal size")
    cert = bilinear.congruent(a, b, seed=args.seed, tol=args.tol, restarts=args.restarts)
    if cert is None:
        _emit(_dump({"inequivalent": True,
                     "invariants": [bilinear.cogredient_invariants(a).to_json(),
                                    bilinear.cogredient_invariants(b).to_json()]}))
        return NO
    _emit(cert.dumps() + "\n")
    return OK


def cmd_verify_jump(args) -> int:
    backend = FLOAT if args.float else EXACT
    d, t = read_matrix(args.d, backend), read_matrix(args.target, backend)
    with open(args.dirs, encoding="utf-8") as fh:
        raw = json.load(fh)
    if isinstance(raw, dict) or (raw and not isinstance(raw[0], (dict, list))):
        raise UsageError("--dirs expects a JSON list of matrices")
    if raw and isinstance(raw[0], list) and raw[0] and not isinstance(raw[0][0], list):
        raw = [raw]
    dirs = [matrix_from_data(x, backend) for x in raw]
    if not dirs:
        raise UsageError("at least one direction is needed")
    ok = bilinear.verify_jump(d, dirs, t, seed=args.seed)
    _emit(_dump({"jump": ok}))
    return OK if ok else NO


def cmd_lie(args) -> int:
    m = read_matrix(args.input, FLOAT if args.float else EXACT)
    _emit(lie_ext.lie_from_matrix(m).dumps() + "\n")
    return OK


def cmd_assoc(args) -> int:
    m = read_matrix(args.input, FLOAT if args.float else EXACT)
    _emit(lie_ext.assoc_from_form(m).dumps() + "\n")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matstrata", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--float", action="store_true", help="use the float backend")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("enum", cmd_enum, "list the strata of n x n matrices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = add("matrix", cmd_matrix, "canonical matrix of a stratum")
    p.add_argument("--index", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--out")

    p = add("classify", cmd_classify, "classify a matrix")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--action", choices=["scalar-similarity", "similarity", "congruence"],
                   default="scalar-similarity")
    p.add_argument("--json", action="store_true")

    p = add("arnold", cmd_arnold, "centralizer dimension and parameter counts")
    p.add_argument("--in", dest="input", required=True)

    p = add("miniversal", cmd_miniversal, "complement of the orbit tangent space")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--action", choices=["similarity", "cogredient"], default="similarity")

    p = add("graph", cmd_graph, "deformation graph as DOT or JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.add_argument("--forms", action="store_true", help="bilinear forms on C^3 instead of matrices")

    p = add("bilinear-classify", cmd_bilinear_classify, "congruence class of a form, n <= 3")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--json", action="store_true")

    p = add("dictionary", cmd_dictionary, "certify the 2-dimensional dictionary")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--json", action="store_true")

    p = add("certify", cmd_certify, "congruence certificate G with G^T A G = B")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--tol", type=float, default=bilinear.DEFAULT_TOL)
    p.add_argument("--restarts", type=int, default=bilinear.DEFAULT_RESTARTS)

    p = add("verify-jump", cmd_verify_jump, "check a jump curve D + t E")
    p.add_argument("--d", required=True)
    p.add_argument("--dirs", required=True)
    p.add_argument("--target", required=True)

    p = add("lie", cmd_lie, "structure constants of the Lie extension")
    p.add_argument("--in", dest="input", required=True)

    p = add("assoc", cmd_assoc, "structure constants of the associative extension")
    p.add_argument("--in", dest="input", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.fn(args)
    except (UsageError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except (bilinear.SearchExhausted, IrreducibleFactor, ArithmeticError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())
