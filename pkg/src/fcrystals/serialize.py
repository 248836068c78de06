"""JSON encodings of the package's value types.

field element      list of F_p coordinates (an int is accepted on input)
LaurentPoly        [[exponent, coords], ...] sorted by exponent
matrix             row-major list of LaurentPoly
lattice            {"n", "basis": matrix} in canonical form
chain              {"type": [...], "lattices": {"i": matrix}, "defect"?}
isocrystal         {"n", "b": matrix, "sigma_power", "base": {"p", "e", "m"}}
coweight           ["a/b", ...]
Everything carries a "field" / "base" record so that decoding is exact.
"""
from __future__ import annotations

from fractions import Fraction

from . import laurentmat as lm
from .arith import FieldTower, LaurentPoly
from .coweight import Coweight
from .isocrystal import Isocrystal, NewtonPoint
from .lattice import Lattice, LatticeChain


class SchemaError(ValueError):
    """Input that parses as JSON but does not match the expected shape."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def field_to_json(F: FieldTower):
    return {"p": F.p, "e": F.e, "m": F.m}


def field_from_json(d, path="field"):
    if d is None:
        return FieldTower(2)
    try:
        return FieldTower(int(d.get("p", 2)), int(d.get("e", 1)), int(d.get("m", 1)))
    except (AttributeError, TypeError, ValueError) as exc:
        raise SchemaError(str(exc), path)


def elem_to_json(F, a):
    return list(F.coords(a))


def elem_from_json(F, x, path=""):
    if isinstance(x, int):
        if not 0 <= x < F.size:
            raise SchemaError(f"element {x} out of range for F_{F.size}", path)
        return x
    if isinstance(x, list) and all(isinstance(c, int) for c in x):
        cs = list(x) + [0] * (F.e * F.m - len(x))
        if len(cs) != F.e * F.m:
            raise SchemaError("too many coordinates", path)
        return F.from_coords([c % F.p for c in cs])
    raise SchemaError("field element must be an int or a coordinate list", path)


def poly_to_json(x: LaurentPoly):
    return [[k, elem_to_json(x.field, c)] for k, c in sorted(x.terms.items())]


def poly_from_json(F, x, path=""):
    if isinstance(x, int):
        return LaurentPoly.const(F, elem_from_json(F, x, path))
    if not isinstance(x, list):
        raise SchemaError("LaurentPoly must be a list of [exponent, coeff] pairs", path)
    terms = {}
    for i, pair in enumerate(x):
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], int)):
            raise SchemaError("expected [exponent, coeff]", f"{path}[{i}]")
        c = elem_from_json(F, pair[1], f"{path}[{i}][1]")
        if c:
            terms[pair[0]] = F.add(terms.get(pair[0], 0), c)
    return LaurentPoly(F, {k: c for k, c in terms.items() if c})


def matrix_to_json(A):
    return [[poly_to_json(x) for x in row] for row in A]


def matrix_from_json(F, data, path="matrix"):
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise SchemaError("matrix must be a nonempty list of rows", path)
    n = len(data[0])
    out = []
    for i, row in enumerate(data):
        if len(row) != n:
            raise SchemaError(f"row {i} has length {len(row)}, expected {n}", path)
        out.append([poly_from_json(F, x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    return out


def coweight_to_json(x):
    return [str(Fraction(v)) for v in x]


def coweight_from_json(x, path="coweight"):
    if isinstance(x, str):
        x = [p for p in x.replace(" ", "").split(",") if p]
    if not isinstance(x, list):
        raise SchemaError("coweight must be a list of rationals", path)
    try:
        return Coweight([Fraction(str(v)) for v in x])
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(str(exc), path)


def lattice_to_json(M: Lattice):
    return {"n": M.n, "field": field_to_json(M.field), "basis": matrix_to_json(M.basis)}


def lattice_from_json(d, F=None, path="lattice"):
    if isinstance(d, list):
        return Lattice(matrix_from_json(F or FieldTower(2), d, path))
    if not isinstance(d, dict) or "basis" not in d:
        raise SchemaError("lattice must be an object with a basis", path)
    F = F or field_from_json(d.get("field"), path + ".field")
    A = matrix_from_json(F, d["basis"], path + ".basis")
    if len(A) != len(A[0]):
        raise SchemaError("basis must be square", path)
    if lm.det(A).is_zero():
        raise SchemaError("basis is singular", path)
    return Lattice(A)


def chain_to_json(C: LatticeChain):
    out = {"type": list(C.type), "field": field_to_json(next(iter(C.lattices.values())).field),
           "lattices": {str(i): matrix_to_json(M.basis) for i, M in sorted(C.lattices.items())}}
    if C.defect is not None:
        out["defect"] = C.defect
    return out


def chain_from_json(d, F=None, path="chain"):
    if not isinstance(d, dict) or "lattices" not in d:
        raise SchemaError("chain must be an object with lattices", path)
    F = F or field_from_json(d.get("field"), path + ".field")
    lats = {int(i): lattice_from_json(m, F, f"{path}.lattices.{i}")
            for i, m in d["lattices"].items()}
    typ = d.get("type", sorted(lats))
    return LatticeChain(tuple(typ), lats, d.get("defect"))


def isocrystal_to_json(X: Isocrystal):
    return {"n": X.n, "b": matrix_to_json(X.b), "sigma_power": X.sigma_power,
            "base": field_to_json(X.field)}


def isocrystal_from_json(d, path="isocrystal"):
    if isinstance(d, list):
        d = {"b": d}
    if not isinstance(d, dict) or "b" not in d:
        raise SchemaError("isocrystal must be an object with a matrix b", path)
    F = field_from_json(d.get("base") or d.get("field"), path + ".base")
    b = matrix_from_json(F, d["b"], path + ".b")
    if len(b) != len(b[0]):
        raise SchemaError("b must be square", path + ".b")
    if lm.det(b).is_zero():
        raise SchemaError("b is not invertible", path + ".b")
    return Isocrystal(b, int(d.get("sigma_power", 1)))


def newton_to_json(npt: NewtonPoint):
    out = {"nu": coweight_to_json(npt.nu), "certified": bool(npt.certified), "method": npt.method}
    if npt.bounds:
        out["bounds"] = to_plain(npt.bounds)
    return out


def to_plain(x):
    """Make transcripts JSON-safe (fractions, tuples, fields, coweights)."""
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, Coweight):
        return coweight_to_json(x)
    if isinstance(x, (list, tuple, set, frozenset)):
        seq = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [to_plain(v) for v in seq]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, FieldTower):
        return field_to_json(x)
    if isinstance(x, LaurentPoly):
        return poly_to_json(x)
    if isinstance(x, Lattice):
        return lattice_to_json(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return repr(x)
