"""
Interchange documents for fans, polytopes and divisors.

Documents are JSON objects.  A fan has ``rank``, ``rays`` and ``max_cones``
(0-based ray indices); a polytope has ``rank`` and ``vertices``; a divisor
has ``fan`` (an inline fan document or a path relative to the divisor file)
and ``coeffs``.  Every entry must be an integer; booleans and floats are
rejected with the location of the offending entry.
"""

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

from .divisor import TWeilDivisor
from .errors import ParseError
from .fan import Fan, LatticePolytope


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"expected an integer, got {x!r}", where)
    return x


def _int_list(x: Any, where: str, length: int | None = None) -> list[int]:
    if not isinstance(x, list):
        raise ParseError(f"expected a list, got {type(x).__name__}", where)
    if length is not None and len(x) != length:
        raise ParseError(f"expected {length} entries, got {len(x)}", where)
    return [_int(v, f"{where}[{i}]") for i, v in enumerate(x)]


def _field(doc: Any, key: str, where: str) -> Any:
    if not isinstance(doc, dict):
        raise ParseError("expected an object", where or "document")
    if key not in doc:
        raise ParseError(f"missing field '{key}'", where or "document")
    return doc[key]


def _prefix(where: str, key: str) -> str:
    return f"{where}.{key}" if where else key


def load_json(path: str | os.PathLike) -> Any:
    """Read a JSON document, turning syntax errors into :class:`ParseError`."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from exc


# -- fans ---------------------------------------------------------------------------------


def fan_from_doc(doc: Any, where: str = "") -> Fan:
    rank = _int(_field(doc, "rank", where), _prefix(where, "rank"))
    if rank < 0:
        raise ParseError("rank must be nonnegative", _prefix(where, "rank"))
    rays_raw = _field(doc, "rays", where)
    if not isinstance(rays_raw, list):
        raise ParseError("expected a list", _prefix(where, "rays"))
    rays = [_int_list(r, f"{_prefix(where, 'rays')}[{i}]", rank) for i, r in enumerate(rays_raw)]
    for i, r in enumerate(rays):
        if not any(r):
            raise ParseError("zero ray", f"{_prefix(where, 'rays')}[{i}]")
    cones_raw = _field(doc, "max_cones", where)
    if not isinstance(cones_raw, list):
        raise ParseError("expected a list", _prefix(where, "max_cones"))
    cones = []
    for i, c in enumerate(cones_raw):
        loc = f"{_prefix(where, 'max_cones')}[{i}]"
        idx = _int_list(c, loc)
        for j, k in enumerate(idx):
            if not 0 <= k < len(rays):
                raise ParseError(f"ray index {k} out of range", f"{loc}[{j}]")
        cones.append(idx)
    return Fan(rank, rays, cones)


def fan_to_doc(f: Fan) -> dict:
    return {
        "rank": f.lattice_rank,
        "rays": [list(r) for r in f.rays],
        "max_cones": [list(c) for c in f.max_cones],
    }


def read_fan(path: str | os.PathLike) -> Fan:
    return fan_from_doc(load_json(path))


# -- polytopes ----------------------------------------------------------------------------


def polytope_from_doc(doc: Any, where: str = "") -> LatticePolytope:
    rank = _int(_field(doc, "rank", where), _prefix(where, "rank"))
    raw = _field(doc, "vertices", where)
    if not isinstance(raw, list) or not raw:
        raise ParseError("expected a nonempty list", _prefix(where, "vertices"))
    pts = [_int_list(v, f"{_prefix(where, 'vertices')}[{i}]", rank) for i, v in enumerate(raw)]
    return LatticePolytope.from_points(pts)


def polytope_to_doc(P: LatticePolytope) -> dict:
    return {"rank": P.ambient_rank, "vertices": [list(v) for v in P.vertices]}


def read_polytope(path: str | os.PathLike) -> LatticePolytope:
    return polytope_from_doc(load_json(path))


# -- divisors -----------------------------------------------------------------------------


def divisor_from_doc(doc: Any, base: str | os.PathLike | None = None, where: str = "") -> TWeilDivisor:
    """Parse a divisor; a string ``fan`` is a path resolved against ``base``."""
    fan_doc = _field(doc, "fan", where)
    if isinstance(fan_doc, str):
        path = Path(fan_doc)
        if base is not None and not path.is_absolute():
            path = Path(base) / path
        f = read_fan(path)
    else:
        f = fan_from_doc(fan_doc, _prefix(where, "fan"))
    coeffs = _int_list(_field(doc, "coeffs", where), _prefix(where, "coeffs"), len(f.rays))
    return TWeilDivisor(f, coeffs)


def divisor_to_doc(d: TWeilDivisor) -> dict:
    return {"fan": fan_to_doc(d.fan), "coeffs": list(d.coeffs)}


def read_divisor(path: str | os.PathLike) -> TWeilDivisor:
    return divisor_from_doc(load_json(path), Path(path).parent)


# -- output -------------------------------------------------------------------------------


def rational(x) -> str:
    """``p/q`` for non-integers, ``p`` otherwise."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dumps(doc: Any) -> str:
    """Stable JSON text: two-space indent, integer lists kept on one line."""
    return _dump(doc, 0) + "\n"


def _dump(x: Any, depth: int) -> str:
    pad = "  " * (depth + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, depth + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    if isinstance(x, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in x):
            return "[" + ", ".join(json.dumps(v) for v in x) + "]"
        items = [pad + _dump(v, depth + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
    return json.dumps(x)


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
