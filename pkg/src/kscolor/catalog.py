"""Built-in Kochen-Specker direction sets and the direction-set JSON format.

Files look like::

    {"name": "axes", "field": "rational",
     "directions": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}

Scalars use the textual format of :mod:`kscolor.exact`.  Built-in sets live in
the ``catalogs/`` directory next to this module, or wherever
``KSCOLOR_CATALOG_DIR`` points.
"""

from __future__ import annotations

import json
import os
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

from .exact import parse_scalar
from .geometry import DirectionSet, build_direction_set, canonicalize

__all__ = [
    "CatalogEntry",
    "CatalogError",
    "DirectionFileError",
    "NonCanonicalInputWarning",
    "BUILTINS",
    "builtin",
    "catalog_dir",
    "load",
    "loads",
    "save",
    "dumps",
    "resolve",
]

BUILTINS = ("peres33", "ck31", "bub33")


class CatalogError(LookupError):
    pass


class DirectionFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class NonCanonicalInputWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    citation: str
    directions: DirectionSet
    expected_verdict: str


def catalog_dir() -> Path:
    env = os.environ.get("KSCOLOR_CATALOG_DIR")
    if env:
        return Path(env)
    return Path(__file__).with_name("catalogs")


def _locate(text: str, literal: str) -> tuple[int, int]:
    idx = text.find(json.dumps(literal))
    if idx < 0:
        return (1, 1)
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def _parse(text: str) -> tuple[dict, DirectionSet]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DirectionFileError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "directions" not in data:
        raise DirectionFileError("expected an object with a 'directions' list", 1, 1)
    rows = data["directions"]
    if not isinstance(rows, list):
        raise DirectionFileError("'directions' must be a list", *_locate(text, "directions"))
    points = []
    noncanonical = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 3:
            raise DirectionFileError(f"direction #{i} must be a list of three scalars")
        coords = []
        for s in row:
            raw = s if isinstance(s, str) else str(s)
            try:
                coords.append(parse_scalar(raw))
            except ValueError as exc:
                line, col = _locate(text, s) if isinstance(s, str) else (None, None)
                raise DirectionFileError(f"direction #{i}: {exc}", line, col) from None
        try:
            p = canonicalize(coords)
        except ValueError as exc:
            raise DirectionFileError(f"direction #{i}: {exc}") from None
        if p.text() != [str(parse_scalar(str(c))) for c in row]:
            noncanonical.append(i)
        points.append(p)
    if noncanonical:
        warnings.warn(
            f"{len(noncanonical)} direction(s) were not in canonical form and were "
            f"canonicalized (first: #{noncanonical[0]})",
            NonCanonicalInputWarning,
            stacklevel=3,
        )
    ds = build_direction_set(points, name=data.get("name", ""))
    return data, ds


def loads(text: str) -> DirectionSet:
    return _parse(text)[1]


def load(path: str | os.PathLike) -> DirectionSet:
    """Read a direction-set file; duplicates (including ``v`` and ``-v``) are errors."""
    text = Path(path).read_text()
    ds = loads(text)
    if not ds.name:
        ds = ds.with_name(Path(path).stem)
    return ds


def dumps(ds: DirectionSet, **extra) -> str:
    data = ds.to_dict()
    data.update(extra)
    rows = ",\n    ".join(json.dumps(r) for r in data.pop("directions"))
    head = json.dumps(data, indent=2)[:-2]
    sep = ",\n" if data else "\n"
    return f'{head}{sep}  "directions": [\n    {rows}\n  ]\n}}\n'


def save(ds: DirectionSet, path: str | os.PathLike, **extra) -> None:
    """Write ``ds`` in canonical form; ``extra`` keys are stored alongside."""
    Path(path).write_text(dumps(ds, **extra))


def builtin(name: str) -> CatalogEntry:
    if name not in BUILTINS:
        raise CatalogError(f"unknown catalog {name!r}; available: {', '.join(BUILTINS)}")
    path = catalog_dir() / f"{name}.json"
    if not path.exists():
        raise CatalogError(f"catalog file {path} is missing")
    data, ds = _parse(path.read_text())
    return CatalogEntry(
        name=name,
        citation=data.get("citation", ""),
        directions=ds.with_name(name),
        expected_verdict=data.get("expected_verdict", ""),
    )


_PATHLIKE = re.compile(r"[/\\]|\.json$")


def resolve(name_or_path: str) -> DirectionSet:
    """A built-in set by name, or a direction-set file by path."""
    if name_or_path in BUILTINS:
        return builtin(name_or_path).directions
    if _PATHLIKE.search(name_or_path) or Path(name_or_path).exists():
        if not Path(name_or_path).exists():
            raise CatalogError(f"no such file: {name_or_path}")
        return load(name_or_path)
    raise CatalogError(f"unknown catalog {name_or_path!r}; available: {', '.join(BUILTINS)}")
