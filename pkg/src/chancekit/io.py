"""JSON input formats with field-level diagnostics.

Board: ``{"size", "die": [{"step", "prob"}], "ladders": [[a, b]], "snakes": [[a, b]],
"duplicate_jumps"?}``.  Die: ``{"faces": [{"step", "prob"}]}``.  Data: a JSON
array of ``"p/q"`` strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .exact.rational import RationalParseError, parse_rational
from .markov import BoardSpec, ValidationError
from .piles import PositiveDie
from .ruin.die import GeneralDie


def read_bytes(path) -> bytes:
    """File contents; a bare name that does not exist locally falls back to the bundled fixtures."""
    p = Path(path)
    if p.is_file():
        return p.read_bytes()
    if p.parent == Path("."):
        bundled = resources.files("chancekit.data").joinpath(p.name)
        if bundled.is_file():
            return bundled.read_bytes()
    raise ValidationError(f"{path}: file not found")


def read_json(path) -> object:
    """Parse a file; syntax errors become ``ValidationError`` with line and column."""
    try:
        return json.loads(read_bytes(path).decode("utf-8"))
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    except UnicodeDecodeError as e:
        raise ValidationError(f"{path}: not UTF-8 text ({e.reason})") from None


def _field(obj, key, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    if key not in obj:
        raise ValidationError(f"{where}.{key}: missing field")
    return obj[key]


def _int(value, where) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{where}: expected an integer, got {value!r}")
    return value


def _rational(value, where) -> Fraction:
    try:
        return parse_rational(value)
    except RationalParseError as e:
        raise ValidationError(f"{where}: {e}") from None


def parse_faces(faces, where: str) -> list[tuple[int, Fraction]]:
    if not isinstance(faces, list) or not faces:
        raise ValidationError(f"{where}: expected a nonempty list")
    out = []
    for i, face in enumerate(faces):
        w = f"{where}[{i}]"
        out.append((_int(_field(face, "step", w), f"{w}.step"), _rational(_field(face, "prob", w), f"{w}.prob")))
    return out


def _pairs(value, where) -> list[tuple[int, int]]:
    if value is None:
        return []
    if not isinstance(value, list):
        raise ValidationError(f"{where}: expected a list of [from, to] pairs")
    out = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(f"{where}[{i}]: expected [from, to]")
        out.append((_int(pair[0], f"{where}[{i}][0]"), _int(pair[1], f"{where}[{i}][1]")))
    return out


def parse_board(obj, duplicates: str | None = None) -> BoardSpec:
    size = _int(_field(obj, "size", "board"), "board.size")
    die = parse_faces(_field(obj, "die", "board"), "board.die")
    ladders = _pairs(obj.get("ladders"), "board.ladders")
    snakes = _pairs(obj.get("snakes"), "board.snakes")
    policy = duplicates or obj.get("duplicate_jumps", "error")
    if policy not in ("error", "first", "last"):
        raise ValidationError(f"board.duplicate_jumps: unknown policy {policy!r}")
    return BoardSpec.create(size, die, ladders, snakes, duplicates=policy)


def load_board(path, duplicates: str | None = None) -> BoardSpec:
    return parse_board(read_json(path), duplicates)


def parse_die(obj) -> list[tuple[int, Fraction]]:
    return parse_faces(_field(obj, "faces", "die"), "die.faces")


def load_general_die(path) -> GeneralDie:
    return GeneralDie(tuple(parse_die(read_json(path))))


def load_positive_die(path) -> PositiveDie:
    return PositiveDie(tuple(parse_die(read_json(path))))


def parse_data(obj) -> list[Fraction]:
    if not isinstance(obj, list):
        raise ValidationError("data: expected a JSON array of 'p/q' strings")
    return [_rational(v, f"data[{i}]") for i, v in enumerate(obj)]


def load_data(path) -> list[Fraction]:
    return parse_data(read_json(path))
