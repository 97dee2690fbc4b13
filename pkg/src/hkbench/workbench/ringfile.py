"""Flat key = value ring files.

Example::

    # A1 quadric over F_5
    name = A1
    p = 5
    vars = x y z
    relations = "x^2 + y^2 + z^2"
    reduction = y z
    flags = gorenstein normal domain
    toric = 2,0 0,2 1,1
    toric_coords = "x+2*y" "x-2*y" "3*z"
    ideal.m2 = m^2
    run.checks = sandwich gorenstein main

Values are whitespace-separated tokens; a token with spaces is quoted.
Lines starting with ``#`` are comments.  ``run.*`` keys are per-entry
overrides for the corpus runner.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ..ffpoly import ParseError, PolyRing, PolynomialError
from ..invariants import (
    ENGINES,
    FLAG_NAMES,
    IdealSpec,
    PresentationError,
    RingPresentation,
    power_spec,
    toric_mismatch,
)
from ..toric import Semigroup, ToricError

RING_KEYS = ("name", "p", "vars", "weights", "relations", "reduction", "flags", "toric", "toric_coords")
RUN_KEYS = ("qmax", "checks", "engine", "corrupt", "expect_fail", "radical_x", "radical_n", "fsig_qmax")
CHECK_NAMES = ("sandwich", "gorenstein", "main", "closed", "radical")

_TOKEN = re.compile(r'"([^"]*)"|\'([^\']*)\'|(\S+)')


class RingFileError(ValueError):
    """Parse or validation error; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        self.column = column
        where = path or "<ring>"
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


@dataclass
class Token:
    text: str
    line: int
    column: int


@dataclass
class RingFile:
    """A parsed ring file: the presentation, named ideals and run overrides."""

    ring: RingPresentation
    ideals: dict[str, IdealSpec] = field(default_factory=dict)
    run: dict = field(default_factory=dict)
    path: str = ""
    raw: dict = field(default_factory=dict)


def _tokenize(value: str, line: int, col0: int, path: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(value):
        if value[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(value, pos)
        if m is None or (value[pos] in "\"'" and m.group(3) is not None):
            raise RingFileError("unterminated quote", path, line, col0 + pos + 1)
        text = next(g for g in m.groups() if g is not None)
        # column of the first character of the token text (after any quote)
        out.append(Token(text, line, col0 + pos + 1 + (m.group(3) is None)))
        pos = m.end()
    return out


def parse_text(text: str, path: str = "") -> dict[str, list[Token]]:
    """Split the file into key -> tokens, with positions kept for error messages."""
    entries: dict[str, list[Token]] = {}
    keypos: dict[str, int] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in raw:
            raise RingFileError("expected 'key = value'", path, ln, len(raw) - len(raw.lstrip()) + 1)
        eq = raw.index("=")
        key = raw[:eq].strip()
        kcol = len(raw) - len(raw.lstrip()) + 1
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z0-9_^]+)?", key):
            raise RingFileError(f"bad key {key!r}", path, ln, kcol)
        base = key.split(".")[0]
        if "." not in key and key not in RING_KEYS:
            raise RingFileError(f"unknown key {key!r}", path, ln, kcol)
        if base == "run" and key[4:] not in RUN_KEYS:
            raise RingFileError(f"unknown run option {key!r}", path, ln, kcol)
        if "." in key and base not in ("run", "ideal"):
            raise RingFileError(f"unknown key {key!r}", path, ln, kcol)
        if key in entries:
            raise RingFileError(f"duplicate key {key!r} (first on line {keypos[key]})", path, ln, kcol)
        entries[key] = _tokenize(raw[eq + 1:], ln, eq + 1, path)
        keypos[key] = ln
    return entries


def _poly(ring: PolyRing, tok: Token, path: str):
    try:
        return ring.parse(tok.text)
    except ParseError as exc:
        raise RingFileError(str(exc).rsplit(" at position", 1)[0], path, tok.line, tok.column + exc.position) from None
    except PolynomialError as exc:
        raise RingFileError(str(exc), path, tok.line, tok.column) from None


def _int(tok: Token, path: str, what: str) -> int:
    try:
        return int(tok.text)
    except ValueError:
        raise RingFileError(f"{what} must be an integer, got {tok.text!r}", path, tok.line, tok.column) from None


def _single(entries, key, path):
    toks = entries[key]
    if len(toks) != 1:
        line = toks[1].line if len(toks) > 1 else None
        col = toks[1].column if len(toks) > 1 else None
        raise RingFileError(f"{key} takes exactly one value", path, line, col)
    return toks[0]


def build(entries: dict[str, list[Token]], path: str = "") -> RingFile:
    for key in ("p", "vars"):
        if key not in entries:
            raise RingFileError(f"missing required key {key!r}", path)
    ptok = _single(entries, "p", path)
    p = _int(ptok, path, "p")
    names = [t.text for t in entries["vars"]]
    try:
        ring = PolyRing(p, names)
    except PolynomialError as exc:
        tok = ptok if "modulus" in str(exc) else entries["vars"][0]
        raise RingFileError(str(exc), path, tok.line, tok.column) from None
    weights = None
    if "weights" in entries:
        weights = [_int(t, path, "weight") for t in entries["weights"]]
        if len(weights) != ring.nvars:
            raise RingFileError("weights needs one entry per variable", path, entries["weights"][0].line)
    relations = [_poly(ring, t, path) for t in entries.get("relations", [])]
    reduction = [_poly(ring, t, path) for t in entries["reduction"]] if "reduction" in entries else None
    flags = set()
    for t in entries.get("flags", []):
        if t.text not in FLAG_NAMES:
            raise RingFileError(f"unknown flag {t.text!r}", path, t.line, t.column)
        flags.add(t.text)
    toric = None
    coords = None
    if "toric" in entries:
        gens = []
        for t in entries["toric"]:
            try:
                gens.append(tuple(int(x) for x in t.text.split(",")))
            except ValueError:
                raise RingFileError(f"bad lattice vector {t.text!r}", path, t.line, t.column) from None
        if "toric_coords" in entries:
            coords = [_poly(ring, t, path) for t in entries["toric_coords"]]
            for L, t in zip(coords, entries["toric_coords"]):
                if not L or any(sum(e) != 1 for e in L.terms):
                    raise RingFileError("toric coordinates must be linear forms", path, t.line, t.column)
        w = weights or [1] * ring.nvars
        sw = [L.degree(w) for L in coords] if coords else (w if len(gens) == ring.nvars else [1] * len(gens))
        try:
            toric = Semigroup.of(gens, sw)
        except ToricError as exc:
            t = entries["toric"][0]
            raise RingFileError(str(exc), path, t.line, t.column) from None
    elif "toric_coords" in entries:
        t = entries["toric_coords"][0]
        raise RingFileError("toric_coords given without toric", path, t.line, t.column)
    name = entries["name"][0].text if "name" in entries else Path(path).stem if path else "ring"
    try:
        R = RingPresentation(ring, relations, weights, reduction, frozenset(flags), toric, coords, name)
    except PresentationError as exc:
        key = "relations" if "homogeneous" in str(exc) else "weights" if "weight" in str(exc) else "toric"
        t = entries.get(key, [None])[0]
        raise RingFileError(str(exc), path, t.line if t else None, t.column if t else None) from None
    if toric is not None:
        msg = toric_mismatch(R)
        if msg:
            t = entries["toric"][0]
            raise RingFileError(f"toric description inconsistent: {msg}", path, t.line, t.column)
    _check_flags(R, entries, path)
    ideals = {}
    for key, toks in entries.items():
        if key.startswith("ideal."):
            iname = key.split(".", 1)[1]
            ideals[iname] = _ideal(R, iname, toks, path)
    run = _run(entries, path)
    return RingFile(R, ideals, run, path, {k: [t.text for t in v] for k, v in entries.items()})


def _check_flags(R: RingPresentation, entries, path):
    """Cheap consistency checks between flags and the presentation."""
    line = entries["flags"][0].line if entries.get("flags") else None
    try:
        d = R.dimension()
    except Exception as exc:  # pragma: no cover - Groebner failures surface here
        raise RingFileError(f"cannot compute dimension: {exc}", path) from None
    if d < 0:
        raise RingFileError("the relations generate the unit ideal", path, entries["relations"][0].line)
    if R.is_hypersurface and R.relations and "domain" in R.flags:
        f = R.relations[0]
        if len(f.terms) == 1 and sum(next(iter(f.terms))) > 1:
            raise RingFileError("flag 'domain' contradicts a monomial relation", path, line)
    if "reduced" in R.flags and R.relations:
        for f in R.relations:
            if len(f.terms) == 1:
                e = next(iter(f.terms))
                if max(e) > 1:
                    raise RingFileError("flag 'reduced' contradicts a non-squarefree monomial relation", path, line)
    if R.reduction is not None and len(R.reduction) != d:
        t = entries["reduction"][0]
        raise RingFileError(f"reduction has {len(R.reduction)} elements but dim R = {d}", path, t.line, t.column)


def _ideal(R: RingPresentation, name: str, toks: list[Token], path: str) -> IdealSpec:
    if len(toks) == 1:
        m = re.fullmatch(r"m(?:\^(\d+))?", toks[0].text)
        if m:
            k = int(m.group(1) or 1)
            if k < 1:
                raise RingFileError("power of m must be positive", path, toks[0].line, toks[0].column)
            spec = power_spec(R, k)
            spec.name = name
            return spec
    if not toks:
        raise RingFileError(f"ideal {name!r} has no generators", path)
    gens = [_poly(R.ambient, t, path) for t in toks]
    return IdealSpec(gens, name)


def _run(entries, path) -> dict:
    run: dict = {}
    for key, toks in entries.items():
        if not key.startswith("run."):
            continue
        opt = key[4:]
        if opt in ("qmax", "fsig_qmax"):
            run[opt] = _int(_single(entries, key, path), path, key)
        elif opt == "radical_n":
            run[opt] = [_int(t, path, key) for t in toks]
        elif opt == "engine":
            t = _single(entries, key, path)
            if t.text not in ENGINES:
                raise RingFileError(f"unknown engine {t.text!r}", path, t.line, t.column)
            run[opt] = t.text
        elif opt == "checks":
            for t in toks:
                if t.text not in CHECK_NAMES + ("all",):
                    raise RingFileError(f"unknown check suite {t.text!r}", path, t.line, t.column)
            names = [t.text for t in toks]
            run[opt] = list(CHECK_NAMES) if "all" in names else names
        elif opt == "corrupt":
            out = {}
            for t in toks:
                if "=" not in t.text:
                    raise RingFileError("corrupt entries are field=value", path, t.line, t.column)
                k, v = t.text.split("=", 1)
                try:
                    out[k] = float(v)
                except ValueError:
                    raise RingFileError(f"bad number {v!r}", path, t.line, t.column) from None
            run[opt] = out
        elif opt == "expect_fail":
            run[opt] = [t.text for t in toks]
        elif opt == "radical_x":
            run[opt] = _single(entries, key, path).text
    return run


def loads(text: str, path: str = "") -> RingFile:
    return build(parse_text(text, path), path)


def load_ring_file(path) -> RingFile:
    path = str(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise RingFileError(f"cannot read: {exc.strerror}", path) from None
    return loads(text, path)


def _quote(s: str) -> str:
    return s if re.fullmatch(r"[^\s\"']+", s) else f'"{s}"'


def dumps(rf: RingFile) -> str:
    """Canonical serialization; loads(dumps(rf)) reproduces the presentation."""
    R = rf.ring
    lines = [f"name = {_quote(R.name)}", f"p = {R.p}", "vars = " + " ".join(R.ambient.names)]
    if any(w != 1 for w in R.weights):
        lines.append("weights = " + " ".join(map(str, R.weights)))
    if R.relations:
        lines.append("relations = " + " ".join(_quote(f.to_str()) for f in R.relations))
    if R.reduction is not None:
        lines.append("reduction = " + " ".join(_quote(f.to_str()) for f in R.reduction))
    if R.flags:
        lines.append("flags = " + " ".join(sorted(R.flags)))
    if R.toric is not None:
        lines.append("toric = " + " ".join(",".join(map(str, a)) for a in R.toric.generators))
        if R.toric_coords is not None:
            lines.append("toric_coords = " + " ".join(_quote(f.to_str()) for f in R.toric_coords))
    for name in sorted(rf.ideals):
        raw = rf.raw.get(f"ideal.{name}")
        if raw and len(raw) == 1 and re.fullmatch(r"m(\^\d+)?", raw[0]):
            lines.append(f"ideal.{name} = {raw[0]}")
        else:
            lines.append(f"ideal.{name} = " + " ".join(_quote(g.to_str()) for g in rf.ideals[name].generators))
    for opt in RUN_KEYS:
        if opt not in rf.run:
            continue
        v = rf.run[opt]
        if opt == "corrupt":
            text = " ".join(f"{k}={v[k]!r}" for k in sorted(v))
        elif isinstance(v, list):
            text = " ".join(map(str, v))
        else:
            text = str(v)
        lines.append(f"run.{opt} = {text}")
    return "\n".join(lines) + "\n"
