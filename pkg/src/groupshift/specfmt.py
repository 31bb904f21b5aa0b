"""Text formats: shift spec files and encoder message files.

Spec file:
    group: Z4 x Z2
    gen @-1: (1,0) (2,1)
    memory: 2            # optional declared block length
    horizon: 6           # optional analysis window override

Symbols are comma-separated coordinate tuples; for a single-factor alphabet
bare integers are accepted.  Message files carry one line per time index,
"index: (c_1,...,c_m)", over the encoder's source alphabet.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .groups import FiniteAbelianGroup
from .shifts import GroupShift
from .words import Word


class SpecParseError(Exception):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


_GEN_RE = re.compile(r"^gen\s*@\s*(-?\d+)\s*:\s*(.*)$", re.IGNORECASE)
_TUPLE_RE = re.compile(r"\(([^()]*)\)|(-?\d+)")


@dataclass(frozen=True)
class GroupSyntax:
    """The alphabet as written, plus its primary-decomposed storage form.

    Symbols in spec and message files follow the written factor structure
    (one coordinate per written cyclic factor, e.g. a single integer mod 6
    for "Z6"); they are mapped onto the decomposed coordinates here.
    """

    written_orders: tuple[int, ...]
    group: FiniteAbelianGroup

    @classmethod
    def parse(cls, text: str) -> "GroupSyntax":
        group = FiniteAbelianGroup.parse(text)
        orders = []
        for part in re.split(r"[x*×]", text, flags=re.IGNORECASE):
            orders.append(int(part.strip()[1:]))
        return cls(tuple(orders), group)

    @classmethod
    def for_group(cls, group: FiniteAbelianGroup) -> "GroupSyntax":
        return cls(group.orders, group)

    def map_coords(self, written: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for x, n in zip(written, self.written_orders):
            m = n
            d = 2
            while d * d <= m:
                if m % d == 0:
                    q = 1
                    while m % d == 0:
                        m //= d
                        q *= d
                    out.append(x % q)
                d += 1
            if m > 1:
                out.append(x % m)
        return tuple(out)


def _parse_symbols(body: str, syntax: GroupSyntax,
                   line_no: int) -> list[tuple[int, ...]]:
    rank = len(syntax.written_orders)
    symbols = []
    pos = 0
    for match in _TUPLE_RE.finditer(body):
        between = body[pos:match.start()]
        if between.strip():
            raise SpecParseError(line_no, f"unexpected text {between.strip()!r}")
        pos = match.end()
        if match.group(1) is not None:
            parts = [x.strip() for x in match.group(1).split(",")]
            try:
                coords = tuple(int(x) for x in parts)
            except ValueError:
                raise SpecParseError(line_no, f"bad symbol {match.group(0)!r}")
        else:
            if rank != 1:
                raise SpecParseError(
                    line_no, "bare integers need a single-factor alphabet; "
                             "use (c_1,...,c_k)")
            coords = (int(match.group(2)),)
        if len(coords) != rank:
            raise SpecParseError(
                line_no, f"symbol has {len(coords)} coordinates, alphabet has "
                         f"{rank} factors")
        for c, n in zip(coords, syntax.written_orders):
            if not 0 <= c < n:
                raise SpecParseError(line_no, f"coordinate {c} out of range [0,{n})")
        symbols.append(syntax.map_coords(coords))
    if body[pos:].strip():
        raise SpecParseError(line_no, f"unexpected text {body[pos:].strip()!r}")
    if not symbols:
        raise SpecParseError(line_no, "empty generator")
    return symbols


@dataclass(frozen=True)
class ShiftSpec:
    shift: GroupShift
    horizon_override: int | None


def parse_spec(text: str) -> ShiftSpec:
    group: FiniteAbelianGroup | None = None
    raw_group = ""
    generators: list[Word] = []
    memory: int | None = None
    horizon: int | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lowered = line.lower()
        if lowered.startswith("group:"):
            if group is not None:
                raise SpecParseError(line_no, "duplicate group line")
            raw_group = line.split(":", 1)[1].strip()
            try:
                group = FiniteAbelianGroup.parse(raw_group)
            except ValueError as exc:
                raise SpecParseError(line_no, str(exc))
            continue
        if lowered.startswith("memory:"):
            try:
                memory = int(line.split(":", 1)[1])
            except ValueError:
                raise SpecParseError(line_no, "memory must be an integer")
            if memory < 1:
                raise SpecParseError(line_no, "memory must be positive")
            continue
        if lowered.startswith("horizon:"):
            try:
                horizon = int(line.split(":", 1)[1])
            except ValueError:
                raise SpecParseError(line_no, "horizon must be an integer")
            if horizon < 1:
                raise SpecParseError(line_no, "horizon must be positive")
            continue
        m = _GEN_RE.match(line)
        if m:
            if group is None:
                raise SpecParseError(line_no, "generator before group line")
            start = int(m.group(1))
            symbols = _parse_symbols(m.group(2), group, line_no)
            w = Word.make(group, start, symbols)
            if w.is_zero:
                raise SpecParseError(line_no, "generator is the zero word")
            generators.append(w)
            continue
        raise SpecParseError(line_no, f"unrecognized line {line!r}")
    if group is None:
        raise SpecParseError(0, "missing group line")
    return ShiftSpec(GroupShift.make(group, generators, memory), horizon)


def format_spec(spec: ShiftSpec) -> str:
    shift = spec.shift
    lines = [f"group: {shift.alphabet.format()}"]
    if shift.memory_hint is not None:
        lines.append(f"memory: {shift.memory_hint}")
    if spec.horizon_override is not None:
        lines.append(f"horizon: {spec.horizon_override}")
    for g in shift.generators:
        lines.append("gen " + g.format())
    return "\n".join(lines) + "\n"


_MSG_RE = re.compile(r"^(-?\d+)\s*:\s*(.*)$")


def parse_message(text: str, source: FiniteAbelianGroup) -> Word:
    """Message word from "index: (c_1,...,c_m)" lines over the source."""
    values: dict[int, tuple[int, ...]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _MSG_RE.match(line)
        if not m:
            raise SpecParseError(line_no, f"unrecognized message line {line!r}")
        idx = int(m.group(1))
        if idx in values:
            raise SpecParseError(line_no, f"duplicate index {idx}")
        symbols = _parse_symbols(m.group(2), source, line_no)
        if len(symbols) != 1:
            raise SpecParseError(line_no, "one symbol per message line")
        values[idx] = symbols[0]
    if not values:
        return Word.zero(source)
    lo, hi = min(values), max(values)
    syms = [values.get(i, source.zero()) for i in range(lo, hi + 1)]
    return Word.make(source, lo, syms)
