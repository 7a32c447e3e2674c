"""Partial Boolean vectors, problem instances, witnesses, and their text formats.

A vector entry is '0', '1' or '?', the last marking an unknown value.  The
distance used throughout is the number of coordinates at which two vectors
hold opposite *known* values; filling unknowns can only grow it.  Coordinates
are reported 1-based in human-facing output, row indices 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DimensionMismatch, ParseError

UNKNOWN = "?"

# Bit i of a mask holds the character at text position d-1-i, i.e. the
# leftmost character is the highest bit.
_ONES = str.maketrans("?", "0")
_ZEROS = str.maketrans("01?", "100")


class PartialVector:
    """An immutable vector over {0, 1, ?}.

    Keeps two bit masks (known ones / known zeros) so distance computations
    cost O(d / word size) instead of a character loop.
    """

    __slots__ = ("text", "ones", "zeros", "unknown_count")

    def __init__(self, text: str):
        if text.count("0") + text.count("1") + text.count("?") != len(text):
            bad = next(c for c in text if c not in "01?")
            raise ValueError(f"illegal character {bad!r} in vector {text!r}")
        self.text = text
        self.unknown_count = text.count("?")
        if text:
            self.ones = int(text.translate(_ONES), 2)
            self.zeros = int(text.translate(_ZEROS), 2)
        else:
            self.ones = 0
            self.zeros = 0

    @property
    def d(self) -> int:
        return len(self.text)

    @property
    def is_complete(self) -> bool:
        return self.unknown_count == 0

    def unknown_positions(self) -> list[int]:
        """0-based text positions holding '?', ascending."""
        return [i for i, c in enumerate(self.text) if c == UNKNOWN]

    def complete_zeros(self) -> "PartialVector":
        """The completion that sets every unknown entry to 0."""
        if self.unknown_count == 0:
            return self
        return PartialVector(self.text.replace(UNKNOWN, "0"))

    def completed_with(self, bits: dict[int, str]) -> "PartialVector":
        """Fill the given unknown positions with '0'/'1'; refuses to touch known entries."""
        chars = list(self.text)
        for pos, bit in bits.items():
            if chars[pos] != UNKNOWN:
                raise ValueError(f"position {pos} is already known")
            chars[pos] = bit
        return PartialVector("".join(chars))

    def __len__(self) -> int:
        return len(self.text)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PartialVector) and self.text == other.text

    def __hash__(self) -> int:
        return hash(self.text)

    def __repr__(self) -> str:
        return f"PartialVector({self.text!r})"

    def __str__(self) -> str:
        return self.text


def known_distance(a: PartialVector, b: PartialVector) -> int:
    """Count coordinates where a and b hold opposite known values.

    A lower bound on the Hamming distance of any completions of a and b;
    unknown entries never contribute.
    """
    if a.d != b.d:
        raise DimensionMismatch(f"vector length {a.d} vs {b.d}")
    return ((a.ones & b.zeros) | (a.zeros & b.ones)).bit_count()


def disagreement_set(a: PartialVector, b: PartialVector) -> frozenset[int]:
    """The 1-based coordinates at which a and b are guaranteed to differ."""
    if a.d != b.d:
        raise DimensionMismatch(f"vector length {a.d} vs {b.d}")
    mask = (a.ones & b.zeros) | (a.zeros & b.ones)
    coords = set()
    d = a.d
    while mask:
        low = mask & -mask
        coords.add(d - (low.bit_length() - 1))
        mask ^= low
    return frozenset(coords)


@dataclass(frozen=True)
class Instance:
    """An ordered list of rows plus the target set size k, the distance
    threshold r (pairs must end up at Hamming distance >= r+1), and the
    dimension d.  Duplicate rows are kept: identical partial rows may still
    be completed differently."""

    rows: tuple[PartialVector, ...]
    k: int
    r: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if self.k < 0 or self.r < 0 or self.d < 0:
            raise ValueError("k, r and d must be non-negative")
        for i, row in enumerate(self.rows):
            if row.d != self.d:
                raise DimensionMismatch(f"row {i} has length {row.d}, expected {self.d}")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def from_texts(cls, texts: Iterable[str], k: int, r: int, d: int | None = None) -> "Instance":
        rows = tuple(PartialVector(t) for t in texts)
        if d is None:
            d = rows[0].d if rows else 0
        return cls(rows, k, r, d)


@dataclass(frozen=True)
class Solution:
    """A full completion of every row (aligned index-by-index with the
    instance) plus the selected row indices."""

    completed: tuple[PartialVector, ...]
    selected: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "completed", tuple(self.completed))
        object.__setattr__(self, "selected", frozenset(self.selected))


@dataclass(frozen=True)
class VerificationReport:
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def neighborhood(instance: Instance, v_index: int, t: int) -> frozenset[int]:
    """Indices of all rows within known distance t of the given row.

    Always contains v_index itself (a row is at distance 0 from itself).
    """
    if not 0 <= v_index < instance.n:
        raise IndexError(f"row index {v_index} out of range for {instance.n} rows")
    v = instance.rows[v_index]
    return frozenset(
        j for j, row in enumerate(instance.rows) if known_distance(v, row) <= t
    )


def verify_solution(instance: Instance, solution: Solution) -> VerificationReport:
    """Check a witness against its instance; never raises.

    Verifies (i) every completed row is fully known and agrees with the
    instance row on every known entry, (ii) exactly k rows are selected,
    (iii) every selected pair sits at distance >= r+1.
    """
    failures: list[str] = []
    rows = instance.rows
    comp = solution.completed
    if len(comp) != len(rows):
        failures.append(
            f"completed row count {len(comp)} differs from instance row count {len(rows)}"
        )
    else:
        for i, (row, full) in enumerate(zip(rows, comp)):
            if full.d != row.d:
                failures.append(f"row {i}: completed length {full.d}, expected {row.d}")
                continue
            if full.unknown_count:
                failures.append(f"row {i}: completed vector still contains '?'")
                continue
            wrong = (row.ones & full.zeros) | (row.zeros & full.ones)
            if wrong:
                coord = row.d - (wrong.bit_length() - 1)
                failures.append(f"row {i}: completion mismatch at coordinate {coord}")

    out_of_range = sorted(i for i in solution.selected if not 0 <= i < len(rows))
    for i in out_of_range:
        failures.append(f"selected index {i} out of range")
    if len(solution.selected) != instance.k:
        failures.append(f"selected {len(solution.selected)} rows, expected k = {instance.k}")

    if not out_of_range and len(comp) == len(rows):
        for i, j in itertools.combinations(sorted(solution.selected), 2):
            dist = known_distance(comp[i], comp[j])
            if dist <= instance.r:
                failures.append(
                    f"selected pair ({i}, {j}): distance {dist} < required {instance.r + 1}"
                )
    return VerificationReport(tuple(failures))


def _effective_lines(text: str) -> Iterator[tuple[int, str]]:
    """Yield (1-based line number, stripped line), skipping blanks and '#' comments."""
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield num, line


def parse_instance(text: str) -> Instance:
    """Read the instance format: a 'd k r' header line, then one row per line.

    Blank lines and lines starting with '#' are ignored.  Note that rows of a
    d=0 instance are not representable (they would be blank lines), so such
    instances always parse with zero rows.
    """
    d = k = r = None
    rows: list[PartialVector] = []
    for num, line in _effective_lines(text):
        if d is None:
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"expected header 'd k r', got {line!r}", num)
            try:
                d, k, r = (int(p) for p in parts)
            except ValueError:
                raise ParseError(f"non-integer value in header {line!r}", num) from None
            if d < 0 or k < 0 or r < 0:
                raise ParseError("header values must be non-negative", num)
        else:
            if len(line) != d:
                raise ParseError(f"row has {len(line)} characters, expected {d}", num)
            try:
                rows.append(PartialVector(line))
            except ValueError as exc:
                raise ParseError(str(exc), num) from None
    if d is None:
        raise ParseError("missing 'd k r' header")
    return Instance(tuple(rows), k, r, d)


def serialize_instance(instance: Instance) -> str:
    lines = [f"{instance.d} {instance.k} {instance.r}"]
    lines.extend(row.text for row in instance.rows)
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> Solution | None:
    """Read a solution file; returns None for a 'NO' file.

    Format: first line 'YES' or 'NO'; on YES, the fully completed rows in
    input order, then a final line 'S: i1 i2 ...' with 0-based indices.
    """
    verdict = None
    rows: list[PartialVector] = []
    selected: frozenset[int] | None = None
    for num, line in _effective_lines(text):
        if verdict is None:
            if line not in ("YES", "NO"):
                raise ParseError(f"expected 'YES' or 'NO', got {line!r}", num)
            verdict = line
            continue
        if verdict == "NO":
            raise ParseError("unexpected content after 'NO'", num)
        if selected is not None:
            raise ParseError("unexpected content after the selection line", num)
        if line.startswith("S:"):
            try:
                selected = frozenset(int(p) for p in line[2:].split())
            except ValueError:
                raise ParseError(f"bad selection line {line!r}", num) from None
            continue
        if any(c not in "01" for c in line):
            raise ParseError(f"completed row must use only 0/1, got {line!r}", num)
        rows.append(PartialVector(line))
    if verdict is None:
        raise ParseError("missing 'YES'/'NO' line")
    if verdict == "NO":
        return None
    if selected is None:
        raise ParseError("missing selection line 'S: ...'")
    return Solution(tuple(rows), selected)


def serialize_solution(witness: Solution | None) -> str:
    """Write a solution file; None stands for the answer NO."""
    if witness is None:
        return "NO\n"
    lines = ["YES"]
    lines.extend(row.text for row in witness.completed)
    indices = " ".join(str(i) for i in sorted(witness.selected))
    lines.append(f"S: {indices}" if indices else "S:")
    return "\n".join(lines) + "\n"
