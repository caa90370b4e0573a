"""Multi-valued digit algebra, CAM cell encoding, key decoding and truth-table specs.

Digits of a radix-n system are plain ints in [0, n-1].  The distinguished
"don't care" value is the module constant DONT_CARE (stored as -1 so that it
survives numpy round trips).  Vectors of digits are tuples, written and read
most-significant position first, e.g. the triplet "101" is (1, 0, 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

DONT_CARE = -1

# Digit characters for documents: '0'-'9' then 'a'-'w'.  'x' is reserved for
# the don't-care value, which caps document radix at 33.
_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvw"
MAX_DOC_RADIX = len(_DIGIT_CHARS)


class SpecFormatError(ValueError):
    """Raised when a truth-table document is malformed."""


def check_radix(n: int) -> None:
    if n < 2:
        raise ValueError(f"radix must be >= 2, got {n}")


def check_digit(d: int, n: int) -> None:
    if d != DONT_CARE and not 0 <= d < n:
        raise ValueError(f"digit {d} out of range for radix {n}")


def digit_char(d: int) -> str:
    if d == DONT_CARE:
        return "x"
    return _DIGIT_CHARS[d]


def parse_digit(ch: str, n: int) -> int:
    if ch == "x":
        return DONT_CARE
    d = _DIGIT_CHARS.find(ch)
    if d < 0 or d >= n:
        raise SpecFormatError(f"invalid digit character {ch!r} for radix {n}")
    return d


def vector_str(vec) -> str:
    return "".join(digit_char(d) for d in vec)


def parse_vector(text: str, n: int):
    return tuple(parse_digit(ch, n) for ch in text)


def vector_value(vec, n: int) -> int:
    """Base-n integer value of a digit vector, most-significant digit first."""
    v = 0
    for d in vec:
        v = v * n + d
    return v


def all_vectors(n: int, m: int):
    """All n**m digit vectors in ascending base-n value order."""
    return itertools.product(range(n), repeat=m)


@dataclass(frozen=True)
class CellState:
    """Memristor states of one nTnR cell; memristors[i] is M_i, 'H' or 'L'.

    At most one entry is 'L'; its index is the stored digit.  All 'H' encodes
    the stored don't-care.
    """

    memristors: tuple[str, ...]

    def __post_init__(self):
        if any(s not in ("H", "L") for s in self.memristors):
            raise ValueError("memristor states must be 'H' or 'L'")
        if self.memristors.count("L") > 1:
            raise ValueError("at most one memristor may be low-resistance")

    @property
    def radix(self) -> int:
        return len(self.memristors)

    def stored_digit(self) -> int:
        """Inverse of encode_digit."""
        if "L" in self.memristors:
            return self.memristors.index("L")
        return DONT_CARE

    def msb_first(self) -> tuple[str, ...]:
        """States ordered (M_{n-1}, ..., M_0) as printed in cell tables."""
        return tuple(reversed(self.memristors))


def encode_digit(d: int, n: int) -> CellState:
    """Cell state storing digit d: single 'L' at index d, all 'H' for don't care."""
    check_radix(n)
    check_digit(d, n)
    states = ["H"] * n
    if d != DONT_CARE:
        states[d] = "L"
    return CellState(tuple(states))


@dataclass(frozen=True)
class KeyMask:
    """Searched digit plus column-activation flag.

    Electrically the active mask level is V_DD (logic n-1) and inactive is 0;
    functionally a boolean suffices.  An inactive mask makes the key irrelevant.
    """

    key: int
    active: bool = True


@dataclass(frozen=True)
class SignalVector:
    """Decoded search signals; levels[i] is S_i, True = hi, False = lo.

    Masked form is all lo.  Unmasked form has exactly one lo, at the key index.
    """

    levels: tuple[bool, ...]

    @property
    def radix(self) -> int:
        return len(self.levels)

    def msb_first(self) -> tuple[bool, ...]:
        return tuple(reversed(self.levels))


def decode_signals(km: KeyMask, n: int) -> SignalVector:
    """Functional n-ary decoder: key j -> S_j lo and the rest hi; masked -> all lo."""
    check_radix(n)
    if not km.active:
        return SignalVector((False,) * n)
    if km.key == DONT_CARE or not 0 <= km.key < n:
        raise ValueError(f"active key {km.key} out of range for radix {n}")
    return SignalVector(tuple(i != km.key for i in range(n)))


# Ternary inverter outputs indexed by input value 0, 1, 2.
_STI = (2, 1, 0)
_PTI = (2, 2, 0)
_NTI = (2, 0, 0)


def ternary_inverters(v: int) -> tuple[int, int, int]:
    """(STI, PTI, NTI) outputs for a ternary input."""
    if v not in (0, 1, 2):
        raise ValueError(f"ternary inverter input must be 0, 1 or 2, got {v}")
    return _STI[v], _PTI[v], _NTI[v]


def _band(a: int, b: int) -> int:
    return min(a, b)


def _bor(a: int, b: int) -> int:
    return max(a, b)


def _bnot(a: int) -> int:
    # binary inverter over the rail levels {0, 2}
    return 2 - a


def decode_gate_level(km: KeyMask) -> SignalVector:
    """Gate-level ternary decoder built from PTI/NTI and binary AND/OR/NOT.

    Radix-3 only; must agree with decode_signals on every key-mask pair.
    """
    if km.active and km.key not in (0, 1, 2):
        raise ValueError(f"ternary key must be 0, 1 or 2, got {km.key}")
    mask = 2 if km.active else 0
    key = km.key if km.active else 0
    _, pti, nti = ternary_inverters(key)
    s2 = _band(mask, pti)
    s1 = _band(mask, _bor(nti, _bnot(pti)))
    s0 = _band(mask, _bnot(nti))
    return SignalVector((s0 == 2, s1 == 2, s2 == 2))


@dataclass(frozen=True)
class FunctionSpec:
    """Radix-n in-place truth table over m digit positions.

    outputs maps every length-m input vector to its length-m output vector.
    write_positions are the positions overwritten in place; every output must
    agree with its input on the remaining (kept) positions.
    """

    radix: int
    arity: int
    outputs: dict = field(repr=False)
    write_positions: tuple[int, ...]

    def __post_init__(self):
        check_radix(self.radix)
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        wp = self.write_positions
        if not wp:
            raise ValueError("at least one write position is required")
        if len(set(wp)) != len(wp):
            raise SpecFormatError(f"duplicate write positions {wp}")
        if any(not 0 <= p < self.arity for p in wp):
            raise SpecFormatError(f"write positions {wp} out of range for arity {self.arity}")
        expected = self.radix ** self.arity
        if len(self.outputs) != expected:
            raise SpecFormatError(
                f"truth table has {len(self.outputs)} rows, expected {expected}")
        kept = self.kept_positions
        for vin, vout in self.outputs.items():
            if len(vin) != self.arity or len(vout) != self.arity:
                raise SpecFormatError(f"row {vin} -> {vout} has wrong width")
            for d in (*vin, *vout):
                if not 0 <= d < self.radix:
                    raise SpecFormatError(f"row {vin} -> {vout} has out-of-range digit")
            for p in kept:
                if vin[p] != vout[p]:
                    raise SpecFormatError(
                        f"output changes kept position {p} on input {vector_str(vin)}")

    @property
    def kept_positions(self) -> tuple[int, ...]:
        return tuple(p for p in range(self.arity) if p not in self.write_positions)

    @property
    def write_width(self) -> int:
        return len(self.write_positions)

    def extended_positions(self, dim: int) -> tuple[int, ...]:
        """Positions written by a dim-wide write action.

        The canonical full order is kept positions ascending followed by the
        write positions; a dim-wide write covers its last dim entries, so the
        standard write positions are always included.
        """
        if not self.write_width <= dim <= self.arity:
            raise ValueError(f"write dimension {dim} out of range")
        full = self.kept_positions + self.write_positions
        return full[len(full) - dim:]

    def out_value(self, vec, dim: int) -> int:
        """Base-n value of vec's dim written digits, dimension-extended order."""
        return vector_value(tuple(vec[p] for p in self.extended_positions(dim)), self.radix)

    def write_digits(self, vec) -> tuple[int, ...]:
        return tuple(vec[p] for p in self.write_positions)

    def is_no_action(self, vec) -> bool:
        return self.outputs[vec] == vec


def make_adder_spec(n: int) -> FunctionSpec:
    """In-place full-adder table over positions (A, B, C): B <- sum, C <- carry.

    The table is total over all n**3 inputs, so carry-in digits up to n-1 are
    included even though chained additions only ever produce carries 0 and 1.
    """
    check_radix(n)
    outputs = {}
    for a, b, c in all_vectors(n, 3):
        s = a + b + c
        outputs[(a, b, c)] = (a, s % n, s // n)
    return FunctionSpec(radix=n, arity=3, outputs=outputs, write_positions=(1, 2))


def save_spec(spec: FunctionSpec) -> str:
    """Serialize a FunctionSpec to the line-oriented truth-table document."""
    if spec.radix > MAX_DOC_RADIX:
        raise SpecFormatError(f"document format supports radix <= {MAX_DOC_RADIX}")
    lines = [
        f"radix {spec.radix}",
        f"arity {spec.arity}",
        "write " + " ".join(str(p) for p in spec.write_positions),
    ]
    for vin in all_vectors(spec.radix, spec.arity):
        lines.append(f"{vector_str(vin)} {vector_str(spec.outputs[vin])}")
    return "\n".join(lines) + "\n"


def load_spec(text: str) -> FunctionSpec:
    """Parse a truth-table document; inverse of save_spec.

    Document grammar (UTF-8 text, '#' starts a comment):
        radix N
        arity M
        write P0 P1 ...
        <input digits> <output digits>      one line per table row
    """
    radix = arity = None
    write_positions = None
    rows = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "radix":
                radix = int(parts[1])
            elif parts[0] == "arity":
                arity = int(parts[1])
            elif parts[0] == "write":
                write_positions = tuple(int(p) for p in parts[1:])
            else:
                if radix is None or arity is None or write_positions is None:
                    raise SpecFormatError(
                        f"line {lineno}: table row before radix/arity/write header")
                if len(parts) != 2:
                    raise SpecFormatError(f"line {lineno}: expected 'INPUT OUTPUT'")
                vin = parse_vector(parts[0], radix)
                vout = parse_vector(parts[1], radix)
                if len(vin) != arity or len(vout) != arity:
                    raise SpecFormatError(f"line {lineno}: row width != arity {arity}")
                if DONT_CARE in vin or DONT_CARE in vout:
                    raise SpecFormatError(f"line {lineno}: 'x' not allowed in table rows")
                if vin in rows:
                    raise SpecFormatError(f"line {lineno}: duplicate row {parts[0]}")
                rows[vin] = vout
        except (IndexError, ValueError) as exc:
            if isinstance(exc, SpecFormatError):
                raise
            raise SpecFormatError(f"line {lineno}: {raw.strip()!r}: {exc}") from exc
    if radix is None or arity is None or write_positions is None:
        raise SpecFormatError("missing radix/arity/write header")
    expected = radix ** arity
    if len(rows) != expected:
        missing = next(v for v in all_vectors(radix, arity) if v not in rows)
        raise SpecFormatError(
            f"table not total: {len(rows)} rows of {expected}, "
            f"e.g. missing {vector_str(missing)}")
    return FunctionSpec(radix=radix, arity=arity, outputs=rows,
                        write_positions=write_positions)
