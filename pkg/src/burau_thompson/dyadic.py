"""Dyadic rationals, standard dyadic intervals and piecewise dyadic affine
circle maps with their one-sided logarithmic slopes.

Dyadic rationals are plain ``fractions.Fraction`` values whose denominator is
a power of two; ``as_num_level`` gives the canonical (numerator, level) pair.
The circle is [0, 1) with 0 ~ 1.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

DyadicRational = Fraction


def dyadic(num: int, level: int = 0) -> Fraction:
    if level < 0:
        raise ValueError("level must be nonnegative")
    return Fraction(num, 2**level)


def is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def as_num_level(x: Fraction) -> tuple[int, int]:
    """Canonical (numerator, level): level 0 or odd numerator."""
    if not is_dyadic(x):
        raise ValueError(f"{x} is not dyadic")
    return x.numerator, x.denominator.bit_length() - 1


def circle(x: Fraction) -> Fraction:
    """Reduce modulo 1 into [0, 1)."""
    return x - (x.numerator // x.denominator)


def parse_dyadic(text: str | int | float) -> Fraction:
    x = Fraction(str(text))
    if not is_dyadic(x):
        raise ValueError(f"{text} is not a dyadic rational")
    return x


@dataclass(frozen=True)
class DyadicInterval:
    """The standard dyadic interval [k/2^n, (k+1)/2^n)."""

    k: int
    n: int

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.k < 2**self.n:
            raise ValueError("not a standard dyadic interval of [0, 1)")

    @property
    def left(self) -> Fraction:
        return Fraction(self.k, 2**self.n)

    @property
    def right(self) -> Fraction:
        return Fraction(self.k + 1, 2**self.n)

    @property
    def length(self) -> Fraction:
        return Fraction(1, 2**self.n)

    def midpoint(self) -> Fraction:
        return Fraction(2 * self.k + 1, 2 ** (self.n + 1))

    def __contains__(self, x: Fraction) -> bool:
        return self.left <= x < self.right


@dataclass(frozen=True)
class Piece:
    """x -> 2^slope_log2 * x + shift on [left, right)."""

    left: Fraction
    right: Fraction
    slope_log2: int
    shift: Fraction

    def slope(self) -> Fraction:
        return Fraction(2) ** self.slope_log2

    def __call__(self, x: Fraction) -> Fraction:
        return self.slope() * x + self.shift

    def image(self) -> tuple[Fraction, Fraction]:
        return self(self.left), self(self.right)

    def same_law(self, other: Piece) -> bool:
        return self.slope_log2 == other.slope_log2 and self.shift == other.shift

    def to_json(self) -> dict:
        num, level = as_num_level(self.shift)
        return {"left": str(self.left), "right": str(self.right),
                "slope_log2": self.slope_log2, "shift_num": num, "shift_level": level}

    @classmethod
    def from_json(cls, obj: dict) -> Piece:
        return cls(parse_dyadic(obj["left"]), parse_dyadic(obj["right"]), int(obj["slope_log2"]),
                   dyadic(int(obj["shift_num"]), int(obj["shift_level"])))


class PLMap:
    """Increasing piecewise dyadic affine bijection of the circle [0, 1)/0~1.

    Every piece maps into [0, 1] without wrapping; pieces are stored merged,
    so two maps are equal exactly when their piece lists are equal.
    """

    __slots__ = ("pieces", "_lefts")

    def __init__(self, pieces: Iterable[Piece]):
        merged: list[Piece] = []
        for p in sorted(pieces, key=lambda p: p.left):
            if merged and merged[-1].same_law(p) and merged[-1].right == p.left:
                last = merged.pop()
                p = Piece(last.left, p.right, p.slope_log2, p.shift)
            merged.append(p)
        self.pieces = tuple(merged)
        self._lefts = [p.left for p in self.pieces]
        self._validate()

    def _validate(self):
        if not self.pieces or self.pieces[0].left != 0 or self.pieces[-1].right != 1:
            raise ValueError("pieces must tile [0, 1)")
        images = []
        for a, b in zip(self.pieces, self.pieces[1:]):
            if a.right != b.left:
                raise ValueError("pieces must be contiguous")
        for p in self.pieces:
            lo, hi = p.image()
            if not (0 <= lo < hi <= 1):
                raise ValueError("piece image leaves [0, 1]")
            images.append((lo, hi))
        images.sort()
        if images[0][0] != 0 or images[-1][1] != 1 or any(
                x[1] != y[0] for x, y in zip(images, images[1:])):
            raise ValueError("map is not a bijection of the circle")
        # increasing on the circle: images follow the pieces cyclically
        start = min(range(len(self.pieces)), key=lambda i: self.pieces[i].image()[0])
        order = [self.pieces[(start + i) % len(self.pieces)].image() for i in range(len(self.pieces))]
        if order != images:
            raise ValueError("map does not preserve the cyclic order")

    @classmethod
    def identity(cls) -> PLMap:
        return cls([Piece(Fraction(0), Fraction(1), 0, Fraction(0))])

    @classmethod
    def rotation(cls, shift: Fraction) -> PLMap:
        shift = circle(Fraction(shift))
        if shift == 0:
            return cls.identity()
        return cls([Piece(Fraction(0), 1 - shift, 0, shift),
                    Piece(1 - shift, Fraction(1), 0, shift - 1)])

    @classmethod
    def from_intervals(cls, pairs: Sequence[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]) -> PLMap:
        """Build from (source interval, target interval) pairs mapped affinely."""
        pieces = []
        for (a, b), (c, d) in pairs:
            ratio = Fraction(d - c) / Fraction(b - a)
            log = ratio.numerator.bit_length() - ratio.denominator.bit_length()
            if Fraction(2) ** log != ratio:
                raise ValueError("slope is not a power of two")
            pieces.append(Piece(Fraction(a), Fraction(b), log, Fraction(c) - ratio * a))
        return cls(pieces)

    def _piece_index(self, x: Fraction) -> int:
        return bisect_right(self._lefts, x) - 1

    def __call__(self, x: Fraction) -> Fraction:
        return plmap_eval(self, x)

    def breakpoints(self) -> list[Fraction]:
        return list(self._lefts)

    def inverse(self) -> PLMap:
        out = []
        for p in self.pieces:
            lo, hi = p.image()
            s = Fraction(2) ** p.slope_log2
            out.append(Piece(lo, hi, -p.slope_log2, -p.shift / s))
        return PLMap(out)

    def __eq__(self, other):
        return isinstance(other, PLMap) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.pieces]

    @classmethod
    def from_json(cls, obj: list[dict]) -> PLMap:
        return cls(Piece.from_json(p) for p in obj)

    def __repr__(self):
        body = ", ".join(f"[{p.left},{p.right})->[{p.image()[0]},{p.image()[1]})" for p in self.pieces)
        return f"PLMap({body})"


def plmap_eval(f: PLMap, x: Fraction) -> Fraction:
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError("evaluation point must lie in [0, 1)")
    y = f.pieces[f._piece_index(x)](x)
    return circle(y)


def plmap_compose(f: PLMap, g: PLMap) -> PLMap:
    """The map x -> f(g(x))."""
    pieces = []
    for gp in g.pieces:
        lo, hi = gp.image()
        cuts = sorted({lo, hi} | {b for b in f._lefts if lo < b < hi})
        inv_slope = Fraction(2) ** -gp.slope_log2
        for a, b in zip(cuts, cuts[1:]):
            fp = f.pieces[f._piece_index(a)]
            src_a = (a - gp.shift) * inv_slope
            src_b = (b - gp.shift) * inv_slope
            slope = gp.slope_log2 + fp.slope_log2
            shift = fp.slope() * gp.shift + fp.shift
            pieces.append(Piece(src_a, src_b, slope, shift))
    return PLMap(pieces)


def one_sided_log_slopes(f: PLMap, x: Fraction) -> tuple[int, int, int]:
    """(log2 f'_l(x), log2 f'_r(x), jump); the left slope at 0 is read at 1-."""
    x = Fraction(x)
    i = f._piece_index(x)
    right = f.pieces[i].slope_log2
    if f.pieces[i].left == x:
        left = f.pieces[i - 1].slope_log2  # i == 0 wraps to the last piece
    else:
        left = right
    return left, right, right - left


def slope_jumps(f: PLMap) -> dict[Fraction, int]:
    """Nonzero jumps of log2 f'_r, keyed by breakpoint."""
    out = {}
    for x in f.breakpoints():
        jump = one_sided_log_slopes(f, x)[2]
        if jump:
            out[x] = jump
    return out
