"""Thompson's group T as reduced tree-pair symbols with a cyclic rotation.

A symbol ``(t1, t0, rot)`` sends leaf i of ``t0`` onto leaf (i + rot) mod k of
``t1``.  Internally a symbol is the list of (source leaf, target leaf)
address pairs, which makes expansion and composition direct.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .dyadic import PLMap, one_sided_log_slopes, plmap_eval
from .trees import BinTree, V0, address_interval, common_refinement, label_vertex, vertex_label


class Symbol:
    """A (possibly unreduced) symbol of an element of T."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: Sequence[tuple[str, str]]):
        pairs = tuple(sorted(pairs))
        BinTree([s for s, _ in pairs])
        dsts = sorted(d for _, d in pairs)
        BinTree(dsts)
        # the leaf bijection must be a cyclic shift
        k = len(pairs)
        rot = dsts.index(pairs[0][1])
        for i, (_, d) in enumerate(pairs):
            if dsts[(i + rot) % k] != d:
                raise ValueError("leaf bijection is not cyclic")
        self.pairs = pairs

    @classmethod
    def from_trees(cls, t1: BinTree, t0: BinTree, rot: int) -> Symbol:
        k = len(t0)
        if len(t1) != k:
            raise ValueError("trees must have the same number of leaves")
        if not 0 <= rot < k:
            raise ValueError("rotation out of range")
        return cls([(t0.leaves_[i], t1.leaves_[(i + rot) % k]) for i in range(k)])

    @property
    def t0(self) -> BinTree:
        return BinTree([s for s, _ in self.pairs])

    @property
    def t1(self) -> BinTree:
        return BinTree([d for _, d in self.pairs])

    @property
    def rot(self) -> int:
        return self.t1.leaves_.index(self.pairs[0][1])

    def __len__(self):
        return len(self.pairs)

    def expand_source(self, fine: BinTree) -> Symbol:
        """Equivalent symbol whose source tree is ``fine`` (a refinement of t0)."""
        src_of = {s: d for s, d in self.pairs}
        out = []
        for w in fine.leaves_:
            s = next(w[:i] for i in range(len(w) + 1) if w[:i] in src_of)
            out.append((w, src_of[s] + w[len(s):]))
        return Symbol(out)

    def expand_target(self, fine: BinTree) -> Symbol:
        """Equivalent symbol whose target tree is ``fine`` (a refinement of t1)."""
        dst_of = {d: s for s, d in self.pairs}
        out = []
        for w in fine.leaves_:
            d = next(w[:i] for i in range(len(w) + 1) if w[:i] in dst_of)
            out.append((dst_of[d] + w[len(d):], w))
        return Symbol(out)

    def to_json(self) -> dict:
        return {"t1": self.t1.to_bitstring(), "t0": self.t0.to_bitstring(), "rot": self.rot}

    @classmethod
    def from_json(cls, obj) -> Symbol:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_trees(BinTree.from_bitstring(obj["t1"]), BinTree.from_bitstring(obj["t0"]),
                              int(obj["rot"]))

    def __eq__(self, other):
        return isinstance(other, Symbol) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        d = self.to_json()
        return f"Symbol(t1={d['t1']}, t0={d['t0']}, rot={d['rot']})"


def reduce(s: Symbol) -> TElement:
    """Cancel caret pairs until none is left."""
    pairs = dict(s.pairs)
    changed = True
    while changed and len(pairs) > 2:
        changed = False
        for src in sorted(pairs):
            if not src.endswith("L"):
                continue
            stem = src[:-1]
            sib = stem + "R"
            if sib not in pairs:
                continue
            d_left, d_right = pairs[src], pairs[sib]
            if d_left.endswith("L") and d_right == d_left[:-1] + "R":
                del pairs[src], pairs[sib]
                pairs[stem] = d_left[:-1]
                changed = True
                break
    return TElement(Symbol(pairs.items()))


class TElement:
    """An element of T held as a reduced symbol.  Equality is germ equality."""

    __slots__ = ("symbol", "_plmap")

    def __init__(self, symbol: Symbol):
        self.symbol = symbol
        self._plmap = None

    @classmethod
    def identity(cls) -> TElement:
        return cls(Symbol([("L", "L"), ("R", "R")]))

    @classmethod
    def from_trees(cls, t1: BinTree, t0: BinTree, rot: int) -> TElement:
        return reduce(Symbol.from_trees(t1, t0, rot))

    @classmethod
    def rotation(cls, k: int) -> TElement:
        """The order-k rotation (right vine of k leaves, rot 1)."""
        vine = BinTree.right_vine(k)
        return cls.from_trees(vine, vine, 1)

    @classmethod
    def from_json(cls, obj) -> TElement:
        return reduce(Symbol.from_json(obj))

    def to_json(self) -> dict:
        return self.symbol.to_json()

    def is_identity(self) -> bool:
        return self == TElement.identity()

    def in_F(self) -> bool:
        return self.symbol.rot == 0

    def __eq__(self, other):
        return isinstance(other, TElement) and self.symbol == other.symbol

    def __hash__(self):
        return hash(self.symbol)

    def __mul__(self, other: TElement) -> TElement:
        return compose(self, other)

    def __repr__(self):
        return f"TElement({self.symbol!r})"


THREE_PIECE_EXAMPLE = TElement.from_trees(BinTree.left_vine(3), BinTree.right_vine(3), 1)


def _as_symbol(g) -> Symbol:
    return g.symbol if isinstance(g, TElement) else g


def compose_symbols(g, h) -> Symbol:
    """Unreduced symbol of g o h (apply h first)."""
    gs, hs = _as_symbol(g), _as_symbol(h)
    common, _, _ = common_refinement(hs.t1, gs.t0)
    he = hs.expand_target(common)
    ge = gs.expand_source(common)
    g_of = dict(ge.pairs)
    return Symbol([(s, g_of[d]) for s, d in he.pairs])


def compose(g: TElement, h: TElement) -> TElement:
    return reduce(compose_symbols(g, h))


def inverse(g: TElement) -> TElement:
    return TElement(Symbol([(d, s) for s, d in g.symbol.pairs]))


def power(g: TElement, n: int) -> TElement:
    if n < 0:
        return power(inverse(g), -n)
    out = TElement.identity()
    for _ in range(n):
        out = compose(g, out)
    return out


def to_plmap(g) -> PLMap:
    """The piecewise affine circle map sending source leaves onto target leaves."""
    if isinstance(g, TElement):
        if g._plmap is None:
            g._plmap = _symbol_plmap(g.symbol)
        return g._plmap
    return _symbol_plmap(g)


def _symbol_plmap(s: Symbol) -> PLMap:
    pairs = []
    for src, dst in s.pairs:
        a, b = address_interval(src), address_interval(dst)
        pairs.append(((a.left, a.right), (b.left, b.right)))
    return PLMap.from_intervals(pairs)


def evaluate(g, x: Fraction) -> Fraction:
    return plmap_eval(to_plmap(g), x)


def second_derivative_support(g) -> dict[str, int]:
    """g''(v): the jump of log2 g'_r at the label of v, where nonzero."""
    f = to_plmap(g)
    out = {}
    for x in f.breakpoints():
        jump = one_sided_log_slopes(f, x)[2]
        if jump:
            out[label_vertex(x)] = jump
    return out


def second_derivative(g, v: str) -> int:
    return one_sided_log_slopes(to_plmap(g), vertex_label(v))[2]


def vertex_image(g, v: str) -> str:
    return label_vertex(evaluate(g, vertex_label(v)))


def special_vertices(tree: BinTree) -> list[str]:
    """v0 and the internal vertices: the vertices labelled by left endpoints of leaves."""
    return [V0] + sorted(tree.internal())
