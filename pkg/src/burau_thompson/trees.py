"""Planar rooted binary trees, vertex addresses, and the decorated tree of punctures.

A finite binary tree is stored as the left-to-right tuple of its leaf
addresses, each a string over ``L``/``R`` read from the root.  Preorder
bitstrings ('1' internal, '0' leaf) are the exchange format.

Punctures are pairs ``(base, depth)``: ``base`` is a vertex address of the
rooted dyadic tree or ``"v0"`` (the far end of the extra edge), and ``depth``
is the position along the fibre hanging at that vertex.  The base point ``*``
sits in the middle of the extra edge joining ``v0`` to the root ``""``.

Fixed planar embedding: around a depth-0 puncture of a tree vertex the
counterclockwise order is (edge toward *, left child, fibre edge, right child), so
the fibre of a vertex sits between its two subtrees, like its dyadic label.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .dyadic import DyadicInterval, as_num_level

V0 = "v0"
STAR = "*"
Puncture = tuple[str, int]


# ---------------------------------------------------------------- binary trees

class BinTree:
    """Finite planar rooted binary tree with at least one caret."""

    __slots__ = ("leaves_",)

    def __init__(self, leaves: Sequence[str]):
        leaves = tuple(sorted(leaves))
        if len(leaves) < 2:
            raise ValueError("a tree has at least one caret")
        _check_leaf_set(leaves)
        self.leaves_ = leaves

    @classmethod
    def caret(cls) -> BinTree:
        return cls(("L", "R"))

    @classmethod
    def right_vine(cls, k: int) -> BinTree:
        if k < 2:
            raise ValueError("a vine has at least two leaves")
        return cls(tuple("R" * i + "L" for i in range(k - 1)) + ("R" * (k - 1),))

    @classmethod
    def left_vine(cls, k: int) -> BinTree:
        if k < 2:
            raise ValueError("a vine has at least two leaves")
        return cls(("L" * (k - 1),) + tuple("L" * i + "R" for i in range(k - 2, -1, -1)))

    @classmethod
    def balanced(cls, depth: int) -> BinTree:
        out = [""]
        for _ in range(depth):
            out = [w + c for w in out for c in "LR"]
        return cls(out)

    @classmethod
    def from_internal(cls, internal: set[str]) -> BinTree:
        """The tree whose internal vertices are ``internal`` (prefix closed, contains '')."""
        leaves = [w + c for w in internal for c in "LR" if w + c not in internal]
        return cls(leaves)

    @classmethod
    def from_bitstring(cls, bits: str) -> BinTree:
        leaves: list[str] = []
        pos = 0

        def walk(addr: str):
            nonlocal pos
            if pos >= len(bits):
                raise ValueError(f"truncated tree bitstring at offset {pos}")
            ch = bits[pos]
            pos += 1
            if ch == "0":
                leaves.append(addr)
            elif ch == "1":
                walk(addr + "L")
                walk(addr + "R")
            else:
                raise ValueError(f"bad character {ch!r} at offset {pos - 1}")

        walk("")
        if pos != len(bits):
            raise ValueError(f"trailing characters at offset {pos}")
        if leaves == [""]:
            raise ValueError("the leaf-only tree is excluded")
        return cls(leaves)

    def to_bitstring(self) -> str:
        internal = self.internal()
        out = []

        def walk(addr: str):
            if addr in internal:
                out.append("1")
                walk(addr + "L")
                walk(addr + "R")
            else:
                out.append("0")

        walk("")
        return "".join(out)

    def internal(self) -> set[str]:
        return {leaf[:i] for leaf in self.leaves_ for i in range(len(leaf))}

    def __len__(self):
        return len(self.leaves_)

    def __eq__(self, other):
        return isinstance(other, BinTree) and self.leaves_ == other.leaves_

    def __hash__(self):
        return hash(self.leaves_)

    def __repr__(self):
        return f"BinTree('{self.to_bitstring()}')"


def _check_leaf_set(leaves: Sequence[str]):
    total = Fraction(0)
    for w in leaves:
        if set(w) - {"L", "R"}:
            raise ValueError(f"bad address {w!r}")
        total += Fraction(1, 2 ** len(w))
    if total != 1:
        raise ValueError("leaves do not tile the tree")
    for a, b in zip(leaves, leaves[1:]):
        if b.startswith(a):
            raise ValueError("a leaf lies below another leaf")


def address_interval(addr: str) -> DyadicInterval:
    k = int(addr.replace("L", "0").replace("R", "1") or "0", 2)
    return DyadicInterval(k, len(addr))


def interval_address(iv: DyadicInterval) -> str:
    if iv.n == 0:
        return ""
    return format(iv.k, f"0{iv.n}b").replace("0", "L").replace("1", "R")


def leaves(tree: BinTree) -> list[tuple[str, DyadicInterval]]:
    """Leaves leftmost first, with their dyadic intervals."""
    return [(w, address_interval(w)) for w in tree.leaves_]


def common_refinement(a: BinTree, b: BinTree) -> tuple[BinTree, dict[str, str], dict[str, str]]:
    """Coarsest common refinement and the leaf maps into ``a`` and ``b``."""
    r = BinTree.from_internal(a.internal() | b.internal())
    return r, _embed(r, a), _embed(r, b)


def _embed(fine: BinTree, coarse: BinTree) -> dict[str, str]:
    coarse_set = set(coarse.leaves_)
    out = {}
    for w in fine.leaves_:
        out[w] = next(w[:i] for i in range(len(w) + 1) if w[:i] in coarse_set)
    return out


# ----------------------------------------------------------- vertex labelling

def vertex_label(addr: str) -> Fraction:
    """Dyadic label of a vertex: the midpoint of its interval; v0 is 0."""
    if addr == V0:
        return Fraction(0)
    return address_interval(addr).midpoint()


def label_vertex(x: Fraction) -> str:
    """Inverse of ``vertex_label`` on dyadic rationals of [0, 1)."""
    x = Fraction(x)
    if x == 0:
        return V0
    if not 0 < x < 1:
        raise ValueError("label must lie in [0, 1)")
    k, n = as_num_level(x)
    return interval_address(DyadicInterval((k - 1) // 2, n - 1))


# ------------------------------------------------------ decorated puncture tree

def parent(p: Puncture) -> Puncture | None:
    """Neighbour of ``p`` toward the base point (None for v0 and the root)."""
    base, depth = p
    if depth > 0:
        return (base, depth - 1)
    if base in (V0, ""):
        return None
    return (base[:-1], 0)


def children(p: Puncture) -> list[Puncture]:
    """Neighbours away from the base point, in counterclockwise order."""
    base, depth = p
    if depth > 0 or base == V0:
        return [(base, depth + 1)]
    return [(base + "L", 0), (base, 1), (base + "R", 0)]


def ancestors(p: Puncture) -> list[Puncture]:
    """Punctures on the geodesic from * to p, in order, ending with p."""
    out = []
    cur: Puncture | None = p
    while cur is not None:
        out.append(cur)
        cur = parent(cur)
    return out[::-1]


def geodesic(p: Puncture) -> list[tuple]:
    """Edges from * to p; the first is the half-edge from * along the extra edge."""
    path = ancestors(p)
    edges = [(STAR, path[0])]
    edges.extend(zip(path, path[1:]))
    return edges


def geodesic_length(p: Puncture) -> int:
    base, depth = p
    if base == V0:
        return 1 + depth
    return 1 + len(base) + depth


def planar_order_around(p: Puncture) -> list[tuple]:
    """Incident edges of p in counterclockwise order, starting toward *."""
    par = parent(p)
    toward = (par, p) if par is not None else ((V0, 0), p) if p == ("", 0) else (("", 0), p)
    return [toward] + [(p, c) for c in children(p)]


def puncture_order_key(p: Puncture) -> tuple:
    """Deterministic basis order: (geodesic length, address, depth)."""
    return (geodesic_length(p), p[0], p[1])


def puncture_ccw_key(p: Puncture) -> tuple:
    """Position of the regular path from * to p in the counterclockwise order at *.

    Paths are ordered rightmost first: descendants precede their ancestors and
    branches leave a vertex in counterclockwise order (left, fibre, right).
    """
    base, depth = p
    if base == V0:
        return (1,) + (1,) * depth + (3,)
    steps = tuple(0 if c == "L" else 2 for c in base)
    return (0,) + steps + (1,) * depth + (3,)


def is_edge(q: Puncture, q2: Puncture) -> bool:
    return parent(q2) == q


def punctures_within(radius: int) -> list[Puncture]:
    """All punctures at geodesic length <= radius, in basis order."""
    out: list[Puncture] = []
    frontier = [(V0, 0), ("", 0)]
    while frontier:
        nxt = []
        for p in frontier:
            if geodesic_length(p) <= radius:
                out.append(p)
                nxt.extend(children(p))
        frontier = nxt
    return sorted(out, key=puncture_order_key)


def edges_within(radius: int) -> list[tuple[Puncture, Puncture]]:
    """Edges (q, q') with q' a child of q and q' within the radius."""
    return [(parent(p), p) for p in punctures_within(radius) if parent(p) is not None]


def tree_dot(radius: int) -> str:
    """Graphviz rendering of the punctures within a geodesic radius."""
    pts = punctures_within(radius)
    name = {p: f'"{p[0] or "root"},{p[1]}"' for p in pts}
    lines = ["graph Tt {", '  "*" [shape=point];']
    for p in pts:
        style = "dashed" if p[1] > 0 else "solid"
        par = parent(p)
        if par is None:
            lines.append(f'  "*" -- {name[p]};')
        else:
            lines.append(f"  {name[par]} -- {name[p]} [style={style}];")
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------- branches

@dataclass(frozen=True, order=True)
class Branch:
    """All punctures at or beyond ``root`` (away from *).

    ``kind`` is "full" for a depth-0 puncture of a tree vertex (its fibre and
    both child subtrees) or "fibre" for a ray (base, d), (base, d+1), ...
    """

    root: Puncture
    kind: str

    def __post_init__(self):
        base, depth = self.root
        if self.kind == "full" and (base == V0 or depth != 0):
            raise ValueError("full branches start at a depth-0 tree vertex")
        if self.kind == "fibre" and depth == 0 and base != V0:
            raise ValueError("a fibre branch at a tree vertex starts at depth >= 1")
        if self.kind not in ("full", "fibre"):
            raise ValueError(f"unknown branch kind {self.kind!r}")

    @classmethod
    def at(cls, p: Puncture) -> Branch:
        """The branch consisting of p and everything beyond it."""
        base, depth = p
        return cls(p, "full" if depth == 0 and base != V0 else "fibre")

    def contains(self, p: Puncture) -> bool:
        rb, rd = self.root
        b, d = p
        if self.kind == "fibre":
            return b == rb and d >= rd
        return b != V0 and b.startswith(rb)

    def contains_branch(self, other: Branch) -> bool:
        if not self.contains(other.root):
            return False
        if self.kind == "fibre":
            return other.kind == "fibre"
        return True

    def split(self) -> tuple[Puncture, list[Branch]]:
        return self.root, [Branch.at(c) for c in children(self.root)]

    def relative(self, p: Puncture) -> tuple[str, int]:
        """Position of p inside the branch: (address suffix, depth offset)."""
        rb, rd = self.root
        if self.kind == "fibre":
            return "", p[1] - rd
        return p[0][len(rb):], p[1]

    def at_relative(self, rel: tuple[str, int]) -> Puncture:
        rb, rd = self.root
        if self.kind == "fibre":
            return (rb, rd + rel[1])
        return (rb + rel[0], rel[1])

    def transport(self, p: Puncture, target: Branch) -> Puncture:
        """Image of p under the rigid map of this branch onto ``target``."""
        if target.kind != self.kind:
            raise ValueError("rigid maps preserve the branch kind")
        return target.at_relative(self.relative(p))

    def transport_branch(self, sub: Branch, target: Branch) -> Branch:
        return Branch(self.transport(sub.root, target), sub.kind)

    def ccw_key(self) -> tuple:
        return puncture_ccw_key(self.root)

    def to_json(self) -> list:
        return [list(self.root), self.kind]

    @classmethod
    def from_json(cls, obj) -> Branch:
        (base, depth), kind = obj
        return cls((base, int(depth)), kind)


WHOLE = (Branch(("", 0), "full"), Branch((V0, 0), "fibre"))


def branch_parent(b: Branch) -> Branch | None:
    par = parent(b.root)
    return None if par is None else Branch.at(par)


def iter_branch(b: Branch, radius: int) -> Iterator[Puncture]:
    """Punctures of the branch within a geodesic radius of *."""
    stack = [b.root]
    while stack:
        p = stack.pop()
        if geodesic_length(p) <= radius:
            yield p
            stack.extend(children(p))
