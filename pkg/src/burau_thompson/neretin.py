"""Spheromorphisms of the trivalent tree with finite-depth component data,
their lifts to piecewise tree automorphisms, and the Z/2 signature cocycle.

Vertices of the 3-regular tree are addresses: ``""`` is the base vertex, its
neighbours are ``"0"``, ``"1"``, ``"2"`` and every other vertex ``v`` has the
children ``v + "0"`` and ``v + "1"``.  The global vertex order is breadth first
from the base, left to right: key (length, address).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .exactalg import ContractViolation, LaurentMatrix, ONE


def vertex_key(v: str) -> tuple[int, str]:
    return (len(v), v)


def tree_children(v: str) -> list[str]:
    return ["0", "1", "2"] if v == "" else [v + "0", v + "1"]


def ball(radius: int) -> list[str]:
    out, frontier = [""], [""]
    for _ in range(radius):
        frontier = [c for v in frontier for c in tree_children(v)]
        out.extend(frontier)
    return out


def is_subtree(vertices: Iterable[str]) -> bool:
    vs = set(vertices)
    return "" in vs and all(v[:-1] in vs for v in vs if v)


def component_roots(subtree: Iterable[str]) -> list[str]:
    """Roots of the components of the complement, in vertex order."""
    vs = set(subtree)
    return sorted((c for v in vs for c in tree_children(v) if c not in vs), key=vertex_key)


def _flip(bit: str) -> str:
    return "1" if bit == "0" else "0"


@lru_cache(maxsize=1 << 16)
def apply_swaps(swaps: frozenset[str], rel: str) -> str:
    """Image of a relative address under the rooted automorphism with these swap nodes."""
    if not swaps:
        return rel
    out = []
    for i, bit in enumerate(rel):
        out.append(_flip(bit) if rel[:i] in swaps else bit)
    return "".join(out)


def invert_swaps(swaps: frozenset[str]) -> frozenset[str]:
    return frozenset(apply_swaps(swaps, w) for w in swaps)


@dataclass(frozen=True)
class Spheromorphism:
    """Germ data: finite subtrees t0 -> t1, component bijection, component swap tables."""

    t0: frozenset
    t1: frozenset
    beta: Mapping[str, str]
    comps: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        if not (is_subtree(self.t0) and is_subtree(self.t1)):
            raise ValueError("t0 and t1 must be finite subtrees containing the base vertex")
        src, dst = component_roots(self.t0), component_roots(self.t1)
        if set(self.beta) != set(src) or sorted(self.beta.values()) != sorted(dst):
            raise ValueError("beta must biject the component roots of t0 and t1")

    @classmethod
    def identity(cls) -> Spheromorphism:
        base = frozenset({""})
        return cls(base, base, {r: r for r in component_roots(base)}, {})

    def swaps(self, root: str) -> frozenset:
        return self.comps.get(root, frozenset())

    def depth(self) -> int:
        return max((len(w) + 1 for s in self.comps.values() for w in s), default=0)

    def radius(self) -> int:
        return max(len(v) for v in self.t0 | self.t1)

    def source_root(self, v: str) -> str:
        for i in range(len(v) + 1):
            if v[:i] not in self.t0:
                return v[:i]
        raise ValueError(f"vertex {v!r} lies in the removed subtree")

    def apply(self, v: str) -> str:
        r = self.source_root(v)
        return self.beta[r] + apply_swaps(self.swaps(r), v[len(r):])

    def inverse(self) -> Spheromorphism:
        beta = {d: s for s, d in self.beta.items()}
        comps = {self.beta[r]: invert_swaps(s) for r, s in self.comps.items() if s}
        return Spheromorphism(self.t1, self.t0, beta, comps)

    def to_json(self) -> dict:
        return {"t0": sorted(self.t0, key=vertex_key), "t1": sorted(self.t1, key=vertex_key),
                "beta": sorted([s, d] for s, d in self.beta.items()),
                "comps": {r: sorted(s) for r, s in sorted(self.comps.items()) if s}}

    @classmethod
    def from_json(cls, obj: Mapping) -> Spheromorphism:
        return cls(frozenset(obj["t0"]), frozenset(obj["t1"]), {s: d for s, d in obj["beta"]},
                   {r: frozenset(s) for r, s in obj.get("comps", {}).items()})


def _preimage_region(h: Spheromorphism, region: Iterable[str]) -> set[str]:
    inv = h.inverse()
    return {inv.apply(a) for a in region}


def sphero_compose(g: Spheromorphism, h: Spheromorphism) -> Spheromorphism:
    """The germ of g o h (apply h first)."""
    middle = set(h.t1) | set(g.t0)
    t0 = set(h.t0) | _preimage_region(h, middle - set(h.t1))
    t1 = set(g.t1) | {g.apply(a) for a in middle - set(g.t0)}
    depth = max(g.depth(), h.depth()) + 1
    beta, comps = {}, {}
    for c in component_roots(t0):
        image = g.apply(h.apply(c))
        beta[c] = image
        swaps = set()
        frontier = [""]
        for _ in range(depth):
            nxt = []
            for w in frontier:
                if g.apply(h.apply(c + w + "0")) == g.apply(h.apply(c + w)) + "1":
                    swaps.add(w)
                nxt += [w + "0", w + "1"]
            frontier = nxt
        if swaps:
            comps[c] = frozenset(swaps)
    return Spheromorphism(frozenset(t0), frozenset(t1), beta, comps)


def germ_equal(g: Spheromorphism, h: Spheromorphism) -> bool:
    """Equality of germs: agreement on a full sphere beyond all finite data."""
    r = max(g.radius(), h.radius()) + 1
    depth = max(g.depth(), h.depth()) + 1
    for v in ball(r + depth):
        if len(v) >= r and g.apply(v) != h.apply(v):
            return False
    return True


def fredholm_index(removed_source: Iterable[str], removed_target: Iterable[str]) -> int:
    """card Vert(removed source) - card Vert(removed target)."""
    return len(set(removed_source)) - len(set(removed_target))


@dataclass(frozen=True)
class PAutElement:
    """A vertex bijection: the spheromorphism outside t0, a filling t0 -> t1,
    optionally precomposed with a finitely supported permutation."""

    sphero: Spheromorphism
    filling: Mapping[str, str]
    twist: Mapping[str, str] = field(default_factory=dict)

    def apply(self, v: str) -> str:
        v = self.twist.get(v, v)
        if v in self.filling:
            return self.filling[v]
        return self.sphero.apply(v)

    def radius(self) -> int:
        return max([self.sphero.radius()] + [len(v) for v in self.twist])

    def inverse(self) -> PAutElement:
        """The inverse bijection, written as twist^-1 applied after the inverse germ."""
        inv = self.sphero.inverse()
        back = {w: u for u, w in self.filling.items()}
        untwist = {w: u for u, w in self.twist.items()}
        return _InversePAut(inv, back, untwist)


class _InversePAut:
    def __init__(self, sphero: Spheromorphism, filling: dict, untwist: dict):
        self.sphero, self.filling, self.untwist = sphero, filling, untwist

    def apply(self, v: str) -> str:
        u = self.filling[v] if v in self.filling else self.sphero.apply(v)
        return self.untwist.get(u, u)


def lift_to_paut(g: Spheromorphism) -> PAutElement:
    """Canonical lift: the removed vertex sets are matched in the global vertex order."""
    if fredholm_index(g.t0, g.t1) != 0:
        raise ContractViolation("only index-zero germs lift")
    src = sorted(g.t0, key=vertex_key)
    dst = sorted(g.t1, key=vertex_key)
    return PAutElement(g, dict(zip(src, dst)))


def perturb(lift: PAutElement, perm: Mapping[str, str]) -> PAutElement:
    """lift o perm for a finitely supported permutation."""
    _check_perm(perm)
    combined = {v: lift.twist.get(perm[v], perm[v]) for v in perm}
    for v, w in lift.twist.items():
        combined.setdefault(v, w)
    return PAutElement(lift.sphero, lift.filling, {v: w for v, w in combined.items() if v != w})


def _check_perm(perm: Mapping[str, str]):
    if set(perm) != set(perm.values()):
        raise ContractViolation("permutation support is not finite and closed")


def permutation_sign(perm: Mapping) -> int:
    _check_perm(perm)
    seen, sign = set(), 1
    for start in perm:
        if start in seen:
            continue
        length, v = 0, start
        while v not in seen:
            seen.add(v)
            v = perm[v]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def defect_permutation(a: PAutElement, b: PAutElement, ab: PAutElement) -> dict[str, str]:
    """The finitely supported permutation a o b o ab^-1, restricted to its support."""
    r = max(a.radius(), b.radius(), ab.radius())
    depth = max(a.sphero.depth(), b.sphero.depth(), ab.sphero.depth())
    inner = r + depth + 1
    ab_inv = ab.inverse()
    perm = {}
    for v in ball(inner + 1):
        w = a.apply(b.apply(ab_inv.apply(v)))
        if w != v:
            if len(v) > inner:
                raise ContractViolation("defect is not supported inside the inspected ball")
            perm[v] = w
    _check_perm(perm)
    return perm


def signature_cocycle(g: Spheromorphism, h: Spheromorphism,
                      lifts: tuple[PAutElement, PAutElement, PAutElement] | None = None) -> int:
    """Sign of lift(g) o lift(h) o lift(gh)^-1 as an element of Z/2 (0 or 1)."""
    if lifts is None:
        lifts = (lift_to_paut(g), lift_to_paut(h), lift_to_paut(sphero_compose(g, h)))
    perm = defect_permutation(*lifts)
    return 0 if permutation_sign(perm) == 1 else 1


def perm_operator_determinant(perm: Mapping) -> int:
    """Determinant of the permutation operator, computed on the support."""
    _check_perm(perm)
    support = sorted(perm, key=str)
    m = LaurentMatrix(support, support, {(perm[v], v): ONE for v in support})
    d = m.det()
    mono = d.as_monomial() if support else (1, 0)
    if mono is None or mono[1] != 0:
        raise ContractViolation("permutation determinant is not a unit integer")
    return mono[0]


def random_subtree(rng: random.Random, size: int, radius: int) -> frozenset:
    vs = {""}
    while len(vs) < size:
        frontier = [c for v in vs for c in tree_children(v) if c not in vs and len(c) <= radius]
        vs.add(rng.choice(frontier))
    return frozenset(vs)


def random_spheromorphism(rng: random.Random, radius: int = 2, depth: int = 2) -> Spheromorphism:
    """Random germ whose subtrees have radius <= ``radius`` and swap tables depth <= ``depth``."""
    max_size = len(ball(radius))
    size = rng.randint(1, min(max_size, 6))
    t0 = random_subtree(rng, size, radius)
    t1 = random_subtree(rng, size, radius)
    src, dst = component_roots(t0), component_roots(t1)
    rng.shuffle(dst)
    beta = dict(zip(src, dst))
    comps = {}
    for r in src:
        nodes = [w for k in range(depth) for w in _words(k)]
        chosen = frozenset(w for w in nodes if rng.random() < 0.3)
        if chosen:
            comps[r] = chosen
    return Spheromorphism(t0, t1, beta, comps)


def _words(k: int) -> list[str]:
    out = [""]
    for _ in range(k):
        out = [w + c for w in out for c in "01"]
    return out


def random_permutation(rng: random.Random, points: list, size: int) -> dict:
    chosen = rng.sample(points, size)
    shuffled = chosen[:]
    rng.shuffle(shuffled)
    return {a: b for a, b in zip(chosen, shuffled) if a != b}


def random_three_cycle(rng: random.Random, points: list) -> dict:
    a, b, c = rng.sample(points, 3)
    return {a: b, b: c, c: a}
