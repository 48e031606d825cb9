"""The braided Thompson group: half-twists along edges of the decorated tree,
classical Burau matrices, the Thompson section, mixed words and their
Magnus operators, and the abelianised extension cocycle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactalg import ContractViolation, LaurentMatrix, LaurentPoly, ONE, T, ZERO
from .freefox import (AutFInd, FWord, StructuralError, StructuredOperator, autf_compose, inner_automorphism,
                      inner_index, magnus_matrix)
from .thompson import TElement, compose, inverse, second_derivative, special_vertices, vertex_image
from .trees import (V0, WHOLE, Branch, Puncture, ancestors, children, edges_within, is_edge,
                    puncture_ccw_key)

Edge = tuple[Puncture, Puncture]


class InvariantViolation(RuntimeError):
    """An internal invariant failed; the message names it."""


# ---------------------------------------------------------------- half-twists

def _check_edge(e: Edge) -> tuple[Puncture, Puncture]:
    q, q2 = e
    if not is_edge(q, q2):
        raise ValueError(f"{e!r} is not an edge (q, q') with q' a child of q)")
    return q, q2


def crossing_components(e: Edge) -> tuple[list[Branch], list[Puncture]]:
    """Branches whose loops cross the edge, and the (empty) exceptional crossing set.

    Loops leave * in counterclockwise order, rightmost first; the loops that
    cross the edge (q, q') are those of the branches at q that come after q'
    in the counterclockwise order of children of q.
    """
    q, q2 = _check_edge(e)
    kids = children(q)
    later = kids[kids.index(q2) + 1:]
    return [Branch.at(c) for c in later], []


def partition_around(points: Iterable[Puncture]) -> tuple[list[Puncture], list[Branch]]:
    """Split the whole puncture set into single points (the given ones and their
    ancestors) and branches containing none of them."""
    marked = set()
    for p in points:
        marked.update(ancestors(p))
    singles, branches = [], []
    stack = list(WHOLE)
    while stack:
        b = stack.pop()
        if b.root in marked:
            root, kids = b.split()
            singles.append(root)
            stack.extend(kids)
        else:
            branches.append(b)
    return singles, branches


def halftwist_aut(e: Edge, exponent: int = 1) -> AutFInd:
    q, q2 = _check_edge(e)
    gq, gq2 = FWord.gen(q), FWord.gen(q2)
    if exponent == 1:
        exc = {q: gq2, q2: gq2.conj(q)}
        lam = gq2 * gq.inverse()
    elif exponent == -1:
        exc = {q2: gq, q: gq.inverse().conj(q2)}
        lam = gq.inverse() * gq2
    else:
        raise ValueError("half-twist exponent must be +1 or -1")
    crossing, _ = crossing_components(e)
    singles, branches = partition_around([q2])
    for p in singles:
        exc.setdefault(p, FWord.gen(p))
    comps = [(b, b, lam if b in crossing else FWord()) for b in branches]
    return AutFInd(exc, comps).canonical()


# ---------------------------------------------------------------- classical Burau

def parse_braid_word(text: str, n: int) -> list[tuple[int, int]]:
    """Parse "s1 s2^-1 s3" into [(1, 1), (2, -1), (3, 1)]."""
    out = []
    for pos, tok in _tokens(text):
        m = re.fullmatch(r"s(\d+)(?:\^(-?1))?", tok)
        if not m:
            raise ValueError(f"bad braid letter {tok!r} at offset {pos}")
        i, e = int(m.group(1)), int(m.group(2) or 1)
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator s{i} out of range for B_{n} at offset {pos}")
        out.append((i, e))
    return out


def _tokens(text: str):
    for m in re.finditer(r"\S+", text):
        yield m.start(), m.group()


def _burau_generator(i: int, e: int, n: int) -> LaurentMatrix:
    """Columns are images: x_i -> (1-t) x_i + t x_{i+1}, x_{i+1} -> x_i (and the inverse)."""
    idx = list(range(1, n + 1))
    entries = {(k, k): ONE for k in idx if k not in (i, i + 1)}
    tinv = LaurentPoly.monomial(1, -1)
    if e == 1:
        entries.update({(i, i): ONE - T, (i + 1, i): T, (i, i + 1): ONE})
    else:
        entries.update({(i + 1, i): ONE, (i, i + 1): tinv, (i + 1, i + 1): ONE - tinv})
    return LaurentMatrix(idx, idx, entries)


def burau_bn(word: Sequence[tuple[int, int]] | str, n: int, reduced: bool = False) -> LaurentMatrix:
    if isinstance(word, str):
        word = parse_braid_word(word, n)
    out = LaurentMatrix.identity(list(range(1, n + 1)))
    for i, e in word:
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator s{i} out of range for B_{n}")
        out = out @ _burau_generator(i, e, n)
    return reduce_burau(out) if reduced else out


def reduce_burau(m: LaurentMatrix) -> LaurentMatrix:
    """Restriction to the span of y_i = x_i - x_{i+1}, written in that basis."""
    n = len(m.rows)
    idx = list(range(1, n))
    entries = {}
    for j in idx:
        col = [m[r, j] - m[r, j + 1] for r in range(1, n + 1)]
        if sum(col, ZERO) != ZERO:
            raise ContractViolation("the sum-zero submodule is not invariant")
        acc = ZERO
        for k in idx:
            acc = acc + col[k - 1]
            if acc:
                entries[(k, j)] = acc
    return LaurentMatrix(idx, idx, entries)


def fibre_strands(n: int, base: str = V0) -> list[Puncture]:
    """Strand i sits at depth n - i on one fibre, so strand i+1 is the parent of strand i."""
    return [(base, n - i) for i in range(1, n + 1)]


def fibre_edge(i: int, n: int, base: str = V0) -> Edge:
    strands = fibre_strands(n, base)
    return strands[i], strands[i - 1]


def fibre_restriction(word: Sequence[tuple[int, int]] | str, n: int, base: str = V0) -> LaurentMatrix:
    """The Magnus operator of the half-twist word, read on the strand punctures."""
    if isinstance(word, str):
        word = parse_braid_word(word, n)
    a = ATElement([("twist", fibre_edge(i, n, base), e) for i, e in word])
    strands = fibre_strands(n, base)
    window = rho(a).window(strands)
    relabel = {p: i + 1 for i, p in enumerate(strands)}
    return LaurentMatrix(list(range(1, n + 1)), list(range(1, n + 1)),
                         {(relabel[r], relabel[c]): v for (r, c), v in window.entries.items()})


# ---------------------------------------------------------------- the section

@dataclass(frozen=True)
class _Hole:
    src: Branch
    dst: Branch


def _section_data(g: TElement):
    """Holes of source and target, source and target puncture sets, fibre depth."""
    sym = g.symbol
    specials = special_vertices(sym.t0)
    jumps = {v: second_derivative(g, v) for v in specials}
    depth = max(abs(j) for j in jumps.values()) + 1
    holes = [_Hole(Branch((s, 0), "full"), Branch((d, 0), "full")) for s, d in sym.pairs]
    for v in specials:
        w = vertex_image(g, v)
        holes.append(_Hole(Branch((v, depth), "fibre"), Branch((w, depth + jumps[v]), "fibre")))
    src_points = [(v, d) for v in specials for d in range(depth)]
    tgt_points = [(w, d) for w in special_vertices(sym.t1)
                  for d in range(_target_depth(w, holes))]
    if len(src_points) != len(tgt_points):
        raise InvariantViolation("section: finite puncture sets differ in size")
    return holes, src_points, tgt_points


def _target_depth(w: str, holes: list[_Hole]) -> int:
    for h in holes:
        if h.dst.kind == "fibre" and h.dst.root[0] == w:
            return h.dst.root[1]
    raise InvariantViolation(f"section: no fibre hole at image vertex {w!r}")


def section_aut(g: TElement) -> AutFInd:
    """Asymptotically rigid lift: rigid on holes, punctures moved across holes."""
    return _section(g)[0]


def _section(g: TElement):
    holes, src_points, tgt_points = _section_data(g)
    src_objs = sorted([("hole", h) for h in holes] + [("pt", p) for p in src_points],
                      key=lambda o: _object_key(o, "src"))
    tgt_objs = sorted([("hole", h) for h in holes] + [("pt", p) for p in tgt_points],
                      key=lambda o: _object_key(o, "dst"))
    first = next(o for o in src_objs if o[0] == "hole")
    i0 = src_objs.index(first)
    j0 = tgt_objs.index(first)
    seq = src_objs[i0:] + src_objs[:i0]
    target = tgt_objs[j0:] + tgt_objs[:j0]
    if [o for o in seq if o[0] == "hole"] != [o for o in target if o[0] == "hole"]:
        raise InvariantViolation("section: holes are not in the same cyclic order")
    conj: dict[_Hole, list] = {h: [] for h in holes}
    for j in range(len(seq)):
        want = target[j][0]
        if seq[j][0] == want:
            continue
        k = next(k for k in range(j + 1, len(seq)) if seq[k][0] == want)
        for m in range(k, j, -1):
            left, right = seq[m - 1], seq[m]
            if right[0] == "pt":   # puncture moves left past a hole
                conj[left[1]].append((right[1], 1))
            else:                  # hole moves left past a puncture
                conj[right[1]].append((left[1], -1))
            seq[m - 1], seq[m] = right, left
    relabel = {o[1]: t[1] for o, t in zip(seq, target) if o[0] == "pt"}
    exc = {p: FWord.gen(relabel[p]) for p in src_points}
    comps = [(h.src, h.dst, FWord((relabel[p], e) for p, e in conj[h])) for h in holes]
    aut = AutFInd(exc, comps)
    inv_exc = {relabel[p]: FWord.gen(p) for p in src_points}
    inv_comps = [(h.dst, h.src, FWord(conj[h]).inverse()) for h in holes]
    return aut.canonical(), AutFInd(inv_exc, inv_comps).canonical()


def _object_key(obj, side: str):
    kind, x = obj
    if kind == "pt":
        return puncture_ccw_key(x)
    return (getattr(x, side).ccw_key())


def section_inverse_aut(g: TElement) -> AutFInd:
    return _section(g)[1]


# ---------------------------------------------------------------- mixed words

Letter = tuple  # ("twist", edge, exp) or ("section", TElement, exp)


def _letter_aut(letter: Letter) -> AutFInd:
    kind, x, e = letter
    if kind == "twist":
        return halftwist_aut(x, e)
    if kind == "section":
        return section_aut(x) if e == 1 else section_inverse_aut(x)
    raise ValueError(f"unknown letter kind {kind!r}")


def _letter_projection(letter: Letter) -> TElement:
    kind, x, e = letter
    if kind == "twist":
        return TElement.identity()
    return x if e == 1 else inverse(x)


def _normalize_letter(letter) -> Letter:
    kind, x, e = letter
    if e not in (1, -1):
        raise ValueError("letter exponent must be +1 or -1")
    if kind == "twist":
        q, q2 = x
        edge = ((q[0], int(q[1])), (q2[0], int(q2[1])))
        _check_edge(edge)
        return ("twist", edge, e)
    return (kind, x, e)


class ATElement:
    """A mixed word with its projection to T and its induced automorphism,
    computed at construction.  Equality compares (projection, automorphism)."""

    __slots__ = ("word", "projection", "aut")

    def __init__(self, word: Iterable[Letter] = (), *, _cache=None):
        self.word = tuple(_normalize_letter(l) for l in word)
        if _cache is not None:
            self.projection, self.aut = _cache
            return
        proj, aut = TElement.identity(), AutFInd.identity()
        for letter in self.word:
            proj = compose(proj, _letter_projection(letter))
            aut = autf_compose(aut, _letter_aut(letter))
        self.projection, self.aut = proj, aut

    @classmethod
    def identity(cls) -> ATElement:
        return cls()

    @classmethod
    def twist(cls, e: Edge, exponent: int = 1) -> ATElement:
        return cls([("twist", e, exponent)])

    @classmethod
    def section(cls, g: TElement) -> ATElement:
        return cls([("section", g, 1)])

    def inverse(self) -> ATElement:
        word = [(k, x, -e) for k, x, e in reversed(self.word)]
        return ATElement(word)

    def __mul__(self, other: ATElement) -> ATElement:
        return at_multiply(self, other)

    def __eq__(self, other):
        return isinstance(other, ATElement) and self.projection == other.projection and self.aut == other.aut

    def __hash__(self):
        return hash((self.projection, self.aut))

    def to_json(self) -> list:
        out = []
        for kind, x, e in self.word:
            if kind == "twist":
                out.append({"edge": [list(x[0]), list(x[1])], "exp": e})
            else:
                out.append({"section": x.to_json(), "exp": e})
        return out

    @classmethod
    def from_json(cls, obj) -> ATElement:
        word = []
        for item in obj:
            e = int(item.get("exp", 1))
            if "edge" in item:
                (b1, d1), (b2, d2) = item["edge"]
                word.append(("twist", ((b1, int(d1)), (b2, int(d2))), e))
            elif "section" in item:
                word.append(("section", TElement.from_json(item["section"]), e))
            else:
                raise ValueError("letter must have an 'edge' or a 'section' key")
        return cls(word)

    def __repr__(self):
        return f"ATElement({self.word!r})"


def at_multiply(a: ATElement, b: ATElement) -> ATElement:
    cache = (compose(a.projection, b.projection), autf_compose(a.aut, b.aut))
    return ATElement(a.word + b.word, _cache=cache)


def rho(a: ATElement) -> StructuredOperator:
    return magnus_matrix(a.aut)


# ---------------------------------------------------------------- extension cocycle

def section_defect(g: TElement, h: TElement) -> ATElement:
    """s(g) s(h) s(gh)^-1."""
    return ATElement([("section", g, 1), ("section", h, 1), ("section", compose(g, h), -1)])


BRAID_PART_ANCHOR: Puncture = ("", 0)


def braid_part(alpha: AutFInd) -> AutFInd:
    """conj(c)^-1 o alpha, with c = gamma_root^k, for an automorphism over the identity of T.

    Such an automorphism is conj(c') o beta with beta a braid; any two choices
    of c with the same index differ by an index-zero inner automorphism, whose
    Magnus determinant is 1, so the determinant of the result does not depend
    on the anchor puncture.
    """
    k = inner_index(alpha)
    if k is None:
        raise InvariantViolation("automorphism over the identity is not a braid up to an inner automorphism")
    c = FWord([(BRAID_PART_ANCHOR, 1 if k > 0 else -1)] * abs(k))
    return autf_compose(inner_automorphism(c.inverse()), alpha)


def extension_cocycle(g: TElement, h: TElement) -> int:
    """e with det rho(s(g) s(h) s(gh)^-1) = (-t)^e."""
    d = section_defect(g, h)
    if not d.projection.is_identity():
        raise InvariantViolation("section defect does not project to the identity")
    det = magnus_matrix(braid_part(d.aut)).determinant()
    mono = det.as_monomial()
    if mono is None:
        raise InvariantViolation(f"defect determinant {det} is not a monomial")
    sign, k = mono
    if sign != (-1) ** k:
        raise InvariantViolation(f"defect determinant {det} is not a power of -t")
    return k


# ---------------------------------------------------------------- relation suites

def edge_pairs(radius: int) -> list[tuple[Edge, Edge]]:
    edges = edges_within(radius)
    return [(e, f) for i, e in enumerate(edges) for f in edges[i + 1:]]


def relation_kind(e: Edge, f: Edge) -> str:
    shared = set(e) & set(f)
    if len(shared) == 1:
        return "braid"
    if not shared:
        return "commute"
    return "equal"


def check_relation(e: Edge, f: Edge, operators: bool = True) -> bool:
    """Braid relation for adjacent edges, commutation for disjoint ones."""
    a, b = halftwist_aut(e), halftwist_aut(f)
    kind = relation_kind(e, f)
    if kind == "braid":
        lhs = autf_compose(a, autf_compose(b, a))
        rhs = autf_compose(b, autf_compose(a, b))
    elif kind == "commute":
        lhs, rhs = autf_compose(a, b), autf_compose(b, a)
    else:
        return True
    if lhs != rhs:
        return False
    if not operators:
        return True
    ma, mb = magnus_matrix(a), magnus_matrix(b)
    if kind == "braid":
        return ma @ (mb @ ma) == mb @ (ma @ mb)
    return ma @ mb == mb @ ma


__all__ = [
    "InvariantViolation", "StructuralError", "crossing_components", "halftwist_aut", "burau_bn",
    "reduce_burau", "parse_braid_word", "fibre_restriction", "fibre_edge", "section_aut",
    "section_inverse_aut", "braid_part", "ATElement", "at_multiply", "rho", "section_defect", "extension_cocycle",
    "edge_pairs", "relation_kind", "check_relation",
]
