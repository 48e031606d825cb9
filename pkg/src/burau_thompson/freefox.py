"""Free group on the punctures, index-preserving automorphisms in cofinitely
rigid form, Fox derivatives, and the Magnus matrix as a structured operator.

Both automorphisms and operators are "partition maps": a finite set of
exceptional punctures with explicit data, plus finitely many rigid components,
each a branch carried isometrically onto another branch with constant data.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .exactalg import ContractViolation, LaurentMatrix, LaurentPoly, Monomial, ONE, ZERO, T, correction_determinant
from .trees import WHOLE, Branch, Puncture, children, iter_branch, parent, puncture_order_key


class StructuralError(ValueError):
    """A map cannot be put into exceptional-plus-rigid form."""


# ------------------------------------------------------------------ free words

class FWord:
    """A freely reduced word in the loops around punctures."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[Puncture, int]] = ()):
        out: list[tuple[Puncture, int]] = []
        for p, e in letters:
            if e not in (1, -1):
                raise ValueError("exponents are +1 or -1")
            if out and out[-1][0] == p and out[-1][1] == -e:
                out.pop()
            else:
                out.append((p, e))
        self.letters = tuple(out)

    @classmethod
    def gen(cls, p: Puncture, e: int = 1) -> FWord:
        return cls([(p, e)])

    def __mul__(self, other: FWord) -> FWord:
        return FWord(self.letters + other.letters)

    def inverse(self) -> FWord:
        return FWord((p, -e) for p, e in reversed(self.letters))

    def conj(self, p: Puncture) -> FWord:
        """self * gamma_p * self^-1."""
        return FWord(self.letters + ((p, 1),) + self.inverse().letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, FWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        if not self.letters:
            return "FWord(1)"
        return "FWord(" + " ".join(f"g{p[0] or 'root'},{p[1]}^{e}" for p, e in self.letters) + ")"

    def to_json(self) -> list:
        return [[[p[0], p[1]], e] for p, e in self.letters]

    @classmethod
    def from_json(cls, obj) -> FWord:
        return cls(((b, int(d)), int(e)) for (b, d), e in obj)


def word_index(w: FWord) -> int:
    return sum(e for _, e in w.letters)


def fox_vector(w: FWord) -> dict[Puncture, LaurentPoly]:
    """All nonzero Fox derivatives of w, every generator specialised to t."""
    out: dict[Puncture, LaurentPoly] = {}
    k = 0
    for p, e in w.letters:
        term = LaurentPoly.monomial(1, k) if e == 1 else LaurentPoly.monomial(-1, k - 1)
        out[p] = out.get(p, ZERO) + term
        k += e
    return {p: v for p, v in out.items() if v}


def fox_derivative(w: FWord, q: Puncture) -> LaurentPoly:
    return fox_vector(w).get(q, ZERO)


# --------------------------------------------------------- partition map engine

class PartitionMap:
    """Exceptional data on finitely many punctures plus rigid components.

    Subclasses say how to build the value at a puncture of a component
    (``component_value``), how to push a value through another map
    (``push``) and how component data compose (``compose_data``).
    """

    __slots__ = ("exceptional", "components", "_by_src")

    def __init__(self, exceptional: Mapping[Puncture, object],
                 components: Iterable[tuple[Branch, Branch, object]]):
        self.exceptional = dict(exceptional)
        self.components = tuple(sorted(components, key=lambda c: (puncture_order_key(c[0].root), c[0].kind)))
        self._by_src = {c[0]: c for c in self.components}
        for src, dst, _ in self.components:
            if src.kind != dst.kind:
                raise StructuralError("a rigid component must preserve the branch kind")

    # subclass hooks
    def component_value(self, data, p: Puncture):
        raise NotImplementedError

    def push(self, value):
        """The value obtained by applying self to a value of the same kind."""
        raise NotImplementedError

    def compose_data(self, outer_data, inner_data):
        """Data of (outer o inner) on a component: inner data pushed by self, then outer."""
        raise NotImplementedError

    # shared machinery
    def component_of(self, p: Puncture) -> tuple[Branch, Branch, object] | None:
        for c in self.components:
            if c[0].contains(p):
                return c
        return None

    def value(self, p: Puncture):
        if p in self.exceptional:
            return self.exceptional[p]
        c = self.component_of(p)
        if c is None:
            raise StructuralError(f"puncture {p!r} is not covered")
        src, dst, data = c
        return self.component_value(data, src.transport(p, dst))

    def covering_component(self, b: Branch):
        for c in self.components:
            if c[0].contains_branch(b):
                return c
        return None

    def _compose_parts(self, inner: PartitionMap):
        """Exceptional dict and components of self o inner."""
        exc = {p: self.push(v) for p, v in inner.exceptional.items()}
        comps = []
        work = [(src, dst, data) for src, dst, data in inner.components]
        while work:
            src, dst, data = work.pop()
            cover = self.covering_component(dst)
            if cover is not None:
                a_src, a_dst, a_data = cover
                comps.append((src, a_src.transport_branch(dst, a_dst), self.compose_data(a_data, data)))
                continue
            p, src_children = src.split()
            q, dst_children = dst.split()
            exc[p] = self.push(inner.component_value(data, q))
            for s, d in zip(src_children, dst_children):
                work.append((s, d, data))
        return exc, comps

    def _canonical_parts(self):
        exc = dict(self.exceptional)
        comps = {c[0]: c for c in self.components}
        changed = True
        while changed:
            changed = False
            for p in sorted(exc, key=puncture_order_key, reverse=True):
                kids = [Branch.at(c) for c in children(p)]
                found = [comps.get(k) for k in kids]
                if any(f is None for f in found):
                    continue
                data = found[0][2]
                if any(f[2] != data for f in found):
                    continue
                first_dst = found[0][1]
                target = parent(first_dst.root)
                if target is None:
                    continue
                whole_src, whole_dst = Branch.at(p), Branch.at(target)
                if whole_src.kind != whole_dst.kind:
                    continue
                expected = [Branch.at(c) for c in children(target)]
                if len(expected) != len(kids) or any(f[1] != e for f, e in zip(found, expected)):
                    continue
                if exc[p] != self.component_value(data, target):
                    continue
                for k in kids:
                    del comps[k]
                del exc[p]
                comps[whole_src] = (whole_src, whole_dst, data)
                changed = True
        return exc, comps.values()

    def canonical_key(self):
        exc, comps = self._canonical_parts()
        return (tuple(sorted(((p, v) for p, v in exc.items()), key=lambda kv: puncture_order_key(kv[0]))),
                tuple(sorted(comps, key=lambda c: (puncture_order_key(c[0].root), c[0].kind))))

    def __eq__(self, other):
        return type(self) is type(other) and self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())


# ---------------------------------------------------------------- automorphisms

class AutFInd(PartitionMap):
    """Index-preserving automorphism: gamma_p -> word on exceptional punctures,
    gamma_p -> lam * gamma_{rigid image of p} * lam^-1 on a component."""

    __slots__ = ()

    @classmethod
    def identity(cls) -> AutFInd:
        return cls({}, [(b, b, FWord()) for b in WHOLE])

    def component_value(self, data: FWord, p: Puncture) -> FWord:
        return data.conj(p)

    def image(self, p: Puncture) -> FWord:
        return self.value(p)

    def push(self, w: FWord) -> FWord:
        return autf_apply(self, w)

    def compose_data(self, outer: FWord, inner: FWord) -> FWord:
        return self.push(inner) * outer

    def canonical(self) -> AutFInd:
        exc, comps = self._canonical_parts()
        return AutFInd(exc, comps)

    def check_index(self):
        for p, w in self.exceptional.items():
            if word_index(w) != 1:
                raise ContractViolation(f"image of gamma_{p} has index {word_index(w)}")

    def to_json(self) -> dict:
        c = self.canonical()
        return {"exceptional": [[[p[0], p[1]], w.to_json()] for p, w in
                                sorted(c.exceptional.items(), key=lambda kv: puncture_order_key(kv[0]))],
                "components": [[s.to_json(), d.to_json(), lam.to_json()] for s, d, lam in c.components]}

    @classmethod
    def from_json(cls, obj) -> AutFInd:
        exc = {(b, int(d)): FWord.from_json(w) for (b, d), w in obj["exceptional"]}
        comps = [(Branch.from_json(s), Branch.from_json(d), FWord.from_json(lam)) for s, d, lam in obj["components"]]
        return cls(exc, comps)

    def __repr__(self):
        return f"AutFInd(exceptional={self.exceptional!r}, components={self.components!r})"


def inner_automorphism(c: FWord) -> AutFInd:
    """gamma_p -> c gamma_p c^-1 for every puncture."""
    return AutFInd({}, [(b, b, c) for b in WHOLE])


def inner_index(alpha: AutFInd) -> int | None:
    """k when alpha is conj(c) o beta with ind c = k and beta rigidly trivial
    (identity components with index-zero conjugators); None otherwise."""
    comps = alpha.canonical().components
    if any(s != d for s, d, _ in comps):
        return None
    indices = {word_index(lam) for _, _, lam in comps}
    return indices.pop() if len(indices) == 1 else None


def autf_apply(alpha: AutFInd, w: FWord) -> FWord:
    letters: list = []
    for p, e in w.letters:
        img = alpha.image(p)
        letters.extend(img.letters if e == 1 else img.inverse().letters)
    return FWord(letters)


def autf_compose(alpha: AutFInd, beta: AutFInd) -> AutFInd:
    """alpha o beta: gamma_q -> alpha(beta(gamma_q))."""
    exc, comps = alpha._compose_parts(beta)
    return AutFInd(exc, comps).canonical()


# ----------------------------------------------------------- structured operators

Vector = tuple  # sorted tuple of (puncture, LaurentPoly) with nonzero entries


def vec(entries: Mapping[Puncture, LaurentPoly]) -> Vector:
    return tuple(sorted(((p, v) for p, v in entries.items() if v), key=lambda kv: puncture_order_key(kv[0])))


def vec_add(*vs: Iterable[tuple[Puncture, LaurentPoly]], scale: Sequence[LaurentPoly] | None = None) -> Vector:
    acc: dict[Puncture, LaurentPoly] = {}
    for i, v in enumerate(vs):
        s = scale[i] if scale is not None else ONE
        for p, c in v:
            acc[p] = acc.get(p, ZERO) + s * c
    return vec(acc)


class StructuredOperator(PartitionMap):
    """Operator on the module with basis x_p (p a puncture), given by columns.

    A component (src, dst, (weight, P)) has columns x_p -> P + weight * x_{rigid image of p};
    exceptional punctures carry explicit column vectors.
    """

    __slots__ = ()

    @classmethod
    def identity(cls) -> StructuredOperator:
        one = Monomial(1, 0)
        return cls({}, [(b, b, (one, ())) for b in WHOLE])

    def component_value(self, data, p: Puncture) -> Vector:
        weight, const = data
        return vec_add(const, ((p, weight.poly()),))

    def column(self, p: Puncture) -> Vector:
        return self.value(p)

    def push(self, v: Vector) -> Vector:
        cols = [self.column(p) for p, _ in v]
        return vec_add(*cols, scale=[c for _, c in v])

    def compose_data(self, outer, inner):
        w_out, p_out = outer
        w_in, p_in = inner
        return (w_in * w_out, vec_add(self.push(p_in), p_out, scale=[ONE, w_in.poly()]))

    def canonical(self) -> StructuredOperator:
        exc, comps = self._canonical_parts()
        return StructuredOperator(exc, comps)

    def __matmul__(self, other: StructuredOperator) -> StructuredOperator:
        exc, comps = self._compose_parts(other)
        return StructuredOperator(exc, comps).canonical()

    def has_trivial_background(self) -> bool:
        """Background bijection is the identity and its weight is one scalar monomial."""
        comps = self.canonical().components
        return all(s == d for s, d, _ in comps) and len({data[0] for _, _, data in comps}) == 1

    def has_unit_background(self) -> bool:
        return all(s == d and data[0].is_one() for s, d, data in self.canonical().components)

    def core(self) -> list[Puncture]:
        """Finite set R containing every row of the correction."""
        rows = set(self.exceptional)
        for v in self.exceptional.values():
            rows.update(p for p, _ in v)
        for _, _, (_, const) in self.components:
            rows.update(p for p, _ in const)
        return sorted(rows, key=puncture_order_key)

    def correction_matrix(self) -> LaurentMatrix:
        """Operator minus identity on the core columns, for a trivial background."""
        if not self.has_unit_background():
            raise ContractViolation("determinant is defined only for the identity background")
        core = self.core()
        entries = {}
        for c in core:
            for r, v in self.column(c):
                entries[(r, c)] = entries.get((r, c), ZERO) + v
            entries[(c, c)] = entries.get((c, c), ZERO) - ONE
        return LaurentMatrix(core, core, {k: v for k, v in entries.items() if v})

    def determinant(self) -> LaurentPoly:
        return correction_determinant(self.correction_matrix(), self.core())

    def check_invariants(self, radius: int = 6):
        """Component-constant corrections with monomial weights and a finite core."""
        core = set(self.core())
        for src, dst, (weight, const) in self.components:
            if not isinstance(weight, Monomial):
                raise ContractViolation("background weight is not a monomial")
            for p in iter_branch(src, radius):
                col = dict(self.column(p))
                image = src.transport(p, dst)
                col[image] = col.get(image, ZERO) - weight.poly()
                corr = {r: v for r, v in col.items() if v}
                if any(r not in core for r in corr):
                    raise ContractViolation("correction row outside the core")
                if vec(corr) != const:
                    raise ContractViolation("correction column is not constant on its component")
                if p not in core and corr.get(p):
                    raise ContractViolation("correction diagonal outside the core")

    def window(self, punctures: Sequence[Puncture]) -> LaurentMatrix:
        entries = {}
        pset = set(punctures)
        for c in punctures:
            for r, v in self.column(c):
                if r in pset:
                    entries[(r, c)] = v
        return LaurentMatrix(list(punctures), list(punctures), entries)

    def to_json(self) -> dict:
        c = self.canonical()
        return {"background": [[s.to_json(), d.to_json(), [w.sign, w.exp]] for s, d, (w, _) in c.components],
                "core": [[p[0], p[1]] for p in c.core()],
                "exceptional": [[[p[0], p[1]], [[[q[0], q[1]], v.to_json()] for q, v in col]]
                                for p, col in sorted(c.exceptional.items(), key=lambda kv: puncture_order_key(kv[0]))],
                "component_corrections": [[[[q[0], q[1]], v.to_json()] for q, v in const]
                                          for _, _, (_, const) in c.components]}

    def __repr__(self):
        return f"StructuredOperator(exceptional={self.exceptional!r}, components={self.components!r})"


def magnus_matrix(alpha: AutFInd) -> StructuredOperator:
    """Column q is the Fox vector of alpha(gamma_q)."""
    alpha.check_index()
    exc = {p: vec(fox_vector(w)) for p, w in alpha.exceptional.items()}
    comps = []
    for src, dst, lam in alpha.components:
        d = fox_vector(lam)
        const = vec({p: (ONE - T) * v for p, v in d.items()})
        comps.append((src, dst, (Monomial(1, word_index(lam)), const)))
    return StructuredOperator(exc, comps).canonical()
