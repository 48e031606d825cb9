"""Seeded verification suites: each returns per-property results with replayable witnesses."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .braided import at_multiply, burau_bn, extension_cocycle, fibre_restriction, rho
from .exactalg import LaurentMatrix, correction_determinant, leibniz_det
from .gvclass import gv
from .neretin import (lift_to_paut, perm_operator_determinant, permutation_sign, perturb, random_permutation,
                      random_spheromorphism, random_three_cycle, ball, signature_cocycle, sphero_compose)
from .randomgen import random_correction, random_mixed_word, random_telement
from .thompson import TElement, compose, inverse, second_derivative_support, to_plmap
from .dyadic import plmap_compose

SUITES = ("thompson-laws", "gv-cocycle", "burau-relations", "rho-homomorphism", "extension-cocycle",
          "neretin-cocycle", "determinant-oracle")


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, witness: Callable[[], object]):
        self.checked += 1
        if not ok and len(self.failures) < 3:
            self.failures.append(witness())

    def to_json(self) -> dict:
        out = {"property": self.name, "passed": self.passed, "checked": self.checked}
        if self.failures:
            out["witness"] = self.failures[0]
        return out


def thompson_laws(seed: int, cases: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    assoc, ident, inv, hom = (PropertyResult(n) for n in ("associativity", "identity", "inverse", "plmap-homomorphism"))
    e = TElement.identity()
    for _ in range(cases):
        g, h, k = (random_telement(rng) for _ in range(3))
        w = lambda: {"g": g.to_json(), "h": h.to_json(), "k": k.to_json()}
        assoc.record(compose(compose(g, h), k) == compose(g, compose(h, k)), w)
        ident.record(compose(g, e) == g and compose(e, g) == g, w)
        inv.record(compose(g, inverse(g)).is_identity() and compose(inverse(g), g).is_identity(), w)
        hom.record(to_plmap(compose(g, h)) == plmap_compose(to_plmap(g), to_plmap(h)), w)
    return [assoc, ident, inv, hom]


def gv_cocycle(seed: int, cases: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    defect, total, chain = (PropertyResult(n) for n in ("cocycle-defect", "second-derivative-sum", "chain-rule"))
    for _ in range(cases):
        g, h, k = (random_telement(rng) for _ in range(3))
        w = lambda: {"g": g.to_json(), "h": h.to_json(), "k": k.to_json()}
        d = gv(h, k) - gv(compose(g, h), k) + gv(g, compose(h, k)) - gv(g, h)
        defect.record(d == 0, w)
        total.record(sum(second_derivative_support(g).values()) == 0, w)
        chain.record(chain_rule_holds(g, h), w)
    return [defect, total, chain]


def chain_rule_holds(g: TElement, h: TElement) -> bool:
    """(g o h)''(v) = g''(h(v)) + h''(v) at every breakpoint of either side."""
    from .thompson import vertex_image
    gh = compose(g, h)
    lhs = second_derivative_support(gh)
    hs = second_derivative_support(h)
    gs = second_derivative_support(g)
    rhs: dict[str, int] = dict(hs)
    inv_h = inverse(h)
    for v, j in gs.items():
        u = vertex_image(inv_h, v)
        rhs[u] = rhs.get(u, 0) + j
    return lhs == {v: j for v, j in rhs.items() if j}


def burau_relations(seed: int, cases: int, n: int = 8) -> list[PropertyResult]:
    rng = random.Random(seed)
    braid, far, restrict = (PropertyResult(x) for x in ("braid-relation", "far-commutation", "fibre-restriction"))
    s = {i: burau_bn([(i, 1)], n) for i in range(1, n)}
    for i in range(1, n):
        for j in range(i + 1, n):
            w = lambda: {"n": n, "i": i, "j": j}
            if j == i + 1:
                braid.record(s[i] @ s[j] @ s[i] == s[j] @ s[i] @ s[j], w)
            else:
                far.record(s[i] @ s[j] == s[j] @ s[i], w)
    for _ in range(cases):
        m = rng.randint(2, 6)
        word = [(rng.randint(1, m - 1), rng.choice((1, -1))) for _ in range(rng.randint(0, 5))]
        restrict.record(fibre_restriction(word, m) == burau_bn(word, m), lambda: {"n": m, "word": word})
    return [braid, far, restrict]


def rho_homomorphism(seed: int, cases: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    hom, kernel, shape = (PropertyResult(x) for x in ("homomorphism", "kernel-characterisation", "block-shape"))
    for _ in range(cases):
        a, b = random_mixed_word(rng), random_mixed_word(rng)
        ab = at_multiply(a, b)
        w = lambda: {"a": a.to_json(), "b": b.to_json()}
        ra, rb, rab = rho(a), rho(b), rho(ab)
        hom.record(rab == ra @ rb, w)
        for x, rx in ((a, ra), (b, rb), (ab, rab)):
            kernel.record(rx.has_trivial_background() == x.projection.is_identity(), lambda: {"element": x.to_json()})
            try:
                rx.check_invariants()
                ok = True
            except ValueError:
                ok = False
            shape.record(ok, lambda: {"element": x.to_json()})
    return [hom, kernel, shape]


def extension_suite(seed: int, cases: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    coc, unit = PropertyResult("cocycle-defect"), PropertyResult("identity-normalised")
    for _ in range(cases):
        g, h, k = (random_telement(rng, 5) for _ in range(3))
        w = lambda: {"g": g.to_json(), "h": h.to_json(), "k": k.to_json()}
        e = extension_cocycle
        coc.record(e(h, k) - e(compose(g, h), k) + e(g, compose(h, k)) - e(g, h) == 0, w)
        unit.record(e(g, TElement.identity()) == 0 and e(TElement.identity(), g) == 0, w)
    return [coc, unit]


def neretin_suite(seed: int, cases: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    coc, even, det = (PropertyResult(x) for x in ("signature-cocycle", "even-perturbation", "permutation-determinant"))
    for _ in range(cases):
        g, h, k = (random_spheromorphism(rng, depth=3) for _ in range(3))
        w = lambda: {"g": g.to_json(), "h": h.to_json(), "k": k.to_json()}
        c = signature_cocycle
        coc.record((c(h, k) - c(sphero_compose(g, h), k) + c(g, sphero_compose(h, k)) - c(g, h)) % 2 == 0, w)
        points = ball(3)
        p = random_three_cycle(rng, points)
        lifts = (perturb(lift_to_paut(g), p), lift_to_paut(h), lift_to_paut(sphero_compose(g, h)))
        even.record(signature_cocycle(g, h, lifts) == c(g, h), lambda: {"g": g.to_json(), "h": h.to_json(), "perm": p})
        q = random_permutation(rng, points, rng.randint(0, 8))
        det.record(perm_operator_determinant(q) == permutation_sign(q), lambda: {"perm": q})
    return [coc, even, det]


def determinant_oracle(seed: int, cases: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    agree, mult = PropertyResult("dense-agreement"), PropertyResult("multiplicativity")
    for _ in range(cases):
        F, core = random_correction(rng, rng.randint(0, 6))
        dense = [[F[r, c] + (1 if r == c else 0) for c in core] for r in core]
        agree.record(correction_determinant(F, core) == leibniz_det(dense), lambda: {"F": F.to_json()})
        G, _ = random_correction(rng, len(core), 0)
        G = LaurentMatrix(core, core, G.entries)
        Fc = LaurentMatrix(core, core, {k: v for k, v in F.entries.items() if k[1] in core})
        eye = LaurentMatrix.identity(core)
        prod = (eye + Fc) @ (eye + G) - eye
        mult.record(correction_determinant(prod, core) == correction_determinant(Fc, core) * correction_determinant(G, core),
                    lambda: {"F": Fc.to_json(), "G": G.to_json()})
    return [agree, mult]


RUNNERS = {
    "thompson-laws": thompson_laws,
    "gv-cocycle": gv_cocycle,
    "burau-relations": burau_relations,
    "rho-homomorphism": rho_homomorphism,
    "extension-cocycle": extension_suite,
    "neretin-cocycle": neretin_suite,
    "determinant-oracle": determinant_oracle,
}


def run_suite(name: str, seed: int, cases: int) -> list[PropertyResult]:
    if name == "all":
        return [r for s in SUITES for r in RUNNERS[s](seed, cases)]
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return RUNNERS[name](seed, cases)
