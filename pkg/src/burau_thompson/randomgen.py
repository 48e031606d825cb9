"""Seeded random generators for elements used by the verification suites."""

from __future__ import annotations

import random

from .braided import ATElement
from .exactalg import LaurentMatrix, LaurentPoly
from .freefox import FWord
from .thompson import TElement
from .trees import BinTree, edges_within, punctures_within


def random_tree(rng: random.Random, leaves: int) -> BinTree:
    """Grow a tree by splitting uniformly chosen leaves."""
    out = [""]
    while len(out) < leaves:
        i = rng.randrange(len(out))
        w = out.pop(i)
        out[i:i] = [w + "L", w + "R"]
    return BinTree(out)


def random_telement(rng: random.Random, max_leaves: int = 8, in_f: bool = False) -> TElement:
    k = rng.randint(2, max_leaves)
    rot = 0 if in_f else rng.randrange(k)
    return TElement.from_trees(random_tree(rng, k), random_tree(rng, k), rot)


def random_braid_letters(rng: random.Random, length: int, radius: int = 5) -> list:
    edges = edges_within(radius)
    return [("twist", rng.choice(edges), rng.choice((1, -1))) for _ in range(length)]


def random_mixed_word(rng: random.Random, max_length: int = 4, radius: int = 5,
                      max_leaves: int = 4, section_rate: float = 0.35) -> ATElement:
    word = []
    for _ in range(rng.randint(1, max_length)):
        if rng.random() < section_rate:
            word.append(("section", random_telement(rng, max_leaves), rng.choice((1, -1))))
        else:
            word.extend(random_braid_letters(rng, 1, radius))
    return ATElement(word)


def random_fword(rng: random.Random, length: int, radius: int = 4) -> FWord:
    pts = punctures_within(radius)
    return FWord((rng.choice(pts), rng.choice((1, -1))) for _ in range(length))


def random_laurent(rng: random.Random, span: int = 2, coeff: int = 3) -> LaurentPoly:
    return LaurentPoly({e: rng.randint(-coeff, coeff) for e in range(-span, span + 1) if rng.random() < 0.5})


def random_correction(rng: random.Random, core_size: int, extra_cols: int = 2) -> tuple[LaurentMatrix, list]:
    """A finite correction whose rows lie in a core of the given size."""
    core = [f"c{i}" for i in range(core_size)]
    cols = core + [f"x{i}" for i in range(extra_cols)]
    entries = {(r, c): random_laurent(rng) for r in core for c in cols if rng.random() < 0.6}
    return LaurentMatrix(core, cols, entries), core
