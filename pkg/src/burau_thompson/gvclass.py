"""The discrete Godbillon-Vey 2-cocycle on T and residues of 2-cocycles on cyclic subgroups.

gv(g, h) sums, over the breakpoints x of h and of g o h, the determinant

    | log2 h'_r(x)      log2 (g o h)'_r(x)     |
    | jump log2 h'_r(x)  jump log2 (g o h)'_r(x) |

with (g o h)(x) = g(h(x)).
"""

from __future__ import annotations

from typing import Callable

from .dyadic import PLMap, one_sided_log_slopes, plmap_compose
from .thompson import TElement, compose, power, to_plmap


def gv_plmaps(g: PLMap, h: PLMap) -> int:
    gh = plmap_compose(g, h)
    total = 0
    for x in set(h.breakpoints()) | set(gh.breakpoints()):
        _, a, c = one_sided_log_slopes(h, x)
        _, b, d = one_sided_log_slopes(gh, x)
        total += a * d - b * c
    return total


def gv(g, h) -> int:
    """The cocycle value; accepts elements or (unreduced) symbols."""
    return gv_plmaps(to_plmap(g), to_plmap(h))


def cocycle_defect(g: TElement, h: TElement, k: TElement,
                   c: Callable[[TElement, TElement], int] = gv) -> int:
    """c(h,k) - c(gh,k) + c(g,hk) - c(g,h); zero for a 2-cocycle."""
    return c(h, k) - c(compose(g, h), k) + c(g, compose(h, k)) - c(g, h)


class OrderError(ValueError):
    """The element does not have the declared order."""


def element_order(r: TElement, limit: int = 64) -> int:
    cur = r
    for n in range(1, limit + 1):
        if cur.is_identity():
            return n
        cur = compose(r, cur)
    raise OrderError(f"no finite order up to {limit}")


def cyclic_class_residue(c: Callable[[TElement, TElement], int], r: TElement, n: int) -> int:
    """sum_{i<n} c(r, r^i) mod n for r of order exactly n."""
    if n < 1:
        raise OrderError("order must be positive")
    if not power(r, n).is_identity() or any(power(r, i).is_identity() for i in range(1, n)):
        raise OrderError(f"element does not have order {n}")
    return cyclic_sum(c, r, n) % n


def cyclic_sum(c: Callable[[TElement, TElement], int], r: TElement, n: int) -> int:
    """sum_{i<n} c(r, r^i) as an integer."""
    total = 0
    cur = TElement.identity()
    for _ in range(n):
        total += c(r, cur)
        cur = compose(r, cur)
    return total
