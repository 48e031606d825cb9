"""Command-line front end. Every command prints JSON lines on stdout.

Exit codes: 0 success, 1 domain error (bad input, parse error), 2 invariant violation.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

import click

from .braided import (ATElement, InvariantViolation, burau_bn, check_relation, edge_pairs, extension_cocycle,
                      relation_kind, rho)
from .dyadic import parse_dyadic
from .exactalg import LaurentMatrix
from .gvclass import gv
from .neretin import Spheromorphism, fredholm_index, signature_cocycle, sphero_compose
from .suites import run_suite
from .thompson import Symbol, TElement, compose, evaluate, inverse, reduce
from .trees import geodesic_length, punctures_within, puncture_ccw_key, tree_dot


class ParseError(click.ClickException):
    exit_code = 1


def load_json(arg: str):
    """Read an argument as a JSON file path, or failing that as inline JSON."""
    if os.path.isfile(arg):
        with open(arg, "rb") as fh:
            raw = fh.read()
        source = arg
    else:
        raw = arg.encode("utf-8")
        source = "<inline>"
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{source}: invalid UTF-8 at byte offset {exc.start}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[:exc.pos].encode("utf-8"))
        raise ParseError(f"{source}: parse error at byte offset {offset}: {exc.msg}")


def load_telement(arg: str) -> TElement:
    return TElement.from_json(load_json(arg))


def _matrix_view(m: LaurentMatrix, t_eval: float | None) -> dict:
    out = m.to_json()
    if t_eval is not None:
        out["numeric"] = [[_number(p.evaluate(t_eval)) for p in row] for row in m.dense()]
    return out


def _number(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


class Emitter:
    def __init__(self, pretty: bool):
        self.pretty = pretty

    def __call__(self, value):
        if self.pretty and isinstance(value, dict) and "rows" in value and "entries" in value:
            click.echo(_render_matrix(value))
            return
        click.echo(json.dumps(value, indent=2 if self.pretty else None, sort_keys=not self.pretty))


def _render_matrix(obj: dict) -> str:
    m = LaurentMatrix.from_json(obj)
    cells = [[str(p) for p in row] for row in m.dense()]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


@click.group()
@click.option("--pretty", is_flag=True, help="Human-readable rendering instead of JSON lines.")
@click.pass_context
def main(ctx: click.Context, pretty: bool):
    """Exact computations in Thompson's group T, Neretin's group and the braided Thompson group."""
    ctx.obj = Emitter(pretty)


# ---------------------------------------------------------------- thompson

@main.group()
def thom():
    """Elements of T given as symbols {"t1", "t0", "rot"}."""


@thom.command("compose")
@click.argument("g")
@click.argument("h")
@click.pass_obj
def thom_compose(emit, g, h):
    """The element g o h (h applied first)."""
    emit(compose(load_telement(g), load_telement(h)).to_json())


@thom.command("inv")
@click.argument("g")
@click.pass_obj
def thom_inv(emit, g):
    emit(inverse(load_telement(g)).to_json())


@thom.command("eval")
@click.argument("g")
@click.argument("x")
@click.pass_obj
def thom_eval(emit, g, x):
    """Evaluate g at a dyadic point of [0, 1) such as 3/8."""
    y = evaluate(load_telement(g), parse_dyadic(x))
    emit(str(Fraction(y)))


@thom.command("reduce")
@click.argument("g")
@click.pass_obj
def thom_reduce(emit, g):
    emit(reduce(Symbol.from_json(load_json(g))).to_json())


# ---------------------------------------------------------------- gv

@main.command("gv")
@click.argument("g")
@click.argument("h")
@click.pass_obj
def gv_cmd(emit, g, h):
    """The discrete Godbillon-Vey cocycle gv(g, h)."""
    emit(gv(load_telement(g), load_telement(h)))


@main.command("gv-defect")
@click.argument("g")
@click.argument("h")
@click.argument("k")
@click.pass_obj
def gv_defect_cmd(emit, g, h, k):
    """gv(h,k) - gv(gh,k) + gv(g,hk) - gv(g,h)."""
    g, h, k = (load_telement(a) for a in (g, h, k))
    emit(gv(h, k) - gv(compose(g, h), k) + gv(g, compose(h, k)) - gv(g, h))


# ---------------------------------------------------------------- burau

@main.command("burau")
@click.argument("word")
@click.option("--n", "n", type=int, required=True, help="Number of strands.")
@click.option("--reduced", is_flag=True)
@click.option("--t-eval", type=float, default=None, help="Also print a numeric evaluation at this t.")
@click.pass_obj
def burau_cmd(emit, word, n, reduced, t_eval):
    """Burau matrix of a braid word such as "s1 s2^-1 s3"."""
    if n < 2:
        raise click.BadParameter("need at least 2 strands", param_hint="--n")
    emit(_matrix_view(burau_bn(word, n, reduced=reduced), t_eval))


# ---------------------------------------------------------------- braided

@main.group()
def braided():
    """Words in the braided Thompson group: half-twist letters and section letters."""


def _window(size: int) -> list:
    radius = 1
    while len(punctures_within(radius)) < size:
        radius += 1
    pts = sorted(punctures_within(radius), key=lambda p: (geodesic_length(p), puncture_ccw_key(p)))
    return pts[:size]


@braided.command("rho")
@click.argument("word")
@click.option("--window", type=int, default=None, help="Print the dense matrix on this many punctures nearest *.")
@click.option("--t-eval", type=float, default=None)
@click.pass_obj
def braided_rho(emit, word, window, t_eval):
    """Magnus/Burau operator of an element as a structured operator."""
    op = rho(ATElement.from_json(load_json(word)))
    op.check_invariants()
    if window is None:
        emit(op.to_json())
    else:
        emit(_matrix_view(op.window(_window(window)), t_eval))


@braided.command("ext-cocycle")
@click.argument("g")
@click.argument("h")
@click.pass_obj
def braided_ext(emit, g, h):
    """Exponent of the determinant of the section defect s(g)s(h)s(gh)^-1."""
    emit(extension_cocycle(load_telement(g), load_telement(h)))


@braided.command("relations")
@click.option("--radius", type=int, default=3, show_default=True)
@click.option("--operators/--no-operators", default=True, help="Also compare Magnus matrices.")
@click.pass_obj
def braided_relations(emit, radius, operators):
    """Braid and commutation relations of half-twists on all edge pairs within the radius."""
    counts = {"braid": [0, 0], "commute": [0, 0]}
    failures = []
    for e, f in edge_pairs(radius):
        kind = relation_kind(e, f)
        if kind not in counts:
            continue
        ok = check_relation(e, f, operators)
        counts[kind][0 if ok else 1] += 1
        if not ok and len(failures) < 3:
            failures.append([[list(p) for p in e], [list(p) for p in f]])
    for kind, (good, bad) in counts.items():
        emit({"relation": kind, "passed": good, "failed": bad})
    if failures:
        emit({"witness": failures})
        raise InvariantViolation("half-twist relations")


# ---------------------------------------------------------------- neretin

@main.group()
def neretin():
    """Spheromorphisms of the trivalent tree."""


def _sphero(arg: str) -> Spheromorphism:
    return Spheromorphism.from_json(load_json(arg))


@neretin.command("compose")
@click.argument("g")
@click.argument("h")
@click.pass_obj
def neretin_compose(emit, g, h):
    emit(sphero_compose(_sphero(g), _sphero(h)).to_json())


@neretin.command("index")
@click.argument("g")
@click.pass_obj
def neretin_index(emit, g):
    """Fredholm index of the representing tree automorphism."""
    s = _sphero(g)
    emit(fredholm_index(s.t0, s.t1))


@neretin.command("sign-cocycle")
@click.argument("g")
@click.argument("h")
@click.pass_obj
def neretin_sign(emit, g, h):
    emit(signature_cocycle(_sphero(g), _sphero(h)))


# ---------------------------------------------------------------- tree / verify

@main.group()
def tree():
    """The decorated tree of punctures."""


@tree.command("dot")
@click.option("--radius", type=int, default=3, show_default=True)
def tree_dot_cmd(radius):
    click.echo(tree_dot(radius))


@main.command("verify")
@click.argument("suite")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--cases", type=int, default=100, show_default=True)
@click.pass_obj
def verify_cmd(emit, suite, seed, cases):
    """Run a seeded property suite; prints one line per property and a summary."""
    results = run_suite(suite, seed, cases)
    for r in results:
        emit(r.to_json())
    ok = all(r.passed for r in results)
    emit({"suite": suite, "seed": seed, "cases": cases, "passed": ok})
    if not ok:
        raise InvariantViolation(", ".join(r.name for r in results if not r.passed))


def run(argv: list[str] | None = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        main.main(args=argv, prog_name="burau-thompson", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except InvariantViolation as exc:
        click.echo(json.dumps({"error": "invariant violation", "invariant": str(exc)}), err=True)
        return 2
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        click.echo(json.dumps({"error": "domain error", "message": str(exc) or type(exc).__name__}), err=True)
        return 1
    return 0


def entry() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entry()
