"""Formulas: atoms, tensor, linear implication, bang.

Atoms are multiplicative (there is no unit). A formula is exponential iff
its head is a bang; exponential variables carry bang formulas, multiplicative
variables everything else.
"""

from __future__ import annotations

from dataclasses import dataclass


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self) -> None:
        if not self.name[:1].isupper():
            raise ValueError(f"atom names are capitalized, got {self.name!r}")


@dataclass(frozen=True)
class Tensor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Lolli(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Bang(Formula):
    body: Formula


def is_bang(f: Formula) -> bool:
    return isinstance(f, Bang)


def show(f: Formula, prec: int = 0) -> str:
    """Render with minimal parens. -o is right-associative and loosest,
    * is left-associative, ! binds tightest."""
    match f:
        case Atom(name):
            return name
        case Bang(body):
            return "!" + show(body, 2)
        case Tensor(left, right):
            s = f"{show(left, 1)} * {show(right, 2)}"
            return f"({s})" if prec > 1 else s
        case Lolli(left, right):
            s = f"{show(left, 1)} -o {show(right, 0)}"
            return f"({s})" if prec > 0 else s
    raise TypeError(f"not a formula: {f!r}")
