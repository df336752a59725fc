"""Exception types shared across the package."""

from __future__ import annotations


class ValidationError(ValueError):
    """Malformed input: bad permutation, out-of-range point, wrong sizes."""


class IntransitiveGroupError(ValueError):
    """An operation that needs a transitive group got an intransitive one."""


class InfeasibleParametersError(ArithmeticError):
    """Design parameters whose derived counts are not integers."""


class NotADesignError(Exception):
    """Block counts over t-subsets are not constant.

    ``witness`` holds two ``(t_subset, count)`` pairs with different counts.
    """

    def __init__(self, t: int, witness: tuple[tuple[tuple[int, ...], int], tuple[tuple[int, ...], int]]):
        (s1, c1), (s2, c2) = witness
        super().__init__(
            f"not a {t}-design: {fmt_set(s1)} lies in {c1} blocks, {fmt_set(s2)} lies in {c2}"
        )
        self.t = t
        self.witness = witness


class CatalogParseError(ValueError):
    """Syntax or content error in a group catalog, with 1-based position."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def fmt_set(points) -> str:
    return "{" + ",".join(str(p) for p in points) + "}"
