"""Inductive construction of admissible tangential sets.

Sites are produced by a fifth-power tower: the first coordinates grow as
x^5 times a pair-separation product, the second coordinates are pinned
to 2 x^(5^b).  Everything is exact integer arithmetic end to end; for
b >= 3 the second coordinates run to hundreds of thousands of digits,
so nothing here ever converts to float.
"""
from __future__ import annotations

from dataclasses import dataclass

from .lattice import Site


class BadSeed(ValueError):
    """Raised when the seed coordinate is even or too small."""


def default_seed(b: int) -> int:
    """Smallest odd integer exceeding b^2."""
    x = b * b + 1
    return x if x % 2 == 1 else x + 1


@dataclass(frozen=True)
class GenConfig:
    b: int
    x1: int | None = None

    def resolved_seed(self) -> int:
        x1 = self.x1 if self.x1 is not None else default_seed(self.b)
        if self.b < 2:
            raise BadSeed(f"need b >= 2, got {self.b}")
        if x1 % 2 == 0 or x1 <= self.b * self.b:
            raise BadSeed(f"seed must be odd and exceed b^2={self.b * self.b}, got {x1}")
        return x1


def generate_sites(cfg: GenConfig) -> list[Site]:
    """Build the b sites (x_j, y_j) of the inductive construction.

    x_2 = x_1^5 with no product factor; for j >= 2 the next first
    coordinate is x_j^5 * (prod over pairs l < m <= j of the squared
    pair distance, plus one), and every y_j = 2 x_j^(5^b).  Each squared
    pair distance is divisible by 4, so the parenthesised factor is odd
    and oddness of x propagates.
    """
    x1 = cfg.resolved_seed()
    b = cfg.b
    exp = 5 ** b
    xs = [x1, x1 ** 5]
    ys = [2 * xs[0] ** exp, 2 * xs[1] ** exp]
    for j in range(2, b):
        prod = 1
        for l in range(j):
            for m in range(l + 1, j):
                prod *= (xs[m] - xs[l]) ** 2 + (ys[m] - ys[l]) ** 2
        xnext = xs[j - 1] ** 5 * (prod + 1)
        xs.append(xnext)
        ys.append(2 * xnext ** exp)
    return [(xs[j], ys[j]) for j in range(b)]


def parity_audit(sites) -> bool:
    """True iff every x is odd and every y even (vacuously true when empty)."""
    return all(x % 2 == 1 and y % 2 == 0 for x, y in sites)
