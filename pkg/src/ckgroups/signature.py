"""Branch labels and signatures.

A signature is an ordered tuple of n branch labels, one per level of the
group chain.  Each label selects the circular (elliptic), flat (parabolic)
or hyperbolic version of the corresponding rotation, encoded by the square
of its unit: +1, 0 or -1.  Every formula in the library consumes the
labels only through these squares, so all arithmetic stays real.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError


class Branch(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"

    @property
    def square(self) -> int:
        """Square of the branch unit: +1, 0 or -1."""
        return _SQUARE[self]

    @property
    def token(self) -> str:
        """Single-character text token: '1', 'd' (dual) or 'i'."""
        return _TOKEN[self]


_SQUARE = {Branch.ELLIPTIC: 1, Branch.PARABOLIC: 0, Branch.HYPERBOLIC: -1}
_TOKEN = {Branch.ELLIPTIC: "1", Branch.PARABOLIC: "d", Branch.HYPERBOLIC: "i"}
_FROM_TOKEN = {v: k for k, v in _TOKEN.items()}


@dataclass(frozen=True)
class Signature:
    """Ordered branch labels (j_1, ..., j_n), n >= 2."""

    branches: tuple[Branch, ...]

    def __post_init__(self):
        if not all(isinstance(b, Branch) for b in self.branches):
            raise DomainError("signature entries must be Branch values")
        if len(self.branches) < 2:
            raise DomainError("signature needs at least two entries")

    @property
    def n(self) -> int:
        return len(self.branches)

    @property
    def sigmas(self) -> np.ndarray:
        """Squared units (sigma_1, ..., sigma_n) as a float vector."""
        return np.array([b.square for b in self.branches], dtype=float)

    def branch(self, m: int) -> Branch:
        """Branch j_m, 1-based."""
        if not 1 <= m <= self.n:
            raise DomainError(f"branch index {m} out of range 1..{self.n}")
        return self.branches[m - 1]

    def __len__(self) -> int:
        return len(self.branches)

    def __str__(self) -> str:
        return ",".join(b.token for b in self.branches)


def signature(*tokens) -> Signature:
    """Build a Signature from tokens or Branch values.

    Accepts either separate arguments or a single comma-separated string:
    ``signature("d", "1")``, ``signature("d,1")``.
    """
    if len(tokens) == 1 and isinstance(tokens[0], str) and "," in tokens[0]:
        return parse_signature(tokens[0])
    out = []
    for t in tokens:
        if isinstance(t, Branch):
            out.append(t)
        elif isinstance(t, str) and t in _FROM_TOKEN:
            out.append(_FROM_TOKEN[t])
        else:
            raise DomainError(f"unknown signature token {t!r} (expected '1', 'i' or 'd')")
    return Signature(tuple(out))


def parse_signature(text: str) -> Signature:
    """Parse the comma-separated text form, e.g. ``"d,1,i"``."""
    tokens = [t.strip() for t in text.split(",")]
    out = []
    for t in tokens:
        if t not in _FROM_TOKEN:
            raise DomainError(f"unknown signature token {t!r} (expected '1', 'i' or 'd')")
        out.append(_FROM_TOKEN[t])
    return Signature(tuple(out))


def _check_range(n: int, a: int, b: int) -> None:
    if b < a:
        return  # empty product
    if a < 1 or b > n:
        raise DomainError(f"index range [{a}, {b}] out of bounds for n={n}")


def sigma_product(sig: Signature, a: int, b: int) -> int:
    """Product of squared units over positions a..b inclusive (1-based).

    The empty range (b < a) gives 1.  Any parabolic factor forces 0;
    otherwise the result is (-1)**(number of hyperbolic factors).
    """
    _check_range(sig.n, a, b)
    out = 1
    for m in range(a, b + 1):
        out *= sig.branches[m - 1].square
    return out


def compactness(sig: Signature, a: int, b: int) -> str:
    """Nature of a generator scaled by the product of units over a..b.

    Returns ``"parabolic"`` if any factor is parabolic (dual multiplier),
    ``"hyperbolic"`` if the number of hyperbolic factors is odd (imaginary
    multiplier), ``"compact"`` otherwise (real multiplier).
    """
    _check_range(sig.n, a, b)
    hyper = 0
    for m in range(a, b + 1):
        br = sig.branches[m - 1]
        if br is Branch.PARABOLIC:
            return "parabolic"
        if br is Branch.HYPERBOLIC:
            hyper += 1
    return "hyperbolic" if hyper % 2 else "compact"
