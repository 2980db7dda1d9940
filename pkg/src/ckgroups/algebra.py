"""Matrix generators, structure constants and the quadratic Casimir.

Generators are dense (n+1) x (n+1) matrices indexed by ordered pairs
(mu, nu), 0 <= mu < nu <= n, with entry (nu, mu) = 1 and entry (mu, nu)
equal to minus the product of squared units over positions mu+1..nu.
A commutator of two generators is always a single generator scaled by
+-1 times such a product, or zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .signature import Signature, sigma_product


class GeneratorIndex(NamedTuple):
    mu: int
    nu: int


@dataclass(frozen=True)
class AlgebraElement:
    """Real matrix in the algebra together with its signature."""

    matrix: np.ndarray
    signature: Signature


def _check_index(sig: Signature, idx) -> GeneratorIndex:
    idx = GeneratorIndex(*idx)
    if not (0 <= idx.mu < idx.nu <= sig.n):
        raise DomainError(f"generator index {idx} outside 0 <= mu < nu <= {sig.n}")
    return idx


def generator(sig: Signature, idx) -> AlgebraElement:
    """Basis generator for the index pair (mu, nu)."""
    idx = _check_index(sig, idx)
    m = np.zeros((sig.n + 1, sig.n + 1))
    m[idx.nu, idx.mu] = 1.0
    m[idx.mu, idx.nu] = -float(sigma_product(sig, idx.mu + 1, idx.nu))
    return AlgebraElement(m, sig)


def bracket(sig: Signature, a, b) -> tuple[tuple[float, GeneratorIndex], ...]:
    """Structure-constant expansion of the commutator of two generators.

    Returns at most one (coefficient, index) term; the empty tuple means
    the commutator vanishes.  Matches the literal matrix commutator.
    """
    a = _check_index(sig, a)
    b = _check_index(sig, b)
    if a == b:
        return ()
    if a.mu == b.mu:
        if a.nu < b.nu:
            coef = float(sigma_product(sig, a.mu + 1, a.nu))
            term = GeneratorIndex(a.nu, b.nu)
        else:
            coef = -float(sigma_product(sig, a.mu + 1, b.nu))
            term = GeneratorIndex(b.nu, a.nu)
    elif a.nu == b.nu:
        if a.mu < b.mu:
            coef = float(sigma_product(sig, b.mu + 1, a.nu))
            term = GeneratorIndex(a.mu, b.mu)
        else:
            coef = -float(sigma_product(sig, a.mu + 1, a.nu))
            term = GeneratorIndex(b.mu, a.mu)
    elif a.nu == b.mu:
        coef, term = -1.0, GeneratorIndex(a.mu, b.nu)
    elif b.nu == a.mu:
        coef, term = 1.0, GeneratorIndex(b.mu, a.nu)
    else:
        return ()
    if coef == 0.0:
        return ()
    return ((coef, term),)


def algebra_element(sig: Signature, k: int, q) -> AlgebraElement:
    """Element of the k-th nilpotent slice with coordinate vector q.

    q has length n - k (components at positions k+1..n) and may carry
    leading batch axes.
    """
    n = sig.n
    if not 0 <= k <= n - 1:
        raise DomainError(f"block index {k} out of range 0..{n - 1}")
    q = np.asarray(q, dtype=float)
    if q.shape[-1:] != (n - k,):
        raise DomainError(f"block {k} expects {n - k} components, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise DomainError("block components must be finite")
    sigmas = sig.sigmas
    m = np.zeros(q.shape[:-1] + (n + 1, n + 1))
    m[..., k + 1 :, k] = q
    # entry (k, s) carries -(product of squares over k+1..s)
    upper = -np.concatenate([[1.0], np.cumprod(sigmas[k + 1 : n])])[: n - k] * sigmas[k]
    m[..., k, k + 1 :] = upper * q
    return AlgebraElement(m, sig)


def casimir(sig: Signature) -> np.ndarray:
    """Quadratic Casimir evaluated in the defining matrix representation.

    Commutes with every generator; for a parabolic first label the whole
    second (interior) sum carries a vanishing weight.
    """
    n = sig.n
    total = np.zeros((n + 1, n + 1))
    for r in range(1, n + 1):
        w = sigma_product(sig, r + 1, n)
        if w:
            g = generator(sig, (0, r)).matrix
            total += w * (g @ g)
    for a1 in range(1, n + 1):
        for a2 in range(a1 + 1, n + 1):
            w = sigma_product(sig, 1, a1) * sigma_product(sig, a2 + 1, n)
            if w:
                g = generator(sig, (a1, a2)).matrix
                total += w * (g @ g)
    return total
