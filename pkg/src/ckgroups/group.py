"""Group elements in canonical coordinates.

A group element is an ordered product of one-parameter rotation blocks
s(Q_0) s(Q_1) ... s(Q_{n-1}); block k acts on coordinates k..n and is a
rotation in the plane spanned by axis k and the direction of its
coordinate vector.  Each block has a closed form in the even kernels of
``kernels``, valid on every branch and at null directions.

``factorize`` recovers canonical coordinates from a matrix by peeling
blocks left to right: column k of the residual is exactly column k of
s(Q_k) because every later block fixes axis k.

All operations broadcast over leading batch axes of the coordinate
arrays / matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DomainError, PreconditionError
from .kernels import vc, vg, vs
from .signature import Signature

# Tolerances: isometry admission, corner tolerance of a flat stage,
# direction-loss threshold, and the final residual check.
ISOMETRY_TOL = 1e-9
PARABOLIC_CORNER_TOL = 1e-7
VS_DEGENERATE = 1e-7
RESIDUAL_TOL = 1e-6

_PI2 = math.pi * math.pi


@dataclass(frozen=True)
class BlockParams:
    """Coordinate vector of block k: components at positions k+1..n."""

    k: int
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        if self.k < 0:
            raise DomainError("block index must be nonnegative")
        if not np.all(np.isfinite(self.q)):
            raise DomainError("block components must be finite")


@dataclass(frozen=True)
class CanonicalParams:
    """Blocks with strictly increasing indices."""

    blocks: tuple[BlockParams, ...]

    def __post_init__(self):
        blocks = tuple(
            b if isinstance(b, BlockParams) else BlockParams(*b) for b in self.blocks
        )
        object.__setattr__(self, "blocks", blocks)
        ks = [b.k for b in blocks]
        if ks != sorted(set(ks)):
            raise DomainError("block indices must be strictly increasing")

    def block(self, k: int) -> BlockParams:
        for b in self.blocks:
            if b.k == k:
                return b
        raise DomainError(f"no block with index {k}")

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)


def params(*pairs) -> CanonicalParams:
    """Shorthand: ``params((0, [a, b]), (1, [c]))``."""
    return CanonicalParams(tuple(BlockParams(k, q) for k, q in pairs))


def identity_params(sig: Signature, start: int = 0) -> CanonicalParams:
    """All-zero blocks start..n-1."""
    return CanonicalParams(
        tuple(BlockParams(k, np.zeros(sig.n - k)) for k in range(start, sig.n))
    )


@dataclass(frozen=True)
class GroupElement:
    """Dense real matrix (batched allowed) with its signature."""

    matrix: np.ndarray
    signature: Signature


# -- metric ------------------------------------------------------------

def _gram_diag(sigmas: np.ndarray) -> np.ndarray:
    return np.concatenate([[1.0], np.cumprod(sigmas)])


def gram(sig: Signature) -> np.ndarray:
    """Diagonal metric preserved by the group: diag(1, s1, s1 s2, ...)."""
    return np.diag(_gram_diag(sig.sigmas))


def _block_weights(sigmas: np.ndarray, k: int) -> np.ndarray:
    """Weights of the components of block k (first weight is 1)."""
    n = len(sigmas)
    return np.concatenate([[1.0], np.cumprod(sigmas[k + 1 : n])])


def _check_block(sig: Signature, p: BlockParams) -> None:
    if not 0 <= p.k <= sig.n - 1:
        raise DomainError(f"block index {p.k} out of range 0..{sig.n - 1}")
    if p.q.shape[-1:] != (sig.n - p.k,):
        raise DomainError(
            f"block {p.k} expects {sig.n - p.k} components, got shape {p.q.shape}"
        )


def weighted_inner(sig: Signature, k: int, a, b):
    """Weighted bilinear form of block k applied to two n-k vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = sig.n
    if a.shape[-1:] != (n - k,) or b.shape[-1:] != (n - k,):
        raise DomainError(f"block {k} expects vectors of length {n - k}")
    out = np.sum(_block_weights(sig.sigmas, k) * a * b, axis=-1)
    return out if out.ndim else float(out)


def q_squared(sig: Signature, p: BlockParams):
    """Weighted squared length of a block; may be negative or zero."""
    _check_block(sig, p)
    return weighted_inner(sig, p.k, p.q, p.q)


# -- closed-form blocks ------------------------------------------------

def _rotation_block(sigmas: np.ndarray, k: int, q: np.ndarray) -> np.ndarray:
    n = len(sigmas)
    w = _block_weights(sigmas, k)
    q2 = np.sum(w * q * q, axis=-1)
    u = sigmas[k] * q2
    c, s, g = vc(u), vs(u), vg(u)
    batch = q.shape[:-1]
    m = np.zeros(batch + (n + 1, n + 1))
    m[...] = np.eye(n + 1)
    m[..., k, k] = c
    m[..., k + 1 :, k] = q * np.asarray(s)[..., None]
    m[..., k, k + 1 :] = -(w * q) * np.asarray(sigmas[k] * s)[..., None]
    tail = np.eye(n - k) - np.asarray(sigmas[k] * g)[..., None, None] * (
        q[..., :, None] * (w * q)[..., None, :]
    )
    m[..., k + 1 :, k + 1 :] = tail
    return m


def rotation_block(sig: Signature, p: BlockParams) -> GroupElement:
    """One-parameter subgroup block s(Q_k) in closed form.

    Equals the matrix exponential of ``algebra_element(sig, k, q)``.
    """
    _check_block(sig, p)
    return GroupElement(_rotation_block(sig.sigmas, p.k, p.q), sig)


def _product(sigmas: np.ndarray, blocks) -> np.ndarray:
    n = len(sigmas)
    out = None
    for b in blocks:
        m = _rotation_block(sigmas, b.k, b.q)
        out = m if out is None else out @ m
    if out is None:
        out = np.eye(n + 1)
    return out


def group_element(sig: Signature, p: CanonicalParams) -> GroupElement:
    """Ordered product of the rotation blocks (ascending block index)."""
    for b in p:
        _check_block(sig, b)
    return GroupElement(_product(sig.sigmas, p.blocks), sig)


def inverse(sig: Signature, p: CanonicalParams) -> GroupElement:
    """Inverse element: negated blocks multiplied in reversed order."""
    for b in p:
        _check_block(sig, b)
    rev = [BlockParams(b.k, -b.q) for b in reversed(p.blocks)]
    return GroupElement(_product(sig.sigmas, rev), sig)


def act_on_base_point(sig: Signature, p: BlockParams) -> np.ndarray:
    """Image of the base point (1, 0, ..., 0) under s(Q_0).

    The result satisfies the unit-sphere constraint of the metric.
    """
    if p.k != 0:
        raise DomainError("base-point action is defined for the k = 0 block")
    _check_block(sig, p)
    u = sig.sigmas[0] * weighted_inner(sig, 0, p.q, p.q)
    c = np.asarray(vc(u))
    s = np.asarray(vs(u))
    return np.concatenate([c[..., None], p.q * s[..., None]], axis=-1)


# -- factorization ------------------------------------------------------

def _isometry_defect(sigmas: np.ndarray, m: np.ndarray) -> float:
    g = _gram_diag(sigmas)
    defect = np.swapaxes(m, -1, -2) @ (g[:, None] * m) - np.diag(g)
    return float(np.max(np.abs(defect)))


def _matrix_of(m) -> np.ndarray:
    mat = m.matrix if isinstance(m, GroupElement) else np.asarray(m, dtype=float)
    return np.array(mat, dtype=float)  # private copy, gets mutated


def _corner_to_u(c: np.ndarray) -> np.ndarray:
    """Invert vc on the principal range: u in [0, pi^2] for c in [-1, 1],
    u < 0 for c > 1."""
    c_hi = np.maximum(c, 1.0)
    c_cl = np.clip(c, -1.0, 1.0)
    return np.where(c > 1.0, -np.arccosh(c_hi) ** 2, np.arccos(c_cl) ** 2)


def _recover_degenerate(sigmas: np.ndarray, k: int, residual: np.ndarray,
                        u: float) -> np.ndarray:
    """Direction recovery at a stage where the column scale vs(u) ~ 0.

    Only the quadratic tail of the block still carries the direction;
    this is conclusive when the residual is that single block (later
    blocks identity).  Verified a posteriori; failure raises.
    """
    n = len(sigmas)
    w = _block_weights(sigmas, k)
    e = np.eye(n - k) - residual[k + 1 :, k + 1 :]
    norms = np.linalg.norm(e, axis=0)
    j = int(np.argmax(norms))
    if norms[j] < 1e-12:
        raise DegeneracyError(
            "degenerate stage: no direction information in the tail", stage=k
        )
    d = e[:, j]
    wsq = float(np.sum(w * d * d))
    target = sigmas[k] * u  # squared length the block must have
    if wsq == 0.0 or target / wsq <= 0.0:
        raise DegeneracyError(
            "degenerate stage: tail direction has inconsistent length", stage=k
        )
    q = math.sqrt(target / wsq) * d
    big = int(np.argmax(np.abs(q)))
    if q[big] < 0:
        q = -q
    probe = _rotation_block(sigmas, k, -q) @ residual
    defect = max(
        float(np.max(np.abs(probe[k + 1 :, k] ))),
        float(abs(probe[k, k] - 1.0)),
        float(np.max(np.abs(probe[k, k + 1 :]))),
    )
    if defect > RESIDUAL_TOL:
        raise DegeneracyError(
            "degenerate stage: tail information insufficient", stage=k
        )
    return q


def factorize(sig: Signature, m, start: int = 0) -> CanonicalParams:
    """Canonical coordinates of a group matrix (blocks start..n-1).

    ``start=0`` factorizes the full group, ``start=1`` the subgroup
    fixing axis 0.  The reconstruction reproduces the input matrix;
    coordinates on domain boundaries are a deterministic representative
    and need not match the ones the matrix was built from.
    """
    sigmas = sig.sigmas
    n = sig.n
    mat = _matrix_of(m)
    if mat.shape[-2:] != (n + 1, n + 1):
        raise DomainError(f"expected {(n + 1, n + 1)} matrix block, got {mat.shape[-2:]}")
    scale = max(1.0, float(np.max(np.abs(mat))) ** 2)
    if _isometry_defect(sigmas, mat) > ISOMETRY_TOL * scale:
        raise PreconditionError("matrix does not preserve the signature metric")
    batch = mat.shape[:-2]
    for axis in range(start):
        lead = max(
            float(np.max(np.abs(mat[..., axis, :] - np.eye(n + 1)[axis]))),
            float(np.max(np.abs(mat[..., :, axis] - np.eye(n + 1)[axis]))),
        )
        if lead > RESIDUAL_TOL:
            raise PreconditionError(
                f"matrix moves axis {axis}; not in the subgroup starting at {start}"
            )
    blocks = []
    for k in range(start, n):
        c = mat[..., k, k]
        v = mat[..., k + 1 :, k]
        if sigmas[k] == 0.0:
            if np.max(np.abs(c - 1.0)) > PARABOLIC_CORNER_TOL:
                raise PreconditionError(
                    f"flat stage {k}: corner entry differs from 1"
                )
            u = np.zeros_like(c)
        else:
            if np.min(c) < -1.0 - PARABOLIC_CORNER_TOL:
                raise PreconditionError(f"stage {k}: corner entry below -1")
            u = _corner_to_u(c)
        s = np.asarray(vs(u))
        deg = np.abs(s) < VS_DEGENERATE
        q = np.where(deg[..., None], 0.0, v / np.where(deg, 1.0, s)[..., None])
        if np.any(deg):
            for idx in np.argwhere(deg):
                idx = tuple(idx)
                q[idx] = _recover_degenerate(
                    sigmas, k, mat[idx] if batch else mat, float(u[idx] if batch else u)
                )
        if k == n - 1 and sigmas[k] > 0.0:
            q = np.mod(q, 2.0 * math.pi)  # circle block convention [0, 2pi)
        mat = _rotation_block(sigmas, k, -q) @ mat
        blocks.append(BlockParams(k, q if batch else q.reshape(n - k)))
    defect = float(np.max(np.abs(mat - np.eye(n + 1))))
    if defect > RESIDUAL_TOL:
        raise PreconditionError(
            f"residual after factorization is not the identity (defect {defect:.2e})"
        )
    return CanonicalParams(tuple(blocks))
