"""Coadjoint action on translation characters, orbits and stabilizers.

For a group with flat first label the translations form an invariant
abelian subgroup; characters of that subgroup live in an n-dimensional
space carrying the coadjoint action of the rotation subgroup.  Orbits are
the level sets of a weighted square of the character vector.  Depending
on the sign of that invariant an orbit has real radius R, imaginary
radius rho (concentrated around a distinguished axis), or is degenerate.

``classify_orbit`` decides the family count from the compactness of the
plane rotations linking the two candidate representatives, which is the
operative criterion; the literal one-family enumerations are evaluated
separately and any disagreement is reported as a flag, never silently
resolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedOrbitError
from .group import BlockParams, CanonicalParams, _rotation_block
from .signature import Branch, Signature, compactness, sigma_product

ZERO_TOL = 1e-12


# -- adjoint / coadjoint actions ----------------------------------------

def adjoint_block(sig: Signature, p: BlockParams) -> np.ndarray:
    """Adjoint action of s(Q_k), k >= 1, on the translation part (n x n).

    Obtained from the rotation block by deleting the first row and
    column.  Translations themselves act trivially (identity), so k = 0
    is rejected here.
    """
    if p.k < 1:
        raise DomainError("adjoint blocks exist for rotation blocks k >= 1")
    if not p.k <= sig.n - 1:
        raise DomainError(f"block index {p.k} out of range 1..{sig.n - 1}")
    if p.q.shape[-1:] != (sig.n - p.k,):
        raise DomainError(f"block {p.k} expects {sig.n - p.k} components")
    return _rotation_block(sig.sigmas, p.k, p.q)[..., 1:, 1:]


def adjoint(sig: Signature, p: CanonicalParams) -> np.ndarray:
    """Adjoint matrix of a product of blocks (k = 0 factors are identity)."""
    out = np.eye(sig.n)
    for b in p:
        if b.k == 0:
            continue
        out = out @ adjoint_block(sig, b)
    return out


def coadjoint_block(sig: Signature, p: BlockParams) -> np.ndarray:
    """Coadjoint action of s(Q_k): transpose of the adjoint at -Q_k."""
    a = adjoint_block(sig, BlockParams(p.k, -p.q))
    return np.swapaxes(a, -1, -2)


def coadjoint(sig: Signature, p: CanonicalParams) -> np.ndarray:
    """Coadjoint matrix of a product of blocks, in block order."""
    out = np.eye(sig.n)
    for b in p:
        if b.k == 0:
            continue
        out = out @ coadjoint_block(sig, b)
    return out


# -- orbit invariant and classification ---------------------------------

def character_weights(sig: Signature) -> np.ndarray:
    """Weights (W_1, ..., W_{n-1}, 1) of the orbit invariant."""
    n = sig.n
    return np.array(
        [float(sigma_product(sig, r + 1, n)) for r in range(1, n)] + [1.0]
    )


def orbit_invariant(sig: Signature, h):
    """Conserved weighted square of a character vector."""
    h = np.asarray(h, dtype=float)
    if h.shape[-1:] != (sig.n,):
        raise DomainError(f"character vector must have length {sig.n}")
    out = np.sum(character_weights(sig) * h * h, axis=-1)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class StabilizerDescriptor:
    """Stationary subgroup of an orbit representative.

    ``pinned`` lists (block k, position r) pairs whose component Q_{kr}
    is held at zero; ``omitted_blocks`` are excluded entirely.  The
    remaining free components generate the subgroup.
    """

    kind: str            # "fix_axis_n" or "fix_axis_m"
    axis: int            # the invariant character axis (1-based)
    pinned: tuple[tuple[int, int], ...]
    omitted_blocks: tuple[int, ...]


@dataclass(frozen=True)
class OrbitClass:
    radius_kind: str                   # "positive" | "imaginary" | "zero"
    value: float                       # R, rho, or 0.0
    families: int
    representative: np.ndarray
    axis: int | None = None            # imaginary case
    degeneracy: str | None = None      # zero case: point | lower_dimensional | cone
    subspace_dim: int | None = None    # zero/lower_dimensional case
    stabilizer: StabilizerDescriptor | None = None
    flags: tuple[str, ...] = field(default=())


def _valid_axes(sig: Signature) -> list[int]:
    """Axes m with weight -1 and all-elliptic trailing labels."""
    n = sig.n
    out = []
    for m in range(1, n):
        if sig.branches[m].square != -1:  # j_{m+1}
            continue
        if all(sig.branches[l - 1] is Branch.ELLIPTIC for l in range(m + 2, n + 1)):
            out.append(m)
    return out


def _families_positive(sig: Signature) -> int:
    n = sig.n
    for r in range(1, n):
        if compactness(sig, r + 1, n) == "compact":
            return 1
    return 2


def _families_imaginary(sig: Signature, m: int) -> int:
    for r in range(1, m):
        if compactness(sig, r + 1, m) == "compact":
            return 1
    return 2


def _literal_one_family_positive(sig: Signature) -> bool:
    """Literal enumeration of the connected positive-radius patterns."""
    n = sig.n
    if sig.branches[n - 1] is not Branch.HYPERBOLIC:
        return False
    for k in range(1, n - 1):
        if sig.branches[k] is not Branch.HYPERBOLIC:  # j_{k+1}
            continue
        if all(sig.branches[l - 1] is Branch.ELLIPTIC for l in range(k + 2, n)):
            return True
    return False


def _literal_one_family_imaginary(sig: Signature, m: int) -> bool:
    """Literal enumeration of the connected imaginary-radius patterns.

    The second pattern (three hyperbolic entries) is reproduced as
    printed; it only feeds the discrepancy flags.
    """
    n = sig.n
    br = sig.branches

    def ell(lo, hi):  # labels j_lo..j_hi all elliptic
        return all(br[l - 1] is Branch.ELLIPTIC for l in range(lo, hi + 1))

    if 2 <= m <= n - 1:
        if (br[m - 1] is Branch.ELLIPTIC and br[m] is Branch.HYPERBOLIC
                and ell(m + 2, n)):
            return True
        for r in range(1, m - 1):
            if (br[r] is Branch.HYPERBOLIC and ell(r + 2, m - 1)
                    and br[m - 1] is Branch.HYPERBOLIC
                    and br[m] is Branch.HYPERBOLIC and ell(m + 2, n)):
                return True
    return False


def _zero_pattern_dim(sig: Signature) -> int | None:
    """Subspace dimension for the degenerate zero-radius patterns.

    Matches a flat label at position p followed by all-elliptic labels;
    the orbit then lies in the span of the first p-1 character axes.
    """
    n = sig.n
    for p in range(n, 1, -1):
        if sig.branches[p - 1] is Branch.PARABOLIC and all(
            sig.branches[l - 1] is Branch.ELLIPTIC for l in range(p + 1, n + 1)
        ):
            return p - 1
    return None


def classify_orbit(sig: Signature, h) -> OrbitClass:
    """Classify the coadjoint orbit through the character h."""
    h = np.asarray(h, dtype=float)
    inv = float(orbit_invariant(sig, h))
    n = sig.n
    w = character_weights(sig)
    tol = ZERO_TOL * max(1.0, float(np.sum(h * h)))
    flags: list[str] = []
    if inv > tol:
        r = float(np.sqrt(inv))
        fam = _families_positive(sig)
        literal = 1 if _literal_one_family_positive(sig) else 2
        if literal != fam:
            flags.append(
                f"positive-radius family count: rule gives {fam}, "
                f"literal enumeration gives {literal}"
            )
        rep = np.zeros(n)
        rep[n - 1] = r
        cls = OrbitClass("positive", r, fam, rep, flags=tuple(flags))
        return OrbitClass(
            "positive", r, fam, rep, stabilizer=stabilizer(sig, cls),
            flags=tuple(flags),
        )
    if inv < -tol:
        rho = float(np.sqrt(-inv))
        axes = _valid_axes(sig)
        if axes:
            m = max(axes)
        else:
            # Unreachable for exact labels: a negative weight forces a
            # valid axis (last hyperbolic label followed by elliptic ones).
            m = int(np.argmin(w)) + 1
            flags.append(
                f"no canonical axis for the negative invariant; using the most "
                f"negative weight at axis {m}"
            )
        fam = _families_imaginary(sig, m)
        literal = 1 if _literal_one_family_imaginary(sig, m) else 2
        if literal != fam:
            flags.append(
                f"imaginary-radius family count: rule gives {fam}, "
                f"literal enumeration gives {literal}"
            )
        rep = np.zeros(n)
        rep[m - 1] = rho
        cls = OrbitClass("imaginary", rho, fam, rep, axis=m, flags=tuple(flags))
        return OrbitClass(
            "imaginary", rho, fam, rep, axis=m,
            stabilizer=stabilizer(sig, cls), flags=tuple(flags),
        )
    # zero invariant
    if float(np.max(np.abs(h))) <= np.sqrt(tol):
        return OrbitClass("zero", 0.0, 1, np.zeros(n), degeneracy="point")
    dim = _zero_pattern_dim(sig)
    if dim is not None:
        return OrbitClass(
            "zero", 0.0, 1, np.array(h, dtype=float),
            degeneracy="lower_dimensional", subspace_dim=dim,
        )
    neg = np.flatnonzero(w < 0.0)
    rep = np.zeros(n)
    if neg.size:
        rep[int(neg.max())] = 1.0
        rep[n - 1] = 1.0
    else:
        rep = np.array(h, dtype=float)
        flags.append("cone class without a negative weight axis")
    return OrbitClass(
        "zero", 0.0, 1, rep, degeneracy="cone", flags=tuple(flags)
    )


def stabilizer(sig: Signature, cls: OrbitClass) -> StabilizerDescriptor:
    """Stationary subgroup of the class representative."""
    n = sig.n
    if cls.radius_kind == "positive":
        pinned = tuple((k, n) for k in range(1, n - 1))
        return StabilizerDescriptor("fix_axis_n", n, pinned, (n - 1,))
    if cls.radius_kind == "imaginary":
        m = cls.axis
        pinned = tuple((k, m) for k in range(1, m))
        return StabilizerDescriptor("fix_axis_m", m, pinned, (m,))
    raise UnsupportedOrbitError(
        "zero-radius orbits carry no stabilizer support here"
    )


def stabilizer_element(sig: Signature, desc: StabilizerDescriptor,
                       rng: np.random.Generator, scale: float = 0.7
                       ) -> CanonicalParams:
    """Random rotation-subgroup element built from the descriptor."""
    n = sig.n
    pinned = set(desc.pinned)
    blocks = []
    for k in range(1, n):
        if k in desc.omitted_blocks:
            continue
        q = rng.uniform(-scale, scale, size=n - k)
        for r in range(k + 1, n + 1):
            if (k, r) in pinned:
                q[r - k - 1] = 0.0
        blocks.append(BlockParams(k, q))
    return CanonicalParams(tuple(blocks))
