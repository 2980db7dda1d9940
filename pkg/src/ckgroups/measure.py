"""Parameter domains, invariant measure density and Monte Carlo integration.

The density of the bilaterally invariant measure in canonical coordinates
is the product over blocks of vs(u_k) ** (n - k - 1), which covers the
circular, flat and hyperbolic branches (and null directions) in one
formula.

Sampling strategy: every block draws uniformly from a bounding box.  The
box is the exact domain for the circle block and for a definite real
ball; noncompact directions (flat and hyperbolic branches, and real balls
whose weighted square is indefinite) require a user truncation.  Where
the domain is a strict subset of the box, the weight carries the domain
indicator so that box volume times the sample mean stays an unbiased
estimate.  ``sample`` itself rejection-samples into the domain, so
returned draws always lie inside it.

Randomness is counter-based (Philox) and splittable by stream index:
stream s of seed r is an independent, reproducible generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .group import (
    BlockParams,
    CanonicalParams,
    GroupElement,
    _block_weights,
    factorize,
    group_element,
    q_squared,
)
from .kernels import vs
from .signature import Branch, Signature

_PI = math.pi
_PI2 = math.pi * math.pi


@dataclass(frozen=True)
class DomainSpec:
    """Shape of the parameter domain of one block.

    ``kind`` is one of real_ball, full_space, imaginary_ball, circle,
    line.  ``definite`` marks a block whose weighted square is positive
    definite, ``constraint_active`` whether the ball inequality actually
    cuts the box, and ``needs_truncation`` whether sampling requires a
    user truncation radius.
    """

    kind: str
    k: int
    dim: int
    definite: bool
    constraint_active: bool
    needs_truncation: bool


def domain(sig: Signature, k: int) -> DomainSpec:
    """Domain of block k, decided by branch j_{k+1} (last block special)."""
    n = sig.n
    if not 0 <= k <= n - 1:
        raise DomainError(f"block index {k} out of range 0..{n - 1}")
    br = sig.branches[k]
    dim = n - k
    w = _block_weights(sig.sigmas, k)
    definite = bool(np.all(w > 0.0))
    if k == n - 1:
        if br is Branch.ELLIPTIC:
            return DomainSpec("circle", k, 1, True, False, False)
        return DomainSpec("line", k, 1, definite, False, True)
    if br is Branch.ELLIPTIC:
        return DomainSpec("real_ball", k, dim, definite, True, not definite)
    if br is Branch.PARABOLIC:
        return DomainSpec("full_space", k, dim, definite, False, True)
    # hyperbolic: constraint q^2 >= -pi^2 is vacuous when no weight is negative
    active = bool(np.any(w < 0.0))
    return DomainSpec("imaginary_ball", k, dim, definite, active, True)


def _require_full(sig: Signature, p: CanonicalParams) -> None:
    ks = [b.k for b in p]
    if ks != list(range(sig.n)):
        raise DomainError("density expects one block per index 0..n-1")


def block_u(sig: Signature, p: CanonicalParams) -> np.ndarray:
    """Kernel arguments u_k = sigma_{k+1} * Q_k^2, stacked on the last axis."""
    vals = [sig.sigmas[b.k] * np.asarray(q_squared(sig, b)) for b in p]
    return np.stack(vals, axis=-1)


def density(sig: Signature, p: CanonicalParams):
    """Measure density: product over blocks of vs(u_k) ** (n - k - 1)."""
    _require_full(sig, p)
    n = sig.n
    out = None
    for b in p:
        e = n - b.k - 1
        if e == 0:
            continue
        f = np.asarray(vs(sig.sigmas[b.k] * np.asarray(q_squared(sig, b)))) ** e
        out = f if out is None else out * f
    if out is None:
        out = np.asarray(1.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MeasureSample:
    params: CanonicalParams
    weight: np.ndarray


def _rng(seed: int, stream: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def _box(sig: Signature, k: int, truncation) -> tuple[float, float]:
    spec = domain(sig, k)
    if spec.kind == "circle":
        return 0.0, 2.0 * _PI
    if spec.kind == "real_ball" and spec.definite:
        return -_PI, _PI
    if truncation is None or truncation <= 0.0:
        raise ConfigError(
            f"block {k} ({spec.kind}) is noncompact: a positive truncation is required"
        )
    return -float(truncation), float(truncation)


def _in_domain(sig: Signature, p: CanonicalParams) -> np.ndarray:
    ok = None
    for b in p:
        spec = domain(sig, b.k)
        if not spec.constraint_active:
            continue
        q2 = np.asarray(q_squared(sig, b))
        cond = q2 <= _PI2 if spec.kind == "real_ball" else q2 >= -_PI2
        ok = cond if ok is None else ok & cond
    if ok is None:
        ok = np.asarray(True)
    return ok


def _draw_uniform(sig: Signature, rng, size, truncation) -> CanonicalParams:
    blocks = []
    for k in range(sig.n):
        lo, hi = _box(sig, k, truncation)
        q = rng.uniform(lo, hi, size=(size, sig.n - k))
        blocks.append(BlockParams(k, q))
    return CanonicalParams(tuple(blocks))


def box_volume(sig: Signature, truncation=None) -> float:
    """Volume of the sampling box (product over blocks)."""
    vol = 1.0
    for k in range(sig.n):
        lo, hi = _box(sig, k, truncation)
        vol *= (hi - lo) ** (sig.n - k)
    return vol


def sample(sig: Signature, seed: int, truncation=None, stream: int = 0,
           size=None) -> MeasureSample:
    """Draw from the (possibly truncated) domain; weight is the density.

    Rejection within the bounding box guarantees the draw lies inside the
    domain.  Deterministic given (seed, stream).  ``size=None`` returns a
    single unbatched draw.
    """
    rng = _rng(seed, stream)
    m = 1 if size is None else int(size)
    qs = [np.empty((m, sig.n - k)) for k in range(sig.n)]
    pending = np.arange(m)
    while pending.size:
        cand = _draw_uniform(sig, rng, pending.size, truncation)
        ok = np.asarray(_in_domain(sig, cand))
        ok = np.broadcast_to(ok, (pending.size,))
        for k in range(sig.n):
            qs[k][pending[ok]] = cand.block(k).q[ok]
        pending = pending[~ok]
    if size is None:
        p = CanonicalParams(tuple(BlockParams(k, qs[k][0]) for k in range(sig.n)))
        return MeasureSample(p, float(density(sig, p)))
    p = CanonicalParams(tuple(BlockParams(k, qs[k]) for k in range(sig.n)))
    return MeasureSample(p, np.asarray(density(sig, p)))


@dataclass(frozen=True)
class IntegrateResult:
    estimate: float
    std_error: float
    samples: int
    seed: int


def integrate(sig: Signature, f, samples: int, seed: int, truncation=None,
              vectorized: bool = False, stream_size: int = 65536) -> IntegrateResult:
    """Monte Carlo estimate of the integral of f against the measure.

    ``f`` maps CanonicalParams to a real value; with ``vectorized=True``
    it must accept batched blocks and return a vector.  Work is split
    into fixed-size streams with independent counter-based generators and
    merged in stream order, so the result is reproducible and streams may
    be evaluated concurrently by a caller with the same contract.
    """
    if samples <= 1:
        raise ConfigError("integrate needs at least two samples")
    vol = box_volume(sig, truncation)
    vals = []
    done = 0
    stream = 0
    while done < samples:
        m = min(int(stream_size), samples - done)
        rng = _rng(seed, stream)
        p = _draw_uniform(sig, rng, m, truncation)
        w = np.asarray(density(sig, p)) * _in_domain(sig, p)
        if vectorized:
            fv = np.asarray(f(p), dtype=float)
        else:
            fv = np.array(
                [
                    f(CanonicalParams(tuple(
                        BlockParams(b.k, b.q[i]) for b in p
                    )))
                    for i in range(m)
                ],
                dtype=float,
            )
        vals.append(fv * w)
        done += m
        stream += 1
    allv = np.concatenate(vals)
    est = vol * float(np.mean(allv))
    se = vol * float(np.std(allv, ddof=1)) / math.sqrt(samples)
    return IntegrateResult(est, se, samples, seed)


def shifted_params(sig: Signature, p: CanonicalParams, g0, side: str = "left"
                   ) -> CanonicalParams:
    """Canonical coordinates of g0 * g(p) (or g(p) * g0 for side="right")."""
    g0m = g0.matrix if isinstance(g0, GroupElement) else np.asarray(g0, dtype=float)
    gm = group_element(sig, p).matrix
    if side == "left":
        m = g0m @ gm
    elif side == "right":
        m = gm @ g0m
    else:
        raise DomainError("side must be 'left' or 'right'")
    return factorize(sig, m)
