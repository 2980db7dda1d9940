"""Induced unitary representations of the flat-translation groups.

For a signature whose first label is parabolic, the group is a semidirect
product of translations by the rotation subgroup.  A representation is
carried by functions on the rotation subgroup; a group element (x, k)
acts by a unimodular character phase times a right shift of the argument.

The phase is the character of the transported translation vector, i.e.
one component of Ad(k0^{-1}) x, evaluated at the function argument k0.
``transported`` computes that vector through the normalized coefficient
machinery: every quantity is stored rescaled so that only the even
kernels and weighted inner products appear, which keeps all arithmetic
real on every branch and regular at null blocks.  The direct adjoint
matrix product is the governing cross-check.

All evaluators broadcast over leading batch axes of the argument blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .group import (
    BlockParams,
    CanonicalParams,
    _block_weights,
    _product,
    _rotation_block,
    factorize,
)
from .kernels import vc, vg, vs
from .orbits import _valid_axes, adjoint
from .signature import Branch, Signature


def character_eval(h, x) -> complex:
    """Unit-modulus character of a translation: exp(i <h, x>)."""
    h = np.asarray(h, dtype=float)
    x = np.asarray(x, dtype=float)
    if h.shape[-1:] != x.shape[-1:]:
        raise DomainError("character and translation vectors must have equal length")
    out = np.exp(1j * np.sum(h * x, axis=-1))
    return out if out.ndim else complex(out)


# -- normalized geometry -------------------------------------------------

@dataclass(frozen=True)
class GeometryCoeffs:
    """Normalized transport coefficients of a rotation-subgroup element.

    Arrays are indexed by block (axis -1 holds blocks 1..n-1); ``at`` and
    ``bt`` are strictly upper triangular in (earlier block, later block).
    """

    xt: np.ndarray
    yt: np.ndarray
    at: np.ndarray
    bt: np.ndarray
    u: np.ndarray


def _subgroup_qs(sig: Signature, p: CanonicalParams) -> list[np.ndarray]:
    n = sig.n
    ks = [b.k for b in p]
    if ks != list(range(1, n)):
        raise DomainError("expected one block per index 1..n-1")
    qs = []
    for b in p:
        if b.q.shape[-1:] != (n - b.k,):
            raise DomainError(f"block {b.k} expects {n - b.k} components")
        qs.append(b.q)
    return qs


def _geometry(sigmas: np.ndarray, qs: list[np.ndarray], x: np.ndarray):
    n = len(sigmas)
    batch = np.broadcast_shapes(x.shape[:-1], *[q.shape[:-1] for q in qs])
    xt = np.zeros(batch + (n - 1,))
    yt = np.zeros(batch + (n - 1,))
    at = np.zeros(batch + (n - 1, n - 1))
    bt = np.zeros(batch + (n - 1, n - 1))
    uu = np.zeros(batch + (n - 1,))
    for k in range(1, n):
        qk = qs[k - 1]
        w = _block_weights(sigmas, k)
        u = sigmas[k] * np.sum(w * qk * qk, axis=-1)
        c, s, g = np.asarray(vc(u)), np.asarray(vs(u)), np.asarray(vg(u))
        qx = np.sum(w * qk * x[..., k:], axis=-1)
        uu[..., k - 1] = u
        xt[..., k - 1] = x[..., k - 1] * s + qx * sigmas[k] * g
        yt[..., k - 1] = x[..., k - 1] * c + qx * sigmas[k] * s
        for p in range(1, k):
            qp_tail = qs[p - 1][..., k - p :]
            qq = np.sum(w * qp_tail * qk, axis=-1)
            qpk = qs[p - 1][..., k - p - 1]
            at[..., p - 1, k - 1] = -qpk * s + qq * sigmas[k] * g
            bt[..., p - 1, k - 1] = -qpk * c + qq * sigmas[k] * s
    return xt, yt, at, bt, uu


def geometry(sig: Signature, p: CanonicalParams, x) -> GeometryCoeffs:
    """Normalized transport coefficients for subgroup blocks and vector x."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (sig.n,):
        raise DomainError(f"vector must have length {sig.n}")
    qs = _subgroup_qs(sig, p)
    return GeometryCoeffs(*_geometry(sig.sigmas, qs, x))


def _dcoeffs(xt: np.ndarray, at: np.ndarray) -> np.ndarray:
    n1 = xt.shape[-1]
    d = np.zeros_like(xt)
    for p in range(n1):
        acc = xt[..., p]
        for s in range(p):
            acc = acc - d[..., s] * at[..., s, p]
        d[..., p] = acc
    return d


def dcoeffs(sig: Signature, p: CanonicalParams, x) -> np.ndarray:
    """Forward substitution of the unit-triangular transport system."""
    geo = geometry(sig, p, x)
    return _dcoeffs(geo.xt, geo.at)


def _cofactor_det(m: np.ndarray) -> np.ndarray:
    size = m.shape[-1]
    if size == 1:
        return m[..., 0, 0]
    out = np.zeros(m.shape[:-2])
    sign = 1.0
    for j in range(size):
        minor = np.delete(m[..., 1:, :], j, axis=-1)
        out = out + sign * m[..., 0, j] * _cofactor_det(minor)
        sign = -sign
    return out


def dcoeffs_det(sig: Signature, p: CanonicalParams, x, order: int):
    """Transport coefficient of the given order by cofactor determinant.

    Independent of the forward substitution: expands the bordered
    unit-triangular determinant literally.
    """
    if not 1 <= order <= sig.n - 1:
        raise DomainError(f"order must be in 1..{sig.n - 1}")
    geo = geometry(sig, p, x)
    batch = geo.xt.shape[:-1]
    m = np.zeros(batch + (order, order))
    m[...] = np.eye(order)
    for r in range(order):
        for s in range(r):
            m[..., r, s] = geo.at[..., s, r]
        m[..., r, order - 1] = geo.xt[..., r]
    out = _cofactor_det(m)
    return out if np.ndim(out) else float(out)


def _transported(sigmas: np.ndarray, qs: list[np.ndarray], x: np.ndarray
                 ) -> np.ndarray:
    n = len(sigmas)
    xt, yt, at, bt, _ = _geometry(sigmas, qs, x)
    d = _dcoeffs(xt, at)
    batch = np.broadcast_shapes(x.shape[:-1], d.shape[:-1])
    out = np.zeros(batch + (n,))
    for r in range(1, n):
        acc = yt[..., r - 1]
        for p in range(1, r):
            acc = acc - d[..., p - 1] * bt[..., p - 1, r - 1]
        out[..., r - 1] = acc
    acc = x[..., n - 1] * np.ones(batch)
    for p in range(1, n):
        acc = acc - d[..., p - 1] * qs[p - 1][..., n - p - 1]
    out[..., n - 1] = acc
    return out


def transported(sig: Signature, p: CanonicalParams, x) -> np.ndarray:
    """Vector Ad(k^{-1}) x through the normalized coefficients."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (sig.n,):
        raise DomainError(f"vector must have length {sig.n}")
    qs = _subgroup_qs(sig, p)
    return _transported(sig.sigmas, qs, x)


# -- representation operators --------------------------------------------

@dataclass(frozen=True)
class RepContext:
    """Data selecting one induced representation.

    ``family`` is "positive" (real radius, distinguished last axis) or
    "imaginary" (radius rho around the given axis); ``sign`` picks the
    sign series.  The first signature label must be parabolic.
    """

    signature: Signature
    family: str
    radius: float
    sign: int
    axis: int | None = None

    def __post_init__(self):
        if self.signature.branches[0] is not Branch.PARABOLIC:
            raise ConfigError(
                "induced representations need a parabolic first label"
            )
        if self.sign not in (1, -1):
            raise ConfigError("sign must be +1 or -1")
        if not self.radius > 0:
            raise ConfigError("radius must be positive")
        if self.family == "positive":
            if self.axis is not None and self.axis != self.signature.n:
                raise ConfigError("positive family acts along the last axis")
        elif self.family == "imaginary":
            axes = _valid_axes(self.signature)
            if not axes:
                raise ConfigError(
                    "signature admits no negative orbit invariant"
                )
            if self.axis is None or self.axis not in axes:
                raise ConfigError(
                    f"axis must be one of {axes} for this signature"
                )
        else:
            raise ConfigError("family must be 'positive' or 'imaginary'")


def subgroup_shift(sig: Signature, kparams: CanonicalParams | None,
                   q0: CanonicalParams) -> CanonicalParams:
    """Canonical coordinates of k(Q)^{-1} k(Q0)."""
    n = sig.n
    if kparams is None or len(kparams) == 0:
        return q0
    rev = [BlockParams(b.k, -b.q) for b in reversed(kparams.blocks)]
    kinv = _product(sig.sigmas, rev)
    k0 = _product(sig.sigmas, q0.blocks)
    return factorize(sig, kinv @ k0, start=1)


def _translation_part(sig: Signature, g) -> tuple[np.ndarray, CanonicalParams | None]:
    x, kparams = g
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (sig.n,):
        raise DomainError(f"translation vector must have length {sig.n}")
    return x, kparams


def omega_apply(ctx: RepContext, g, f, q0: CanonicalParams):
    """Apply a real-radius representation operator.

    ``g`` is a pair (x, kparams) of a translation vector and rotation
    blocks (kparams may be None for a pure translation); ``f`` maps
    subgroup CanonicalParams to complex values; ``q0`` is the evaluation
    point.  Returns phase(q0) * f(k^{-1} k(q0)).
    """
    if ctx.family != "positive":
        raise ConfigError("omega_apply needs a positive-family context")
    sig = ctx.signature
    x, kparams = _translation_part(sig, g)
    qs0 = _subgroup_qs(sig, q0)
    tn = _transported(sig.sigmas, qs0, x)[..., sig.n - 1]
    phase = np.exp(1j * ctx.sign * ctx.radius * tn)
    val = phase * np.asarray(f(subgroup_shift(sig, kparams, q0)))
    return val if val.ndim else complex(val)


def sigma_apply(ctx: RepContext, g, f, q0: CanonicalParams):
    """Apply an imaginary-radius representation operator (axis ctx.axis)."""
    if ctx.family != "imaginary":
        raise ConfigError("sigma_apply needs an imaginary-family context")
    sig = ctx.signature
    x, kparams = _translation_part(sig, g)
    qs0 = _subgroup_qs(sig, q0)
    tm = _transported(sig.sigmas, qs0, x)[..., ctx.axis - 1]
    phase = np.exp(1j * ctx.sign * ctx.radius * tm)
    val = phase * np.asarray(f(subgroup_shift(sig, kparams, q0)))
    return val if val.ndim else complex(val)


def heisenberg_apply(radius: float, sign: int, x, q12: float, f, q012: float
                     ) -> complex:
    """Closed form of the n = 2 all-parabolic (triangular) case.

    Coincides with the generic positive-family operator on that group.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise DomainError("expected a translation vector of length 2")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    phase = np.exp(1j * sign * radius * (x[1] - x[0] * q012))
    return complex(phase * f(q012 - q12))


def semidirect_product(sig: Signature, g1, g2):
    """Product of two (translation, rotation-blocks) pairs.

    Uses t(x1) k1 t(x2) k2 = t(x1 + Ad(k1) x2) (k1 k2); the rotation part
    is refactorized into canonical blocks.
    """
    x1, k1 = _translation_part(sig, g1)
    x2, k2 = _translation_part(sig, g2)
    ad1 = adjoint(sig, k1) if k1 is not None else np.eye(sig.n)
    x12 = x1 + ad1 @ x2
    m1 = _product(sig.sigmas, k1.blocks) if k1 is not None else np.eye(sig.n + 1)
    m2 = _product(sig.sigmas, k2.blocks) if k2 is not None else np.eye(sig.n + 1)
    k12 = factorize(sig, m1 @ m2, start=1)
    return x12, k12


# -- numerical contraction limit -----------------------------------------

@dataclass(frozen=True)
class ContractionEntry:
    name: str
    eps: tuple[float, ...]
    deviations: tuple[float, ...]
    ratio: float | None
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class ContractionReport:
    entries: tuple[ContractionEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "entries": [
                {
                    "name": e.name,
                    "eps": list(e.eps),
                    "deviations": list(e.deviations),
                    "ratio": e.ratio,
                    "pass": e.passed,
                    "note": e.note,
                }
                for e in self.entries
            ],
        }


_NEGLIGIBLE = 5e-14


def _rate_entry(name, eps, devs) -> ContractionEntry:
    if max(devs) < _NEGLIGIBLE:
        return ContractionEntry(name, tuple(eps), tuple(devs), None, True,
                                "deviation negligible at every epsilon")
    for a, b in zip(devs, devs[1:]):
        if b > a * 1.05 and b > _NEGLIGIBLE:
            return ContractionEntry(name, tuple(eps), tuple(devs), None, False,
                                    "deviation not monotone in epsilon")
    ratio = None
    ok = True
    note = ""
    if 1e-3 in eps and 1e-4 in eps:
        d3, d4 = devs[eps.index(1e-3)], devs[eps.index(1e-4)]
        if d4 < _NEGLIGIBLE:
            note = "second-order remainder below floating floor"
        else:
            ratio = d3 / d4
            ok = 50.0 <= ratio <= 200.0
            note = "" if ok else "deviation ratio outside second-order band"
    else:
        i, j = len(eps) - 2, len(eps) - 1
        expected = (eps[i] / eps[j]) ** 2
        if devs[j] > _NEGLIGIBLE:
            ratio = devs[i] / devs[j]
            ok = expected / 2.0 <= ratio <= expected * 2.0
            note = "" if ok else "deviation ratio outside second-order band"
    return ContractionEntry(name, tuple(eps), tuple(devs), ratio, ok, note)


def contraction_limit_check(sig: Signature, eps_sequence=(1e-2, 1e-3, 1e-4),
                            seed: int = 0, trials: int = 16
                            ) -> ContractionReport:
    """Check convergence to the parabolic branch at rate eps^2.

    Every parabolic label is replaced by a real unit eps; rotation
    blocks, full products and (when the first label is parabolic) the
    representation phase exponent are compared against the exact
    parabolic values at each eps.
    """
    eps = [float(e) for e in eps_sequence]
    if any(not 0.0 < e <= 0.1 for e in eps):
        raise ConfigError("epsilon values must lie in (0, 0.1]")
    eps = sorted(eps, reverse=True)
    sigmas = sig.sigmas
    flat = np.flatnonzero(sigmas == 0.0)
    if flat.size == 0:
        raise ConfigError("signature has no parabolic label to contract")

    def soft(e):
        s = sigmas.copy()
        s[flat] = e * e
        return s

    n = sig.n
    rng = np.random.default_rng(seed)
    blocks = [
        BlockParams(k, rng.uniform(-1.5, 1.5, size=(trials, n - k)))
        for k in range(n)
    ]
    subgroup = [rng.uniform(-1.2, 1.2, size=(trials, n - k)) for k in range(1, n)]
    xvec = rng.uniform(-1.5, 1.5, size=(trials, n))

    entries = []
    devs = []
    for e in eps:
        d = max(
            float(np.max(np.abs(
                _rotation_block(soft(e), b.k, b.q) - _rotation_block(sigmas, b.k, b.q)
            )))
            for b in blocks
        )
        devs.append(d)
    entries.append(_rate_entry("rotation_block", eps, devs))

    devs = []
    exact = _product(sigmas, blocks)
    for e in eps:
        devs.append(float(np.max(np.abs(_product(soft(e), blocks) - exact))))
    entries.append(_rate_entry("group_element", eps, devs))

    if sig.branches[0] is Branch.PARABOLIC:
        exact_t = _transported(sigmas, subgroup, xvec)[..., n - 1]
        devs = []
        for e in eps:
            soft_t = _transported(soft(e), subgroup, xvec)[..., n - 1]
            devs.append(float(np.max(np.abs(soft_t - exact_t))))
        entries.append(_rate_entry("omega_phase_exponent", eps, devs))

    return ContractionReport(tuple(entries))
