"""Frequencies, couplings and block data of the resonant normal form.

Evaluators follow the amplitude-parameter convention: tangential
frequencies carry a stiff scale^(-4) offset plus shifts linear in the
amplitude parameters xi, normal frequencies carry the same offset plus
a 1/lam tail, and the resonant pairs couple through symmetric
coefficients built from sqrt(xi_i xi_j).  The stiff offset cancels in
all pair differences, so offset-free ("shift") variants are exposed
alongside the absolute ones to avoid catastrophic cancellation at small
scale parameters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Sequence

import numpy as np

from .lattice import ResonanceEntry, Site, TangentialSet, lam


class SiteInS(ValueError):
    """Raised when a normal-mode evaluator receives a tangential site."""


class WrongKind(ValueError):
    """Raised when a quadruple fails the linear equation of its kind."""


def _check_xi(sites, xi):
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (len(sites),):
        raise ValueError(f"xi must have length {len(sites)}, got shape {xi.shape}")
    if np.any(xi < 0):
        raise ValueError("amplitude parameters must be nonnegative")
    return xi


def tangential_shifts(sites: Sequence[Site], xi) -> np.ndarray:
    """Offset-free tangential frequency shifts, linear in xi."""
    xi = _check_xi(sites, xi)
    lams = np.array([float(lam(s)) for s in sites])
    shifts = 2.0 * xi / lams**2
    for i in range(len(sites)):
        for j in range(len(sites)):
            if j != i:
                shifts[i] += 4.0 * xi[j] / (lams[i] * lams[j])
    return shifts


def tangential_freqs(sites: Sequence[Site], xi, eps: float) -> np.ndarray:
    """Absolute tangential frequencies at scale parameter eps."""
    lams = np.array([float(lam(s)) for s in sites])
    return eps ** (-4) * lams + tangential_shifts(sites, xi)


def normal_shift(n: Site, sites: Sequence[Site], xi) -> float:
    """Offset-free normal frequency shift; decays like 1/lam(n)."""
    if tuple(n) in {tuple(s) for s in sites}:
        raise SiteInS(f"{n} is a tangential site")
    xi = _check_xi(sites, xi)
    t = 4.0 * sum(x / lam(s) for x, s in zip(xi, sites))
    return t / lam(n)


def normal_freq(n: Site, sites: Sequence[Site], xi, eps: float) -> float:
    return eps ** (-4) * lam(n) + normal_shift(n, sites, xi)


def coupling(entry: ResonanceEntry, sites: Sequence[Site], xi) -> float:
    """Resonant pair coupling 4 sqrt(xi_i xi_j) / sqrt(lam_i lam_j lam_n lam_m)."""
    xi = _check_xi(sites, xi)
    idx = {tuple(s): p for p, s in enumerate(sites)}
    xii, xij = xi[idx[entry.i]], xi[idx[entry.j]]
    denom = sqrt(float(lam(entry.i)) * lam(entry.j) * lam(entry.n) * lam(entry.m))
    return 4.0 * sqrt(xii * xij) / denom


def frequency_jacobian(sites: Sequence[Site]) -> np.ndarray:
    """Jacobian of the tangential frequencies in xi: 2/lam^2 on the
    diagonal, 4/(lam_i lam_j) off it.  Nondegeneracy of this matrix is
    what makes xi a usable parameter."""
    lams = np.array([float(lam(s)) for s in sites])
    J = 4.0 / np.outer(lams, lams)
    np.fill_diagonal(J, 2.0 / lams**2)
    return J


_BIRKHOFF = {
    # kind: (sign pattern on (i, j, n, m), coefficient factor on 1j*eps/d)
    "S1": ((1, -1, 1, -1), 1.0),
    "S2": ((1, 1, 1, 1), 1.0 / 6.0),
    "S3": ((1, 1, 1, -1), 2.0 / 3.0),
}


def birkhoff_coeff(quad: Sequence[Site], kind: str, eps: float):
    """Generating-function coefficient for one quartic monomial.

    Returns None when the modulus combination vanishes: those quadruples
    are the resonant ones that stay in the normal form instead of being
    transformed away.  Raises WrongKind if the linear equation of the
    requested kind fails.
    """
    signs, factor = _BIRKHOFF[kind]
    i, j, n, m = (tuple(p) for p in quad)
    vec0 = sum(s * p[0] for s, p in zip(signs, (i, j, n, m)))
    vec1 = sum(s * p[1] for s, p in zip(signs, (i, j, n, m)))
    if vec0 != 0 or vec1 != 0:
        raise WrongKind(f"{kind} linear equation fails for {quad}")
    d = sum(s * lam(p) for s, p in zip(signs, (i, j, n, m)))
    if d == 0:
        return None
    return 1j * eps * factor / d


_ORDER_TERMS = (
    ("eps2_I2", lambda x, e: e**2),
    ("eps2_I_z2", lambda x, e: e**2),
    ("eps_sqrtxi_z3", lambda x, e: e * x**0.5),
    ("eps2_z4", lambda x, e: e**2),
    ("eps2_xi3", lambda x, e: e**2 * x**3),
    ("eps3_xi52_z", lambda x, e: e**3 * x**2.5),
    ("eps4_xi2_z2", lambda x, e: e**4 * x**2),
    ("eps5_xi32_z3", lambda x, e: e**5 * x**1.5),
)


def perturbation_order(xi_norm: float, eps: float) -> list[tuple[str, float]]:
    """The eight remainder bound magnitudes at reference scale |I| = ||z|| = 1,
    sorted largest first so the dominant term leads the report."""
    vals = [(name, f(xi_norm, eps)) for name, f in _ORDER_TERMS]
    vals.sort(key=lambda kv: -kv[1])
    return vals


@dataclass
class NormalForm:
    """Evaluated normal-form data for one (S, xi, eps) point.

    Frequencies over normal modes are evaluated lazily; resonant-pair
    couplings are precomputed from the tangential set's tables.  The
    ``*_corr`` dictionaries accumulate the per-iteration corrections a
    solver step feeds back (empty on a freshly built object).
    """

    tset: TangentialSet
    xi: np.ndarray
    eps: float
    omega: np.ndarray = field(init=False)
    omega_corr: np.ndarray = field(init=False)
    Omega_corr: dict = field(default_factory=dict)
    a_corr: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xi = _check_xi(self.tset.sites, self.xi)
        if self.eps <= 0:
            raise ValueError("scale parameter must be positive")
        self.omega = tangential_freqs(self.tset.sites, self.xi, self.eps)
        self.omega_corr = np.zeros(len(self.tset.sites))
        self._pair1 = {}
        for e in self.tset.type1_oriented():
            self._pair1[e.n] = e
        self._pair2 = {}
        for e in self.tset.type2_oriented():
            self._pair2[e.n] = e

    @property
    def sites(self):
        return self.tset.sites

    @property
    def b(self) -> int:
        return len(self.tset.sites)

    def omega_total(self) -> np.ndarray:
        return self.omega + self.omega_corr

    def Omega(self, n: Site) -> float:
        return normal_freq(n, self.sites, self.xi, self.eps) + self.Omega_corr.get(tuple(n), 0.0)

    def Omega_shift(self, n: Site) -> float:
        return normal_shift(n, self.sites, self.xi) + self.Omega_corr.get(tuple(n), 0.0)

    def pair_kind(self, n: Site) -> str | None:
        """"type1", "type2" or None for an unresonant normal mode."""
        if tuple(n) in self._pair1:
            return "type1"
        if tuple(n) in self._pair2:
            return "type2"
        return None

    def pair_entry(self, n: Site) -> ResonanceEntry | None:
        return self._pair1.get(tuple(n)) or self._pair2.get(tuple(n))

    def coupling_value(self, entry: ResonanceEntry) -> complex:
        base = coupling(entry, self.sites, self.xi)
        key = _pair_key(entry)
        return base + self.a_corr.get(key, 0.0)

    def block(self, n: Site):
        """The 1x1 or 2x2 frequency block attached to a normal mode.

        Type-1 pairs carry +omega on the diagonal, type-2 pairs -omega
        with the conjugated coupling in the lower-left corner.
        """
        n = tuple(n)
        if n in {tuple(s) for s in self.sites}:
            raise SiteInS(f"{n} is a tangential site")
        e = self.pair_entry(n)
        if e is None:
            return np.array([[self.Omega(n)]])
        a = self.coupling_value(e)
        idx = {tuple(s): p for p, s in enumerate(self.sites)}
        wi = self.omega_total()[idx[e.i]]
        wj = self.omega_total()[idx[e.j]]
        a_m = self.coupling_value(e.oriented()[1])
        if e.kind == "type1":
            return np.array([[self.Omega(e.n) + wi, a], [a_m, self.Omega(e.m) + wj]])
        return np.array([[self.Omega(e.n) - wi, a], [np.conj(a_m), self.Omega(e.m) - wj]],
                        dtype=complex)

    def with_corrections(self, domega, dOmega: dict, da: dict) -> "NormalForm":
        """A copy with the given corrections accumulated on top."""
        nf = NormalForm(self.tset, self.xi.copy(), self.eps)
        nf.omega_corr = self.omega_corr + np.asarray(domega, dtype=float)
        nf.Omega_corr = dict(self.Omega_corr)
        for k, v in dOmega.items():
            nf.Omega_corr[k] = nf.Omega_corr.get(k, 0.0) + v
        nf.a_corr = dict(self.a_corr)
        for k, v in da.items():
            nf.a_corr[k] = nf.a_corr.get(k, 0.0) + v
        return nf


def _pair_key(entry: ResonanceEntry):
    return (entry.kind, entry.n, entry.m)
