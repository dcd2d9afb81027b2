"""Odd-sublattice geometry and resonance combinatorics.

The mode lattice consists of the integer pairs with odd first and even
second coordinate; it excludes the origin, so every mode has a positive
squared modulus.  This module screens tangential-site sets for the
structural conditions that keep the coupled normal form block-diagonal
with small blocks: no rectangle triples, a unique resonance partner of
each type per outside mode, and disjoint type-1/type-2 resonance
classes.  All arithmetic is exact; sites may carry arbitrary-precision
coordinates.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

Site = tuple[int, int]


class DegenerateInput(ValueError):
    """Raised when geometric predicates receive coincident points."""


class BadCardinality(ValueError):
    """Raised when a tangential set has fewer than two sites."""


def in_lattice(p: Sequence[int]) -> bool:
    """True iff the first coordinate is odd and the second is even."""
    return p[0] % 2 == 1 and p[1] % 2 == 0


def lam(s: Site) -> int:
    """Squared modulus of a lattice site, exact."""
    return s[0] * s[0] + s[1] * s[1]


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[0] + u[1] * v[1]


def _sub(a: Site, b: Site) -> Site:
    return (a[0] - b[0], a[1] - b[1])


def rectangle_triple(a: Site, b: Site, c: Site) -> bool:
    """True iff the three points are three vertices of some rectangle.

    Equivalently: they are not collinear and one of them sees the other
    two under a right angle.  Collinear triples bound no rectangle and
    return False.
    """
    if a == b or b == c or a == c:
        raise DegenerateInput(f"coincident points in {(a, b, c)}")
    u, v = _sub(b, a), _sub(c, a)
    if u[0] * v[1] - u[1] * v[0] == 0:
        return False
    for vertex, p, q in ((a, b, c), (b, a, c), (c, a, b)):
        if _dot(_sub(p, vertex), _sub(q, vertex)) == 0:
            return True
    return False


def sites_in_window(window: int) -> list[Site]:
    """All lattice sites with euclidean norm at most ``window``, sorted."""
    out = []
    w2 = window * window
    for n1 in range(-window, window + 1):
        if n1 % 2 == 0:
            continue
        for n2 in range(-window, window + 1):
            if n2 % 2 != 0:
                continue
            if n1 * n1 + n2 * n2 <= w2:
                out.append((n1, n2))
    out.sort()
    return out


@dataclass(frozen=True)
class ResonanceEntry:
    """One resonant pair (n, m) tied to the tangential pair (i, j).

    Type 1 satisfies n - m + i - j = 0 with matching squared moduli,
    type 2 satisfies n + m - i - j = 0 likewise.  Entries are stored in
    canonical orientation (see :func:`classify_resonances`); use
    :meth:`oriented` to recover both index orders of a type-1 pair.
    """

    n: Site
    m: Site
    i: Site
    j: Site
    kind: str  # "type1" | "type2"

    def oriented(self) -> tuple["ResonanceEntry", "ResonanceEntry"]:
        if self.kind == "type1":
            mirror = ResonanceEntry(self.m, self.n, self.j, self.i, self.kind)
        else:
            mirror = ResonanceEntry(self.m, self.n, self.i, self.j, self.kind)
        return (self, mirror)

    def check_exact(self) -> bool:
        """Re-verify the defining linear and modulus equations."""
        n, m, i, j = self.n, self.m, self.i, self.j
        if self.kind == "type1":
            vec = (n[0] - m[0] + i[0] - j[0], n[1] - m[1] + i[1] - j[1])
            mod = lam(n) - lam(m) + lam(i) - lam(j)
        else:
            vec = (n[0] + m[0] - i[0] - j[0], n[1] + m[1] - i[1] - j[1])
            mod = lam(n) + lam(m) - lam(i) - lam(j)
        return vec == (0, 0) and mod == 0


def _pair_data(sites: Sequence[Site]):
    """Precomputed linear-form constants for every ordered pair (i, j).

    Coordinates of generated sites can run to hundreds of thousands of
    digits, so the per-mode resonance test is reduced to one small-by-big
    product per pair instead of squaring large integers in the loop.
    """
    data = []
    for i in sites:
        for j in sites:
            if i == j:
                continue
            d = _sub(i, j)
            c1 = lam(i) - lam(j) - lam(d)  # type1 holds iff c1 == 2<n,d>
            s = (i[0] + j[0], i[1] + j[1])
            c2 = lam(s) - lam(i) - lam(j)  # type2 holds iff 2*lam(n) - 2<n,s> + c2 == 0
            data.append((i, j, d, c1, s, c2))
    return data


def _resonance_scan(sites: Sequence[Site], window: int) -> Iterator[tuple]:
    """Yield every oriented resonance hit (kind, n, m, i, j) for n in the window."""
    sset = set(sites)
    pairs = _pair_data(sites)
    for n in sites_in_window(window):
        if n in sset:
            continue
        ln = lam(n)
        for i, j, d, c1, s, c2 in pairs:
            if c1 == 2 * _dot(n, d):
                m = (n[0] + d[0], n[1] + d[1])
                if m not in sset:
                    yield ("type1", n, m, i, j)
            if 2 * ln - 2 * _dot(n, s) + c2 == 0:
                m = (s[0] - n[0], s[1] - n[1])
                if m not in sset:
                    yield ("type2", n, m, i, j)


def classify_resonances(
    sites: Sequence[Site], window: int
) -> tuple[list[ResonanceEntry], list[ResonanceEntry]]:
    """Scan the window for both resonance types against the site set.

    For every outside mode n with ``|n| <= window`` and every ordered
    pair of distinct tangential sites, the partner m is computed from
    the linear equation and kept when the modulus equation holds exactly
    and m lies outside the set.  Each unordered resonant pair is stored
    once, oriented so that n is the lexicographically smaller of (n, m);
    for type 2 the (i, j) pair is stored sorted as well, since the
    defining equations are symmetric in it.
    """
    type1: dict[tuple, ResonanceEntry] = {}
    type2: dict[tuple, ResonanceEntry] = {}
    for kind, n, m, i, j in _resonance_scan(sites, window):
        if kind == "type1":
            entry = ResonanceEntry(n, m, i, j, kind) if n <= m else ResonanceEntry(m, n, j, i, kind)
            type1[(entry.n, entry.m, entry.i, entry.j)] = entry
        else:
            nn, mm = (n, m) if n <= m else (m, n)
            ii, jj = (i, j) if i <= j else (j, i)
            entry = ResonanceEntry(nn, mm, ii, jj, kind)
            type2[(nn, mm, ii, jj)] = entry
    return sorted(type1.values(), key=_entry_key), sorted(type2.values(), key=_entry_key)


def _entry_key(e: ResonanceEntry):
    return (e.n, e.m, e.i, e.j)


@dataclass(frozen=True)
class TangentialSet:
    """A tangential-site set with its resonance tables up to a window."""

    sites: tuple[Site, ...]
    type1: tuple[ResonanceEntry, ...]
    type2: tuple[ResonanceEntry, ...]
    window: int

    @classmethod
    def build(cls, sites: Sequence[Site], window: int) -> "TangentialSet":
        sites = tuple(tuple(s) for s in sites)
        _validate_sites(sites)
        t1, t2 = classify_resonances(sites, window)
        return cls(sites, tuple(t1), tuple(t2), window)

    @property
    def b(self) -> int:
        return len(self.sites)

    def site_index(self, s: Site) -> int:
        return self.sites.index(s)

    def type1_oriented(self) -> list[ResonanceEntry]:
        out = []
        for e in self.type1:
            out.extend(e.oriented())
        return out

    def type2_oriented(self) -> list[ResonanceEntry]:
        out = []
        for e in self.type2:
            out.extend(e.oriented())
        return out

    def entry_for(self, n: Site) -> ResonanceEntry | None:
        """The oriented resonance entry whose first pair member is n, if any."""
        for e in self.type1_oriented() + self.type2_oriented():
            if e.n == n:
                return e
        return None


def _validate_sites(sites: Sequence[Site]) -> None:
    for s in sites:
        if not in_lattice(s):
            raise ValueError(f"site {s} is not on the odd sublattice")
    if len(set(sites)) != len(sites):
        raise ValueError("tangential sites must be pairwise distinct")


@dataclass(frozen=True)
class Violation:
    kind: str  # "rectangle" | "type1-multiplicity" | "type2-multiplicity" | "type-overlap"
    witness: tuple


@dataclass(frozen=True)
class AdmissibilityReport:
    passed: bool
    violations: tuple[Violation, ...]
    window: int


def verify_admissible(sites: Sequence[Site], window: int) -> AdmissibilityReport:
    """Window-bounded admissibility check of a tangential-site set.

    Checks, in order: no triple of sites spans a rectangle; every outside
    mode in the window has at most one resonance triple of each type; no
    outside mode is resonant in both types.  The certificate is only as
    strong as the window, which the report records.
    """
    sites = [tuple(s) for s in sites]
    if len(sites) < 2:
        raise BadCardinality(f"need at least two sites, got {len(sites)}")
    _validate_sites(sites)

    violations: list[Violation] = []
    for a, b, c in combinations(sites, 3):
        if rectangle_triple(a, b, c):
            violations.append(Violation("rectangle", (a, b, c)))

    triples1: dict[Site, set] = defaultdict(set)
    triples2: dict[Site, set] = defaultdict(set)
    for kind, n, m, i, j in _resonance_scan(sites, window):
        if kind == "type1":
            triples1[n].add((m, i, j))
        else:
            triples2[n].add((m,) + ((i, j) if i <= j else (j, i)))

    for n in sorted(triples1):
        if len(triples1[n]) > 1:
            violations.append(Violation("type1-multiplicity", (n, tuple(sorted(triples1[n])))))
    for n in sorted(triples2):
        if len(triples2[n]) > 1:
            violations.append(Violation("type2-multiplicity", (n, tuple(sorted(triples2[n])))))
    for n in sorted(set(triples1) & set(triples2)):
        violations.append(Violation("type-overlap", (n,)))

    return AdmissibilityReport(not violations, tuple(violations), window)


@dataclass(frozen=True)
class ParityScan:
    """Result of the exhaustive box scan for the forbidden sign pattern."""

    window: int
    quadruples: int
    solutions: int
    residuals_all_2_mod_4: bool


def parity_scan(window: int) -> ParityScan:
    """Scan all (i, j, n) with coordinates bounded by ``window``.

    The fourth point is m = i + j + n, which stays on the lattice, and
    the residual lam(i)+lam(j)+lam(n)-lam(m) is tested for zeros.  On
    this sublattice every squared modulus is 1 mod 4, so the residual is
    always 2 mod 4; the scan confirms both facts exhaustively.
    """
    coords = [(a, b) for a in range(-window, window + 1) if a % 2
              for b in range(-window, window + 1) if b % 2 == 0]
    p = np.array(coords, dtype=np.int64)
    lam_p = p[:, 0] ** 2 + p[:, 1] ** 2
    M = len(p)
    solutions = 0
    all_mod = True
    # residual(i,j,n) = lam_i + lam_j + lam_n - lam_m, m = p_i + p_j + p_n
    for a in range(M):
        m1 = p[a, 0] + p[:, None, 0] + p[None, :, 0]
        m2 = p[a, 1] + p[:, None, 1] + p[None, :, 1]
        res = lam_p[a] + lam_p[:, None] + lam_p[None, :] - (m1 * m1 + m2 * m2)
        solutions += int(np.count_nonzero(res == 0))
        if all_mod and not np.all(res % 4 == 2):
            all_mod = False
    return ParityScan(window, M * M * M, solutions, all_mod)


def parity_obstruction(window: int) -> bool:
    """True iff no quadruple in the box satisfies both defining equations."""
    return parity_scan(window).solutions == 0


@dataclass(frozen=True)
class Monomial:
    """A phase-space monomial: coeff * e^{i<k,theta>} I^l z^alpha zbar^beta."""

    k: tuple[int, ...]
    l: tuple[int, ...]
    alpha: Mapping[Site, int]
    beta: Mapping[Site, int]
    coeff: complex = 1.0


def zero_momentum(mono: Monomial, sites: Sequence[Site]) -> bool:
    """True iff the total lattice momentum of the monomial vanishes.

    The momentum is sum_j k_j i_j + sum_n (alpha_n - beta_n) n as a
    lattice vector; brackets of momentum-free terms stay momentum-free,
    which downstream solvers rely on.
    """
    m0 = m1 = 0
    for kj, s in zip(mono.k, sites):
        m0 += kj * s[0]
        m1 += kj * s[1]
    for n, a in mono.alpha.items():
        m0 += a * n[0]
        m1 += a * n[1]
    for n, bmul in mono.beta.items():
        m0 -= bmul * n[0]
        m1 -= bmul * n[1]
    return m0 == 0 and m1 == 0
