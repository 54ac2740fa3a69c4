"""Deterministic generators for three classical example families, truncated.

Each family illustrates an infinite-dimensional phenomenon that collapses at
finite level; the diagnostics expose the collapse (margins decaying to zero,
dimension counts drifting by one under truncation) rather than hiding it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import relpos
from .errors import InputError
from .kernel import DEFAULT_TOLERANCE, TolerancePolicy
from .subspace import Subspace

EXAMPLE_NAMES = ("nonclosed-sum", "shift-triple", "hexagonal")


@dataclass(frozen=True)
class TruncatedExample:
    name: str
    level: int
    ambient_dim: int
    subspaces: dict
    diagnostics: dict

    def __post_init__(self):
        if self.level < 1:
            raise InputError("level must be at least 1")
        if self.name not in EXAMPLE_NAMES:
            raise InputError(f"unknown example name {self.name!r}")
        for sub in self.subspaces.values():
            if sub.ambient_dim != self.ambient_dim:
                raise InputError("all subspaces of an example must share the ambient dimension")


def _corner_list(dec: relpos.PairDecomposition) -> list:
    return [dec.dim_mn, dec.dim_m_nperp, dec.dim_mperp_n, dec.dim_mperp_nperp]


def nonclosed_sum_pair(level: int, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> TruncatedExample:
    """Equal-dimensional pair whose smallest positive angle sine is 1/sqrt(level).

    The n-th generator of N leans onto the n-th generator of M with cosine
    sqrt((n-1)/n); as the level grows the sum margin decays like 1/sqrt(level)
    while the decision stays true at every level.
    """
    if level < 1:
        raise InputError("level must be at least 1")
    ambient = 2 * level
    m_vectors = []
    n_vectors = []
    for k in range(1, level + 1):
        em = np.zeros(ambient)
        em[2 * k - 2] = 1.0
        m_vectors.append(em)
        en = np.zeros(ambient)
        en[2 * k - 2] = math.sqrt((k - 1) / k)
        en[2 * k - 1] = math.sqrt(1.0 / k)
        n_vectors.append(en)
    m = Subspace.from_spanning(m_vectors, ambient, tol)
    n = Subspace.from_spanning(n_vectors, ambient, tol)
    report = relpos.has_common_complement(m, n, tol)
    margin = relpos.sum_closedness_margin(m, n, tol)
    diagnostics = {
        "dim_m": m.dim,
        "dim_n": n.dim,
        "decision": report.decision,
        "sum_closedness_margin": margin,
        "expected_margin": 1.0 / math.sqrt(level),
        "corner_dims": _corner_list(report.decomposition),
    }
    return TruncatedExample("nonclosed-sum", level, ambient, {"M": m, "N": n}, diagnostics)


def _half_space_window(low: int, high: int, tol: TolerancePolicy):
    """Truncate the doubly infinite half-space triple to indices low..high."""
    ambient = high - low + 1

    def span(predicate):
        vectors = []
        for index in range(low, high + 1):
            if predicate(index):
                v = np.zeros(ambient)
                v[index - low] = 1.0
                vectors.append(v)
        return Subspace.from_spanning(vectors, ambient, tol)

    m = span(lambda j: j >= 0)
    n = span(lambda j: j <= -1)
    l = span(lambda j: j >= 1)
    return ambient, m, n, l


def shift_triple(level: int, variant: str = "asymmetric",
                 tol: TolerancePolicy = DEFAULT_TOLERANCE) -> TruncatedExample:
    """Three nested half-spaces of a two-sided sequence space, truncated.

    The full triple satisfies decisions (true, true, false) for the pairs
    (M, N), (N, L), (M, L); no single finite window preserves all of that,
    because each cross pair balances under a different index mirror.  The
    asymmetric variant uses the window -level..level for everything and
    reports the (M, N) artifact honestly; the symmetric variant decides each
    cross pair inside the window that is mirror-symmetric for it
    (-level..level-1 for (M, N), -level..level for (N, L)), replicating the
    untruncated decisions.  (M, L) is false in every window containing index 0
    since L stays a proper subspace of M.
    """
    if level < 1:
        raise InputError("level must be at least 1")
    if variant not in ("asymmetric", "symmetric"):
        raise InputError(f"variant must be 'asymmetric' or 'symmetric', got {variant!r}")

    full = _half_space_window(-level, level, tol)
    if variant == "asymmetric":
        ambient, m, n, l = full
        decision_mn = relpos.has_common_complement(m, n, tol).decision
        windows = {"MN": f"{-level}..{level}", "NL": f"{-level}..{level}", "ML": f"{-level}..{level}"}
    else:
        ambient, m, n, l = _half_space_window(-level, level - 1, tol)
        decision_mn = relpos.has_common_complement(m, n, tol).decision
        _, m_full, n_full, l_full = full
        windows = {"MN": f"{-level}..{level - 1}", "NL": f"{-level}..{level}", "ML": f"{-level}..{level}"}
    _, m_full, n_full, l_full = full
    decision_nl = relpos.has_common_complement(n_full, l_full, tol).decision
    decision_ml = relpos.has_common_complement(m_full, l_full, tol).decision
    l_inside_m = m.contains_subspace(l, tol)

    diagnostics = {
        "variant": variant,
        "dim_m": m.dim,
        "dim_n": n.dim,
        "dim_l": l.dim,
        "decision_mn": decision_mn,
        "decision_nl": decision_nl,
        "decision_ml": decision_ml,
        "decision_windows": windows,
        "l_contained_in_m": l_inside_m,
    }
    return TruncatedExample("shift-triple", level, ambient,
                            {"M": m, "N": n, "L": l}, diagnostics)


def hexagonal_pair(level: int, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> TruncatedExample:
    """A pair at constant angle pi/3 whose corner dimensions differ by one.

    N carries one extra generator orthogonal to everything in M, so
    dim(M ∩ N^perp) = 0 while dim(M^perp ∩ N) = 1 and the finite-level
    decision is false at every level: the infinite-dimensional positive result
    needs both reduced dimensions infinite and collapses under truncation.
    """
    if level < 1:
        raise InputError("level must be at least 1")
    ambient = 2 * level + 1
    m_vectors = []
    n_vectors = [np.zeros(ambient)]
    n_vectors[0][0] = 1.0
    for k in range(1, level + 1):
        f = np.zeros(ambient)
        f[2 * k - 1] = 0.5
        f[2 * k] = -math.sqrt(3.0) / 2.0
        m_vectors.append(f)
        g = np.zeros(ambient)
        g[2 * k - 1] = 0.5
        g[2 * k] = math.sqrt(3.0) / 2.0
        n_vectors.append(g)
    m = Subspace.from_spanning(m_vectors, ambient, tol)
    n = Subspace.from_spanning(n_vectors, ambient, tol)
    report = relpos.has_common_complement(m, n, tol)
    angles = relpos.principal_angles(m, n)
    diagnostics = {
        "dim_m": m.dim,
        "dim_n": n.dim,
        "decision": report.decision,
        "corner_dims": _corner_list(report.decomposition),
        "cross_angles": list(angles),
        "finite_level_collapse": ("the untruncated pair has a common complement; "
                                  "every finite truncation fails on dimensions"),
    }
    return TruncatedExample("hexagonal", level, ambient, {"M": m, "N": n}, diagnostics)


def build_example(name: str, level: int, variant: str = "asymmetric",
                  tol: TolerancePolicy = DEFAULT_TOLERANCE) -> TruncatedExample:
    if name == "nonclosed-sum":
        return nonclosed_sum_pair(level, tol)
    if name == "shift-triple":
        return shift_triple(level, variant, tol)
    if name == "hexagonal":
        return hexagonal_pair(level, tol)
    raise InputError(f"unknown example name {name!r}; choose from {EXAMPLE_NAMES}")
