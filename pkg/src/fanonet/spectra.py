"""Eigenmodes of subgraph Hamiltonians and trapped-mode certification.

A subgraph eigenmode whose amplitude vanishes on every joint site never
feels the inter-subgraph couplings, so its zero-padded embedding is an
exact eigenvector of the full network: the particle stays in the subgraph
forever.  ``find_trapping_modes`` certifies all such modes, handling
degenerate eigenspaces through a null-space criterion instead of the
basis-dependent per-vector node test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import LatticeGraph, Partition, assemble_hamiltonian, subgraph_hamiltonian

__all__ = [
    "EigenMode",
    "TrappingCertificate",
    "diagonalize",
    "open_chain_modes",
    "find_trapping_modes",
    "verify_trapping",
]

DEFAULT_SIZE_CAP = 4096
# relative amplitude below which a site counts as a wave node; separates
# float noise from genuinely small amplitudes
NODE_TOL = 1e-9
# energies closer than this (times ||H||_inf) form one degeneracy group
DEGENERACY_TOL = 1e-8
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class EigenMode:
    """One eigenpair of a subgraph Hamiltonian.

    ``nodes`` holds the zero-amplitude sites.  For analytic open-chain
    modes these are 1-based chain positions computed by integer
    arithmetic; numerically detected nodes use |g_j| < NODE_TOL * max|g|.
    """

    energy: float
    amplitudes: np.ndarray
    nodes: frozenset[int]
    degeneracy_group: int


@dataclass(frozen=True)
class TrappingCertificate:
    """A certified trapped mode: a subgraph eigenvector that is an exact
    eigenvector of the full network.

    ``vector`` lives on the full graph and is zero outside subgraph
    ``subgraph``; ``residual`` is ||H psi - E psi||_inf on the full
    Hamiltonian.
    """

    subgraph: int
    energy: float
    vector: np.ndarray
    residual: float

    def support_sites(self, tol: float = NODE_TOL) -> list[int]:
        scale = np.max(np.abs(self.vector))
        return [int(i) for i in np.nonzero(np.abs(self.vector) > tol * scale)[0]]

    def node_sites(self, sites, tol: float = NODE_TOL) -> list[int]:
        """Sites among ``sites`` where the certified mode has a wave node."""
        scale = np.max(np.abs(self.vector))
        return [int(s) for s in sites if abs(self.vector[s]) < tol * scale]

    def to_json_dict(self) -> dict:
        sites = self.support_sites()
        return {
            "energy": float(self.energy),
            "sites": sites,
            "amplitudes": [float(self.vector[s]) for s in sites],
            "residual": float(self.residual),
        }


def diagonalize(h: np.ndarray, size_cap: int = DEFAULT_SIZE_CAP):
    """Dense symmetric eigendecomposition with validated contract.

    Returns ``(energies, vectors)`` with energies ascending and vectors in
    columns, orthonormal, each pair satisfying
    ||H g - e g||_inf < 1e-10 * ||H||.

    Raises
    ------
    ValueError
        If the matrix is not exactly symmetric or exceeds ``size_cap``.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] > size_cap:
        raise ValueError(f"matrix size {h.shape[0]} exceeds cap {size_cap}")
    if not np.array_equal(h, h.T):
        raise ValueError("matrix is not symmetric")
    energies, vectors = np.linalg.eigh(h)
    scale = np.linalg.norm(h, np.inf) or 1.0
    residual = np.max(np.abs(h @ vectors - vectors * energies))
    if residual >= RESIDUAL_TOL * scale:
        raise ArithmeticError(f"eigensolver residual {residual:.3e} out of tolerance")
    return energies, vectors


def open_chain_modes(size: int, kappa: float = 1.0) -> list[EigenMode]:
    """Analytic eigenmodes of the uniform open chain of ``size`` sites.

    Mode n (1-based) has momentum n*pi/(size+1), energy
    -2*kappa*cos(momentum) and amplitude proportional to sin(momentum * j)
    at chain position j.  Its wave nodes sit at positions j with
    n*j divisible by size+1, evaluated in exact integer arithmetic; the
    stored amplitude at a node is exactly zero.
    """
    if size < 1:
        raise ValueError(f"chain size must be >= 1, got {size}")
    modes = []
    positions = np.arange(1, size + 1)
    for n in range(1, size + 1):
        momentum = n * np.pi / (size + 1)
        g = np.sqrt(2.0 / (size + 1)) * np.sin(momentum * positions)
        nodes = frozenset(int(j) for j in positions if (n * j) % (size + 1) == 0)
        for j in nodes:
            g[j - 1] = 0.0
        g = g / np.linalg.norm(g)
        modes.append(
            EigenMode(
                energy=-2.0 * kappa * np.cos(momentum),
                amplitudes=g,
                nodes=nodes,
                degeneracy_group=n,
            )
        )
    return modes


def _degeneracy_groups(energies: np.ndarray, scale: float) -> list[slice]:
    """Slices of ascending ``energies`` whose members lie within tolerance."""
    tol = DEGENERACY_TOL * scale
    groups = []
    start = 0
    for i in range(1, len(energies) + 1):
        if i == len(energies) or energies[i] - energies[i - 1] > tol:
            groups.append(slice(start, i))
            start = i
    return groups


def find_trapping_modes(
    graph: LatticeGraph, partition: Partition, l: int
) -> list[TrappingCertificate]:
    """All independent trapped modes of subgraph ``l``.

    A subgraph eigenvector is trapped exactly when the inter-subgraph
    coupling annihilates it: at every outside site adjacent to ``l`` the
    coupling-weighted sum of joint amplitudes must vanish.  When each such
    outside site touches a single joint (every chain-like geometry) this is
    the plain wave-node test - zero amplitude on all joint sites; weighted
    cancellations over several joints are the degenerate "dark state" case.
    Within a degenerate eigenspace the criterion becomes a null-space
    problem over the eigenbasis combinations, solved per energy group.
    With no couplings at all, every eigenmode is vacuously trapped.
    """
    sites = partition.sites_of(l)
    if not sites:
        raise ValueError(f"subgraph {l} is empty")
    h_l, sites = subgraph_hamiltonian(graph, partition, l)
    local = {s: i for i, s in enumerate(sites)}

    # one row per outside neighbor site: the coupling weights into l
    rows: dict[int, np.ndarray] = {}
    for i, j, s in partition.couplings():
        inner, outer = (i, j) if partition.assignment[i] == l else (j, i)
        if partition.assignment[inner] != l:
            continue
        rows.setdefault(outer, np.zeros(len(sites)))[local[inner]] = s
    coupling = np.array([rows[m] for m in sorted(rows)]) if rows else None

    energies, vectors = diagonalize(h_l)
    scale = np.linalg.norm(h_l, np.inf)
    h_full = assemble_hamiltonian(graph)

    certificates = []
    for group in _degeneracy_groups(energies, scale):
        basis = vectors[:, group]              # (n_l, d)
        energy = float(np.mean(energies[group]))
        if coupling is not None:
            leak = coupling @ basis            # (n_outside, d)
            # combinations u with leak @ u = 0: trailing right-singular
            # vectors whose singular value is below node tolerance
            _, svals, vh = np.linalg.svd(leak)
            tol = NODE_TOL * max(np.max(np.abs(leak)), np.max(np.abs(coupling)))
            keep = [
                vh[r]
                for r in range(basis.shape[1])
                if r >= len(svals) or svals[r] < tol
            ]
            trapped = [basis @ u for u in keep]
        else:
            trapped = [basis[:, i] for i in range(basis.shape[1])]
        for vec in trapped:
            full = np.zeros(graph.site_count)
            full[sites] = vec / np.linalg.norm(vec)
            residual = float(np.max(np.abs(h_full @ full - energy * full)))
            certificates.append(TrappingCertificate(l, energy, full, residual))
    return certificates


def verify_trapping(graph: LatticeGraph, certificate: TrappingCertificate) -> float:
    """Residual ||H psi - E psi||_inf recomputed on the full Hamiltonian,
    independent of the subgraph code path."""
    if certificate.vector.shape != (graph.site_count,):
        raise ValueError(
            f"certificate vector has {certificate.vector.shape[0]} sites, "
            f"graph has {graph.site_count}"
        )
    h = assemble_hamiltonian(graph)
    return float(np.max(np.abs(h @ certificate.vector - certificate.energy * certificate.vector)))
