"""Complex Hermitian matrix algebra: spectral decompositions, Schatten norms, random ensembles.

Matrices are plain complex128 numpy arrays. Hermitian inputs are validated at
entry points rather than wrapped; spectral data gets a small immutable container.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

HERMITIAN_ATOL = 1e-12

# Spectra of generated operators are kept strictly inside this symmetric
# interval so that 2pi-periodic symbols are single-valued on them.
SPECTRUM_BOUND = np.pi - 0.1


def derive_seed(*parts) -> int:
    """Stable 64-bit seed derived from labelled parts, independent of platform."""
    key = "|".join(repr(p) for p in parts)
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def as_operator(T) -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    T = np.asarray(T, dtype=np.complex128)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {T.shape}")
    if not np.all(np.isfinite(T.view(np.float64))):
        raise ValueError("matrix has non-finite entries")
    return T


def require_hermitian(A, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate Hermitian symmetry entrywise and return the coerced matrix."""
    A = as_operator(A)
    dev = np.max(np.abs(A - A.conj().T)) if A.size else 0.0
    if dev > atol:
        raise ValueError(f"matrix is not Hermitian: max |A - A*| = {dev:.3e}")
    return A


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (ascending) with their orthogonal spectral projections."""

    eigenvalues: np.ndarray  # (m,) real, strictly increasing
    projections: np.ndarray  # (m, n, n) complex

    @property
    def source_dim(self) -> int:
        return self.projections.shape[1]

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        return np.einsum("j,jab->ab", self.eigenvalues, self.projections)


def spectral_decompose(A, cluster_tol: float | None = None) -> SpectralDecomposition:
    """Eigendecompose a Hermitian matrix, merging eigenvalues closer than cluster_tol.

    cluster_tol defaults to 1e-9 * (1 + max|A_ij|); merged clusters carry the
    mean eigenvalue and the sum of the rank-one projectors.
    """
    A = require_hermitian(A)
    if cluster_tol is None:
        cluster_tol = 1e-9 * (1.0 + (float(np.max(np.abs(A))) if A.size else 0.0))
    if cluster_tol < 0:
        raise ValueError("cluster_tol must be nonnegative")
    w, V = np.linalg.eigh(A)

    if len(w) == 1 or np.min(np.diff(w)) > cluster_tol:
        # all eigenvalues distinct: rank-one projectors, no grouping pass
        projections = V.T[:, :, None] * V.conj().T[:, None, :]
        return SpectralDecomposition(eigenvalues=w, projections=projections)

    groups: list[list[int]] = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[groups[-1][-1]] <= cluster_tol:
            groups[-1].append(i)
        else:
            groups.append([i])

    eigenvalues = np.array([float(np.mean(w[g])) for g in groups])
    projections = np.stack(
        [V[:, g] @ V[:, g].conj().T for g in groups]
    )
    return SpectralDecomposition(eigenvalues=eigenvalues, projections=projections)


def schatten_norm(T, p: float) -> float:
    """Schatten p-norm (sum of p-th powers of singular values)^(1/p); p=inf is the operator norm."""
    T = as_operator(T)
    if not (p >= 1.0):
        raise ValueError(f"Schatten index must satisfy p >= 1, got {p}")
    s = np.linalg.svd(T, compute_uv=False)
    if s.size == 0:
        return 0.0
    if np.isinf(p):
        return float(s[0])
    return float(np.sum(s**p) ** (1.0 / p))


def random_hermitian(dim: int, seed: int, scale: float = 1.0) -> np.ndarray:
    """Deterministic random Hermitian matrix with spectrum inside (-pi+0.1, pi-0.1)."""
    if dim < 1:
        raise ValueError("dim must be a positive integer")
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = scale * 0.5 * (G + G.conj().T)
    radius = float(np.max(np.abs(np.linalg.eigvalsh(H))))
    cap = 0.98 * SPECTRUM_BOUND
    if radius > cap:
        H = H * (cap / radius)
    return H


def matrix_to_json(A) -> dict:
    """Row-major split-complex JSON form: {"dim", "re", "im"}."""
    A = as_operator(A)
    return {
        "dim": int(A.shape[0]),
        "re": A.real.ravel().tolist(),
        "im": A.imag.ravel().tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    n = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=np.float64).reshape(n, n)
    im = np.asarray(obj["im"], dtype=np.float64).reshape(n, n)
    return re + 1j * im
