"""Bivariate trigonometric-polynomial symbols, divided differences, and a dyadic-block norm.

A symbol is f(x, y) = sum_{|m|,|k| <= N} c_{m,k} exp(i(mx + ky)), stored as a
(2N+1) x (2N+1) coefficient array indexed [m+N, k+N].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Below this gap the divided difference switches to the midpoint derivative;
# balances cancellation (~eps/h) against Taylor truncation (~h).
COINCIDENT_TOL = 1e-7


@dataclass(frozen=True)
class TrigPoly2:
    coeffs: np.ndarray  # (2N+1, 2N+1) complex, index [m+N, k+N]
    real_valued: bool = False

    def __post_init__(self):
        C = np.asarray(self.coeffs, dtype=np.complex128)
        if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] % 2 == 0:
            raise ValueError(f"coefficient array must be odd square, got {C.shape}")
        if not np.all(np.isfinite(C.view(np.float64))):
            raise ValueError("coefficients must be finite")
        if self.real_valued:
            dev = np.max(np.abs(C - np.conj(C[::-1, ::-1])))
            if dev > 1e-14:
                raise ValueError(f"real_valued symbol violates conjugate symmetry by {dev:.3e}")
        object.__setattr__(self, "coeffs", C)

    @property
    def degree(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def modes(self) -> np.ndarray:
        N = self.degree
        return np.arange(-N, N + 1)

    def scaled(self, c: complex) -> "TrigPoly2":
        real = self.real_valued and (np.imag(c) == 0)
        return TrigPoly2(self.coeffs * c, real_valued=bool(real))


def eval_symbol(f: TrigPoly2, x: float, y: float) -> complex:
    m = f.modes
    ex = np.exp(1j * m * x)
    ey = np.exp(1j * m * y)
    return complex(ex @ f.coeffs @ ey)


def eval_symbol_grid(f: TrigPoly2, xs, ys) -> np.ndarray:
    """Values f(x_i, y_j) as a len(xs) x len(ys) matrix."""
    m = f.modes
    Ex = np.exp(1j * np.outer(np.asarray(xs, float), m))
    Ey = np.exp(1j * np.outer(m, np.asarray(ys, float)))
    return Ex @ f.coeffs @ Ey


def _mode_divided_factor(m: np.ndarray, t1: float, t2: float) -> np.ndarray:
    """Per-mode divided difference of exp(im t): stable symmetric form."""
    mid = np.exp(1j * m * 0.5 * (t1 + t2))
    if abs(t1 - t2) < COINCIDENT_TOL:
        return 1j * m * mid
    return mid * (2j * np.sin(m * 0.5 * (t1 - t2))) / (t1 - t2)


def divided_difference_x(f: TrigPoly2, x1: float, x2: float, y: float) -> complex:
    """(f(x1,y) - f(x2,y)) / (x1 - x2), extended by d f/dx at the midpoint when x1 ~ x2."""
    m = f.modes
    g = _mode_divided_factor(m, x1, x2)
    ey = np.exp(1j * m * y)
    return complex(g @ f.coeffs @ ey)


def divided_difference_y(f: TrigPoly2, x: float, y1: float, y2: float) -> complex:
    """(f(x,y1) - f(x,y2)) / (y1 - y2), extended by d f/dy at the midpoint when y1 ~ y2."""
    m = f.modes
    g = _mode_divided_factor(m, y1, y2)
    ex = np.exp(1j * m * x)
    return complex(ex @ f.coeffs @ g)


@dataclass(frozen=True)
class BesovProfile:
    """Per-dyadic-block sup norms b_n and the weighted sum  sum_n 2^n b_n."""

    block_norms: tuple
    besov_norm: float


def block_count(N: int) -> int:
    return math.ceil(math.log2(max(N, 1))) + 1


def besov_norm(f: TrigPoly2, oversample: int = 8) -> BesovProfile:
    """Weighted dyadic-block norm: block 0 holds max(|m|,|k|) <= 1, block n holds
    (2^(n-1), 2^n]; each block's sup norm is estimated on a dense uniform grid."""
    if oversample < 4:
        raise ValueError("oversample must be >= 4")
    N = f.degree
    L = block_count(N)
    G = oversample * (2 * N + 2)
    grid = 2.0 * np.pi * np.arange(G) / G

    m = f.modes
    ring = np.maximum(np.abs(m)[:, None], np.abs(m)[None, :])
    norms = []
    for n in range(L):
        if n == 0:
            mask = ring <= 1
        else:
            mask = (ring > 2 ** (n - 1)) & (ring <= 2**n)
        part = TrigPoly2(np.where(mask, f.coeffs, 0.0), real_valued=False)
        norms.append(float(np.max(np.abs(eval_symbol_grid(part, grid, grid)))))
    total = float(sum((2.0**n) * b for n, b in enumerate(norms)))
    return BesovProfile(block_norms=tuple(norms), besov_norm=total)


def random_symbol(N: int, seed: int, real_valued: bool = False) -> TrigPoly2:
    """Deterministic random symbol with all coefficient moduli <= 1."""
    if N < 0:
        raise ValueError("degree must be nonnegative")
    rng = np.random.default_rng(seed)
    size = 2 * N + 1
    mag = rng.uniform(0.0, 1.0, (size, size))
    phase = rng.uniform(0.0, 2.0 * np.pi, (size, size))
    C = mag * np.exp(1j * phase)
    if real_valued:
        C = 0.5 * (C + np.conj(C[::-1, ::-1]))
    return TrigPoly2(C, real_valued=real_valued)


def symbol_to_json(f: TrigPoly2) -> dict:
    return {
        "N": f.degree,
        "re": f.coeffs.real.ravel().tolist(),
        "im": f.coeffs.imag.ravel().tolist(),
        "real_valued": bool(f.real_valued),
    }


def symbol_from_json(obj: dict) -> TrigPoly2:
    N = int(obj["N"])
    size = 2 * N + 1
    re = np.asarray(obj["re"], dtype=np.float64).reshape(size, size)
    im = np.asarray(obj["im"], dtype=np.float64).reshape(size, size)
    return TrigPoly2(re + 1j * im, real_valued=bool(obj["real_valued"]))
