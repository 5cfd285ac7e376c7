"""Double and triple operator integrals over finite spectral data, plus
Haagerup-style kernel representations with their factor norms.

Triple sums accumulate in fixed j -> k -> l order with Kahan compensation so
outputs are bitwise reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .funcspace import TrigPoly2, eval_symbol_grid
from .matrixcore import SpectralDecomposition, as_operator

GRID_LOOKUP_ATOL = 1e-12


@dataclass(frozen=True)
class Kernel3:
    """Lazy three-variable kernel: evaluator plus a provenance tag."""

    evaluator: Callable[[float, float, float], complex]
    tag: str = "ad-hoc"

    def __call__(self, x1: float, x2: float, x3: float) -> complex:
        return complex(self.evaluator(x1, x2, x3))


def _check_dims(*mats_and_decomps):
    dims = set()
    for obj in mats_and_decomps:
        if isinstance(obj, SpectralDecomposition):
            dims.add(obj.source_dim)
        else:
            dims.add(obj.shape[0])
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch across operands: {sorted(dims)}")


def _contract_left(P: np.ndarray, right: np.ndarray) -> np.ndarray:
    # sum_j P[j] @ right[j] as one gemm: [P_0 | ... | P_m] @ vstack(right)
    m, n, _ = P.shape
    return P.transpose(1, 0, 2).reshape(n, m * n) @ right.reshape(m * n, n)


def doi_apply(phi, DA: SpectralDecomposition, DB: SpectralDecomposition, T) -> np.ndarray:
    """Double operator integral: sum_{j,k} phi(lam_j, mu_k) P_j T Q_k."""
    T = as_operator(T)
    _check_dims(DA, DB, T)
    lam, mu = DA.eigenvalues, DB.eigenvalues
    Phi = np.array([[phi(x, y) for y in mu] for x in lam], dtype=np.complex128)
    # sum_k Phi[j,k] Q_k, then P_j T (.)
    right = np.tensordot(Phi, DB.projections, axes=([1], [0]))  # (mA, n, n)
    return _contract_left(DA.projections, np.matmul(T, right))


def func_of_pair(f: TrigPoly2, DA: SpectralDecomposition, DB: SpectralDecomposition) -> np.ndarray:
    """Functional calculus for a noncommuting pair: sum_{j,k} f(lam_j, mu_k) P_j Q_k."""
    _check_dims(DA, DB)
    F = eval_symbol_grid(f, DA.eigenvalues, DB.eigenvalues)
    right = np.tensordot(F, DB.projections, axes=([1], [0]))
    return _contract_left(DA.projections, right)


def _kahan_add(acc, comp, term):
    y = term - comp
    t = acc + y
    comp = (t - acc) - y
    return t, comp


def toi_direct(
    psi,
    D1: SpectralDecomposition,
    T,
    D2: SpectralDecomposition,
    R,
    D3: SpectralDecomposition,
) -> np.ndarray:
    """Triple operator integral: sum_{j,k,l} psi(x1_j, x2_k, x3_l) P_j T Q_k R S_l."""
    T = as_operator(T)
    R = as_operator(R)
    _check_dims(D1, D2, D3, T, R)
    n = D1.source_dim
    acc = np.zeros((n, n), dtype=np.complex128)
    comp = np.zeros_like(acc)
    for j, x1 in enumerate(D1.eigenvalues):
        PT = D1.projections[j] @ T
        for k, x2 in enumerate(D2.eigenvalues):
            PTQR = PT @ D2.projections[k] @ R
            for l, x3 in enumerate(D3.eigenvalues):
                term = psi(x1, x2, x3) * (PTQR @ D3.projections[l])
                acc, comp = _kahan_add(acc, comp, term)
    return acc


def toi_adjacent(
    psi,
    D1: SpectralDecomposition,
    D2: SpectralDecomposition,
    Q,
    D3: SpectralDecomposition,
) -> np.ndarray:
    """Triple integral with adjacent first two measures: sum psi * P_j P'_k Q S_l."""
    Q = as_operator(Q)
    _check_dims(D1, D2, D3, Q)
    n = D1.source_dim
    acc = np.zeros((n, n), dtype=np.complex128)
    comp = np.zeros_like(acc)
    for j, x1 in enumerate(D1.eigenvalues):
        for k, x2 in enumerate(D2.eigenvalues):
            PPQ = D1.projections[j] @ D2.projections[k] @ Q
            for l, x3 in enumerate(D3.eigenvalues):
                term = psi(x1, x2, x3) * (PPQ @ D3.projections[l])
                acc, comp = _kahan_add(acc, comp, term)
    return acc


VALID_KINDS = ("core", "first", "second")


@dataclass(frozen=True)
class HaagerupRep:
    """Concrete factorization of a three-variable kernel on fixed grids.

    kind=core:    Psi = sum_{j,k} alpha[j](x1) beta[j,k](x2) gamma[k](x3)
    kind=first:   Psi = sum_{j,k} alpha[j](x1) beta[k](x2)   gamma[j,k](x3)
    kind=second:  Psi = sum_{j,k} alpha[j,k](x1) beta[j](x2) gamma[k](x3)

    Factor arrays carry the grid axis last.
    """

    kind: str
    grids: tuple  # three 1-D real arrays
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        grids = tuple(np.asarray(g, dtype=np.float64).ravel() for g in self.grids)
        object.__setattr__(self, "grids", grids)
        a = np.asarray(self.alpha, dtype=np.complex128)
        b = np.asarray(self.beta, dtype=np.complex128)
        g = np.asarray(self.gamma, dtype=np.complex128)
        for name, arr in (("alpha", a), ("beta", b), ("gamma", g)):
            if not np.all(np.isfinite(arr.view(np.float64))):
                raise ValueError(f"{name} has non-finite entries")
        n1, n2, n3 = (len(x) for x in grids)
        if self.kind == "core":
            J, K = a.shape[0], g.shape[0]
            expect = {"alpha": (J, n1), "beta": (J, K, n2), "gamma": (K, n3)}
        elif self.kind == "first":
            J, K = a.shape[0], b.shape[0]
            expect = {"alpha": (J, n1), "beta": (K, n2), "gamma": (J, K, n3)}
        else:
            J, K = b.shape[0], g.shape[0]
            expect = {"alpha": (J, K, n1), "beta": (J, n2), "gamma": (K, n3)}
        for name, arr in (("alpha", a), ("beta", b), ("gamma", g)):
            if arr.shape != expect[name]:
                raise ValueError(
                    f"{name} shape {arr.shape} does not match expected {expect[name]} for kind {self.kind}"
                )
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma", g)

    @property
    def index_sizes(self) -> tuple:
        if self.kind == "core":
            return self.alpha.shape[0], self.gamma.shape[0]
        if self.kind == "first":
            return self.alpha.shape[0], self.beta.shape[0]
        return self.beta.shape[0], self.gamma.shape[0]


def _grid_index(grid: np.ndarray, x: float) -> int:
    hits = np.nonzero(np.abs(grid - x) <= GRID_LOOKUP_ATOL)[0]
    if hits.size == 0:
        raise ValueError(f"point {x!r} is not on the representation grid")
    return int(hits[0])


def materialize(rep: HaagerupRep) -> Kernel3:
    """Kernel evaluating the defining factorized sum; defined only on grid triples."""

    def evaluate(x1: float, x2: float, x3: float) -> complex:
        i1 = _grid_index(rep.grids[0], x1)
        i2 = _grid_index(rep.grids[1], x2)
        i3 = _grid_index(rep.grids[2], x3)
        if rep.kind == "core":
            return complex(rep.alpha[:, i1] @ rep.beta[:, :, i2] @ rep.gamma[:, i3])
        if rep.kind == "first":
            return complex(rep.alpha[:, i1] @ rep.gamma[:, :, i3] @ rep.beta[:, i2])
        return complex(rep.beta[:, i2] @ rep.alpha[:, :, i1] @ rep.gamma[:, i3])

    return Kernel3(evaluator=evaluate, tag="haagerup-rep")


@dataclass(frozen=True)
class RepNorm:
    """Factor-norm product of one representation; an upper bound to the tensor-norm infimum."""

    value: float
    factor_norms: tuple  # (alpha, beta, gamma) norms


def _vector_family_norm(arr: np.ndarray) -> float:
    # {v_j(x)}: max over grid points of the l2 norm across the index j
    return float(np.max(np.sqrt(np.sum(np.abs(arr) ** 2, axis=0))))


def _matrix_family_norm(arr: np.ndarray) -> float:
    # {M_{jk}(x)}: max over grid points of the operator norm of the J x K matrix
    return float(max(np.linalg.norm(arr[:, :, i], ord=2) for i in range(arr.shape[2])))


def rep_norm(rep: HaagerupRep) -> RepNorm:
    if rep.kind == "core":
        na = _vector_family_norm(rep.alpha)
        nb = _matrix_family_norm(rep.beta)
        ng = _vector_family_norm(rep.gamma)
    elif rep.kind == "first":
        na = _vector_family_norm(rep.alpha)
        nb = _vector_family_norm(rep.beta)
        ng = _matrix_family_norm(rep.gamma)
    else:
        na = _matrix_family_norm(rep.alpha)
        nb = _vector_family_norm(rep.beta)
        ng = _vector_family_norm(rep.gamma)
    return RepNorm(value=na * nb * ng, factor_norms=(na, nb, ng))


def random_haagerup_rep(kind: str, grids, J: int, K: int, seed: int) -> HaagerupRep:
    """Deterministic random representation with complex Gaussian factor entries."""
    rng = np.random.default_rng(seed)
    n1, n2, n3 = (len(np.asarray(g).ravel()) for g in grids)

    def draw(shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    if kind == "core":
        a, b, g = draw((J, n1)), draw((J, K, n2)), draw((K, n3))
    elif kind == "first":
        a, b, g = draw((J, n1)), draw((K, n2)), draw((J, K, n3))
    elif kind == "second":
        a, b, g = draw((J, K, n1)), draw((J, n2)), draw((K, n3))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return HaagerupRep(kind=kind, grids=tuple(grids), alpha=a, beta=b, gamma=g)


def toi_dual(
    psi,
    kind: str,
    D1: SpectralDecomposition,
    D2: SpectralDecomposition,
    D3: SpectralDecomposition,
    T,
    R,
    Q,
) -> complex:
    """Duality pairing defining the Haagerup-like triple integrals.

    kind=first:  trace( (sum psi(x1,x2,x3) Q2_k R S_l Q P_j) T )
    kind=second: trace( (sum psi(x1,x2,x3) S_l Q P_j T Q2_k) R )
    """
    T = as_operator(T)
    R = as_operator(R)
    Q = as_operator(Q)
    _check_dims(D1, D2, D3, T, R, Q)
    if kind not in ("first", "second"):
        raise ValueError(f"toi_dual kind must be 'first' or 'second', got {kind!r}")
    n = D1.source_dim
    acc = np.zeros((n, n), dtype=np.complex128)
    comp = np.zeros_like(acc)
    for j, x1 in enumerate(D1.eigenvalues):
        for k, x2 in enumerate(D2.eigenvalues):
            for l, x3 in enumerate(D3.eigenvalues):
                w = psi(x1, x2, x3)
                if kind == "first":
                    term = w * (D2.projections[k] @ R @ D3.projections[l] @ Q @ D1.projections[j])
                else:
                    term = w * (D3.projections[l] @ Q @ D1.projections[j] @ T @ D2.projections[k])
                acc, comp = _kahan_add(acc, comp, term)
    if kind == "first":
        return complex(np.trace(acc @ T))
    return complex(np.trace(acc @ R))


def rep_to_json(rep: HaagerupRep) -> dict:
    def arr(a):
        return {"shape": list(a.shape), "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}

    return {
        "kind": rep.kind,
        "grids": [g.tolist() for g in rep.grids],
        "alpha": arr(rep.alpha),
        "beta": arr(rep.beta),
        "gamma": arr(rep.gamma),
    }


def rep_from_json(obj: dict) -> HaagerupRep:
    def arr(d):
        shape = tuple(d["shape"])
        re = np.asarray(d["re"], dtype=np.float64).reshape(shape)
        im = np.asarray(d["im"], dtype=np.float64).reshape(shape)
        return re + 1j * im

    return HaagerupRep(
        kind=obj["kind"],
        grids=tuple(np.asarray(g, dtype=np.float64) for g in obj["grids"]),
        alpha=arr(obj["alpha"]),
        beta=arr(obj["beta"]),
        gamma=arr(obj["gamma"]),
    )
