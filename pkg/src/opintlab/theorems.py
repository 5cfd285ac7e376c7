"""Executable checks for the perturbation identity, the Schatten bounds for
triple operator integrals, and Lipschitz-ratio sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .funcspace import (
    TrigPoly2,
    besov_norm,
    divided_difference_x,
    divided_difference_y,
    random_symbol,
    symbol_from_json,
    symbol_to_json,
)
from .matrixcore import (
    SpectralDecomposition,
    derive_seed,
    matrix_from_json,
    matrix_to_json,
    random_hermitian,
    require_hermitian,
    schatten_norm,
    spectral_decompose,
)
from .opint import HaagerupRep, Kernel3, func_of_pair, materialize, rep_norm, toi_direct

BOUND_SLACK = 1e-10

CHECK_MODES = ("2.1i", "2.1ii", "2.1iii", "2.2first", "2.2second")


@dataclass(frozen=True)
class PerturbationInstance:
    """Two pairs of self-adjoint matrices, a symbol, and a Schatten index."""

    A1: np.ndarray
    B1: np.ndarray
    A2: np.ndarray
    B2: np.ndarray
    f: TrigPoly2
    p: float
    seed: int = 0

    def __post_init__(self):
        mats = [require_hermitian(M) for M in (self.A1, self.B1, self.A2, self.B2)]
        dims = {M.shape[0] for M in mats}
        if len(dims) != 1:
            raise ValueError(f"operators must share one dimension, got {sorted(dims)}")
        for name, M in zip(("A1", "B1", "A2", "B2"), mats):
            object.__setattr__(self, name, M)

    @property
    def dim(self) -> int:
        return self.A1.shape[0]


def instance_to_json(inst: PerturbationInstance) -> dict:
    return {
        "A1": matrix_to_json(inst.A1),
        "B1": matrix_to_json(inst.B1),
        "A2": matrix_to_json(inst.A2),
        "B2": matrix_to_json(inst.B2),
        "f": symbol_to_json(inst.f),
        "p": inst.p if math.isfinite(inst.p) else "inf",
        "seed": int(inst.seed),
    }


def instance_from_json(obj: dict) -> PerturbationInstance:
    p = obj["p"]
    p = math.inf if p == "inf" else float(p)
    return PerturbationInstance(
        A1=matrix_from_json(obj["A1"]),
        B1=matrix_from_json(obj["B1"]),
        A2=matrix_from_json(obj["A2"]),
        B2=matrix_from_json(obj["B2"]),
        f=symbol_from_json(obj["f"]),
        p=p,
        seed=int(obj["seed"]),
    )


def random_instance(
    dim: int,
    degree: int,
    p: float,
    seed: int,
    real_valued: bool = True,
    min_gap: float = 0.0,
) -> PerturbationInstance:
    """Deterministic random instance; A2, B2 are eps-scale perturbations of A1, B1
    with eps log-uniform in [1e-3, 1]. When min_gap > 0, base and perturbed
    operators are resampled until every internal eigenvalue gap exceeds min_gap."""
    for attempt in range(64):
        sub = derive_seed(seed, attempt)
        rng = np.random.default_rng(sub)
        A1 = random_hermitian(dim, derive_seed(sub, "A1"))
        B1 = random_hermitian(dim, derive_seed(sub, "B1"))
        eps = 10.0 ** rng.uniform(-3.0, 0.0)
        dA = eps * random_hermitian(dim, derive_seed(sub, "dA"), scale=0.5)
        dB = eps * random_hermitian(dim, derive_seed(sub, "dB"), scale=0.5)
        A2, B2 = A1 + dA, B1 + dB
        if min_gap > 0 and dim > 1:
            gaps = [np.min(np.diff(np.linalg.eigvalsh(M))) for M in (A1, B1, A2, B2)]
            if min(gaps) < min_gap:
                continue
        f = random_symbol(degree, derive_seed(sub, "f"), real_valued=real_valued)
        return PerturbationInstance(A1=A1, B1=B1, A2=A2, B2=B2, f=f, p=p, seed=seed)
    raise RuntimeError(f"could not generate a gap-separated instance for seed {seed}")


def pair_difference(inst: PerturbationInstance, cluster_tol: float | None = None):
    """f(A1,B1) - f(A2,B2) together with the four spectral decompositions."""
    DA1 = spectral_decompose(inst.A1, cluster_tol)
    DB1 = spectral_decompose(inst.B1, cluster_tol)
    DA2 = spectral_decompose(inst.A2, cluster_tol)
    DB2 = spectral_decompose(inst.B2, cluster_tol)
    lhs = func_of_pair(inst.f, DA1, DB1) - func_of_pair(inst.f, DA2, DB2)
    return lhs, (DA1, DB1, DA2, DB2)


def perturbation_rhs(inst: PerturbationInstance, decomps) -> np.ndarray:
    """Triple-integral side of the perturbation identity."""
    DA1, DB1, DA2, DB2 = decomps
    f = inst.f
    ddx = Kernel3(lambda x1, x2, y: divided_difference_x(f, x1, x2, y), "divided-difference-x")
    ddy = Kernel3(lambda x, y1, y2: divided_difference_y(f, x, y1, y2), "divided-difference-y")
    n = inst.dim
    eye = np.eye(n, dtype=np.complex128)
    first = toi_direct(ddx, DA1, inst.A1 - inst.A2, DA2, eye, DB1)
    second = toi_direct(ddy, DA2, eye, DB1, inst.B1 - inst.B2, DB2)
    return first + second


def verify_pair_formula(
    inst: PerturbationInstance, tol: float = 1e-8, cluster_tol: float | None = None
) -> float:
    """Relative S2 residual between the two sides of the perturbation identity.

    tol is the caller's pass threshold (reported alongside); the raw residual
    is returned so callers can apply their own gate.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lhs, decomps = pair_difference(inst, cluster_tol)
    rhs = perturbation_rhs(inst, decomps)
    return schatten_norm(lhs - rhs, 2) / (1.0 + schatten_norm(lhs, 2))


@dataclass(frozen=True)
class BoundReport:
    """One checked norm inequality: lhs <= rhs up to relative slack 1e-10."""

    mode: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + BOUND_SLACK)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "passed": self.passed,
        }


def _combined_index(p: float, q: float) -> float:
    inv = (0.0 if np.isinf(p) else 1.0 / p) + (0.0 if np.isinf(q) else 1.0 / q)
    return math.inf if inv == 0.0 else 1.0 / inv


def check_toi_schatten(
    rep: HaagerupRep,
    T,
    R,
    p: float,
    q: float,
    mode: str,
    D1: SpectralDecomposition,
    D2: SpectralDecomposition,
    D3: SpectralDecomposition,
) -> BoundReport:
    """Check one clause of the triple-integral Schatten bounds.

    The spectral decompositions realize the three measures; their eigenvalue
    lists must coincide with the representation grids. For mode 2.2second the
    index p applies to R and q to T (mirror of 2.2first).
    """
    if mode not in CHECK_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode.startswith("2.1") and rep.kind != "core":
        raise ValueError(f"mode {mode} requires a core-kind representation")
    if mode == "2.2first" and rep.kind != "first":
        raise ValueError("mode 2.2first requires a first-kind representation")
    if mode == "2.2second" and rep.kind != "second":
        raise ValueError("mode 2.2second requires a second-kind representation")

    inv_p = 0.0 if np.isinf(p) else 1.0 / p
    inv_q = 0.0 if np.isinf(q) else 1.0 / q
    if mode in ("2.1i", "2.1ii"):
        if p < 2:
            raise ValueError(f"mode {mode} requires p >= 2, got {p}")
        r = p
    elif mode == "2.1iii":
        if inv_p + inv_q > 0.5 + 1e-15:
            raise ValueError("mode 2.1iii requires 1/p + 1/q <= 1/2")
        r = _combined_index(p, q)
    else:
        if not (1.0 <= p <= 2.0):
            raise ValueError(f"mode {mode} requires 1 <= p <= 2, got {p}")
        if inv_p + inv_q > 1.0 + 1e-15:
            raise ValueError(f"mode {mode} requires 1/p + 1/q <= 1")
        r = _combined_index(p, q)

    W = toi_direct(materialize(rep), D1, T, D2, R, D3)
    lhs = schatten_norm(W, r)
    base = rep_norm(rep).value
    if mode == "2.1i":
        rhs = base * schatten_norm(T, math.inf) * schatten_norm(R, p)
    elif mode == "2.1ii":
        rhs = base * schatten_norm(T, p) * schatten_norm(R, math.inf)
    elif mode in ("2.1iii", "2.2first"):
        rhs = base * schatten_norm(T, p) * schatten_norm(R, q)
    else:  # 2.2second: p indexes R, q indexes T
        rhs = base * schatten_norm(T, q) * schatten_norm(R, p)
    return BoundReport(mode=mode, lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class RatioRecord:
    """Normalized Lipschitz ratio of one perturbation instance."""

    p: float
    dim: int
    sample_index: int
    seed: int
    num: float
    den: float
    besov: float
    normalized_ratio: float

    CSV_COLUMNS = ("p", "dim", "sample_index", "seed", "num", "den", "besov", "normalized_ratio")

    def csv_row(self) -> list:
        return [
            "inf" if np.isinf(self.p) else repr(float(self.p)),
            self.dim,
            self.sample_index,
            self.seed,
            repr(self.num),
            repr(self.den),
            repr(self.besov),
            repr(self.normalized_ratio),
        ]


def lipschitz_ratio(
    inst: PerturbationInstance, sample_index: int = 0, besov: float | None = None
) -> RatioRecord:
    """num / (den * besov) with num = ||f(A1,B1)-f(A2,B2)||_p and
    den = ||A1-A2||_p + ||B1-B2||_p."""
    den = schatten_norm(inst.A1 - inst.A2, inst.p) + schatten_norm(inst.B1 - inst.B2, inst.p)
    if den == 0.0:
        raise ValueError("zero perturbation: Lipschitz ratio undefined")
    lhs, _ = pair_difference(inst)
    num = schatten_norm(lhs, inst.p)
    if besov is None:
        besov = besov_norm(inst.f).besov_norm
    if besov <= 0.0:
        raise ValueError("symbol has zero block norm; ratio undefined")
    return RatioRecord(
        p=inst.p,
        dim=inst.dim,
        sample_index=sample_index,
        seed=inst.seed,
        num=num,
        den=den,
        besov=besov,
        normalized_ratio=num / (den * besov),
    )


def sweep_dimensions(
    p_list, dim_list, samples: int, master_seed: int, degree: int = 3
) -> list[RatioRecord]:
    """Deterministic grid of ratio records, ordered by (p, dim, sample index)."""
    records = []
    for p in p_list:
        for dim in dim_list:
            for i in range(samples):
                seed = derive_seed(master_seed, float(p), int(dim), int(i))
                inst = random_instance(dim, degree, p, seed)
                records.append(lipschitz_ratio(inst, sample_index=i))
    return records
