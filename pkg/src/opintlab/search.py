"""Hill-climbing search for large normalized Lipschitz ratios at p > 2, and a
probe for the Schatten-escape behavior of adjacent-measure triple integrals."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .funcspace import TrigPoly2, besov_norm, random_symbol
from .matrixcore import derive_seed, random_hermitian, schatten_norm, spectral_decompose
from .opint import materialize, random_haagerup_rep, rep_norm, rep_to_json, toi_adjacent
from .theorems import BoundReport, PerturbationInstance, instance_to_json, lipschitz_ratio

REJECTS_PER_DECAY = 20
STEP_DECAY = 0.5


@dataclass(frozen=True)
class SearchConfig:
    p: float
    dim: int
    symbol_degree: int
    budget: int
    restarts: int
    master_seed: int
    step_scale: float = 0.2

    def __post_init__(self):
        if not (self.p > 2.0):
            raise ValueError("search targets the p > 2 regime")
        if self.dim < 1 or self.budget < 0 or self.restarts < 1:
            raise ValueError("dim >= 1, budget >= 0, restarts >= 1 required")
        if self.step_scale <= 0:
            raise ValueError("step_scale must be positive")

    def to_json(self) -> dict:
        return {
            "p": "inf" if np.isinf(self.p) else self.p,
            "dim": self.dim,
            "symbol_degree": self.symbol_degree,
            "budget": self.budget,
            "restarts": self.restarts,
            "master_seed": self.master_seed,
            "step_scale": self.step_scale,
        }


@dataclass
class SearchState:
    """One candidate: symbol plus base pair and Hermitian perturbation directions."""

    f: TrigPoly2
    A1: np.ndarray
    B1: np.ndarray
    dA: np.ndarray
    dB: np.ndarray

    def instance(self, p: float, seed: int = 0) -> PerturbationInstance:
        return PerturbationInstance(
            A1=self.A1,
            B1=self.B1,
            A2=self.A1 + self.dA,
            B2=self.B1 + self.dB,
            f=self.f,
            p=p,
            seed=seed,
        )


MUTATION_BLOCKS = ("f", "A1", "B1", "dA", "dB")


def initial_state(dim: int, degree: int, seed: int) -> SearchState:
    return SearchState(
        f=random_symbol(degree, derive_seed(seed, "f"), real_valued=True),
        A1=random_hermitian(dim, derive_seed(seed, "A1")),
        B1=random_hermitian(dim, derive_seed(seed, "B1")),
        dA=0.1 * random_hermitian(dim, derive_seed(seed, "dA")),
        dB=0.1 * random_hermitian(dim, derive_seed(seed, "dB")),
    )


def _hermitian_noise(rng: np.random.Generator, n: int) -> np.ndarray:
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (G + G.conj().T)


def mutate(state: SearchState, rng: np.random.Generator, scale: float) -> SearchState:
    """Gaussian-perturb one randomly chosen block. Symbol noise is scaled by the
    coefficient norm so the move is equivariant under symbol rescaling."""
    block = MUTATION_BLOCKS[int(rng.integers(len(MUTATION_BLOCKS)))]
    n = state.A1.shape[0]
    if block == "f":
        C = state.f.coeffs
        eta = rng.standard_normal(C.shape) + 1j * rng.standard_normal(C.shape)
        eta = 0.5 * (eta + np.conj(eta[::-1, ::-1]))
        amp = scale * np.linalg.norm(C) / math.sqrt(C.size)
        return SearchState(
            f=TrigPoly2(C + amp * eta, real_valued=state.f.real_valued),
            A1=state.A1, B1=state.B1, dA=state.dA, dB=state.dB,
        )
    noise = scale * _hermitian_noise(rng, n)
    fields = {"f": state.f, "A1": state.A1, "B1": state.B1, "dA": state.dA, "dB": state.dB}
    fields[block] = fields[block] + noise
    return SearchState(**fields)


def _objective(state: SearchState, p: float, besov_cache: dict) -> float | None:
    """Normalized ratio, or None for degenerate (zero-perturbation / zero-symbol) states."""
    if besov_cache.get("symbol") is not state.f:
        besov_cache["symbol"] = state.f
        besov_cache["besov"] = besov_norm(state.f).besov_norm
    b = besov_cache["besov"]
    if b <= 0.0:
        return None
    try:
        rec = lipschitz_ratio(state.instance(p), besov=b)
    except ValueError:
        return None
    return rec.normalized_ratio


def hill_climb(
    state: SearchState,
    p: float,
    budget: int,
    rng: np.random.Generator,
    step_scale: float,
):
    """Greedy improvement-only climb. Returns (best_state, best_ratio,
    trajectory of accepted (step, ratio) pairs, resampled count)."""
    besov_cache: dict = {}
    resampled = 0
    cur = _objective(state, p, besov_cache)
    while cur is None:
        resampled += 1
        n = state.A1.shape[0]
        state = SearchState(
            f=state.f, A1=state.A1, B1=state.B1,
            dA=0.1 * _hermitian_noise(rng, n), dB=0.1 * _hermitian_noise(rng, n),
        )
        cur = _objective(state, p, besov_cache)
    trajectory = [(0, cur)]
    scale = step_scale
    rejects = 0
    for step in range(1, budget + 1):
        cand = mutate(state, rng, scale)
        val = _objective(cand, p, besov_cache)
        if val is None:
            resampled += 1
            rejects += 1
        elif val > cur:
            state, cur = cand, val
            trajectory.append((step, cur))
            rejects = 0
        else:
            rejects += 1
        if rejects >= REJECTS_PER_DECAY:
            scale *= STEP_DECAY
            rejects = 0
    return state, cur, trajectory, resampled


@dataclass(frozen=True)
class SearchReport:
    config: SearchConfig
    best_ratio: float
    best_instance: PerturbationInstance
    trajectory: list
    resampled: int

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "best_ratio": self.best_ratio,
            "best_instance": instance_to_json(self.best_instance),
            "trajectory": [[int(s), float(r)] for s, r in self.trajectory],
            "resampled": self.resampled,
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def best_over_restarts(
    p: float,
    dim: int,
    degree: int,
    budget: int,
    restarts: int,
    master_seed: int,
    step_scale: float = 0.2,
):
    """Run deterministic restarts at any Schatten index (control runs included);
    ties keep the lowest restart index. Returns (ratio, state, trajectory,
    resampled, restart_seed)."""
    best = None
    for r in range(restarts):
        seed = derive_seed(master_seed, "restart", r)
        state = initial_state(dim, degree, seed)
        rng = np.random.default_rng(derive_seed(seed, "moves"))
        final_state, ratio, trajectory, resampled = hill_climb(
            state, p, budget, rng, step_scale
        )
        if best is None or ratio > best[0]:
            best = (ratio, final_state, trajectory, resampled, seed)
    return best


def search_counterexample(cfg: SearchConfig) -> SearchReport:
    """Best normalized ratio over deterministic restarts in the p > 2 regime."""
    ratio, state, trajectory, resampled, seed = best_over_restarts(
        cfg.p, cfg.dim, cfg.symbol_degree, cfg.budget, cfg.restarts,
        cfg.master_seed, cfg.step_scale,
    )
    return SearchReport(
        config=cfg,
        best_ratio=ratio,
        best_instance=state.instance(cfg.p, seed=seed),
        trajectory=trajectory,
        resampled=resampled,
    )


def escape_probe(p: float, dim: int, seed: int, factors: int = 4) -> BoundReport:
    """Adjacent-measure triple integral of a random core-kind representation
    against a random Q in S_p; lhs/rhs growth with dim is the quantity of interest."""
    if not (1.0 <= p < 2.0):
        raise ValueError(f"escape probe requires 1 <= p < 2, got {p}")
    decomps = [
        spectral_decompose(random_hermitian(dim, derive_seed(seed, tag)))
        for tag in ("E1", "E2", "E3")
    ]
    grids = tuple(D.eigenvalues for D in decomps)
    rep = random_haagerup_rep("core", grids, factors, factors, derive_seed(seed, "rep"))
    rng = np.random.default_rng(derive_seed(seed, "Q"))
    Q = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    W = toi_adjacent(materialize(rep), decomps[0], decomps[1], Q, decomps[2])
    lhs = schatten_norm(W, p)
    rhs = rep_norm(rep).value * schatten_norm(Q, p)
    return BoundReport(mode="escape-probe", lhs=lhs, rhs=rhs)


def trend_report(records: list[dict], group_key: str, value_key: str = "value") -> list[dict]:
    """Per-group count/max/mean plus max growth relative to the smallest group."""
    if not records:
        raise ValueError("trend_report requires at least one record")
    groups: dict = {}
    for rec in records:
        groups.setdefault(rec[group_key], []).append(float(rec[value_key]))
    keys = sorted(groups)
    base_max = max(groups[keys[0]])
    rows = []
    for key in keys:
        vals = groups[key]
        rows.append(
            {
                group_key: key,
                "count": len(vals),
                "max": max(vals),
                "mean": sum(vals) / len(vals),
                "growth": max(vals) / base_max if base_max > 0 else math.inf,
            }
        )
    return rows


def trend_csv(rows: list[dict], group_key: str) -> str:
    lines = [f"{group_key},count,max,mean,growth"]
    for row in rows:
        lines.append(
            f"{row[group_key]},{row['count']},{row['max']!r},{row['mean']!r},{row['growth']!r}"
        )
    return "\n".join(lines) + "\n"
