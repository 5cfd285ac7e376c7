"""Finite-dimensional laboratory for operator-integral norm inequalities.

Core pieces: Hermitian spectral algebra (matrixcore), trigonometric symbols and
divided differences (funcspace), double/triple operator integrals with
factorized kernel representations (opint), executable theorem checks
(theorems), and a counterexample search harness (search).
"""

from .funcspace import (
    BesovProfile,
    TrigPoly2,
    besov_norm,
    divided_difference_x,
    divided_difference_y,
    eval_symbol,
    random_symbol,
)
from .matrixcore import (
    SpectralDecomposition,
    derive_seed,
    random_hermitian,
    schatten_norm,
    spectral_decompose,
)
from .opint import (
    HaagerupRep,
    Kernel3,
    RepNorm,
    doi_apply,
    func_of_pair,
    materialize,
    random_haagerup_rep,
    rep_norm,
    toi_adjacent,
    toi_direct,
    toi_dual,
)
from .search import (
    SearchConfig,
    SearchReport,
    escape_probe,
    search_counterexample,
    trend_report,
)
from .theorems import (
    BoundReport,
    PerturbationInstance,
    RatioRecord,
    check_toi_schatten,
    lipschitz_ratio,
    random_instance,
    sweep_dimensions,
    verify_pair_formula,
)

__all__ = [
    "BesovProfile",
    "BoundReport",
    "HaagerupRep",
    "Kernel3",
    "PerturbationInstance",
    "RatioRecord",
    "RepNorm",
    "SearchConfig",
    "SearchReport",
    "SpectralDecomposition",
    "TrigPoly2",
    "besov_norm",
    "check_toi_schatten",
    "derive_seed",
    "divided_difference_x",
    "divided_difference_y",
    "doi_apply",
    "escape_probe",
    "eval_symbol",
    "func_of_pair",
    "lipschitz_ratio",
    "materialize",
    "random_haagerup_rep",
    "random_hermitian",
    "random_instance",
    "random_symbol",
    "rep_norm",
    "schatten_norm",
    "search_counterexample",
    "spectral_decompose",
    "sweep_dimensions",
    "toi_adjacent",
    "toi_direct",
    "toi_dual",
    "trend_report",
    "verify_pair_formula",
]

__version__ = "0.1.0"
