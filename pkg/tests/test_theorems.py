import math

import numpy as np
import pytest

from opintlab.funcspace import TrigPoly2, besov_norm, random_symbol
from opintlab.matrixcore import derive_seed, random_hermitian, spectral_decompose
from opintlab.opint import random_haagerup_rep
from opintlab.theorems import (
    BoundReport,
    PerturbationInstance,
    check_toi_schatten,
    instance_from_json,
    instance_to_json,
    lipschitz_ratio,
    pair_difference,
    perturbation_rhs,
    random_instance,
    sweep_dimensions,
    verify_pair_formula,
)


def single_mode(N, m, k, c=1.0):
    C = np.zeros((2 * N + 1, 2 * N + 1), dtype=complex)
    C[m + N, k + N] = c
    return TrigPoly2(C)


def spectral_exp(A):
    D = spectral_decompose(A)
    return sum(np.exp(1j * lam) * P for lam, P in zip(D.eigenvalues, D.projections))


class TestVerifyPairFormula:
    def test_zero_perturbation_zero_residual(self):
        A = random_hermitian(3, 1)
        B = random_hermitian(3, 2)
        f = random_symbol(2, 3, real_valued=True)
        inst = PerturbationInstance(A1=A, B1=B, A2=A, B2=B, f=f, p=2.0)
        assert verify_pair_formula(inst) <= 1e-14

    def test_one_variable_symbol_reduces_to_classical_formula(self):
        # f = e^{ix}: the identity's right side must equal e^{iA1} - e^{iA2}
        f = single_mode(1, 1, 0)
        for seed in range(5):
            inst = random_instance(4, 1, 2.0, derive_seed("cls", seed), min_gap=1e-6)
            inst = PerturbationInstance(
                A1=inst.A1, B1=inst.B1, A2=inst.A2, B2=inst.B2, f=f, p=2.0
            )
            _, decomps = pair_difference(inst)
            rhs = perturbation_rhs(inst, decomps)
            want = spectral_exp(inst.A1) - spectral_exp(inst.A2)
            assert np.max(np.abs(rhs - want)) <= 1e-10 * (1 + np.max(np.abs(want)))

    def test_random_instances_small_residual(self):
        for seed in range(10):
            inst = random_instance(8, 4, 2.0, derive_seed("vr", seed), min_gap=1e-6)
            assert verify_pair_formula(inst) <= 1e-8

    def test_rejects_nonpositive_tol(self):
        inst = random_instance(2, 1, 2.0, 1)
        with pytest.raises(ValueError):
            verify_pair_formula(inst, tol=0.0)


class TestInstance:
    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            PerturbationInstance(
                A1=random_hermitian(2, 1),
                B1=random_hermitian(3, 2),
                A2=random_hermitian(2, 3),
                B2=random_hermitian(2, 4),
                f=random_symbol(1, 5),
                p=2.0,
            )

    def test_json_roundtrip(self):
        inst = random_instance(3, 2, math.inf, 9)
        back = instance_from_json(instance_to_json(inst))
        assert np.array_equal(back.A1, inst.A1)
        assert np.array_equal(back.B2, inst.B2)
        assert np.array_equal(back.f.coeffs, inst.f.coeffs)
        assert back.p == math.inf
        assert back.seed == inst.seed

    def test_generator_deterministic(self):
        a = random_instance(4, 3, 1.5, 77)
        b = random_instance(4, 3, 1.5, 77)
        assert np.array_equal(a.A2, b.A2)
        assert np.array_equal(a.f.coeffs, b.f.coeffs)


class TestCheckToiSchatten:
    def make_setup(self, dim, jk, kind, seed):
        decomps = [
            spectral_decompose(random_hermitian(dim, derive_seed(seed, t))) for t in "123"
        ]
        grids = tuple(D.eigenvalues for D in decomps)
        rep = random_haagerup_rep(kind, grids, jk, jk, derive_seed(seed, "rep"))
        rng = np.random.default_rng(derive_seed(seed, "TR"))
        T = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        R = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return rep, T, R, decomps

    def test_singleton_identity_equality_case(self):
        dim = 3
        decomps = [
            spectral_decompose(random_hermitian(dim, derive_seed("eq", t))) for t in range(3)
        ]
        grids = tuple(D.eigenvalues for D in decomps)
        ones = lambda s: np.ones(s, dtype=complex)
        from opintlab.opint import HaagerupRep

        rep = HaagerupRep(
            kind="core",
            grids=grids,
            alpha=ones((1, dim)),
            beta=ones((1, 1, dim)),
            gamma=ones((1, dim)),
        )
        R = np.random.default_rng(0).standard_normal((dim, dim)) + 0j
        report = check_toi_schatten(rep, np.eye(dim), R, 2.0, math.inf, "2.1i", *decomps)
        assert report.lhs == pytest.approx(report.rhs, rel=1e-12)
        assert report.passed

    @pytest.mark.parametrize("mode,kind", [("2.1i", "core"), ("2.1ii", "core")])
    def test_theorem_two_one_first_clauses(self, mode, kind):
        for seed in range(10):
            rep, T, R, decomps = self.make_setup(5, 3, kind, derive_seed(mode, seed))
            for p in (2.0, 3.0, math.inf):
                assert check_toi_schatten(rep, T, R, p, math.inf, mode, *decomps).passed

    def test_theorem_two_one_interpolated_clause(self):
        for seed in range(10):
            rep, T, R, decomps = self.make_setup(5, 3, "core", derive_seed("iii", seed))
            for p, q in ((4.0, 4.0), (8.0, 8.0), (4.0, 8.0)):
                assert check_toi_schatten(rep, T, R, p, q, "2.1iii", *decomps).passed

    @pytest.mark.parametrize("mode,kind", [("2.2first", "first"), ("2.2second", "second")])
    def test_theorem_two_two(self, mode, kind):
        for seed in range(10):
            rep, T, R, decomps = self.make_setup(5, 3, kind, derive_seed(mode, seed))
            for p, q in ((1.0, math.inf), (2.0, 2.0), (1.5, 3.0)):
                assert check_toi_schatten(rep, T, R, p, q, mode, *decomps).passed

    def test_mode_validation(self):
        rep, T, R, decomps = self.make_setup(3, 2, "core", 1)
        with pytest.raises(ValueError):
            check_toi_schatten(rep, T, R, 1.5, math.inf, "2.1i", *decomps)  # p < 2
        with pytest.raises(ValueError):
            check_toi_schatten(rep, T, R, 2.0, 2.0, "2.1iii", *decomps)  # 1/p+1/q > 1/2
        with pytest.raises(ValueError):
            check_toi_schatten(rep, T, R, 1.0, math.inf, "2.2first", *decomps)  # kind mismatch
        with pytest.raises(ValueError):
            check_toi_schatten(rep, T, R, 2.0, math.inf, "bogus", *decomps)
        rep1, T1, R1, decomps1 = self.make_setup(3, 2, "first", 2)
        with pytest.raises(ValueError):
            check_toi_schatten(rep1, T1, R1, 3.0, 3.0, "2.2first", *decomps1)  # p > 2

    def test_bound_report_slack_rule(self):
        rpt = BoundReport(mode="x", lhs=1.0, rhs=1.0)
        assert rpt.passed and rpt.slack == 0.0
        assert not BoundReport(mode="x", lhs=1.0 + 1e-9, rhs=1.0).passed
        js = rpt.to_json()
        assert set(js) == {"mode", "lhs", "rhs", "slack", "passed"}


class TestLipschitzRatio:
    def test_scalar_case(self):
        # 1x1: a1=1, a2=0, b1=b2=0, p=1
        f = random_symbol(2, 5, real_valued=True)
        one = np.array([[1.0]], dtype=complex)
        zero = np.zeros((1, 1), dtype=complex)
        inst = PerturbationInstance(A1=one, B1=zero, A2=zero, B2=zero, f=f, p=1.0)
        rec = lipschitz_ratio(inst)
        from opintlab.funcspace import eval_symbol

        v1 = eval_symbol(f, 1.0, 0.0)
        v0 = eval_symbol(f, 0.0, 0.0)
        want = abs(v1 - v0) / besov_norm(f).besov_norm
        assert rec.normalized_ratio == pytest.approx(want, rel=1e-12)

    def test_constant_symbol_gives_zero_ratio(self):
        inst = random_instance(3, 0, 2.0, 8)
        assert lipschitz_ratio(inst).normalized_ratio == pytest.approx(0.0, abs=1e-11)

    def test_zero_perturbation_rejected(self):
        A, B = random_hermitian(2, 1), random_hermitian(2, 2)
        inst = PerturbationInstance(A1=A, B1=B, A2=A, B2=B, f=random_symbol(1, 3), p=2.0)
        with pytest.raises(ValueError):
            lipschitz_ratio(inst)

    def test_symbol_scale_invariance(self):
        inst = random_instance(4, 3, 1.5, 44)
        base = lipschitz_ratio(inst).normalized_ratio
        scaled = PerturbationInstance(
            A1=inst.A1, B1=inst.B1, A2=inst.A2, B2=inst.B2, f=inst.f.scaled(7.0), p=1.5
        )
        assert lipschitz_ratio(scaled).normalized_ratio == pytest.approx(base, rel=1e-12)

    def test_pair_swap_symmetry(self):
        inst = random_instance(4, 2, 2.0, 55)
        rec = lipschitz_ratio(inst)
        swapped = PerturbationInstance(
            A1=inst.A2, B1=inst.B2, A2=inst.A1, B2=inst.B1, f=inst.f, p=2.0
        )
        rec2 = lipschitz_ratio(swapped)
        assert rec2.num == pytest.approx(rec.num, rel=1e-10)
        assert rec2.den == pytest.approx(rec.den, rel=1e-12)
        assert rec2.normalized_ratio == pytest.approx(rec.normalized_ratio, rel=1e-10)

    def test_cross_check_from_serialized_instance(self):
        # independent pipeline: reload the instance, recompute with raw numpy
        inst = random_instance(4, 3, 1.5, 66)
        rec = lipschitz_ratio(inst)
        back = instance_from_json(instance_to_json(inst))
        from opintlab.opint import func_of_pair

        lhs = func_of_pair(
            back.f, spectral_decompose(back.A1), spectral_decompose(back.B1)
        ) - func_of_pair(back.f, spectral_decompose(back.A2), spectral_decompose(back.B2))
        sv = np.linalg.svd(lhs, compute_uv=False)
        num = float(np.sum(sv**1.5) ** (1 / 1.5))
        dA = np.linalg.svd(back.A1 - back.A2, compute_uv=False)
        dB = np.linalg.svd(back.B1 - back.B2, compute_uv=False)
        den = float(np.sum(dA**1.5) ** (1 / 1.5) + np.sum(dB**1.5) ** (1 / 1.5))
        assert rec.num == pytest.approx(num, rel=1e-10)
        assert rec.den == pytest.approx(den, rel=1e-10)
        assert rec.normalized_ratio == pytest.approx(num / (den * rec.besov), rel=1e-10)


class TestSweep:
    def test_empty_samples(self):
        assert sweep_dimensions([1.0], [2], 0, 1) == []

    def test_deterministic(self):
        a = sweep_dimensions([2.0], [2, 4], 3, 5)
        b = sweep_dimensions([2.0], [2, 4], 3, 5)
        assert [r.normalized_ratio for r in a] == [r.normalized_ratio for r in b]
        assert [r.seed for r in a] == [r.seed for r in b]

    def test_schema_and_finiteness(self):
        recs = sweep_dimensions([2.0], [2, 4, 8], 10, 3)
        assert len(recs) == 30
        for rec in recs:
            assert rec.den > 0 and rec.besov > 0
            assert np.isfinite(rec.normalized_ratio)
            row = rec.csv_row()
            assert len(row) == len(rec.CSV_COLUMNS)
