import math

import numpy as np
import pytest

from rieszlab import linalg
from rieszlab.diagnostics import (
    ProbeSpec,
    Thresholds,
    pairing_defect,
    quasi_basis_residual,
    run_sweep,
    span_distance,
)
from rieszlab.errors import SweepError
from rieszlab.family import BiorthogonalPair, SequenceFamily, check_pairing
from rieszlab.models import ModelSpec, pair_factory, paper_example_pair

from conftest import random_complex, random_well_conditioned


class TestProbeSpec:
    def test_parse_basis(self):
        p = ProbeSpec.parse("e_3")
        assert p.name == "e_3"
        assert np.array_equal(p.instantiate(6), linalg.basis_vector(3, 6))

    def test_parse_geom(self):
        p = ProbeSpec.parse("geom:0.5")
        v = p.instantiate(4)
        assert np.linalg.norm(v) == pytest.approx(1.0)
        assert v[1] / v[0] == pytest.approx(0.5)

    def test_parse_random_is_seed_deterministic(self):
        p = ProbeSpec.parse("random:7")
        assert np.array_equal(p.instantiate(8), p.instantiate(8))

    def test_bad_specs(self):
        with pytest.raises(ValueError):
            ProbeSpec.parse("geom:1.5")
        with pytest.raises(ValueError):
            ProbeSpec.parse("fourier:3")


class TestSpanDistance:
    def test_inside_span(self):
        fam = SequenceFamily.identity(4)
        assert span_distance(fam, linalg.basis_vector(2, 4)) <= 1e-14

    def test_orthogonal_complement(self):
        fam = SequenceFamily(np.eye(4)[:, :2])
        assert span_distance(fam, linalg.basis_vector(3, 4)) == pytest.approx(1.0)

    def test_paper_example_phi_closed_form(self):
        # complement of span{e_n + e_0} is spanned by (1, -1, ..., -1)/sqrt(N),
        # so dist(e_0, span) = 1/sqrt(N)
        for n in (4, 16, 64):
            pair = paper_example_pair(n)
            e0 = linalg.basis_vector(0, n)
            assert span_distance(pair.phi, e0) == pytest.approx(1.0 / math.sqrt(n), abs=1e-12)

    def test_paper_example_psi_closed_form(self):
        pair = paper_example_pair(8)
        assert span_distance(pair.psi, linalg.basis_vector(0, 8)) == pytest.approx(1.0, abs=1e-14)


class TestQuasiBasisResidual:
    def test_identity_pair_exact(self, rng):
        fam = SequenceFamily.identity(6)
        pair = check_pairing(fam, fam)
        f = random_complex(rng, 6)
        g = random_complex(rng, 6)
        assert quasi_basis_residual(pair, f, g) <= 1e-12 * np.linalg.norm(f) * np.linalg.norm(g)

    def test_telescoping_oracle(self, rng):
        # oracle: accumulate sum_k (f|psi_k)(phi_k|g) term by term
        n = 8
        phi_mat = random_well_conditioned(rng, n)
        psi_mat = linalg.adjoint(linalg.solve_inverse(phi_mat))
        pair = check_pairing(SequenceFamily(phi_mat), SequenceFamily(psi_mat))
        f = random_complex(rng, n)
        g = random_complex(rng, n)
        s = sum(
            linalg.inner(f, psi_mat[:, k]) * linalg.inner(phi_mat[:, k], g)
            for k in range(n)
        )
        assert abs(s - linalg.inner(f, g)) <= 1e-10
        assert quasi_basis_residual(pair, f, g) <= n * 1e-12 * np.linalg.norm(f) * np.linalg.norm(g)

    def test_paper_example_defect_is_one(self):
        # e_0 lies outside both family spans: both sums vanish while (e_0|e_0) = 1
        pair = paper_example_pair(8)
        e0 = linalg.basis_vector(0, 8)
        assert quasi_basis_residual(pair, e0, e0) == pytest.approx(1.0, abs=1e-14)


class TestPairingDefect:
    def test_identity(self):
        fam = SequenceFamily.identity(5)
        assert pairing_defect(BiorthogonalPair(fam, fam)) == 0.0

    def test_detects_scaling(self):
        phi = SequenceFamily.identity(4)
        psi = SequenceFamily(2.0 * np.eye(4))
        assert pairing_defect(BiorthogonalPair(phi, psi)) == pytest.approx(1.0)


class TestRunSweep:
    def test_needs_two_dims(self):
        with pytest.raises(SweepError):
            run_sweep(pair_factory(ModelSpec("identity", 8)), [8], ["e_0"])

    def test_identity_classifies_regular(self):
        report = run_sweep(pair_factory(ModelSpec("identity", 8)),
                           [8, 16, 32, 64], ["e_0", "random:3"])
        assert report.classification == "regular"
        assert report.riesz_class == "riesz"
        assert report.flags["span_dense_phi"] and report.flags["span_dense_psi"]

    def test_paper_example_classifies_semi_regular_phi(self):
        report = run_sweep(pair_factory(ModelSpec("paper_example", 8)),
                           [8, 16, 32, 64, 128], ["e_0"])
        assert report.classification == "semi-regular-phi"
        assert report.flags["span_dense_phi"] is True
        assert report.flags["span_dense_psi"] is False
        # fitted decay of dist(e_0, span phi) matches the 1/sqrt(N) closed form
        slope = report.fit_exponents[("span_dist_phi", "e_0")]
        assert slope == pytest.approx(-0.5, abs=0.01)

    def test_unbounded_diagonal_classified_not_riesz(self):
        report = run_sweep(pair_factory(ModelSpec("diagonal", 8, rule="k+1")),
                           [8, 16, 32, 64], ["random:1"])
        assert report.flags["op_norm_bounded"] is False
        assert report.riesz_class in ("semi-riesz", "neither")

    def test_csv_is_deterministic(self):
        spec = ModelSpec("random_regular", 8, seed=11)
        a = run_sweep(pair_factory(spec), [8, 16, 32], ["e_0", "random:5"]).to_csv()
        b = run_sweep(pair_factory(spec), [8, 16, 32], ["e_0", "random:5"]).to_csv()
        assert a == b

    def test_csv_round_trips_float64(self):
        report = run_sweep(pair_factory(ModelSpec("paper_example", 8)),
                           [8, 16], ["e_0"])
        text = report.to_csv()
        lines = text.strip().splitlines()
        assert lines[0] == "dim,metric,probe,value"
        for (dim, metric, probe, value), line in zip(report.csv_rows(), lines[1:]):
            cells = line.split(",")
            assert float(cells[-1]) == value  # 17 digits is bit-exact

    def test_verdict_text_mentions_classification(self):
        report = run_sweep(pair_factory(ModelSpec("identity", 8)), [8, 16, 32], ["e_0"])
        text = report.verdict_text()
        assert "classification: regular" in text
        assert "riesz class: riesz" in text

    def test_custom_thresholds(self):
        # an absurdly strict density slope makes even the identity fail
        thr = Thresholds(density_slope=-10.0, density_floor=0.0)
        report = run_sweep(pair_factory(ModelSpec("paper_example", 8)),
                           [8, 16, 32, 64], ["e_0"], thresholds=thr)
        assert report.flags["span_dense_phi"] is False
