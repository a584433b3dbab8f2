import numpy as np
import pytest
from numpy.testing import assert_allclose

from switchlab.instruments import alice_instrument, bob_basis, charlie_basis
from switchlab.kraus import NoiseParams, behavior as kraus_behavior
from switchlab.process_matrix import (
    DIM,
    ProcessMatrix,
    behavior as process_behavior,
    born_rule,
    build_w,
    build_w_switch,
    choi_of_kraus,
    mix_w,
    switch_fidelity,
    write_w_csv,
)
from switchlab.linalg import I2


class TestConstruction:
    @pytest.mark.parametrize("eta,epsilon", [(1.0, 1.0), (0.5, 0.3), (0.0, 0.0)])
    def test_w_is_hermitian_and_psd(self, eta, epsilon):
        w = build_w(eta, epsilon).matrix
        assert np.max(np.abs(w - w.conj().T)) < 1e-9
        assert np.linalg.eigvalsh(w).min() > -1e-9

    def test_trace_is_output_dimension_squared(self):
        for eta, epsilon in [(1.0, 1.0), (0.7, 0.2)]:
            assert build_w(eta, epsilon).trace == pytest.approx(4.0, abs=1e-9)

    def test_switch_and_mixture_are_special_cases(self):
        assert_allclose(build_w_switch(0.8).matrix, build_w(0.8, 1.0).matrix)
        assert_allclose(mix_w(0.3).matrix, build_w(1.0, 0.3).matrix)

    def test_mixture_is_affine_in_epsilon(self):
        w0, w_half, w1 = (mix_w(e).matrix for e in (0.0, 0.5, 1.0))
        assert np.max(np.abs(w0 + w1 - 2 * w_half)) < 1e-12

    def test_validation_rejects_non_hermitian(self):
        bad = np.zeros((DIM, DIM), dtype=complex)
        bad[0, 1] = 1.0
        with pytest.raises(ValueError):
            ProcessMatrix(bad)

    def test_validation_rejects_negative(self):
        with pytest.raises(ValueError):
            ProcessMatrix(-np.eye(DIM, dtype=complex))

    def test_out_of_range_noise_rejected(self):
        with pytest.raises(ValueError):
            build_w(1.5, 1.0)


class TestBornRule:
    def test_probabilities_normalise(self):
        w = build_w(0.9, 0.8)
        total = 0.0
        for y, z in [(0, 0)]:
            for b in (0, 1):
                for c in (0, 1):
                    for a1 in (0, 1):
                        for a2 in (0, 1):
                            total += born_rule(
                                w,
                                bob_basis(y).projector(b),
                                choi_of_kraus(dict(alice_instrument(0))[a1]),
                                choi_of_kraus(dict(alice_instrument(1))[a2]),
                                charlie_basis(z).projector(c),
                            )
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_bob_marginal_is_maximally_mixed(self):
        w = build_w_switch(1.0)
        p = sum(
            born_rule(
                w,
                bob_basis(0).projector(0),
                choi_of_kraus(dict(alice_instrument(0))[a1]),
                choi_of_kraus(dict(alice_instrument(0))[a2]),
                charlie_basis(0).projector(c),
            )
            for a1 in (0, 1)
            for a2 in (0, 1)
            for c in (0, 1)
        )
        assert p == pytest.approx(0.5, abs=1e-9)

    def test_wrong_operator_shape_rejected(self):
        w = build_w_switch(1.0)
        choi = choi_of_kraus(dict(alice_instrument(0))[0])
        with pytest.raises(ValueError):
            born_rule(w, choi, choi, choi, I2)  # 4x4 where bob expects 2x2
        with pytest.raises(ValueError):
            born_rule(w, I2, I2, choi, I2)  # 2x2 where a Choi expects 4x4

    def test_choi_of_kraus_shape_and_rank(self):
        choi = choi_of_kraus(dict(alice_instrument(1))[0])
        assert choi.shape == (4, 4)
        eigs = np.linalg.eigvalsh(choi)
        assert eigs.min() > -1e-12
        assert np.sum(eigs > 1e-12) == 1


class TestBackendEquivalence:
    def test_matches_kraus_backend_on_random_noise(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            noise = NoiseParams(*rng.uniform(0.0, 1.0, 2))
            a = kraus_behavior(noise).probs
            b = process_behavior(noise).probs
            assert np.max(np.abs(a - b)) < 1e-9

    def test_matches_at_parameter_corners(self):
        for eta in (0.0, 1.0):
            for epsilon in (0.0, 1.0):
                noise = NoiseParams(eta, epsilon)
                assert_allclose(
                    process_behavior(noise).probs,
                    kraus_behavior(noise).probs,
                    atol=1e-12,
                )


class TestSwitchFidelity:
    def test_ideal_switch_has_unit_fidelity(self):
        assert switch_fidelity(build_w_switch(1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_fully_dephased_mixture_fidelity(self):
        # the equal mixture of the two orders keeps half the ideal overlap
        assert switch_fidelity(mix_w(0.0)) == pytest.approx(0.5, abs=1e-9)

    def test_affine_in_epsilon(self):
        values = [switch_fidelity(mix_w(e)) for e in (0.0, 0.5, 1.0)]
        assert values[0] + values[2] == pytest.approx(2 * values[1], abs=1e-9)


class TestCsvDump:
    def test_dump_covers_every_entry(self, tmp_path):
        w = build_w_switch(1.0)
        path = tmp_path / "w.csv"
        write_w_csv(w, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "row,col,re,im"
        assert len(lines) == 1 + DIM * DIM
        row, col, re, im = lines[1].split(",")
        assert (row, col) == ("0", "0")
        assert float(re) == pytest.approx(w.matrix[0, 0].real, abs=1e-9)
        assert float(im) == 0.0
