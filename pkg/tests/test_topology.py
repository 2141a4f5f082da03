import numpy as np
import pytest

from oracles import power_radius
from wavecho import topology as topo
from wavecho.errors import (
    ConfigurationError,
    DegenerateSpectrumError,
    EmptyNetworkError,
    InvalidCodeError,
    ShapeError,
    UnsupportedTopologyError,
)


class TestParseCode:
    def test_stdesn_code(self):
        code = topo.parse_code("0000")
        assert (code.neuron_model, code.architecture, code.input_domain, code.size) == (0, 0, 0, 0)
        assert code.n_units == 32
        assert code.input_dim == 1
        assert not code.is_structured

    def test_audesn_code(self):
        code = topo.parse_code("1111")
        assert code.is_postsynaptic and code.is_structured
        assert code.input_dim == 2 * topo.FIELD_COLUMNS
        assert code.n_units == 128
        assert code.num_fields == 4

    def test_small_structured_has_one_field(self):
        assert topo.parse_code("1110").num_fields == 1
        assert topo.parse_code("1110").n_units == 32

    @pytest.mark.parametrize("bad", ["012x", "000", "00000", "00a0", "2000"])
    def test_malformed_codes(self, bad):
        with pytest.raises(InvalidCodeError):
            topo.parse_code(bad)

    def test_all_sixteen_codes_round_trip(self):
        assert len(set(topo.ALL_CODES)) == 16
        for text in topo.ALL_CODES:
            assert str(topo.parse_code(text)) == text


class TestRandomConnectivity:
    def test_seeded_determinism(self):
        a = topo.build_random_connectivity(2, seed=7)
        b = topo.build_random_connectivity(2, seed=7)
        np.testing.assert_array_equal(a, b)

    def test_support(self):
        w = topo.build_random_connectivity(128, seed=1)
        assert np.all(w > -1.0) and np.all(w < 1.0)

    def test_sample_mean_within_three_sigma(self):
        w = topo.build_random_connectivity(128, seed=1)
        sigma_mean = (1.0 / np.sqrt(3.0)) / 128.0
        assert abs(w.mean()) < 3.0 * sigma_mean

    def test_empty_network_rejected(self):
        with pytest.raises(EmptyNetworkError):
            topo.build_random_connectivity(0, seed=1)


class TestTonotopicConnectivity:
    def test_inhibitory_blocks_exactly_diagonal(self):
        spec = topo.TopologySpec(num_fields=1)
        _, w_ei, _, w_ii = topo.build_tonotopic_connectivity(spec, seed=3)
        for block in (w_ei, w_ii):
            off = block - np.diag(np.diag(block))
            assert np.count_nonzero(off) == 0
            assert block.shape == (16, 16)

    def test_belt_belt_blocks_zero(self):
        spec = topo.TopologySpec(num_fields=4)
        w_ee, _, w_ie, _ = topo.build_tonotopic_connectivity(spec, seed=3)
        nc = spec.columns_per_field
        for i in range(1, 4):
            for j in range(1, 4):
                if i == j:
                    continue
                assert np.count_nonzero(w_ee[i * nc:(i + 1) * nc, j * nc:(j + 1) * nc]) == 0
                assert np.count_nonzero(w_ie[i * nc:(i + 1) * nc, j * nc:(j + 1) * nc]) == 0

    def test_core_belt_blocks_populated(self):
        spec = topo.TopologySpec(num_fields=4)
        w_ee, _, _, _ = topo.build_tonotopic_connectivity(spec, seed=3)
        nc = spec.columns_per_field
        for belt in range(1, 4):
            assert np.count_nonzero(w_ee[belt * nc:(belt + 1) * nc, :nc]) > 0
            assert np.count_nonzero(w_ee[:nc, belt * nc:(belt + 1) * nc]) > 0

    def test_interfield_patterns_unique_per_pair(self):
        spec = topo.TopologySpec(num_fields=4)
        w_ee, _, _, _ = topo.build_tonotopic_connectivity(spec, seed=3)
        nc = spec.columns_per_field
        core_to_b1 = w_ee[nc:2 * nc, :nc]
        core_to_b2 = w_ee[2 * nc:3 * nc, :nc]
        assert not np.array_equal(core_to_b1, core_to_b2)

    def test_excitatory_kernel_decays_with_distance(self):
        spec = topo.TopologySpec(num_fields=1)
        w_ee, _, _, _ = topo.build_tonotopic_connectivity(spec, seed=3)
        for c in range(5, 11):
            assert abs(w_ee[c, c + 1]) >= abs(w_ee[c, c + 5])
            assert abs(w_ee[c, c - 1]) >= abs(w_ee[c, c - 5])

    def test_unsupported_field_count(self):
        with pytest.raises(UnsupportedTopologyError):
            topo.TopologySpec(num_fields=2)


class TestAssembleCombined:
    def test_identity_blocks(self):
        eye = np.eye(3)
        w = topo.assemble_combined(eye, eye, eye, eye, tau_m=1.0)
        expect = np.block([[eye, -eye], [eye, -eye]])
        np.testing.assert_array_equal(w, expect)

    def test_zero_blocks(self):
        z = np.zeros((4, 4))
        assert np.count_nonzero(topo.assemble_combined(z, z, z, z)) == 0

    def test_tau_scaling_is_linear(self):
        spec = topo.TopologySpec(num_fields=1)
        blocks = topo.build_tonotopic_connectivity(spec, seed=3)
        w1 = topo.assemble_combined(*blocks, tau_m=1.0)
        w2 = topo.assemble_combined(*blocks, tau_m=2.0)
        np.testing.assert_allclose(w2, 0.5 * w1, rtol=0, atol=0)

    def test_inhibitory_columns_negated(self):
        spec = topo.TopologySpec(num_fields=1)
        w_ee, w_ei, w_ie, w_ii = topo.build_tonotopic_connectivity(spec, seed=3)
        w = topo.assemble_combined(w_ee, w_ei, w_ie, w_ii, tau_m=1.0)
        half = 16
        np.testing.assert_array_equal(w[:half, half:], -w_ei)
        np.testing.assert_array_equal(w[half:, half:], -w_ii)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            topo.assemble_combined(np.eye(3), np.eye(3), np.eye(3), np.eye(4))


class TestSpectralScale:
    def test_identity_unchanged(self):
        np.testing.assert_allclose(topo.spectral_scale(np.eye(5)), np.eye(5))

    def test_diagonal_example(self):
        scaled = topo.spectral_scale(np.diag([2.0, 0.5]))
        np.testing.assert_allclose(scaled, np.diag([1.0, 0.25]))

    def test_random_matrix_radius_one(self):
        w = topo.build_random_connectivity(32, seed=5)
        scaled = topo.spectral_scale(w)
        assert abs(power_radius(scaled) - 1.0) < 1e-10

    def test_zero_matrix_degenerate(self):
        with pytest.raises(DegenerateSpectrumError):
            topo.spectral_scale(np.zeros((4, 4)))

    def test_nilpotent_degenerate(self):
        w = np.triu(np.ones((5, 5)), k=1)
        with pytest.raises(DegenerateSpectrumError):
            topo.spectral_scale(w)


class TestInputMatrix:
    def test_frequency_domain_has_two_diagonals(self):
        code = topo.parse_code("1111")
        d = topo.build_input_matrix(code, 128, 32, seed=2)
        assert np.count_nonzero(d) == 32

    def test_belt_rows_zero(self):
        code = topo.parse_code("1111")
        d = topo.build_input_matrix(code, 128, 32, seed=2)
        half = 64
        nc = topo.FIELD_COLUMNS
        assert np.count_nonzero(d[nc:half]) == 0          # belt excitatory
        assert np.count_nonzero(d[half + nc:]) == 0       # belt inhibitory
        assert np.count_nonzero(d[:nc]) == nc             # core excitatory
        assert np.count_nonzero(d[half:half + nc]) == nc  # core inhibitory

    def test_core_diagonals_scaled_by_inverse_tau(self):
        code = topo.parse_code("1111")
        d = topo.build_input_matrix(code, 128, 32, seed=2, tau_m=2.0)
        nc = topo.FIELD_COLUMNS
        np.testing.assert_allclose(d[np.arange(nc), np.arange(nc)], 0.5)
        np.testing.assert_allclose(d[64 + np.arange(nc), nc + np.arange(nc)], 0.5)

    def test_time_domain_dense(self):
        code = topo.parse_code("0000")
        d = topo.build_input_matrix(code, 32, 1, seed=2)
        assert d.shape == (32, 1)
        assert np.all(d != 0.0)
        assert np.all(np.abs(d) < 1.0)

    def test_structured_time_domain_feeds_core_excitatory(self):
        code = topo.parse_code("1100")
        d = topo.build_input_matrix(code, 32, 1, seed=2)
        nc = topo.FIELD_COLUMNS
        assert np.count_nonzero(d[:nc, 0]) == nc
        assert np.count_nonzero(d[nc:, 0]) == 0

    def test_inconsistent_dimension_rejected(self):
        code = topo.parse_code("0010")
        with pytest.raises(ConfigurationError):
            topo.build_input_matrix(code, 32, 1, seed=2)


class TestBuildConnectivity:
    def test_deterministic_bit_identical(self):
        for text in ("0000", "0101", "1010", "1111"):
            a = topo.build_connectivity(text, seed=11)
            b = topo.build_connectivity(text, seed=11)
            np.testing.assert_array_equal(a.w, b.w)
            np.testing.assert_array_equal(a.d, b.d)

    @pytest.mark.parametrize("text", topo.ALL_CODES)
    def test_every_code_scaled_to_unit_radius(self, text):
        conn = topo.build_connectivity(text, seed=4)
        assert abs(power_radius(conn.w) - 1.0) < 1e-8
        code = topo.parse_code(text)
        assert conn.n == code.n_units
        assert conn.m == code.input_dim

    def test_partition_labels(self):
        conn = topo.build_connectivity("1111", seed=4)
        assert conn.excitatory.sum() == 64
        assert set(conn.field_index) == {0, 1, 2, 3}
        assert conn.column_index.max() == 15

    def test_csv_round_trip(self, tmp_path):
        conn = topo.build_connectivity("1011", seed=9)
        path = tmp_path / "conn.csv"
        topo.save_connectivity_csv(conn, path)
        loaded = topo.load_connectivity_csv(path)
        np.testing.assert_array_equal(loaded.w, conn.w)
        np.testing.assert_array_equal(loaded.d, conn.d)
        assert loaded.code == conn.code and loaded.seed == conn.seed
