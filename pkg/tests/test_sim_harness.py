import math
import statistics
from dataclasses import replace

import pytest

from nomabeam.baselines import SchemeId
from nomabeam.link_metrics import sinr_dbs_monopath_closed
from nomabeam.sim_harness import (
    CSV_HEADER,
    ConfigError,
    ScenarioConfig,
    _drop_users,
    format_aggregates,
    load_scenario,
    parse_config_text,
    run_sweep,
    run_trial,
    write_csv,
)

SMALL = ScenarioConfig(
    user_counts=(4,),
    schemes=(SchemeId.DBS, SchemeId.NOMA_DBS_FCSI),
    trials=3,
    master_seed=11,
)


class TestConfigParsing:
    def test_full_roundtrip(self, tmp_path):
        text = """
        # rural scenario
        m_h = 32
        m_v = 2                  # vertical elements
        d_over_lambda = 0.5
        carrier_hz = 28e9
        bandwidth_hz = 20e6
        cell_radius_m = 100
        total_power_dbm = 30
        noise_power_dbm = -100.9178
        p_min = 1e-3
        beta0 = 0.5
        epsilon = 0.05
        num_time_clusters = 1,2
        paths_per_cluster = 1,2
        nlos_gain_offset_db = 5,15
        angle_spread_deg = 15
        shadowing_sigma_db = 4
        user_counts = 5,15,25
        schemes = dbs,noma_dbs_fcsi,cb
        trials = 10
        master_seed = 99
        inter_cluster_rule = proportional
        csi_mode = full
        """
        path = tmp_path / "scenario.cfg"
        path.write_text("\n".join(line.strip() for line in text.splitlines()))
        config = load_scenario(str(path))
        assert config.m_h == 32 and config.m_v == 2
        assert config.user_counts == (5, 15, 25)
        assert config.schemes == (SchemeId.DBS, SchemeId.NOMA_DBS_FCSI, SchemeId.CONJUGATE_BF)
        assert config.trials == 10 and config.master_seed == 99
        assert config.total_power_w == pytest.approx(1.0)
        assert config.noise_w == pytest.approx(8.0905e-14, rel=1e-4)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text("m_h = 32\nbogus_key = 1\n")

    def test_malformed_line_rejected(self):
        with pytest.raises(ConfigError, match="expected 'key = value'"):
            parse_config_text("just some words\n")

    def test_bad_value_rejected(self):
        with pytest.raises(ConfigError, match="bad value"):
            parse_config_text("m_h = many\n")

    def test_interval_single_value_form(self):
        values = parse_config_text("num_time_clusters = 2\n")
        assert values["num_time_clusters"] == (2, 2)

    def test_scheme_alias_follows_csi_mode(self):
        full = parse_config_text("schemes = noma_dbs\ncsi_mode = full\n")
        partial = parse_config_text("schemes = noma_dbs\ncsi_mode = partial\n")
        assert full["schemes"] == (SchemeId.NOMA_DBS_FCSI,)
        assert partial["schemes"] == (SchemeId.NOMA_DBS_PCSI,)

    def test_unknown_scheme_rejected(self):
        with pytest.raises(ConfigError, match="unknown scheme"):
            parse_config_text("schemes = dbs,magic\n")

    def test_override_unknown_key(self, tmp_path):
        path = tmp_path / "s.cfg"
        path.write_text("m_h = 8\n")
        with pytest.raises(ConfigError, match="unknown override"):
            load_scenario(str(path), not_a_field=3)


class TestConfigValidation:
    def test_user_count_must_stay_below_element_count(self):
        with pytest.raises(ConfigError, match="1 <= K < M"):
            ScenarioConfig(m_h=4, m_v=2, user_counts=(8,))

    def test_trials_must_be_positive(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(trials=0)

    def test_rule_and_csi_mode_validated(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(inter_cluster_rule="sideways")
        with pytest.raises(ConfigError):
            ScenarioConfig(csi_mode="none")

    def test_power_conversion(self):
        config = ScenarioConfig(total_power_dbm=33.0)
        assert config.total_power_w == pytest.approx(1.9953, rel=1e-4)


class TestRunTrial:
    def test_single_user_is_noise_limited(self):
        config = replace(SMALL, user_counts=(1,))
        result = run_trial(config, 1, 0, SchemeId.DBS)
        assert result.noma_cluster_count == 0
        assert result.sum_rate_bps > 0
        assert result.spectral_eff_bps_per_hz == pytest.approx(
            result.sum_rate_bps / config.bandwidth_hz, rel=1e-12
        )

    def test_deterministic_per_key(self):
        a = run_trial(SMALL, 4, 2, SchemeId.NOMA_DBS_FCSI)
        b = run_trial(SMALL, 4, 2, SchemeId.NOMA_DBS_FCSI)
        assert a == b

    def test_schemes_share_the_same_drop(self):
        # K=1 leaves nothing to pair, so the shared-beam scheme reduces to
        # plain steering on the identical channel draw
        config = replace(SMALL, user_counts=(1,))
        dbs = run_trial(config, 1, 5, SchemeId.DBS)
        noma = run_trial(config, 1, 5, SchemeId.NOMA_DBS_FCSI)
        assert dbs.sum_rate_bps == pytest.approx(noma.sum_rate_bps, rel=1e-12)

    def test_monopath_dbs_matches_closed_form(self):
        config = replace(
            SMALL,
            num_time_clusters=(1, 1),
            paths_per_cluster=(1, 1),
            user_counts=(6,),
        )
        k = 6
        result = run_trial(config, k, 1, SchemeId.DBS)
        users, _, dirs = _drop_users(config, k, 1)
        gains = [u.los.gain for u in users]
        eta_dbs = config.total_power_w / (config.array_config.num_elements * k)
        closed_sum = sum(
            config.bandwidth_hz
            * math.log2(
                1.0
                + sinr_dbs_monopath_closed(
                    gains, dirs, own, eta_dbs, config.noise_w, config.array_config
                )
            )
            for own in range(k)
        )
        assert result.sum_rate_bps == pytest.approx(closed_sum, rel=1e-9)

    def test_partial_csi_scheme_runs(self):
        result = run_trial(SMALL, 4, 0, SchemeId.NOMA_DBS_PCSI)
        assert result.sum_rate_bps > 0

    def test_oma_scheme_runs(self):
        result = run_trial(SMALL, 4, 0, SchemeId.OMA_DBS)
        assert result.sum_rate_bps > 0


class TestRunSweep:
    def test_single_combination_gives_one_row(self):
        config = replace(SMALL, user_counts=(3,), schemes=(SchemeId.DBS,), trials=1)
        results, aggregates = run_sweep(config)
        assert len(results) == 1
        assert len(aggregates) == 1
        assert aggregates[0].trials == 1

    def test_cardinality(self):
        config = replace(
            SMALL, user_counts=(3, 5), schemes=(SchemeId.DBS, SchemeId.CONJUGATE_BF), trials=4
        )
        results, aggregates = run_sweep(config)
        assert len(results) == 2 * 2 * 4
        assert len(aggregates) == 4

    def test_rows_are_sorted(self):
        config = replace(
            SMALL, user_counts=(5, 3), schemes=(SchemeId.OMA_DBS, SchemeId.DBS), trials=2
        )
        results, _ = run_sweep(config)
        keys = [(r.scheme.value, r.K, r.trial) for r in results]
        assert keys == sorted(keys)

    def test_positive_spectral_efficiency(self):
        results, _ = run_sweep(replace(SMALL, trials=2))
        assert all(r.spectral_eff_bps_per_hz > 0 for r in results)

    def test_pairing_reduces_difference_variance(self):
        config = replace(
            SMALL,
            user_counts=(12,),
            schemes=(SchemeId.DBS, SchemeId.NOMA_DBS_FCSI),
            trials=60,
            master_seed=5,
        )
        noma = [run_trial(config, 12, t, SchemeId.NOMA_DBS_FCSI).spectral_eff_bps_per_hz for t in range(60)]
        dbs = [run_trial(config, 12, t, SchemeId.DBS).spectral_eff_bps_per_hz for t in range(60)]
        other = replace(config, master_seed=77)
        dbs_unpaired = [run_trial(other, 12, t, SchemeId.DBS).spectral_eff_bps_per_hz for t in range(60)]
        paired_var = statistics.variance([n - d for n, d in zip(noma, dbs)])
        unpaired_var = statistics.variance([n - d for n, d in zip(noma, dbs_unpaired)])
        assert paired_var < unpaired_var


class TestCsv:
    def test_header_and_determinism(self, tmp_path):
        config = replace(SMALL, trials=2)
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        results_a, _ = run_sweep(config)
        results_b, _ = run_sweep(config)
        write_csv(results_a, str(out_a))
        write_csv(results_b, str(out_b))
        content = out_a.read_bytes()
        assert content == out_b.read_bytes()
        first_line = content.decode().splitlines()[0]
        assert first_line == CSV_HEADER

    def test_row_fields(self, tmp_path):
        config = replace(SMALL, user_counts=(2,), schemes=(SchemeId.DBS,), trials=1)
        results, _ = run_sweep(config)
        out = tmp_path / "one.csv"
        write_csv(results, str(out))
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        fields = lines[1].split(",")
        assert fields[0] == "dbs"
        assert fields[1] == "2" and fields[2] == "0"
        assert float(fields[4]) == pytest.approx(results[0].spectral_eff_bps_per_hz, rel=1e-8)

    def test_aggregate_table_renders(self):
        _, aggregates = run_sweep(replace(SMALL, trials=2))
        table = format_aggregates(aggregates)
        assert "scheme" in table and "dbs" in table
