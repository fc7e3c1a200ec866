from dataclasses import replace

import numpy as np
import pytest

from risbandit.agents import OracleAgent, RandomAgent
from risbandit.environment import build_action_space, env_step, exhaustive_best
from risbandit.harness import (
    ExperimentConfig,
    MetricsLog,
    config_document,
    config_fingerprint,
    evaluate,
    make_agent,
    normalized_rate,
    rolling_mean,
    run_experiment,
    sweep,
    train,
    with_total_elements,
)


class TestTrain:
    def test_zero_steps(self, tiny_config):
        space = build_action_space(tiny_config.system)
        agent = RandomAgent(space, seed=0)
        log = train(agent, tiny_config.system, 0, np.random.default_rng(0))
        assert len(log) == 0

    def test_random_agent_mean_matches_monte_carlo(self, tiny_config):
        cfg = tiny_config.system
        space = build_action_space(cfg)
        agent = RandomAgent(space, seed=1)
        log = train(agent, cfg, 5000, np.random.default_rng(2))
        # independent oracle: uniform play simulated directly
        rng = np.random.default_rng(90210)
        total = 0.0
        for _ in range(5000):
            step = env_step(cfg, rng)
            total += step.reward(space.decode(int(rng.integers(len(space)))))
        direct = total / 5000
        assert np.mean(log.rewards) == pytest.approx(direct, rel=0.02)

    def test_seeded_determinism(self, tiny_config):
        cfg = tiny_config.system
        space = build_action_space(cfg)
        logs = []
        for _ in range(2):
            agent = make_agent(
                replace(tiny_config, agent_kind="ucb"), space, seed=5
            )
            logs.append(train(agent, cfg, 50, np.random.default_rng(17)))
        assert logs[0] == logs[1]


class TestEvaluate:
    def test_oracle_agent_equals_per_step_optima(self, tiny_config):
        cfg = tiny_config.system
        space = build_action_space(cfg)
        mean = evaluate(OracleAgent(space, cfg), cfg, 40, np.random.default_rng(3))
        rng = np.random.default_rng(3)
        optima = [
            exhaustive_best(env_step(cfg, rng).channels, space, cfg)[1]
            for _ in range(40)
        ]
        assert mean == sum(optima) / len(optima)

    def test_repeatable_for_deterministic_agent(self, tiny_config):
        cfg = tiny_config.system
        space = build_action_space(cfg)
        agent = OracleAgent(space, cfg)
        a = evaluate(agent, cfg, 25, np.random.default_rng(8))
        b = evaluate(agent, cfg, 25, np.random.default_rng(8))
        assert a == b

    def test_random_below_oracle_on_same_stream(self, tiny_config):
        cfg = tiny_config.system
        space = build_action_space(cfg)
        rnd = evaluate(RandomAgent(space, seed=0), cfg, 60, np.random.default_rng(4))
        orc = evaluate(OracleAgent(space, cfg), cfg, 60, np.random.default_rng(4))
        assert rnd <= orc

    def test_mode_restored(self, tiny_config):
        cfg = tiny_config.system
        agent = RandomAgent(build_action_space(cfg), seed=0)
        assert agent.mode == "train"
        evaluate(agent, cfg, 5, np.random.default_rng(0))
        assert agent.mode == "train"


class TestNormalizedRate:
    def test_self_ratio(self):
        assert normalized_rate(2.5, 2.5) == 1.0

    def test_guard(self):
        with pytest.raises(ValueError):
            normalized_rate(1.0, 0.0)


class TestRollingMean:
    def test_prefix_warmup(self):
        means, _ = rolling_mean([1.0, 2.0, 3.0], window=2)
        np.testing.assert_allclose(means, [1.0, 1.5, 2.5])

    def test_constant_series_zero_std(self):
        _, stds = rolling_mean([4.0] * 10, window=3)
        np.testing.assert_array_equal(stds, np.zeros(10))

    def test_window_one_is_identity(self):
        series = [3.0, -1.0, 7.0]
        means, stds = rolling_mean(series, window=1)
        np.testing.assert_array_equal(means, series)
        np.testing.assert_array_equal(stds, np.zeros(3))

    def test_window_validation(self):
        with pytest.raises(ValueError):
            rolling_mean([1.0], window=0)


class TestMetricsLog:
    def test_strictly_increasing_steps(self):
        log = MetricsLog()
        log.append(0, 1, 0.5)
        log.append(1, 2, 0.6)
        with pytest.raises(ValueError):
            log.append(1, 3, 0.7)


class TestRunExperiment:
    def test_oracle_agent_normalizes_to_one(self, tiny_config):
        ec = replace(
            tiny_config, agent_kind="oracle", seeds=(7,), eval_steps=20
        )
        result = run_experiment(ec)
        assert result.normalized[7] == 1.0
        assert result.train_steps == 0

    def test_disjoint_seeds_give_different_logs(self, tiny_config):
        ec = replace(
            tiny_config,
            agent_kind="ucb",
            seeds=(0, 1),
            train_steps=60,
            eval_steps=5,
            compute_oracle=False,
        )
        result = run_experiment(ec)
        assert result.train_logs[0] != result.train_logs[1]

    def test_schedule_defaults(self, tiny_config):
        space = build_action_space(tiny_config.system)
        assert tiny_config.resolved_train_steps(space.cardinality) == 50 * 16
        ucb = replace(tiny_config, agent_kind="ucb")
        assert ucb.resolved_train_steps(space.cardinality) == 500 * 16
        rnd = replace(tiny_config, agent_kind="random")
        assert rnd.resolved_train_steps(space.cardinality) == 0

    def test_log_lengths_match_schedule(self, tiny_config):
        ec = replace(
            tiny_config,
            agent_kind="ucb",
            seeds=(0,),
            train_steps=35,
            eval_steps=4,
            compute_oracle=False,
        )
        result = run_experiment(ec)
        assert len(result.train_logs[0]) == 35

    def test_normalized_rates_never_exceed_one(self, tiny_config):
        # same-stream oracle dominance makes the bound exact
        for kind in ("random", "ucb"):
            ec = replace(
                tiny_config,
                agent_kind=kind,
                seeds=(0, 1),
                train_steps=30,
                eval_steps=25,
            )
            result = run_experiment(ec)
            assert all(v <= 1.0 for v in result.normalized.values())


class TestFingerprint:
    def test_stable_for_same_config(self, tiny_config):
        assert config_fingerprint(tiny_config) == config_fingerprint(tiny_config)

    def test_changes_with_any_field(self, tiny_config):
        base = config_fingerprint(tiny_config)
        assert config_fingerprint(replace(tiny_config, epsilon=0.31)) != base
        assert (
            config_fingerprint(
                replace(
                    tiny_config,
                    system=replace(tiny_config.system, power_dbm=41.0),
                )
            )
            != base
        )
        assert config_fingerprint(replace(tiny_config, seeds=(0, 1))) != base

    def test_document_mirrors_config(self, tiny_config):
        doc = config_document(tiny_config)
        assert doc["system"]["n_tot"] == 8
        assert doc["agent"]["kind"] == "drp"


class TestSweep:
    def test_power_grid(self, tiny_config):
        ec = replace(
            tiny_config,
            agent_kind="random",
            seeds=(0,),
            eval_steps=4,
            compute_oracle=False,
        )
        results = sweep(ec, "power_dbm", [10, 20, 30, 40, 50])
        assert [r.config_doc["system"]["power_dbm"] for r in results] == [
            10.0,
            20.0,
            30.0,
            40.0,
            50.0,
        ]

    def test_element_sweep_cardinalities(self, desk_config):
        for n_tot, card in [(32, 16), (64, 64), (96, 256), (128, 1024)]:
            point = with_total_elements(desk_config, n_tot)
            assert build_action_space(point.system).cardinality == card

    def test_single_value_equals_single_run(self, tiny_config):
        ec = replace(
            tiny_config,
            agent_kind="random",
            seeds=(3,),
            eval_steps=6,
            compute_oracle=False,
        )
        only = sweep(ec, "power_dbm", [40.0])
        direct = run_experiment(ec)
        assert only[0] == direct

    def test_empty_values_rejected(self, tiny_config):
        with pytest.raises(ValueError):
            sweep(tiny_config, "power_dbm", [])

    def test_unknown_dimension_rejected(self, tiny_config):
        with pytest.raises(ValueError):
            sweep(tiny_config, "bandwidth", [1])
