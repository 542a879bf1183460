import pytest

from tandem.errors import ConfigError
from tandem.experiment import (
    ExperimentConfig,
    HumanModelSpec,
    MetricsRow,
    aggregate,
    build_domain,
    emit_metrics,
    parse_metrics,
    run_experiment,
    scenario_config,
    scenario_names,
    spearman,
)


def sample_row(**overrides) -> MetricsRow:
    values = dict(
        scenario="identical",
        alpha=0.05,
        run=0,
        seed=0,
        robot_pct=80.0,
        human_pct=70.0,
        joint_pct=60.0,
        feedback_freq=0.125,
        moves=321,
        deliveries=10,
        status="completed",
        robot_recent=True,
        human_recent=True,
        joint_recent=False,
    )
    values.update(overrides)
    return MetricsRow(**values)


class TestMetricsRows:
    def test_joint_bounded_by_shares(self):
        with pytest.raises(ValueError):
            sample_row(joint_pct=90.0)

    def test_alpha_range_checked(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(
                scenario="x",
                domain_spec="kitchen",
                robot_task="G F delivered_onions_3",
                human_model=HumanModelSpec(kind="scripted"),
                alphas=(1.5,),
            )


class TestEmit:
    def test_empty_table_is_header_only(self):
        text = emit_metrics([], "csv")
        assert text.count("\n") == 1
        assert text.startswith("scenario,alpha,run,seed,")

    def test_csv_round_trip(self):
        rows = [sample_row(), sample_row(run=1, joint_pct=0.0, joint_recent=False)]
        assert parse_metrics(emit_metrics(rows, "csv"), "csv") == rows

    def test_jsonl_round_trip(self):
        rows = [sample_row(alpha=0.07, feedback_freq=1 / 3)]
        parsed = parse_metrics(emit_metrics(rows, "jsonl"), "jsonl")
        assert parsed == rows

    def test_unknown_format(self):
        with pytest.raises(ConfigError):
            emit_metrics([], "xml")


class TestAggregate:
    def test_matches_direct_recomputation(self):
        rows = [
            sample_row(run=i, robot_pct=float(60 + i), joint_pct=float(30 + i))
            for i in range(4)
        ]
        (entry,) = aggregate(rows)
        values = [60.0, 61.0, 62.0, 63.0]
        mean = sum(values) / 4
        var = sum((v - mean) ** 2 for v in values) / 3
        assert entry["mean_robot_pct"] == pytest.approx(mean)
        assert entry["std_robot_pct"] == pytest.approx(var ** 0.5)
        assert entry["frac_robot_recent"] == 1.0
        assert entry["runs"] == 4

    def test_groups_by_scenario_and_alpha(self):
        rows = [sample_row(), sample_row(alpha=0.1), sample_row(scenario="compatible")]
        assert len(aggregate(rows)) == 3


class TestSpearman:
    def test_perfect_orders(self):
        assert spearman([1, 2, 3], [10, 20, 30]) == pytest.approx(1.0)
        assert spearman([1, 2, 3], [9, 5, 1]) == pytest.approx(-1.0)

    def test_ties_average(self):
        assert spearman([1, 1, 2, 2], [1, 1, 2, 2]) == pytest.approx(1.0)

    def test_constant_series(self):
        assert spearman([1, 1, 1], [4, 5, 6]) == 0.0


class TestConfigPlumbing:
    def test_scenario_names(self):
        assert scenario_names() == ["compatible", "identical", "incompatible"]

    def test_unknown_scenario(self):
        with pytest.raises(ConfigError):
            scenario_config("mystery")

    def test_build_domain_specs(self):
        d = build_domain("gridworld:rows=2;cols=2;cap=1")
        assert d.num_states > 0
        with pytest.raises(ConfigError):
            build_domain("holodeck")

    def test_domain_file_round_trip(self, tmp_path):
        from tandem.domain import serialize_domain

        d = build_domain("gridworld:rows=2;cols=2;cap=1")
        path = tmp_path / "small.domain"
        path.write_text(serialize_domain(d), encoding="utf-8")
        loaded = build_domain(f"file:{path}")
        assert loaded.adjacency == d.adjacency


class TestRunExperiment:
    def test_zero_move_budget_yields_an_empty_active_run(self):
        config = ExperimentConfig(
            scenario="identical",
            domain_spec="kitchen",
            robot_task="G F delivered_onions_3",
            human_model=HumanModelSpec(
                kind="probabilistic", task="G F delivered_onions_3"
            ),
            alphas=(0.05,),
            runs=1,
            max_moves=0,
            stop_deliveries=10,
        )
        rows, _ = run_experiment(config)
        (row,) = rows
        assert row.moves == 0
        assert row.deliveries == 0
        assert row.status == "active"

    def test_tiny_sweep_shapes_and_determinism(self):
        config = ExperimentConfig(
            scenario="identical",
            domain_spec="kitchen",
            robot_task="G F delivered_onions_3",
            human_model=HumanModelSpec(
                kind="probabilistic", task="G F delivered_onions_3",
                compliance=1.0, heed=1.0,
            ),
            alphas=(0.0, 0.1),
            runs=2,
            max_moves=120,
            stop_deliveries=2,
            colive_budget=0,
        )
        rows, _ = run_experiment(config)
        assert len(rows) == 4
        assert [r.seed for r in rows] == [0, 1, 0, 1]
        again, _ = run_experiment(config)
        assert rows == again
        for row in rows:
            assert row.joint_pct <= min(row.robot_pct, row.human_pct) + 1e-9
