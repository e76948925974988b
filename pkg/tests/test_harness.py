import numpy as np
import pytest

from eigexpand import extraction, harness, problems, strategies

LR = extraction.TargetSpec(extraction.LARGEST_REAL)
ALL_TAGS = ("stand", "ritzV", "ritzR", "rRitzR", "optimal")


def small_config(rng=None, tags=ALL_TAGS, d=4, m=12, seed=3, n=50):
    p = problems.gen_strakos(n, 8.0, -2.0, 0.8)
    strats = [strategies.Strategy(tag, LR,
                                  tau=0.0 if tag in strategies.HARMONIC_TAGS else None)
              for tag in tags]
    return harness.ExperimentConfig(problem=p, d=d, m=m, seed=seed,
                                    strategies=strats, target=LR)


class TestConfigValidation:
    def test_bounds(self):
        p = problems.gen_strakos(20, 8.0, -2.0, 0.8)
        with pytest.raises(ValueError):
            harness.ExperimentConfig(problem=p, d=0, m=5, seed=1,
                                     strategies=[strategies.Strategy("stand", LR)],
                                     target=LR)
        with pytest.raises(ValueError):
            harness.ExperimentConfig(problem=p, d=6, m=25, seed=1,
                                     strategies=[strategies.Strategy("stand", LR)],
                                     target=LR)
        with pytest.raises(ValueError):
            harness.ExperimentConfig(problem=p, d=2, m=5, seed=1, strategies=[],
                                     target=LR)

    def test_reference_required(self):
        p = problems.Problem(a=np.eye(10), label="bare")
        with pytest.raises(ValueError):
            harness.ExperimentConfig(problem=p, d=2, m=5, seed=1,
                                     strategies=[strategies.Strategy("stand", LR)],
                                     target=LR)


class TestRunExperiment:
    def test_m_equals_d_single_row_per_strategy(self):
        rows = harness.run_experiment(small_config(d=5, m=5))
        assert len(rows) == len(ALL_TAGS)
        assert all(r.k == 5 and r.dim == 5 for r in rows)

    def test_sin_non_increasing(self):
        rows = harness.run_experiment(small_config())
        for tag in ALL_TAGS:
            sins = [r.sin_angle for r in rows if r.strategy == tag]
            assert all(b <= a + 1e-12 for a, b in zip(sins, sins[1:]))

    def test_angle_pythagoras_per_row(self):
        rows = harness.run_experiment(small_config())
        for r in rows:
            assert abs(r.sin_angle ** 2 + r.cos_angle ** 2 - 1.0) <= 1e-12

    def test_refined_dominance_per_row(self):
        rows = harness.run_experiment(small_config())
        for r in rows:
            if np.isfinite(r.rel_res_refined) and np.isfinite(r.rel_res_standard):
                assert r.rel_res_refined <= r.rel_res_standard + 1e-12

    def test_rows_sorted_by_strategy_then_k(self):
        rows = harness.run_experiment(small_config())
        keys = [(r.strategy, r.k) for r in rows]
        assert keys == sorted(keys)

    def test_strategy_isolation(self):
        rows_all = harness.run_experiment(small_config(tags=("stand", "ritzR")))
        rows_one = harness.run_experiment(small_config(tags=("stand",)))
        stand_all = [r for r in rows_all if r.strategy == "stand"]
        assert len(stand_all) == len(rows_one)
        for a, b in zip(stand_all, rows_one):
            assert (a.k, a.dim, a.sin_angle, a.rel_res_standard,
                    a.rel_res_refined, a.rank_r) == \
                   (b.k, b.dim, b.sin_angle, b.rel_res_standard,
                    b.rel_res_refined, b.rank_r)

    def test_determinism(self):
        r1 = harness.run_experiment(small_config())
        r2 = harness.run_experiment(small_config())
        assert [(r.k, r.strategy, r.sin_angle, r.rel_res_refined) for r in r1] == \
               [(r.k, r.strategy, r.sin_angle, r.rel_res_refined) for r in r2]

    def test_invariant_start_halts_gracefully(self):
        # the identity matrix gives a zero residual at once: every strategy
        # halts on its first proposal and keeps a flagged initial row
        p = problems.Problem(a=np.eye(12), reference=(1.0, np.eye(12)[:, 0]),
                             label="eye")
        cfg = harness.ExperimentConfig(problem=p, d=3, m=6, seed=2,
                                       strategies=[strategies.Strategy("stand", LR),
                                                   strategies.Strategy("optimal", LR)],
                                       target=LR)
        rows = harness.run_experiment(cfg)
        assert len(rows) == 2
        assert all(r.halted for r in rows)
        assert all(r.rank_r == 0 for r in rows)

    def test_vr_strategy_grows_by_residual_rank(self):
        cfg = small_config(tags=("vr",), d=4, m=14)
        rows = harness.run_experiment(cfg)
        dims = [r.dim for r in rows]
        assert dims[0] == 4 and dims[-1] == 14
        assert any(b - a > 1 for a, b in zip(dims, dims[1:]))
        ranks = [r.rank_r for r in rows]
        assert all(rk >= 1 for rk in ranks[:-1])

    def test_conjugate_pair_growth_recorded(self, rng):
        a = rng.standard_normal((30, 30)) * (0.2 / np.sqrt(30))
        c, s = 1.5 * np.cos(0.8), 1.5 * np.sin(0.8)
        a[:2, :2] = [[c, -s], [s, c]]
        a[2:, :2] = 0.0
        a[:2, 2:] = 0.0
        p = problems.reference_eigenpair(problems.Problem(a=a, label="rot"), LR)
        cfg = harness.ExperimentConfig(problem=p, d=3, m=9, seed=5,
                                       strategies=[strategies.Strategy("ritzR", LR)],
                                       target=LR)
        rows = harness.run_experiment(cfg)
        dims = [r.dim for r in rows]
        assert dims[0] == 3 and dims[-1] >= 9 - 1
        assert any(b - a == 2 for a, b in zip(dims, dims[1:]))


class TestTraceCsv:
    def test_header_and_single_row(self, tmp_path):
        rows = [harness.TraceRow(k=4, strategy="stand", dim=4, sin_angle=0.5,
                                 cos_angle=np.sqrt(0.75), rel_res_standard=1e-3,
                                 rel_res_refined=5e-4, rank_r=3)]
        path = str(tmp_path / "t.csv")
        harness.write_trace_csv(rows, path)
        lines = open(path).read().splitlines()
        assert len(lines) == 2
        assert lines[0] == "k,strategy,dim,sin_angle,cos_angle," \
                           "rel_res_standard,rel_res_refined,rank_R"

    def test_roundtrip_bit_exact(self, tmp_path):
        rows = harness.run_experiment(small_config(m=8))
        path = str(tmp_path / "rt.csv")
        harness.write_trace_csv(rows, path)
        back = harness.read_trace_csv(path)
        assert len(back) == len(rows)
        for a, b in zip(sorted(rows, key=lambda r: (r.strategy, r.k)), back):
            assert a.sin_angle == b.sin_angle
            assert a.cos_angle == b.cos_angle
            assert a.rel_res_standard == b.rel_res_standard
            assert a.rel_res_refined == b.rel_res_refined
            assert (a.k, a.strategy, a.dim, a.rank_r) == (b.k, b.strategy, b.dim, b.rank_r)

    def test_row_count_matches_iterations(self, tmp_path):
        cfg = small_config(d=4, m=10)
        rows = harness.run_experiment(cfg)
        path = str(tmp_path / "c.csv")
        harness.write_trace_csv(rows, path)
        per_strategy = {}
        for r in harness.read_trace_csv(path):
            per_strategy.setdefault(r.strategy, 0)
            per_strategy[r.strategy] += 1
        # single-direction strategies step one dimension per iteration
        assert per_strategy["stand"] == 10 - 4 + 1
        assert sum(per_strategy.values()) == len(rows)

    def test_empty_rows_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            harness.write_trace_csv([], str(tmp_path / "e.csv"))


class TestEmitPlot:
    def test_single_strategy_svg(self, tmp_path):
        rows = harness.run_experiment(small_config(tags=("stand",)))
        path = str(tmp_path / "p.svg")
        harness.emit_plot(rows, path)
        content = open(path).read()
        assert content.lstrip().startswith("<?xml")
        assert "stand" in content

    def test_five_strategy_legend_labels(self, tmp_path):
        rows = harness.run_experiment(small_config(m=8))
        path = str(tmp_path / "five.svg")
        harness.emit_plot(rows, path, "sin_angle")
        content = open(path).read()
        for label in ("stand", "RitzV", "RitzR", "r-RitzR", "optimal"):
            assert label in content

    def test_halted_trace_with_nan_truncates(self, tmp_path):
        rows = [harness.TraceRow(k=k, strategy="stand", dim=k, sin_angle=0.5 / (k + 1),
                                 cos_angle=0.9, rel_res_standard=float("nan"),
                                 rel_res_refined=float("nan"), rank_r=1,
                                 halted=(k == 6)) for k in range(4, 7)]
        path = str(tmp_path / "halt.svg")
        harness.emit_plot(rows, path, "rel_res_standard")
        assert open(path).read().lstrip().startswith("<?xml")

    def test_unknown_quantity_rejected(self, tmp_path):
        rows = harness.run_experiment(small_config(tags=("stand",), m=6))
        with pytest.raises(ValueError):
            harness.emit_plot(rows, str(tmp_path / "x.svg"), "bogus")
