import numpy as np
import pytest

from toxdetect.errors import ConfigError
from toxdetect.tuning import grid_search, make_folds


class TestMakeFolds:
    def test_holdout(self):
        ((train, test),) = make_folds(10, folds=1, seed=0)
        assert len(test) == 2 and len(train) == 8
        assert set(train.tolist()) | set(test.tolist()) == set(range(10))
        assert set(train.tolist()) & set(test.tolist()) == set()

    def test_cross_validation_partitions(self):
        folds = make_folds(11, folds=3, seed=1)
        assert len(folds) == 3
        all_test = np.concatenate([test for _, test in folds])
        assert sorted(all_test.tolist()) == list(range(11))
        for train, test in folds:
            assert set(train.tolist()) == set(range(11)) - set(test.tolist())

    def test_deterministic(self):
        a = make_folds(20, folds=4, seed=9)
        b = make_folds(20, folds=4, seed=9)
        for (ta, sa), (tb, sb) in zip(a, b):
            assert (ta == tb).all() and (sa == sb).all()

    def test_errors(self):
        with pytest.raises(ConfigError):
            make_folds(5, folds=0)
        with pytest.raises(ConfigError):
            make_folds(5, folds=6)
        with pytest.raises(ConfigError):
            make_folds(1, folds=1)  # nothing to hold out


class TestGridSearch:
    def test_singleton(self):
        result = grid_search({"alpha": [1.0]}, lambda c, tr, te: 0.9, n_examples=10, folds=2)
        (row,) = result.rows
        assert row.config_id == 1
        assert row.params == {"alpha": 1.0}
        assert row.metric == 0.9
        assert row.rank == 1

    def test_cartesian_product_in_insertion_order(self):
        seen = []

        def trainer(config, train_idx, test_idx):
            seen.append(dict(config))
            return 0.0

        result = grid_search({"a": [1, 2], "b": ["x", "y"]}, trainer, n_examples=10, folds=1)
        assert len(result.rows) == 4
        assert result.param_names == ("a", "b")
        configs = [row.params for row in result.rows]
        assert configs == [
            {"a": 1, "b": "x"},
            {"a": 1, "b": "y"},
            {"a": 2, "b": "x"},
            {"a": 2, "b": "y"},
        ]

    def test_metric_is_mean_over_folds(self):
        def trainer(config, train_idx, test_idx):
            return float(len(test_idx))

        result = grid_search({"a": [0]}, trainer, n_examples=10, folds=3, seed=0)
        sizes = [len(test) for _, test in make_folds(10, folds=3, seed=0)]
        assert result.rows[0].metric == pytest.approx(sum(sizes) / 3)

    def test_trainer_sees_disjoint_partitions(self):
        def trainer(config, train_idx, test_idx):
            assert set(train_idx.tolist()) & set(test_idx.tolist()) == set()
            assert len(train_idx) + len(test_idx) == 12
            return 0.5

        grid_search({"a": [0]}, trainer, n_examples=12, folds=3)

    def test_ranking_best_first_ties_by_enumeration(self):
        metrics = {1: 0.5, 2: 0.9, 3: 0.9, 4: 0.1}
        calls = iter(metrics.items())

        def trainer(config, train_idx, test_idx):
            return metrics[config["a"]]

        result = grid_search({"a": [1, 2, 3, 4]}, trainer, n_examples=10, folds=1)
        by_rank = sorted(result.rows, key=lambda r: r.rank)
        assert [r.params["a"] for r in by_rank] == [2, 3, 1, 4]
        assert result.best().params["a"] == 2

    def test_csv_bytes(self, tmp_path):
        def trainer(config, train_idx, test_idx):
            return 0.25 * config["a"] + (0.01 if config["b"] == "y" else 0.0)

        result = grid_search({"a": [2, 1], "b": ["x", "y"]}, trainer, n_examples=10, folds=1)
        path = tmp_path / "grid.csv"
        result.write_csv(path)
        want = (
            "config_id,a,b,metric,rank\n"
            "1,2,x,0.500000,2\n"
            "2,2,y,0.510000,1\n"
            "3,1,x,0.250000,4\n"
            "4,1,y,0.260000,3\n"
        )
        assert path.read_bytes() == want.encode()

    def test_csv_deterministic(self, tmp_path):
        def run(path):
            result = grid_search(
                {"a": [1, 2]}, lambda c, tr, te: c["a"] / 7, n_examples=9, folds=3, seed=5
            )
            result.write_csv(path)
            return path.read_bytes()

        assert run(tmp_path / "a.csv") == run(tmp_path / "b.csv")

    def test_errors(self):
        with pytest.raises(ConfigError):
            grid_search({}, lambda c, tr, te: 0.0, n_examples=10)
        with pytest.raises(ConfigError):
            grid_search({"a": []}, lambda c, tr, te: 0.0, n_examples=10)
