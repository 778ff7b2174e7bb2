import csv
import statistics
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from topagg import FullRanking, kendall_profile, parse_profile, stats
from topagg.cli import CSV_HEADER, main
from topagg.io import format_cost, serialize_profile, write_profile

from .conftest import random_profile


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSolve:
    @pytest.mark.parametrize(
        "args, ranking, cost",
        [
            (["--algo", "exact"], "1 2 3 4 5 6 7 8", "51/10 (5.1)"),
            (["--algo", "borda"], "6 4 1 3 5 2 7 8", "63/10 (6.3)"),
            (["--algo", "score-adjust", "--epsilon", "3"], "1 2 3 5 4 6 7 8", "11/2 (5.5)"),
            (["--algo", "footrule"], "4 1 2 3 5 6 7 8", "29/5 (5.8)"),
            (["--algo", "score-borda", "--u", "0.4"], "1 3 5 2 6 4 7 8", "29/5 (5.8)"),
            (["--algo", "score-ptas", "--epsilon", "3", "--u", "0.4"], "1 2 3 5 4 6 7 8", "11/2 (5.5)"),
        ],
    )
    def test_goldens(self, capsys, sample_path, args, ranking, cost):
        code, out, _ = run(capsys, "solve", "--input", str(sample_path), *args)
        assert code == 0
        assert out.splitlines() == [ranking, cost]

    def test_randomsort_is_seeded(self, capsys, sample_path):
        outs = {run(capsys, "solve", "--algo", "randomsort", "--seed", "5", "--input", str(sample_path))[1] for _ in range(3)}
        assert len(outs) == 1

    def test_missing_epsilon_is_usage_error(self, capsys, sample_path):
        code, _, err = run(capsys, "solve", "--algo", "score-adjust", "--input", str(sample_path))
        assert code == 1 and "epsilon" in err

    def test_unknown_algorithm_is_usage_error(self, capsys, sample_path):
        with pytest.raises(SystemExit) as info:
            main(["solve", "--algo", "magic", "--input", str(sample_path)])
        assert info.value.code == 1

    def test_capacity_is_data_error(self, capsys, sample_path):
        code, _, err = run(capsys, "solve", "--algo", "exact", "--cap", "4", "--input", str(sample_path))
        assert code == 2 and "cap" in err

    def test_parse_error_is_data_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.toplist"
        bad.write_text("candidates 3\n1: 1 1\n")
        code, _, err = run(capsys, "solve", "--algo", "borda", "--input", str(bad))
        assert code == 2 and "line 2" in err

    def test_missing_file_is_data_error(self, capsys, tmp_path):
        code, _, _ = run(capsys, "solve", "--algo", "borda", "--input", str(tmp_path / "nope"))
        assert code == 2


class TestEval:
    @pytest.mark.parametrize(
        "ranking, cost", [("1 2 3 4 5 6 7 8", "51/10 (5.1)"), ("4 1 5 2 6 3 7 8", "59/10 (5.9)")]
    )
    def test_goldens(self, capsys, sample_path, ranking, cost):
        code, out, _ = run(capsys, "eval", "--input", str(sample_path), "--ranking", ranking)
        assert code == 0
        assert out.splitlines()[0] == cost
        assert out.splitlines()[1].startswith("footrule ")

    def test_matches_library(self, capsys, tmp_path):
        rng = np.random.default_rng(12)
        for trial in range(20):
            p = random_profile(rng, int(rng.integers(1, 10)))
            path = tmp_path / f"p{trial}.toplist"
            write_profile(p, path)
            sigma = FullRanking(tuple(rng.permutation(p.n).tolist()))
            code, out, _ = run(capsys, "eval", "--input", str(path), "--ranking", " ".join(map(str, sigma.ids())))
            assert code == 0 and out.splitlines()[0] == format_cost(kendall_profile(sigma, p))

    @pytest.mark.parametrize("ranking", ["1 2 3", "1 1 2 3 4 5 6 7", "0 1 2 3 4 5 6 7"])
    def test_non_permutation(self, capsys, sample_path, ranking):
        code, _, _ = run(capsys, "eval", "--input", str(sample_path), "--ranking", ranking)
        assert code == 1


class TestStats:
    def test_sample_rows(self, capsys, sample_path):
        code, out, _ = run(capsys, "stats", "--input", str(sample_path))
        assert code == 0
        rows = out.splitlines()
        assert rows[0] == "candidate score avg_rank"
        assert rows[2] == "2 7/10 24/7"
        assert rows[8] == "8 0/10 -"
        assert rows[1] == "1 10/10 21/10"

    def test_single_full_ranking(self, capsys, tmp_path):
        path = tmp_path / "one.toplist"
        path.write_text("candidates 4\n5: 3 1 4 2\n")
        _, out, _ = run(capsys, "stats", "--input", str(path))
        assert out.splitlines()[1:] == ["1 5/5 2/1", "2 5/5 4/1", "3 5/5 1/1", "4 5/5 3/1"]

    def test_restricted_profile(self, capsys, tmp_path, sample):
        from topagg import restrict

        sub, _ = restrict(sample, [0, 1, 2, 4])
        path = tmp_path / "sub.toplist"
        write_profile(sub, path)
        _, out, _ = run(capsys, "stats", "--input", str(path))
        # worked out from [3,5,1], [3,1,5], [1,5,2], [1,2,3] with weights 1..4
        assert out.splitlines()[1:] == ["1 10/10 7/5", "2 7/10 17/7", "3 7/10 15/7", "4 6/10 7/3"]
        before = sub.pair_weights
        sw = stats(sub).score_weight
        assert all(before[i, j] >= sw[i] - sw[j] for i in range(4) for j in range(4) if i != j)


class TestGen:
    def test_uniform(self, capsys):
        code, out, _ = run(capsys, "gen", "--model", "uniform", "--n", "8", "--k", "4", "--lists", "10", "--seed", "1")
        assert code == 0
        p = parse_profile(out)
        assert p.n == 8 and len(p.entries) == 10

    def test_planted_noiseless(self, capsys):
        _, out, _ = run(
            capsys, "gen", "--model", "planted", "--phi", "0", "--n", "6", "--k", "3", "--lists", "5", "--seed", "2"
        )
        for _, t in parse_profile(out).entries:
            assert list(t.ranked) == sorted(t.ranked)

    def test_same_flags_same_bytes(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            path = tmp_path / name
            assert main(["gen", "--n", "9", "--k", "2-5", "--lists", "12", "--weight-max", "4", "--seed", "3", "--out", str(path)]) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        assert serialize_profile(parse_profile(outs[0].decode())).encode() == outs[0]

    @pytest.mark.parametrize(
        "argv",
        [
            ["--n", "3", "--k", "4", "--lists", "1"],
            ["--n", "3", "--k", "2", "--lists", "0"],
            ["--model", "planted", "--n", "3", "--k", "2", "--lists", "1"],
        ],
    )
    def test_bad_arguments(self, capsys, argv):
        code, _, _ = run(capsys, "gen", *argv)
        assert code == 1

    def test_bad_k_syntax(self):
        with pytest.raises(SystemExit) as info:
            main(["gen", "--n", "3", "--k", "x", "--lists", "1"])
        assert info.value.code == 1


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER
    return [dict(zip(CSV_HEADER, r)) for r in rows[1:]]


class TestBench:
    def test_footrule_within_two(self, tmp_path, capsys):
        out = tmp_path / "b.csv"
        code, summary, _ = run(
            capsys, "bench", "--algos", "footrule", "--n", "7", "--k", "3", "--lists", "8", "--trials", "50", "--out", str(out)
        )
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 50
        ratios = [float(r["ratio"]) for r in rows]
        assert 1.0 <= min(ratios) and max(ratios) <= 2.0
        assert summary.splitlines()[1].startswith("footrule 50 ")

    def test_adjust_within_one_plus_eps(self, tmp_path, capsys):
        out = tmp_path / "b.csv"
        code, _, _ = run(
            capsys, "bench", "--algos", "score-adjust", "--epsilon", "1", "--n", "7", "--k", "2", "--trials", "50", "--out", str(out)
        )
        assert code == 0
        rows = read_csv(out)
        assert all(r["epsilon"] == "1/1" for r in rows)
        assert max(Fraction(r["cost"]) / Fraction(r["opt_cost"]) for r in rows if Fraction(r["opt_cost"]) > 0) <= 2

    def test_randomsort_expectation(self, tmp_path, capsys):
        out = tmp_path / "b.csv"
        code, _, _ = run(
            capsys,
            "bench", "--algos", "randomsort", "--n", "6", "--k", "3",
            "--trials", "20", "--seeds-per-trial", "500", "--jobs", "2", "--out", str(out),
        )
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 20 * 500
        by_instance = {}
        for r in rows:
            if r["ratio"] not in ("", "inf"):
                by_instance.setdefault(r["instance"], []).append(float(r["ratio"]))
        for vals in by_instance.values():
            se = statistics.stdev(vals) / len(vals) ** 0.5
            assert statistics.fmean(vals) <= 2.0 + 3 * se

    def test_parallel_rows_are_ordered_and_identical(self, tmp_path):
        base = ["bench", "--algos", "borda,randomsort", "--n", "5", "--k", "2", "--trials", "6", "--seeds-per-trial", "3"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(base + ["--out", str(a)]) == 0
        assert main(base + ["--jobs", "3", "--out", str(b)]) == 0
        strip = lambda path: [r[:-1] for r in csv.reader(open(path))]  # noqa: E731
        assert strip(a) == strip(b)

    def test_no_oracle_leaves_ratio_empty(self, tmp_path):
        out = tmp_path / "b.csv"
        assert main(["bench", "--algos", "borda", "--n", "6", "--k", "2", "--trials", "2", "--oracle-cap", "4", "--out", str(out)]) == 0
        assert all(r["ratio"] == "" and r["opt_cost"] == "" for r in read_csv(out))

    def test_conflicting_caps(self, capsys):
        code, _, err = run(capsys, "bench", "--algos", "borda", "--n", "5", "--k", "2", "--oracle-cap", "10", "--cap", "8")
        assert code == 1 and "cap" in err

    def test_unknown_algorithm(self, capsys):
        code, _, _ = run(capsys, "bench", "--algos", "borda,magic", "--n", "5", "--k", "2")
        assert code == 1


def test_module_entry_point(sample_path):
    proc = subprocess.run(
        [sys.executable, "-m", "topagg", "solve", "--algo", "exact", "--input", str(sample_path)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["1 2 3 4 5 6 7 8", "51/10 (5.1)"]


def test_no_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1
