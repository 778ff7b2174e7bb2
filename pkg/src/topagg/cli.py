"""Command-line entry point: ``topagg {solve,eval,stats,gen,bench}``.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or malformed
input, capacity exceeded).
"""

from __future__ import annotations

import argparse
import csv
import math
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

from .algorithms import (
    PartitionParams,
    borda_plus,
    footrule_plus,
    random_sort,
    score_then_adjust,
    score_then_borda,
    score_then_ptas,
)
from .core import CapacityError, FullRanking, VotingProfile, footrule_profile, kendall_profile, stats
from .exact import SUBSET_DP_CAP, optimal_subset_dp
from .io import (
    GeneratorSpec,
    ProfileParseError,
    format_cost,
    format_decimal,
    format_ranking,
    generate,
    parse_ranking,
    read_profile,
    serialize_profile,
)

EXIT_USAGE = 1
EXIT_DATA = 2

ALGORITHMS = ("footrule", "randomsort", "borda", "score-borda", "score-ptas", "score-adjust", "exact")
RANDOMIZED = ("randomsort", "score-borda", "score-ptas")
NEEDS_EPSILON = ("score-ptas", "score-adjust")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _k_arg(text: str) -> int | tuple[int, int]:
    lo, sep, hi = text.partition("-")
    try:
        return (int(lo), int(hi)) if sep else int(lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected K or LOW-HIGH, got {text!r}") from None


def run_algorithm(
    name: str,
    p: VotingProfile,
    *,
    seed: int = 0,
    epsilon: Fraction | None = None,
    eta: Fraction = Fraction(1),
    u: float | None = None,
    cap: int = SUBSET_DP_CAP,
) -> FullRanking:
    if name in NEEDS_EPSILON and epsilon is None:
        raise UsageError(f"--epsilon is required for {name}")
    if name == "footrule":
        return footrule_plus(p)
    if name == "randomsort":
        return random_sort(p, seed)
    if name == "borda":
        return borda_plus(p)
    if name == "score-borda":
        return score_then_borda(p, PartitionParams(eta=eta, u=u, seed=seed))
    if name == "score-ptas":
        return score_then_ptas(p, epsilon, seed, u=u, cap=cap)
    if name == "score-adjust":
        return score_then_adjust(p, epsilon, cap=cap)
    if name == "exact":
        return optimal_subset_dp(p, cap=cap)[0]
    raise UsageError(f"unknown algorithm {name!r}")


def cmd_solve(args) -> int:
    p = read_profile(args.input)
    sigma = run_algorithm(
        args.algo, p, seed=args.seed, epsilon=args.epsilon, eta=args.eta, u=args.u, cap=args.cap
    )
    print(format_ranking(sigma))
    print(format_cost(kendall_profile(sigma, p)))
    return 0


def cmd_eval(args) -> int:
    p = read_profile(args.input)
    try:
        sigma = parse_ranking(args.ranking, p.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(format_cost(kendall_profile(sigma, p)))
    print("footrule " + format_cost(footrule_profile(sigma, p)))
    return 0


def cmd_stats(args) -> int:
    p = read_profile(args.input)
    st = stats(p)
    print("candidate score avg_rank")
    for i in range(p.n):
        avg = st.avg_rank(i)
        avg_s = "-" if avg is None else f"{avg.numerator}/{avg.denominator}"
        print(f"{i + 1} {st.score_weight[i]}/{st.total_weight} {avg_s}")
    return 0


def cmd_gen(args) -> int:
    try:
        spec = GeneratorSpec(
            model=args.model,
            n=args.n,
            k=args.k,
            list_count=args.lists,
            weight_max=args.weight_max,
            phi=args.phi,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = serialize_profile(generate(spec))
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


# -- bench -------------------------------------------------------------------


@dataclass
class BenchRecord:
    instance_id: int
    algorithm: str
    seed: int | None
    epsilon: Fraction | None
    eta: Fraction | None
    cost: Fraction
    opt_cost: Fraction | None
    wall_time_us: int

    @property
    def ratio(self) -> Fraction | float | None:
        if self.opt_cost is None:
            return None
        if self.opt_cost == 0:
            return Fraction(1) if self.cost == 0 else math.inf
        return self.cost / self.opt_cost

    def row(self) -> list[str]:
        ratio = self.ratio
        if ratio is None:
            ratio_s = ""
        elif ratio == math.inf:
            ratio_s = "inf"
        else:
            ratio_s = format_decimal(ratio)

        def frac(x):
            return "" if x is None else f"{x.numerator}/{x.denominator}"

        return [
            str(self.instance_id),
            self.algorithm,
            "" if self.seed is None else str(self.seed),
            frac(self.epsilon),
            frac(self.eta),
            frac(self.cost),
            frac(self.opt_cost),
            ratio_s,
            str(self.wall_time_us),
        ]


CSV_HEADER = ["instance", "algorithm", "seed", "epsilon", "eta", "cost", "opt_cost", "ratio", "wall_time_us"]


@dataclass(frozen=True)
class _BenchConfig:
    algos: tuple[str, ...]
    spec: GeneratorSpec
    seeds_per_trial: int
    epsilon: Fraction | None
    eta: Fraction
    oracle_cap: int
    cap: int


def _bench_trial(cfg: _BenchConfig, trial: int) -> list[BenchRecord]:
    spec = cfg.spec
    p = generate(replace(spec, seed=spec.seed + trial))
    opt = optimal_subset_dp(p, cap=cfg.cap)[1] if p.n <= cfg.oracle_cap else None
    records = []
    for algo in cfg.algos:
        seeds = range(cfg.seeds_per_trial) if algo in RANDOMIZED else [None]
        eps = cfg.epsilon if algo in NEEDS_EPSILON else None
        eta = cfg.eta if algo == "score-borda" else (cfg.epsilon / 3 if algo == "score-ptas" else None)
        for seed in seeds:
            start = time.perf_counter()
            sigma = run_algorithm(algo, p, seed=seed or 0, epsilon=cfg.epsilon, eta=cfg.eta, cap=cfg.cap)
            elapsed = int((time.perf_counter() - start) * 1e6)
            records.append(
                BenchRecord(trial, algo, seed, eps, eta, kendall_profile(sigma, p), opt, elapsed)
            )
    return records


def summarize(records: list[BenchRecord], out) -> None:
    """Per algorithm: max and mean ratio; randomized ones also the worst
    per-instance mean ratio with its standard error."""
    by_algo: dict[str, list[BenchRecord]] = {}
    for r in records:
        by_algo.setdefault(r.algorithm, []).append(r)
    print("algorithm records max_ratio mean_ratio worst_instance_mean stderr", file=out)
    for algo, recs in by_algo.items():
        ratios = [float(r.ratio) for r in recs if r.ratio is not None]
        if not ratios:
            print(f"{algo} {len(recs)} - - - -", file=out)
            continue
        line = f"{algo} {len(recs)} {max(ratios):.6f} {statistics.fmean(ratios):.6f}"
        if algo in RANDOMIZED:
            per_instance: dict[int, list[float]] = {}
            for r in recs:
                if r.ratio is not None:
                    per_instance.setdefault(r.instance_id, []).append(float(r.ratio))
            worst, worst_se = -1.0, 0.0
            for vals in per_instance.values():
                mean = statistics.fmean(vals)
                se = statistics.stdev(vals) / math.sqrt(len(vals)) if len(vals) > 1 else 0.0
                if mean > worst:
                    worst, worst_se = mean, se
            line += f" {worst:.6f} {worst_se:.6f}"
        else:
            line += " - -"
        print(line, file=out)


def run_bench(cfg: _BenchConfig, trials: int, jobs: int = 1) -> list[BenchRecord]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_bench_trial, [cfg] * trials, range(trials)))
    else:
        chunks = [_bench_trial(cfg, t) for t in range(trials)]
    return [r for chunk in chunks for r in chunk]


def cmd_bench(args) -> int:
    algos = tuple(a.strip() for a in args.algos.split(",") if a.strip())
    for a in algos:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
        if a in NEEDS_EPSILON and args.epsilon is None:
            raise UsageError(f"--epsilon is required for {a}")
    if args.oracle_cap > args.cap:
        raise UsageError(f"--oracle-cap {args.oracle_cap} exceeds the subset DP cap {args.cap}")
    if args.cap > SUBSET_DP_CAP:
        raise UsageError(f"--cap may not exceed {SUBSET_DP_CAP}")
    try:
        spec = GeneratorSpec(
            model=args.model,
            n=args.n,
            k=args.k,
            list_count=args.lists,
            weight_max=args.weight_max,
            phi=args.phi,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = _BenchConfig(algos, spec, args.seeds_per_trial, args.epsilon, args.eta, args.oracle_cap, args.cap)
    records = run_bench(cfg, args.trials, args.jobs)

    to_stdout = args.out in (None, "-")
    fh = sys.stdout if to_stdout else open(args.out, "w", encoding="utf-8", newline="")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(r.row() for r in records)
    finally:
        if not to_stdout:
            fh.close()
    summarize(records, sys.stderr if to_stdout else sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topagg", description="Top-list aggregation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="aggregate a profile file")
    s.add_argument("--algo", required=True, choices=ALGORITHMS)
    s.add_argument("--input", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--epsilon", type=_fraction)
    s.add_argument("--eta", type=_fraction, default=Fraction(1))
    s.add_argument("--u", type=float, help="explicit partition shift in [0, 1)")
    s.add_argument("--cap", type=int, default=SUBSET_DP_CAP, help="subset DP size cap")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="cost of a given ranking")
    e.add_argument("--input", required=True)
    e.add_argument("--ranking", required=True, help='1-based ids, e.g. "1 2 3"')
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("stats", help="scores and average ranks")
    t.add_argument("--input", required=True)
    t.set_defaults(func=cmd_stats)

    g = sub.add_parser("gen", help="generate a random profile")
    g.add_argument("--model", choices=("uniform", "planted"), default="uniform")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=_k_arg, required=True)
    g.add_argument("--lists", type=int, required=True)
    g.add_argument("--phi", type=float)
    g.add_argument("--weight-max", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="approximation ratios against the exact optimum")
    b.add_argument("--algos", required=True, help="comma-separated algorithm names")
    b.add_argument("--model", choices=("uniform", "planted"), default="uniform")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=_k_arg, required=True)
    b.add_argument("--lists", type=int, default=8)
    b.add_argument("--phi", type=float)
    b.add_argument("--weight-max", type=int, default=1)
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--seeds-per-trial", type=int, default=1)
    b.add_argument("--epsilon", type=_fraction)
    b.add_argument("--eta", type=_fraction, default=Fraction(1))
    b.add_argument("--seed", type=int, default=0, help="seed of the first instance")
    b.add_argument("--oracle-cap", type=int, default=12)
    b.add_argument("--cap", type=int, default=SUBSET_DP_CAP)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"topagg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ProfileParseError, CapacityError, OSError) as exc:
        print(f"topagg: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"topagg: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
