"""Command-line harness: seeded experiments that stream JSON lines.

Every trial gets its own child of ``SeedSequence(seed)`` (spawn key = trial
index), so a run is reproducible from the config alone and does not depend
on the worker count. Output is one JSON object per trial followed by one
aggregate object; only the aggregate carries ``wall_time``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .determinantal import dimension_report, gb_report
from .errors import GenerationError, LadderMatError, ResourceError
from .io import load_ladder, load_matrix, matrix_to_json
from .ladder import Ladder, ladder_rank, max_square
from .polyring import Budget
from .recovery import (
    DEFAULT_ENTRY_BOUND,
    DEFAULT_MAX_CELLS,
    apply,
    build_system,
    random_ladder_low_rank,
    random_permutation,
    recover,
    same_multiset,
    system_check_point,
    system_summary,
    trivial_class_matrices,
    trivial_classes,
    verify_uniqueness,
)

MODES = ("gen", "permute", "recover", "verify-thm1", "verify-thm3", "gb-check", "dim-check", "system-check")
# modes whose instances come from the random generator
RANDOM_MODES = {"gen", "permute", "recover", "verify-thm1", "verify-thm3", "system-check"}


class UsageError(LadderMatError, ValueError):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    m: int = 2
    n: int = 2
    r: Optional[int] = 1
    ladder: str = "trivial"
    seed: int = 0
    trials: int = 1
    bound: int = DEFAULT_ENTRY_BOUND
    budget: Optional[int] = None
    workers: int = 1
    max_cells: int = DEFAULT_MAX_CELLS
    matrix: Optional[str] = None

    def resolve_ladder(self) -> Ladder:
        if self.mode == "verify-thm1" or self.ladder == "trivial":
            return Ladder.trivial(self.m, self.n)
        return load_ladder(self.ladder)

    def validate(self) -> Ladder:
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.trials < 1:
            raise UsageError("--trials must be at least 1")
        if self.m < 1 or self.n < 1:
            raise UsageError("--m and --n must be positive")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        L = self.resolve_ladder()
        rl = max_square(L)
        if self.r is None:
            if self.mode in RANDOM_MODES:
                raise UsageError(f"--r is required for {self.mode}")
        elif not 1 <= self.r < rl:
            raise UsageError(f"need 1 <= r < r(L) = {rl}, got r={self.r}")
        return L


@dataclass
class RunReport:
    config: dict
    trials: list = field(default_factory=list)
    verdict: bool = True
    errors: int = 0
    wall_time: float = 0.0

    def aggregate(self) -> dict:
        return {"aggregate": True, "config": self.config, "num_trials": len(self.trials),
                "verdict": self.verdict, "errors": self.errors, "wall_time": self.wall_time}

    def lines(self) -> list[str]:
        return [json.dumps(t, sort_keys=True) for t in self.trials] + [json.dumps(self.aggregate(), sort_keys=True)]

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict and not self.errors else 1


def _instance(cfg: ExperimentConfig, L: Ladder, seed):
    if cfg.matrix:
        X = load_matrix(cfg.matrix)
        got = ladder_rank(X, L)
        if got != cfg.r:
            raise UsageError(f"input matrix has ladder-rank {got}, expected {cfg.r}")
        return X
    return random_ladder_low_rank(L, cfg.r, seed, bound=cfg.bound)


def _budget(cfg: ExperimentConfig) -> Budget | None:
    return Budget(cfg.budget) if cfg.budget is not None else None


def _trial(cfg: ExperimentConfig, L: Ladder, k: int) -> dict:
    x_seed, p_seed = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)[k].spawn(2)
    X = _instance(cfg, L, x_seed)
    out = {"trial": k, "seed": cfg.seed, "X": matrix_to_json(X)}
    if cfg.mode == "gen":
        out["ladder_rank"] = ladder_rank(X, L)
        out["verdict"] = out["ladder_rank"] == cfg.r
    elif cfg.mode == "permute":
        pi = random_permutation(L, p_seed)
        Y = apply(pi, X)
        out.update(permutation=pi.to_list(), Y=matrix_to_json(Y), verdict=same_multiset(X, Y, L))
    elif cfg.mode == "recover":
        pi = random_permutation(L, p_seed)
        Y = apply(pi, X)
        found = recover(Y, L, cfg.r, max_cells=cfg.max_cells)
        classes = trivial_classes(X, L, cfg.r)
        cells = L.sorted_cells()
        tags = Counter(classes.tag(tuple(Z[c] for c in cells)) for Z in found)
        out.update(Y=matrix_to_json(Y), candidates=len(found), classes=dict(sorted(tags.items())),
                   verdict=X in found and not tags.get("none"))
    elif cfg.mode in ("verify-thm1", "verify-thm3"):
        rep = verify_uniqueness(X, L, cfg.r, max_cells=cfg.max_cells)
        out.update(preserving_count=rep.preserving_count, classes=rep.classes, unique=rep.unique,
                   failures=rep.failures, verdict=rep.unique)
    elif cfg.mode == "system-check":
        system = build_system(X, L, cfg.r, p_seed)
        summary = system_summary(system, budget=_budget(cfg))
        class_ok = all(system_check_point(system, Z) for Z in trivial_class_matrices(X, L, cfg.r))
        out.update(summary, class_points_pass=class_ok, verdict=summary["zero_dimensional"] and class_ok)
    return out


def _safe_trial(args) -> dict:
    cfg, L, k = args
    try:
        return _trial(cfg, L, k)
    except (ResourceError, GenerationError) as exc:
        return {"trial": k, "seed": cfg.seed, "error": f"{type(exc).__name__}: {exc}", "verdict": False}


def _deterministic_rows(cfg: ExperimentConfig, L: Ladder) -> list[dict]:
    rs = [cfg.r] if cfg.r is not None else list(range(1, max_square(L)))
    rows = []
    for k, r in enumerate(rs):
        try:
            if cfg.mode == "gb-check":
                row = gb_report(L, r, _budget(cfg))
                row["verdict"] = row["is_groebner"]
            else:
                row = dimension_report(L, r)
                row["verdict"] = row["match"]
        except ResourceError as exc:
            row = {"r": r, "error": f"ResourceError: {exc}", "verdict": False}
        rows.append({"trial": k, **row})
    return rows


def run(cfg: ExperimentConfig) -> RunReport:
    """Execute an experiment; raises :class:`UsageError` on a malformed config."""
    start = time.perf_counter()
    L = cfg.validate()
    report = RunReport(asdict(cfg))
    if cfg.mode in ("gb-check", "dim-check"):
        rows = _deterministic_rows(cfg, L)
    else:
        jobs = [(cfg, L, k) for k in range(cfg.trials)]
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
                rows = list(ex.map(_safe_trial, jobs))
        else:
            rows = [_safe_trial(j) for j in jobs]
    report.trials = rows
    report.errors = sum("error" in t for t in rows)
    report.verdict = all(t["verdict"] for t in rows)
    report.wall_time = round(time.perf_counter() - start, 3)
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laddermat", description="Ladder matrix recovery experiments.")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--r", type=int, default=None, help="rank bound (gb-check/dim-check sweep all r if omitted)")
    parser.add_argument("--ladder", default="trivial", help="ladder JSON file or 'trivial'")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=1)
    parser.add_argument("--bound", type=int, default=DEFAULT_ENTRY_BOUND, help="entry bound for random factors")
    parser.add_argument("--budget", type=int, default=None, help="term-operation cap for Groebner work")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS, help="exhaustive enumeration cap")
    parser.add_argument("--matrix", default=None, help="use this matrix (JSON or CSV) instead of sampling")
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = vars(args).pop("out")
    cfg = ExperimentConfig(**{k: v for k, v in vars(args).items()})
    try:
        report = run(cfg)
    except (UsageError, LadderMatError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"laddermat: error: {exc}", file=sys.stderr)
        return 2
    text = "\n".join(report.lines()) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
