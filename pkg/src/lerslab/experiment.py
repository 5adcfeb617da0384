"""Sweeps, the sample CSV format, and the invariant-checking verification run."""

from __future__ import annotations

import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

from lerslab.lattice import build_complex, equatorial_loop, shifted_surface
from lerslab.lers import (
    BrokenTreeError,
    extract_surface_linear,
    sample_lers,
    size_bounds,
    two_tree_faces,
)
from lerslab.homology import verify_2tree
from lerslab.rng import RngStream, child_seed
from lerslab.stats import SizeTable
from lerslab.ust import StepCapExceeded

CSV_HEADER = "n,replicate,seed,size,steps,status"
STATUS_OK = "ok"
STATUS_ABORTED = "aborted"


@dataclass(frozen=True)
class SweepConfig:
    n_min: int
    n_max: int
    reps: int
    seed: int
    n_step: int = 1
    parallel: int = 1
    step_cap: int | None = None

    def __post_init__(self):
        if self.n_min < 1:
            raise ValueError("n_min must be >= 1")
        if self.n_max < self.n_min:
            raise ValueError("n_max must be >= n_min")
        if self.n_step < 1:
            raise ValueError("n_step must be >= 1")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.parallel < 1:
            raise ValueError("parallel must be >= 1")

    @property
    def ns(self) -> list[int]:
        return list(range(self.n_min, self.n_max + 1, self.n_step))


@dataclass(frozen=True, order=True)
class SampleRecord:
    n: int
    replicate: int
    seed: int
    size: int | None
    steps: int | None
    status: str = STATUS_OK

    def to_csv(self) -> str:
        size = "" if self.size is None else str(self.size)
        steps = "" if self.steps is None else str(self.steps)
        return f"{self.n},{self.replicate},{self.seed},{size},{steps},{self.status}"


def run_one(task: tuple[int, int, int, int | None]) -> SampleRecord:
    n, rep, master, cap = task
    seed = child_seed(master, n, rep)
    try:
        s = sample_lers(n, RngStream(seed), step_cap=cap)
    except StepCapExceeded:
        return SampleRecord(n, rep, seed, None, None, STATUS_ABORTED)
    return SampleRecord(n, rep, seed, s.size, s.steps)


def run_sweep(config: SweepConfig) -> list[SampleRecord]:
    """All samples of a sweep, sorted by (n, replicate) whatever the worker count."""
    # largest n first so the long samples do not trail at the end
    tasks = [(n, r, config.seed, config.step_cap) for n in reversed(config.ns) for r in range(config.reps)]
    if config.parallel == 1:
        records = [run_one(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (8 * config.parallel))
        with ProcessPoolExecutor(max_workers=config.parallel) as pool:
            records = list(pool.map(run_one, tasks, chunksize=chunk))
    return sorted(records)


def write_csv(records: Iterable[SampleRecord], out: TextIO) -> None:
    out.write(CSV_HEADER + "\n")
    for rec in records:
        out.write(rec.to_csv() + "\n")


def records_to_csv(records: Iterable[SampleRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


class CsvFormatError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


def parse_csv(text: str, source: str = "<csv>") -> list[SampleRecord]:
    """Parse sample rows, collecting every malformed line before failing."""
    lines = text.splitlines()
    if not lines:
        raise CsvFormatError([f"{source}: empty file"])
    if lines[0].strip() != CSV_HEADER:
        raise CsvFormatError([f"{source}:1: expected header {CSV_HEADER!r}"])
    records, problems = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 6:
            problems.append(f"{source}:{lineno}: expected 6 fields, got {len(parts)}")
            continue
        try:
            n, rep, seed = (int(p) for p in parts[:3])
            status = parts[5].strip()
            if status == STATUS_OK:
                size, steps = int(parts[3]), int(parts[4])
            elif status == STATUS_ABORTED:
                size = int(parts[3]) if parts[3] else None
                steps = int(parts[4]) if parts[4] else None
            else:
                raise ValueError(f"unknown status {status!r}")
        except ValueError as exc:
            problems.append(f"{source}:{lineno}: {exc}")
            continue
        if n < 1 or rep < 0 or seed < 0:
            problems.append(f"{source}:{lineno}: negative or zero field")
            continue
        if status == STATUS_OK:
            lo, hi = size_bounds(n)
            if not lo <= size <= hi:
                problems.append(f"{source}:{lineno}: size {size} outside [{lo}, {hi}] for n={n}")
                continue
        records.append(SampleRecord(n, rep, seed, size, steps, status))
    if problems:
        raise CsvFormatError(problems)
    if not records:
        raise CsvFormatError([f"{source}: no sample rows"])
    return records


def read_csv(path: str | Path) -> list[SampleRecord]:
    return parse_csv(Path(path).read_text(), str(path))


def size_table(records: Iterable[SampleRecord]) -> SizeTable:
    return SizeTable.from_records((r.n, r.size) for r in records if r.status == STATUS_OK)


# -- verification -----------------------------------------------------------------


@dataclass
class VerifyReport:
    n: int
    reps: int
    violations: Counter = field(default_factory=Counter)
    sizes: Counter = field(default_factory=Counter)
    oracle_lines: list[str] = field(default_factory=list)
    oracle_ok: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations and self.oracle_ok

    def lines(self) -> list[str]:
        out = [f"verify n={self.n} reps={self.reps}"]
        if self.violations:
            out += [f"  FAIL {k}: {v} sample(s)" for k, v in sorted(self.violations.items())]
        else:
            out.append("  invariants: all hold")
        out += ["  " + line for line in self.oracle_lines]
        out.append("PASS" if self.ok else "FAIL")
        return out


def check_sample(sample, *, independence: bool = True) -> list[str]:
    """Names of the invariants a sample violates (empty when all hold)."""
    n = sample.n
    cx = build_complex(n)
    loop = equatorial_loop(n)
    bad = []
    lo, hi = size_bounds(n)
    if not lo <= sample.size <= hi:
        bad.append("size-bounds")
    if cx.boundary_2(sample.surface) != loop:
        bad.append("boundary")
    faces = two_tree_faces(sample.tree, cx)
    if not verify_2tree(faces, cx):
        bad.append("2-tree")
    if (sample.surface.mask & ~faces.mask).any():
        bad.append("disjointness")
    try:
        if extract_surface_linear(faces, loop, cx) != sample.surface:
            bad.append("linear-solve")
    except BrokenTreeError:
        bad.append("linear-solve")
    if independence:
        other = sample_lers(n, RngStream(sample.seed), initial=shifted_surface(n))
        if other.surface != sample.surface:
            bad.append("independence")
    return bad


def _oracle_compare(report: VerifyReport, alpha: float, cap: int) -> None:
    from scipy import stats as sps

    from lerslab.oracle import EnumerationCapExceeded, exact_mn_distribution, total_variation

    try:
        exact = exact_mn_distribution(report.n, cap=cap)
    except EnumerationCapExceeded as exc:
        report.oracle_lines.append(f"oracle: skipped ({exc})")
        return
    total = sum(report.sizes.values())
    probs = exact.probabilities
    tv = total_variation(report.sizes, exact)
    report.oracle_lines.append(f"oracle: {exact.tree_count} trees, TV distance {tv:.5f}")
    unexpected = set(report.sizes) - set(probs)
    if unexpected:
        report.oracle_ok = False
        report.oracle_lines.append(f"oracle: FAIL sizes {sorted(unexpected)} have probability 0")
        return
    if report.n == 1:
        k = report.sizes.get(1, 0)
        p = sps.binomtest(k, total, float(probs[1])).pvalue
        ok = p >= alpha
        report.oracle_lines.append(f"oracle: binomial test P(M=1)=5/6, observed {k}/{total}, p={p:.4f}")
    else:
        # pool sparse tail bins so every expected count is at least 5
        obs, exp = [], []
        acc_o = acc_e = 0.0
        for size in exact.support():
            acc_o += report.sizes.get(size, 0)
            acc_e += total * float(probs[size])
            if acc_e >= 5:
                obs.append(acc_o)
                exp.append(acc_e)
                acc_o = acc_e = 0.0
        if acc_e and exp:
            obs[-1] += acc_o
            exp[-1] += acc_e
        if len(exp) < 2:
            report.oracle_lines.append("oracle: too few samples for a chi-square test")
            return
        p = sps.chisquare(obs, exp).pvalue
        ok = p >= alpha
        report.oracle_lines.append(f"oracle: chi-square over {len(exp)} bins, p={p:.4f}")
    if not ok:
        report.oracle_ok = False
        report.oracle_lines.append(f"oracle: FAIL at alpha={alpha}")


def run_verify(
    n: int,
    reps: int,
    seed: int = 0,
    *,
    fault: int = -1,
    alpha: float = 0.01,
    oracle_cap: int | None = None,
    independence: bool = True,
) -> VerifyReport:
    """Sample ``reps`` surfaces with full invariant checks; compare to the oracle for n <= 2."""
    from lerslab.oracle import DEFAULT_CAP

    report = VerifyReport(n=n, reps=reps)
    for rep in range(reps):
        s = sample_lers(n, RngStream(child_seed(seed, n, rep)), fault=fault)
        report.sizes[s.size] += 1
        for name in check_sample(s, independence=independence):
            report.violations[name] += 1
    if n <= 2:
        _oracle_compare(report, alpha, DEFAULT_CAP if oracle_cap is None else oracle_cap)
    return report

