"""Run external DIMACS SAT solvers and turn their answers into tournaments."""

from __future__ import annotations

import enum
import logging
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .encoder import CnfFormula, VarMap, emit_dimacs
from .tournament import Tournament, canonical_form, has_tt_k

log = logging.getLogger(__name__)

SOLVER_ENV = "DIRECTED_RAMSEY_SOLVER"


class SolverError(RuntimeError):
    pass


class SolverCrashed(SolverError):
    pass


class NotSat(SolverError):
    pass


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


def default_solver_command() -> list[str]:
    """``$DIRECTED_RAMSEY_SOLVER``, else cadical/kissat on PATH, else the pysat shim."""
    env = os.environ.get(SOLVER_ENV)
    if env:
        return shlex.split(env)
    for name in ("cadical", "kissat"):
        path = shutil.which(name)
        if path:
            return [path, "-q"] if name == "cadical" else [path]
    return [sys.executable, "-m", "directed_ramsey.satshim"]


@dataclass
class SolverConfig:
    command: list[str] = field(default_factory=default_solver_command)
    timeout: float | None = None  # seconds; None = unlimited
    workers: int = 1
    log_dir: Path | None = None

    def __post_init__(self):
        if isinstance(self.command, str):
            self.command = shlex.split(self.command)
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive (or None for unlimited)")
        if self.log_dir is not None:
            self.log_dir = Path(self.log_dir)


@dataclass
class SolverOutcome:
    status: Status
    model: dict[int, bool] | None = None
    wall_time: float = 0.0
    reason: str = ""
    stdout: str = ""

    @property
    def is_sat(self) -> bool:
        return self.status is Status.SAT


def parse_solver_output(text: str, returncode: int, var_count: int) -> SolverOutcome:
    status = None
    values: dict[int, bool] = {}
    for line in text.splitlines():
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word == "SATISFIABLE":
                status = Status.SAT
            elif word == "UNSATISFIABLE":
                status = Status.UNSAT
            else:
                status = Status.UNKNOWN
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit:
                    values[abs(lit)] = lit > 0
    if status is None:
        if returncode == 20:
            status = Status.UNSAT
        elif returncode == 10 and values:
            status = Status.SAT
        else:
            raise SolverCrashed(f"solver exited with code {returncode} and no status line")
    if status is Status.SAT:
        missing = [v for v in range(1, var_count + 1) if v not in values]
        if missing:
            raise SolverCrashed(f"SAT model leaves {len(missing)} variables unassigned")
        return SolverOutcome(status, values)
    return SolverOutcome(status, reason="" if status is Status.UNSAT else "solver reported UNKNOWN")


def _run(cnf_path: Path, var_count: int, cfg: SolverConfig, log_path: Path | None) -> SolverOutcome:
    cmd = list(cfg.command) + [str(cnf_path)]
    start = time.perf_counter()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=cfg.timeout)
    except subprocess.TimeoutExpired as exc:
        wall = time.perf_counter() - start
        out = exc.stdout.decode() if isinstance(exc.stdout, bytes) else (exc.stdout or "")
        outcome = SolverOutcome(Status.UNKNOWN, wall_time=wall, reason=f"timeout after {cfg.timeout}s", stdout=out)
    else:
        wall = time.perf_counter() - start
        try:
            outcome = parse_solver_output(proc.stdout, proc.returncode, var_count)
        except SolverCrashed as exc:
            if log_path is not None:
                _write_log(log_path, proc.stdout + proc.stderr, wall, f"crashed: {exc}")
            raise
        outcome.wall_time = wall
        outcome.stdout = proc.stdout
    if log_path is not None:
        _write_log(log_path, outcome.stdout, outcome.wall_time, outcome.status.value)
    return outcome


def _write_log(path: Path, stdout: str, wall: float, status: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(f"{stdout}c status {status}\nc wall_time {wall:.3f}\n")


def solve(f: CnfFormula, cfg: SolverConfig | None = None, log_path: Path | None = None) -> SolverOutcome:
    cfg = cfg or SolverConfig()
    with tempfile.TemporaryDirectory(prefix="dramsey-") as tmp:
        cnf_path = Path(tmp) / "instance.cnf"
        cnf_path.write_text(emit_dimacs(f))
        outcome = _run(cnf_path, f.var_count, cfg, log_path)
    log.debug("solve: %s in %.2fs", outcome.status.value, outcome.wall_time)
    return outcome


def solve_file(cnf_path, cfg: SolverConfig | None = None, log_path: Path | None = None) -> SolverOutcome:
    cfg = cfg or SolverConfig()
    cnf_path = Path(cnf_path)
    var_count = 0
    with cnf_path.open() as fh:
        for line in fh:
            if line.startswith("p"):
                var_count = int(line.split()[2])
                break
    return _run(cnf_path, var_count, cfg, log_path)


def decode_model(outcome: SolverOutcome, varmap: VarMap, n: int, k: int | None = None) -> Tournament:
    """Tournament from the edge variables of a SAT model; cycle variables are ignored.

    With ``k`` given, the decoded tournament is re-checked to be TT_k-free
    (solver answers are not trusted).
    """
    if outcome.status is not Status.SAT or outcome.model is None:
        raise NotSat(f"cannot decode a {outcome.status.value} outcome")
    rows = [0] * n
    for (i, j), var in varmap.edge_var.items():
        if outcome.model[var]:
            rows[i] |= 1 << j
        else:
            rows[j] |= 1 << i
    t = Tournament(n, tuple(rows))
    if k is not None and has_tt_k(t, k):
        raise SolverError(f"solver model contains a TT_{k}")
    return t


def blocking_clause(t: Tournament, varmap: VarMap) -> list[int]:
    """Clause excluding exactly this orientation of the edge variables."""
    return [(-var if t.has_edge(i, j) else var) for (i, j), var in varmap.edge_var.items()]


def enumerate_models(
    f: CnfFormula, cfg: SolverConfig | None = None, limit: int | None = None
) -> tuple[list[Tournament], int]:
    """Isomorph-distinct solutions and the number of labeled models seen.

    Solve, decode, block the exact edge assignment, repeat until UNSAT (or
    ``limit`` labeled models). Representatives are filtered by canonical form
    afterwards; the first model found in each class is kept.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1")
    cfg = cfg or SolverConfig()
    work = CnfFormula(f.var_count, [list(c) for c in f.clauses], f.varmap, f.order, f.k)
    seen: dict[bytes, Tournament] = {}
    labeled = 0
    while limit is None or labeled < limit:
        outcome = solve(work, cfg)
        if outcome.status is Status.UNSAT:
            break
        if outcome.status is Status.UNKNOWN:
            raise SolverError(f"enumeration stopped: {outcome.reason}")
        t = decode_model(outcome, f.varmap, f.order, f.k or None)
        labeled += 1
        seen.setdefault(canonical_form(t), t)
        work.clauses.append(blocking_clause(t, f.varmap))
    return list(seen.values()), labeled


def solve_batch(instances: Sequence, cfg: SolverConfig | None = None) -> list[SolverOutcome]:
    """Solve many instances with ``cfg.workers`` concurrent solver processes.

    ``instances`` holds :class:`CnfFormula` objects or DIMACS paths. Output order
    matches input order. A failing instance yields an UNKNOWN outcome with the
    failure recorded in ``reason``; the rest of the batch continues.
    """
    cfg = cfg or SolverConfig()
    log_dir = cfg.log_dir or Path(tempfile.mkdtemp(prefix="dramsey-logs-"))

    def one(idx_item):
        idx, item = idx_item
        log_path = log_dir / f"instance_{idx:04d}.log"
        try:
            if isinstance(item, CnfFormula):
                return solve(item, cfg, log_path)
            return solve_file(item, cfg, log_path)
        except Exception as exc:  # recorded per instance, batch continues
            log.warning("instance %d failed: %s", idx, exc)
            if not log_path.exists():
                _write_log(log_path, "", 0.0, f"error: {exc}")
            return SolverOutcome(Status.UNKNOWN, reason=f"error: {exc}")

    if not instances:
        return []
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(one, enumerate(instances)))
