import json
import queue
import threading
from dataclasses import dataclass, field
from pathlib import Path

from sympy import isprime

from IwasawaLambda.config import settings
from IwasawaLambda.errors import BudgetError, LambdaError, PreconditionError
from IwasawaLambda.logger import log
from IwasawaLambda.quadfield.forms import SplitType, is_fundamental, split_type
from IwasawaLambda.quadfield.gold import class_number, gold_test
from IwasawaLambda.report import SCHEMA_VERSION


def candidate_discriminants(dmin: int, dmax: int) -> list[int]:
    """Fundamental D with dmin ≤ D ≤ dmax, ordered by |D|."""
    if dmin > dmax:
        raise PreconditionError("PARAMETER_MISMATCH", "empty or reversed range", dmin=dmin, dmax=dmax)
    if dmax >= 0:
        raise PreconditionError("PARAMETER_MISMATCH", "only imaginary quadratic fields are swept", dmax=dmax)
    return sorted((d for d in range(dmin, dmax + 1) if d < -2 and is_fundamental(d)), key=abs)


def eligible(d: int, p: int) -> bool:
    return split_type(d, p) == SplitType.SPLIT and class_number(d) % p != 0


@dataclass
class SweepResult:
    rows: list[dict] = field(default_factory=list)
    stopped: bool = False

    def write(self, path: str | Path) -> None:
        lines = [json.dumps(row, sort_keys=True, ensure_ascii=False) for row in self.rows]
        Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


class SweepRunner:
    """Runs gold_test over a discriminant range on a pool of worker threads."""

    def __init__(self, p: int, prec: int | None = None, budget: int | None = None, workers: int | None = None):
        if p < 3 or not isprime(p):
            raise ValueError("p must be an odd prime")
        self.p = p
        self.prec = prec
        self.budget = budget
        self.workers = settings.sweep_workers if workers is None else workers
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        self.stop_event = threading.Event()
        self._queue: queue.Queue[int] = queue.Queue()
        self._rows: dict[int, dict] = {}
        self._lock = threading.Lock()

    def _row(self, d: int) -> dict | None:
        try:
            if not eligible(d, self.p):
                return None
            report = gold_test(d, self.p, self.prec, self.budget)
            return {"schema": SCHEMA_VERSION, "status": "ok"} | report.to_dict()
        except BudgetError as e:
            self.stop_event.set()
            log.warning("Sweep stopped by budget", disc=d, p=self.p, detail=e.message)
            return self._error_row(d, e)
        except LambdaError as e:
            log.error("Sweep row failed", disc=d, p=self.p, code=e.code, detail=e.message)
            return self._error_row(d, e)

    def _error_row(self, d: int, e: LambdaError) -> dict:
        return {"schema": SCHEMA_VERSION, "status": "error", "disc": str(d), "p": str(self.p), "code": e.code,
                "message": e.message}

    def _worker(self) -> None:
        while not self.stop_event.is_set():
            try:
                d = self._queue.get_nowait()
            except queue.Empty:
                return
            try:
                row = self._row(d)
                if row is not None:
                    with self._lock:
                        self._rows[d] = row
            finally:
                self._queue.task_done()

    def run(self, dmin: int, dmax: int) -> SweepResult:
        discs = candidate_discriminants(dmin, dmax)
        for d in discs:
            self._queue.put(d)
        threads = [threading.Thread(target=self._worker, daemon=True) for _ in range(min(self.workers, len(discs)))]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        with self._lock:
            rows = [self._rows[d] for d in sorted(self._rows, key=abs)]
        result = SweepResult(rows, self.stop_event.is_set())
        log.info("Sweep finished", p=self.p, dmin=dmin, dmax=dmax, candidates=len(discs), rows=len(rows),
                 stopped=result.stopped)
        return result


def run_sweep(dmin: int, dmax: int, p: int, out_path: str | Path, prec: int | None = None, budget: int | None = None,
              workers: int | None = None) -> SweepResult:
    result = SweepRunner(p, prec, budget, workers).run(dmin, dmax)
    result.write(out_path)
    return result
