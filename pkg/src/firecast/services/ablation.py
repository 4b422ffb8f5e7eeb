"""Resumable ablation sweeps over model, timeseries length, horizon and radius."""

from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Callable, List, Optional, Union

from firecast.models.cube import Datacube
from firecast.models.experiment import AblationGrid, ExperimentSpec
from firecast.models.report import EvalReport
from firecast.services.experiment_runner import evaluate_model, run_training
from firecast.services.report_writer import append_reports, read_reports, write_pivot
from firecast.utils.errors import FirecastError
from firecast.utils.logging_config import get_logger
from firecast.utils.progress import ProgressTracker

logger = get_logger(__name__)

RESULTS_FILE = "results.csv"
PIVOT_FILE = "results_pivot.csv"

RunFn = Callable[[ExperimentSpec], EvalReport]


def run_dir_name(spec: ExperimentSpec) -> str:
    return f"{spec.model}_ts{spec.ts}_h{spec.h}_r{spec.r}"


class AblationRunner:
    """Runs every cell of an AblationGrid once, appending one row per cell.

    Cells already present as ``ok`` rows in the results file are skipped, so
    an interrupted sweep resumes where it stopped. A failing cell is written
    as a ``failed`` row and the sweep continues.
    """

    def __init__(
        self,
        grid: AblationGrid,
        cube: Datacube,
        out_dir: Union[str, Path],
        workers: int = 1,
        split: str = "test",
        run_fn: Optional[RunFn] = None,
    ):
        self.grid = grid
        self.cube = cube
        self.out_dir = Path(out_dir)
        self.workers = max(1, workers)
        self.split = split
        self._run_fn = run_fn or self._train_and_evaluate
        self._unexpected: List[Exception] = []

    @property
    def results_path(self) -> Path:
        return self.out_dir / RESULTS_FILE

    @property
    def pivot_path(self) -> Path:
        return self.out_dir / PIVOT_FILE

    def _train_and_evaluate(self, spec: ExperimentSpec) -> EvalReport:
        outcome = run_training(spec, cube=self.cube, out_dir=self.out_dir / run_dir_name(spec))
        return evaluate_model(outcome.model, outcome.experiment, outcome.data, split=self.split)

    def _run_one(self, spec: ExperimentSpec) -> EvalReport:
        try:
            report = self._run_fn(spec)
        except Exception as e:
            if isinstance(e, FirecastError):
                logger.warning(f"Ablation cell {run_dir_name(spec)} failed: {e}")
            else:
                logger.exception(f"Ablation cell {run_dir_name(spec)} raised an unexpected error")
                self._unexpected.append(e)
            report = EvalReport(
                model=spec.model, ts=spec.ts, h=spec.h, r=spec.r, k=spec.sample_spec.k,
                split=self.split, auprc=None, seed=spec.seed, status="failed",
            )
        append_reports([report], self.results_path)
        return report

    def pending(self) -> List[ExperimentSpec]:
        """Grid cells without an ok row in the results file."""
        done = {r.key for r in read_reports(self.results_path) if r.status == "ok"}
        return [spec for spec in self.grid.expand() if (spec.model, spec.ts, spec.h, spec.r) not in done]

    def run(self) -> List[EvalReport]:
        """Run pending cells with up to ``workers`` threads; returns their rows.

        Every cell gets a row. An error outside the firecast hierarchy is
        re-raised once the sweep and its pivot table are complete.
        """
        self._unexpected.clear()
        todo = self.pending()
        total = len(self.grid.expand())
        logger.info(f"Ablation: {len(todo)} of {total} cells pending, {self.workers} workers")
        tracker = ProgressTracker(len(todo), "ablation")
        reports: List[EvalReport] = []
        if self.workers == 1:
            for spec in todo:
                reports.append(self._run_one(spec))
                tracker.advance()
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                futures = [pool.submit(self._run_one, spec) for spec in todo]
                for future in as_completed(futures):
                    reports.append(future.result())
                    tracker.advance()
        write_pivot(read_reports(self.results_path), self.pivot_path)
        if self._unexpected:
            raise self._unexpected[0]
        return reports
