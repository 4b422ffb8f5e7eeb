"""End-to-end runs: prepare cube data, train, checkpoint, evaluate."""

from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict

from firecast.architectures.forecast_model import ForecastModel
from firecast.config.model_factory import ModelFactory
from firecast.models.cube import Datacube, StandardizationStats
from firecast.models.experiment import ExperimentSpec
from firecast.models.report import EvalReport
from firecast.models.sample import NegativePolicy, SampleSpec, SampleSplits, SplitSpec
from firecast.services.checkpoint_store import save_checkpoint
from firecast.services.cube_store import read_cube
from firecast.services.evaluator import ModelScorer, evaluate
from firecast.services.report_writer import write_train_log
from firecast.services.sampler import enumerate_samples
from firecast.services.standardizer import compute_standardization, standardize
from firecast.services.trainer import Trainer, TrainResult
from firecast.sources.cube_source import CubeSampleSource
from firecast.utils.errors import FirecastValidationError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

TRAIN_LOG_FILE = "train_log.csv"
BEST_CHECKPOINT = "checkpoint_best"
FINAL_CHECKPOINT = "checkpoint_final"


class PreparedData(BaseModel):
    """Standardized cube, its statistics, sample splits and a source over them."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    cube: Datacube
    stats: StandardizationStats
    split: SplitSpec
    splits: SampleSplits
    source: CubeSampleSource


class RunOutcome(BaseModel):
    """Everything a training run produced."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    experiment: ExperimentSpec
    model: ForecastModel
    result: TrainResult
    data: PreparedData
    out_dir: Path


def resolve_split(cube: Datacube, split: Optional[SplitSpec]) -> SplitSpec:
    """Given split, or all-but-last-two years train, then one validation and one test year."""
    if split is not None:
        return split
    try:
        return SplitSpec.default_for(cube.header.years())
    except ValueError as e:
        raise FirecastValidationError(str(e), field="split") from e


def prepare_data(
    cube: Datacube,
    sample_spec: SampleSpec,
    split: Optional[SplitSpec] = None,
    policy: Optional[NegativePolicy] = None,
    seed: int = 0,
    stats: Optional[StandardizationStats] = None,
) -> PreparedData:
    """Standardize on the training years (unless ``stats`` is given) and enumerate samples."""
    split = resolve_split(cube, split)
    if stats is None:
        stats = compute_standardization(cube, cube.header.time_range_for_years(split.train_years))
    standardized = standardize(cube, stats)
    splits = enumerate_samples(standardized, sample_spec, split, policy, seed)
    source = CubeSampleSource(standardized, sample_spec)
    return PreparedData(cube=standardized, stats=stats, split=split, splits=splits, source=source)


def build_model(experiment: ExperimentSpec, n_features: int) -> ForecastModel:
    spec = experiment.sample_spec
    return ModelFactory.create_model(
        experiment.model,
        n_features=n_features,
        r=spec.r,
        k=spec.k,
        seed=experiment.seed,
        options=experiment.model_options,
    )


def run_training(
    experiment: ExperimentSpec,
    cube: Optional[Datacube] = None,
    out_dir: Optional[Path] = None,
) -> RunOutcome:
    """Train one experiment and write its log and best/final checkpoints.

    Args:
        experiment: Resolved experiment spec; ``experiment.seed`` drives
            every random stream of the run.
        cube: Raw cube; read from ``experiment.cube`` if omitted.
        out_dir: Output directory; defaults to ``experiment.out``.
    """
    if cube is None:
        cube = read_cube(experiment.cube)
    out = Path(out_dir or experiment.out)
    data = prepare_data(cube, experiment.sample_spec, experiment.split, experiment.negative_policy, experiment.seed)
    model = build_model(experiment, data.source.n_features)
    train_config = experiment.train.model_copy(update={"seed": experiment.seed})
    result = Trainer(train_config, experiment.negative_policy).train(
        model, data.source, data.splits.train_pool, data.splits.val
    )
    resolved = experiment.model_copy(update={"split": data.split, "train": train_config})

    write_train_log(result.log, out / TRAIN_LOG_FILE)
    model.store.restore(result.final_params)
    save_checkpoint(model, out / FINAL_CHECKPOINT, resolved, data.stats, extra={"epoch": train_config.epochs - 1})
    model.store.restore(result.best_params)
    save_checkpoint(
        model, out / BEST_CHECKPOINT, resolved, data.stats,
        extra={"epoch": result.best_epoch, "val_auprc": result.best_val_auprc},
    )
    logger.info(f"Training run finished: best epoch {result.best_epoch}, outputs in {out}")
    return RunOutcome(experiment=resolved, model=model, result=result, data=data, out_dir=out)


def evaluate_model(
    model: ForecastModel,
    experiment: ExperimentSpec,
    data: PreparedData,
    split: str = "test",
) -> EvalReport:
    """AUPRC of ``model`` on one split of prepared data."""
    samples = data.splits.for_split(split)
    return evaluate(ModelScorer(model, data.source), samples, data.source.spec, split=split, seed=experiment.seed)
