"""Train and replay runs end to end: ingest, features, GA-BP, metrics, artifacts.

Every artifact is a pure function of the data file, the configuration and the
seed: floats are written at full precision, JSON keys are sorted, and nothing
records timestamps, worker counts or output locations.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from . import ingest
from .errors import EmptyInput, InputError, InsufficientRows, SchemaMismatch
from .evolve import GaResult, run_baseline, run_ga
from .features import build_dataset, build_features, normalize_matrix
from .metrics import EvalReport, evaluate
from .models.dataset import Dataset
from .models.model_document import ModelDocument
from .models.run_config import RunConfig
from .models.tables import RawTable
from .network import Chromosome, Network, decode, encode, predict
from .utils.charts import write_line_chart

logger = logging.getLogger(__name__)

MODEL_FILE = "model.json"
TRACE_FILE = "fitness_trace.csv"
PREDICTIONS_FILE = "predictions.csv"
ERRORS_FILE = "errors.csv"
REPORT_FILE = "report.json"
DATASET_FILE = "dataset.csv"

# settings that do not change what a run computes
_RUN_ONLY_KEYS = ("workers", "output_dir", "write_svg")


@dataclass
class TrainOutcome:
    config: RunConfig
    dataset: Dataset
    result: GaResult
    document: ModelDocument
    predictions: pd.DataFrame
    test_report: EvalReport
    train_report: EvalReport
    paths: Dict[str, Path] = field(default_factory=dict)


def _require_rows(raw: RawTable, d: int, error=InsufficientRows, module: str = "features") -> None:
    """A lag-1 feature and a forward window of d need at least d + 3 rows"""
    if len(raw) < d + 3:
        raise error(f"{len(raw)} data rows leave no sample for a lag-1 feature and a forward "
                    f"window of {d}", module=module)


def document_for(network: Network, dataset: Dataset, config: RunConfig) -> ModelDocument:
    return ModelDocument(
        shape=network.shape,
        genes=tuple(encode(network).genes.tolist()),
        hidden_activation=network.hidden_activation,
        output_activation=network.output_activation,
        norm_params=dataset.norm_params,
        feature_names=dataset.feature_names,
        columns=config.columns,
        vol_window=dataset.vol_window,
        z_threshold=config.z_threshold,
    )


def network_from(document: ModelDocument) -> Network:
    network = decode(Chromosome(genes=np.asarray(document.genes)), document.shape,
                     document.hidden_activation)
    if document.output_activation != network.output_activation:
        network = Network(network.shape, *network.parameters(),
                          hidden_activation=network.hidden_activation,
                          output_activation=document.output_activation)
    return network


def predictions_frame(dates, actual, predicted, split=None) -> pd.DataFrame:
    frame = pd.DataFrame({
        'date': pd.to_datetime(dates).strftime("%Y-%m-%d"),
        'actual_rv': np.asarray(actual, dtype=float),
        'predicted': np.asarray(predicted, dtype=float),
    })
    if split is not None:
        frame['split'] = split
    return frame


def train(config: RunConfig) -> TrainOutcome:
    """Run one full training pipeline in memory"""
    raw = ingest.load_csv(config.data_path, config.columns.schema())
    _require_rows(raw, config.vol_window)
    table = ingest.clean_table(raw, config.z_threshold)
    dataset = build_dataset(table, config.vol_window, config.seed, config.train_frac, config.columns)

    if config.skip_ga:
        result = run_baseline(dataset, config.shape, config.seeded_ga(), config.bp,
                              config.hidden_activation)
    else:
        result = run_ga(dataset, config.shape, config.seeded_ga(), config.bp,
                        workers=config.workers, hidden_activation=config.hidden_activation)

    predicted = predict(result.network, dataset.X)
    frame = predictions_frame(dataset.dates, dataset.y, predicted, dataset.split_labels())
    test_report = evaluate(predicted[dataset.test_idx], dataset.test_y)
    train_report = evaluate(predicted[dataset.train_idx], dataset.train_y)
    logger.info("Test RMSE %.6g, MAE %.6g over %d samples", test_report.rmse, test_report.mae,
                test_report.n)

    return TrainOutcome(
        config=config,
        dataset=dataset,
        result=result,
        document=document_for(result.network, dataset, config),
        predictions=frame,
        test_report=test_report,
        train_report=train_report,
    )


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def _json_safe(data: Dict[str, Any]) -> Dict[str, Any]:
    return {k: _finite_or_none(v) if isinstance(v, float) else v for k, v in data.items()}


def report_document(outcome: TrainOutcome) -> Dict[str, Any]:
    config = outcome.config.to_dict()
    for key in _RUN_ONLY_KEYS:
        config.pop(key, None)

    run = outcome.result.run
    training = outcome.result.training
    return {
        'test': _json_safe(outcome.test_report.to_dict()),
        'train': _json_safe(outcome.train_report.to_dict()),
        'ga': {
            'skipped': run is None,
            'evaluations': run.evaluations if run else 0,
            'best_fitness': _finite_or_none(run.final_best.fitness) if run else None,
        },
        'bp_final_loss': _finite_or_none(training.final_loss) if training else None,
        'samples': {'train': int(len(outcome.dataset.train_idx)),
                    'test': int(len(outcome.dataset.test_idx))},
        'config': config,
    }


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def write_artifacts(outcome: TrainOutcome, out_dir: Union[str, Path], write_svg: bool = True,
                    dump_dataset: bool = False) -> Dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset = outcome.dataset
    errors = outcome.test_report.error_frame()
    trace = outcome.result.trace_frame()

    paths = {
        'model': outcome.document.save(out / MODEL_FILE),
        'trace': _write_csv(trace, out / TRACE_FILE),
        'predictions': _write_csv(outcome.predictions, out / PREDICTIONS_FILE),
        'errors': _write_csv(errors, out / ERRORS_FILE),
    }
    report_path = out / REPORT_FILE
    with open(report_path, 'w') as f:
        json.dump(report_document(outcome), f, indent=2, sort_keys=True)
        f.write("\n")
    paths['report'] = report_path

    if dump_dataset:
        paths['dataset'] = _write_csv(dataset.to_frame(), out / DATASET_FILE)

    if write_svg:
        paths['fitness_svg'] = write_line_chart(
            out / "fitness.svg", {'best fitness': (trace['generation'], trace['best_fitness'])},
            title="Fitness of the best individual", x_label="generation", y_label="G")
        index = np.arange(len(outcome.predictions))
        paths['predictions_svg'] = write_line_chart(
            out / "predictions.svg",
            {'realized': (index, outcome.predictions['actual_rv']),
             'predicted': (index, outcome.predictions['predicted'])},
            title="Realized vs predicted volatility", x_label="sample", y_label="volatility")
        paths['errors_svg'] = write_line_chart(
            out / "errors.svg", {'error': (errors['index'], errors['error'])},
            title="Test-set forecast error", x_label="test sample", y_label="error")
        paths['error_pct_svg'] = write_line_chart(
            out / "error_pct.svg", {'error %': (errors['index'], errors['error_pct'])},
            title="Test-set error percentage", x_label="test sample", y_label="relative error")

    logger.info("Wrote %d artifacts to %s", len(paths), out)
    outcome.paths = paths
    return paths


def replay(document: ModelDocument, data_path: Union[str, Path]) -> pd.DataFrame:
    """Apply a saved model to every usable row of a data file"""
    raw = ingest.load_csv(data_path, document.columns.schema())
    _require_rows(raw, document.vol_window, EmptyInput, module="cli")
    table = ingest.clean_table(raw, document.z_threshold)
    try:
        frame = build_features(table, document.vol_window, document.columns)
    except InsufficientRows as e:
        raise EmptyInput(f"no rows left after feature construction: {e}", module="cli") from e

    if tuple(frame.feature_names) != tuple(document.feature_names):
        raise SchemaMismatch(
            f"data yields features {list(frame.feature_names)}; model expects "
            f"{list(document.feature_names)}", module="cli")

    X = normalize_matrix(frame.X_raw, document.norm_params)
    predicted = predict(network_from(document), X)
    return predictions_frame(frame.dates, frame.y, predicted)


def read_predictions(path: Union[str, Path], split: Optional[str] = None) -> pd.DataFrame:
    """Predictions CSV, optionally restricted to one split"""
    try:
        frame = pd.read_csv(path)
    except FileNotFoundError as e:
        raise InputError(f"predictions file not found: {path}", module="cli") from e
    except pd.errors.EmptyDataError as e:
        raise EmptyInput(f"{path} is empty", module="cli") from e

    missing = [c for c in ('actual_rv', 'predicted') if c not in frame.columns]
    if missing:
        raise SchemaMismatch(f"{path} is missing column(s): {', '.join(missing)}",
                             issues=missing, module="cli")

    if split is None:
        split = "test" if 'split' in frame.columns else "all"
    if split != "all":
        if 'split' not in frame.columns:
            raise SchemaMismatch(f"{path} has no split column; use --split all", module="cli")
        frame = frame[frame['split'] == split].reset_index(drop=True)
    return frame
