"""Benchmark orchestration: datasets, runs, aggregation, service, CLI."""

from .dataset import DatasetValidationError, SampleRecord, load_dataset
from .evaluate import (
    ExternalMetricAdapter,
    ReferenceContext,
    ReferenceStore,
    SubprocessMetricAdapter,
    TurnEvaluator,
    TurnMetrics,
    evaluate_turn,
    prepare_reference,
)
from .storage import ResultsStore, SCHEMA_VERSION
from .runner import BackendRegistry, RunConfig, run_benchmark
from .aggregate import AggregateReport, aggregate

__all__ = [
    "SampleRecord",
    "load_dataset",
    "DatasetValidationError",
    "TurnMetrics",
    "ReferenceContext",
    "ReferenceStore",
    "TurnEvaluator",
    "evaluate_turn",
    "prepare_reference",
    "ExternalMetricAdapter",
    "SubprocessMetricAdapter",
    "ResultsStore",
    "SCHEMA_VERSION",
    "RunConfig",
    "BackendRegistry",
    "run_benchmark",
    "AggregateReport",
    "aggregate",
]
