"""Minibatch training of :class:`~dect.classify.model.ClassifierModel` with Adam."""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from rich.console import Console

from .. import seeding
from ..ect import EctConfig
from ..models import BaseModel, validator
from ..optim import Adam, AdamConfig
from ..typing import FloatArray
from .datasets import Dataset, Sample, check_dataset, labels, split_dataset
from .model import DIRECTIONS_KEY, ClassifierModel, backward, cross_entropy, forward_with_cache, predict

try:
    from pydantic.v1 import confloat, conint
except ImportError:
    from pydantic import confloat, conint


class EpochMetrics(BaseModel):
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: Optional[float] = None
    val_accuracy: Optional[float] = None


class TrainRun(BaseModel):
    """Settings of one training run; :func:`train` returns a copy with ``metrics`` filled in."""

    seed: int = 0
    epochs: conint(ge=1) = 100
    batch_size: conint(ge=1) = 32
    lr: confloat(ge=0) = 0.001
    learn_directions: bool = True
    validation_fraction: confloat(ge=0, lt=1) = 0.2
    patience: Optional[conint(ge=1)] = None  # epochs without validation improvement before stopping
    metrics: List[EpochMetrics] = []

    @validator("metrics")
    def metrics_within_epochs(cls, v, values):
        if "epochs" in values and len(v) > values["epochs"]:
            raise ValueError(f"Run has {len(v)} epoch metrics but only {values['epochs']} epochs.")
        return v


def _batch_gradients(
    model: ClassifierModel, batch: Sequence[Sample], learn_directions: bool
) -> Tuple[float, int, Dict[str, FloatArray]]:
    """Mean loss, number of correct predictions and mean gradients over ``batch``.

    Per-sample gradients are summed in batch order.
    """
    total_loss, correct = 0.0, 0
    grads: Dict[str, FloatArray] = {}
    for sample in batch:
        logits, cache = forward_with_cache(model, sample.complex)
        loss, d_logits = cross_entropy(logits, sample.label)
        total_loss += loss
        correct += int(np.argmax(logits) == sample.label)
        for key, value in backward(model, sample.complex, cache, d_logits, learn_directions).items():
            grads[key] = grads[key] + value if key in grads else value
    scale = 1.0 / len(batch)
    return total_loss * scale, correct, {key: value * scale for key, value in grads.items()}


def dataset_loss(model: ClassifierModel, dataset: Sequence[Sample]) -> Tuple[float, float]:
    """Mean cross entropy and accuracy of ``model`` on ``dataset``."""
    check_dataset(dataset, model.num_classes)
    losses = []
    for sample in dataset:
        logits, _ = forward_with_cache(model, sample.complex)
        losses.append(cross_entropy(logits, sample.label)[0])
    return float(np.mean(losses)), evaluate(model, dataset)


def evaluate(model: ClassifierModel, dataset: Sequence[Sample]) -> float:
    """Fraction of samples whose argmax logit is the true label.

    Ties between logits resolve to the lowest class index.

    Raises
    ------
    DatasetError
        Empty dataset, or labels the model cannot predict.
    """
    check_dataset(dataset, model.num_classes)
    return float(np.mean(predict(model, [s.complex for s in dataset]) == labels(dataset)))


def _log_epoch(console: Optional[Console], metrics: EpochMetrics, epochs: int):
    if console is None:
        return
    line = f"  • epoch {metrics.epoch + 1:>4}/{epochs}: loss={metrics.train_loss:.4f} acc={metrics.train_accuracy:.3f}"
    if metrics.val_loss is not None:
        line += f" val_loss={metrics.val_loss:.4f} val_acc={metrics.val_accuracy:.3f}"
    console.print(line)


def train(
    model: ClassifierModel,
    dataset: Dataset,
    run: TrainRun,
    validation: Optional[Dataset] = None,
    console: Optional[Console] = None,
) -> Tuple[ClassifierModel, TrainRun]:
    """Fit ``model`` to ``dataset`` with cross entropy and Adam.

    Parameters
    ----------
    validation: Optional[Dataset]
        Held-out set for per-epoch validation metrics and early stopping.
        If omitted, ``run.validation_fraction`` of ``dataset`` is held out.

    Returns
    -------
    tuple
        ``(trained_model, run)`` where ``run.metrics`` holds one entry per
        epoch actually run. With ``run.patience`` the model with the lowest
        validation loss is returned.

    Raises
    ------
    DatasetError
        ``dataset`` is empty, has a single class, or labels ``>= model.num_classes``.
    """
    check_dataset(dataset, model.num_classes, min_classes=2)
    if validation is None and run.validation_fraction > 0:
        split = split_dataset(
            dataset,
            seed=seeding.subseed(run.seed, seeding.SHUFFLE),
            test_fraction=0.0,
            validation_fraction=run.validation_fraction,
        )
        dataset, validation = split.train, split.validation
    if validation:
        check_dataset(validation, model.num_classes)
    else:
        validation = None

    rng = seeding.substream(run.seed, seeding.SHUFFLE)
    adam = Adam(AdamConfig(lr=run.lr))
    trainable = model.parameters()
    if not run.learn_directions:
        trainable.pop(DIRECTIONS_KEY)

    metrics: List[EpochMetrics] = []
    best_model, best_val, stale = model, np.inf, 0
    for epoch in range(run.epochs):
        order = rng.permutation(len(dataset))
        epoch_loss, epoch_correct = 0.0, 0
        for start in range(0, len(order), run.batch_size):
            batch = [dataset[i] for i in order[start : start + run.batch_size]]
            loss, correct, grads = _batch_gradients(model, batch, run.learn_directions)
            epoch_loss += loss * len(batch)
            epoch_correct += correct
            trainable = adam.step(trainable, grads)
            model = model.with_parameters(trainable)
            if run.learn_directions:
                # Constrained directions are renormalized by the model.
                trainable[DIRECTIONS_KEY] = model.directions.directions

        epoch_metrics = EpochMetrics(
            epoch=epoch,
            train_loss=epoch_loss / len(dataset),
            train_accuracy=epoch_correct / len(dataset),
        )
        if validation is not None:
            val_loss, val_accuracy = dataset_loss(model, validation)
            epoch_metrics = epoch_metrics.copy(update={"val_loss": val_loss, "val_accuracy": val_accuracy})
        metrics.append(epoch_metrics)
        _log_epoch(console, epoch_metrics, run.epochs)

        if run.patience is None or validation is None:
            continue
        if epoch_metrics.val_loss < best_val:
            best_model, best_val, stale = model, epoch_metrics.val_loss, 0
            continue
        stale += 1
        if stale >= run.patience:
            if console is not None:
                console.print(f"  • Early stopping after {epoch + 1} epochs.")
            model = best_model
            break
    else:
        if run.patience is not None and validation is not None:
            model = best_model

    return model, run.copy(update={"metrics": metrics})


@dataclass
class AblationReport:
    """Test accuracies of fixed- and learned-direction classifiers, one entry per seed."""

    seeds: List[int]
    fixed: List[float]
    learned: List[float]

    @property
    def mean_fixed(self) -> float:
        return float(np.mean(self.fixed))

    @property
    def mean_learned(self) -> float:
        return float(np.mean(self.learned))


def run_ablation(
    dataset: Dataset,
    seeds: Sequence[int],
    run: TrainRun,
    num_directions: int = 2,
    ect_config: Optional[EctConfig] = None,
    console: Optional[Console] = None,
) -> AblationReport:
    """Train each seed twice from the same initialization, with frozen and with trainable directions.

    Both variants see the same data split; only ``learn_directions`` differs.
    """
    check_dataset(dataset, min_classes=2)
    num_classes = int(labels(dataset).max()) + 1
    ambient_dim = dataset[0].complex.ambient_dim

    report = AblationReport([], [], [])
    for seed in seeds:
        split = split_dataset(dataset, seed=seeding.subseed(seed, seeding.DATA))
        init = ClassifierModel.init(
            ambient_dim,
            num_classes,
            num_directions=num_directions,
            ect_config=ect_config,
            rng=seeding.substream(seed, seeding.INIT),
        )
        report.seeds.append(int(seed))
        for learn, accuracies in ((False, report.fixed), (True, report.learned)):
            if console is not None:
                console.print(f"[bold]seed {seed}[/bold], {'learned' if learn else 'fixed'} directions")
            trained, _ = train(
                init,
                split.train,
                run.copy(update={"seed": seed, "learn_directions": learn}),
                validation=split.validation,
                console=console,
            )
            accuracies.append(evaluate(trained, split.test))
    return report
