import numpy as np
import pytest

from dect.classify.datasets import Sample, make_dataset, split_dataset
from dect.classify.mlp import MlpParams
from dect.classify.model import ClassifierModel
from dect.classify.train import EpochMetrics, TrainRun, evaluate, run_ablation, train
from dect.exceptions import DatasetError
from dect.models import ValidationError

KINDS = ["circle", "two-circles"]


@pytest.fixture
def dataset():
    return make_dataset(KINDS, 10, num_points=16, seed=0)


@pytest.fixture
def model():
    return ClassifierModel.init(2, 2, num_directions=4, rng=np.random.default_rng(0))


def assert_same_parameters(a, b):
    pa, pb = a.parameters(), b.parameters()
    assert pa.keys() == pb.keys()
    for key in pa:
        np.testing.assert_array_equal(pa[key], pb[key], err_msg=key)


def test_run_defaults():
    run = TrainRun()
    assert (run.epochs, run.batch_size, run.lr) == (100, 32, 0.001)
    assert run.learn_directions
    assert run.metrics == []


def test_run_metrics_bounded_by_epochs():
    metric = EpochMetrics(epoch=0, train_loss=1.0, train_accuracy=0.5)
    with pytest.raises(ValidationError):
        TrainRun(epochs=1, metrics=[metric, metric])


def test_train_rejects_empty(model):
    with pytest.raises(DatasetError):
        train(model, [], TrainRun(epochs=1))


def test_train_rejects_single_class(model, dataset):
    with pytest.raises(DatasetError):
        train(model, [s for s in dataset if s.label == 0], TrainRun(epochs=1))


def test_train_rejects_out_of_range_labels(model, dataset):
    bad = dataset + [Sample(dataset[0].complex, 2)]
    with pytest.raises(DatasetError):
        train(model, bad, TrainRun(epochs=1))


def test_zero_lr_leaves_parameters_unchanged(model, dataset):
    trained, run = train(model, dataset, TrainRun(epochs=2, lr=0.0, batch_size=4))
    assert_same_parameters(trained, model)
    assert len(run.metrics) == 2


def test_metrics_per_epoch(model, dataset):
    _, run = train(model, dataset, TrainRun(epochs=3, batch_size=5, validation_fraction=0.25))
    assert [m.epoch for m in run.metrics] == [0, 1, 2]
    for m in run.metrics:
        assert 0.0 <= m.train_accuracy <= 1.0
        assert m.val_loss is not None
        assert 0.0 <= m.val_accuracy <= 1.0


def test_no_validation_metrics_without_holdout(model, dataset):
    _, run = train(model, dataset, TrainRun(epochs=1, validation_fraction=0.0))
    assert run.metrics[0].val_loss is None


def test_explicit_validation_set(model, dataset):
    split = split_dataset(dataset, seed=1, test_fraction=0.0, validation_fraction=0.3)
    _, run = train(model, split.train, TrainRun(epochs=1), validation=split.validation)
    assert run.metrics[0].val_accuracy is not None


def test_deterministic(model, dataset):
    run = TrainRun(epochs=2, batch_size=4, lr=0.01, seed=7)
    a, run_a = train(model, dataset, run)
    b, run_b = train(model, dataset, run)
    assert run_a.metrics == run_b.metrics
    assert_same_parameters(a, b)


def test_fixed_directions_stay_fixed(model, dataset):
    trained, _ = train(model, dataset, TrainRun(epochs=2, lr=0.05, learn_directions=False))
    np.testing.assert_array_equal(trained.directions.directions, model.directions.directions)
    assert not np.array_equal(trained.head.weights[0], model.head.weights[0])


def test_learned_directions_stay_unit(model, dataset):
    trained, _ = train(model, dataset, TrainRun(epochs=2, lr=0.05))
    assert not np.array_equal(trained.directions.directions, model.directions.directions)
    np.testing.assert_allclose(np.linalg.norm(trained.directions.directions, axis=1), 1.0, atol=1e-12)


def test_training_reduces_loss(dataset):
    model = ClassifierModel.init(2, 2, num_directions=8, rng=np.random.default_rng(3))
    _, run = train(model, dataset, TrainRun(epochs=8, batch_size=5, lr=0.01, validation_fraction=0.0))
    assert run.metrics[-1].train_loss < run.metrics[0].train_loss


def test_patience_stops_early(model, dataset):
    # Without updates the validation loss never improves after the first epoch.
    _, run = train(model, dataset, TrainRun(epochs=10, lr=0.0, patience=1))
    assert len(run.metrics) == 2


def test_logs_each_epoch(mocker, model, dataset):
    console = mocker.MagicMock()
    train(model, dataset, TrainRun(epochs=3, validation_fraction=0.0), console=console)
    assert console.print.call_count == 3


def test_evaluate(model, dataset):
    head = MlpParams.zeros(model.head.sizes)
    head.biases[-1][:] = [1.0, 0.0]
    always_zero = ClassifierModel(model.directions, model.ect_config, model.curve_embed, head)
    assert evaluate(always_zero, dataset) == pytest.approx(0.5)
    assert evaluate(always_zero, [s for s in dataset if s.label == 0]) == 1.0


def test_evaluate_ties_go_to_lowest_class(model, dataset):
    zero = ClassifierModel(model.directions, model.ect_config, model.curve_embed, MlpParams.zeros(model.head.sizes))
    assert evaluate(zero, [s for s in dataset if s.label == 0]) == 1.0


def test_evaluate_errors(model, dataset):
    with pytest.raises(DatasetError):
        evaluate(model, [])
    with pytest.raises(DatasetError):
        evaluate(model, [Sample(dataset[0].complex, 5)])


def test_ablation_report(dataset):
    report = run_ablation(dataset, [0, 1], TrainRun(epochs=1, batch_size=8), num_directions=2)
    assert report.seeds == [0, 1]
    assert len(report.fixed) == len(report.learned) == 2
    assert 0.0 <= report.mean_fixed <= 1.0
    assert 0.0 <= report.mean_learned <= 1.0


@pytest.mark.slow
def test_separable_set_reaches_high_accuracy():
    dataset = make_dataset(KINDS, 100, seed=0)
    split = split_dataset(dataset, seed=0)
    model = ClassifierModel.init(2, 2, rng=np.random.default_rng(0))
    _, run = train(model, split.train, TrainRun(epochs=30, lr=0.01), validation=split.validation)
    assert max(m.val_accuracy for m in run.metrics) >= 0.95


@pytest.mark.slow
def test_learned_directions_not_worse_than_fixed():
    dataset = make_dataset(KINDS, 100, seed=0, rotate=True)
    report = run_ablation(dataset, range(10), TrainRun(epochs=20, lr=0.01), num_directions=2)
    assert report.mean_learned >= report.mean_fixed
