from .checkpoint import load, save
from .datasets import Dataset, DatasetSplit, Sample, make_dataset, split_dataset
from .mlp import MlpParams
from .model import ClassifierModel, Pool, backward, forward, forward_batch, predict
from .train import AblationReport, EpochMetrics, TrainRun, evaluate, run_ablation, train
