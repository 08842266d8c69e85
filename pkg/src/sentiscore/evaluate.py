"""Cross-validation harness: folds, rebalancing, metrics, experiments.

The experiment grid mirrors the toolkit's enhancement axes. Variant
``cnn`` trains the classifier as-is; ``cnn-quad`` adds learned lexicon
scores and score-driven augmentation of the training folds;
``cnn-cross`` swaps the loss for penalty-weighted cross entropy;
``cnn-total`` applies both. Reports carry per-fold confusion matrices,
per-class metrics, and macro aggregates with mean and standard
deviation, plus an echo of the full configuration.
"""
from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from sentiscore.augment import AugmentConfig, augment_corpus
from sentiscore.cnn import CnnConfig, fit, init_model, predict
from sentiscore.embeddings import sequence_indices
from sentiscore.learner import LearningConfig, train_iterative
from sentiscore.lexicon import (
    LABEL_INDEX,
    LABELS,
    Lexicon,
    MentionRecord,
    mask_target,
    prepare_mentions,
    tokenize,
)
from sentiscore.losses import PenaltyMatrix
from sentiscore.vocab import build_vocab

VARIANTS = ("cnn", "cnn-quad", "cnn-cross", "cnn-total")


class EvalError(ValueError):
    """Raised on invalid harness configuration or inputs."""


def variant_uses_learner(variant: str) -> bool:
    return variant in ("cnn-quad", "cnn-total")


def variant_uses_weighted_loss(variant: str) -> bool:
    return variant in ("cnn-cross", "cnn-total")


# ----------------------------------------------------------------------
# Confusion matrices and metrics.


@dataclass
class ConfusionMatrix:
    """3x3 integer counts indexed [predicted][expected] in label order."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts)
        if counts.shape != (3, 3):
            raise EvalError("confusion matrix must be 3x3")
        if not np.issubdtype(counts.dtype, np.integer):
            raise EvalError("confusion counts must be integers")
        if np.any(counts < 0):
            raise EvalError("confusion counts must be non-negative")
        self.counts = counts.astype(np.int64)

    @classmethod
    def empty(cls) -> "ConfusionMatrix":
        return cls(np.zeros((3, 3), dtype=np.int64))

    def add(self, predicted: str, expected: str, count: int = 1) -> None:
        if predicted not in LABEL_INDEX or expected not in LABEL_INDEX:
            raise EvalError(f"unknown label pair: {predicted!r}/{expected!r}")
        self.counts[LABEL_INDEX[predicted], LABEL_INDEX[expected]] += count

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def merged(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.counts + other.counts)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f_measure: float


@dataclass
class MetricsReport:
    per_class: dict[str, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f: float


def _safe_ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class precision/recall/F and their unweighted macro means.

    Precision divides the diagonal by the predicted row sum, recall by
    the expected column sum; any zero denominator yields 0, as does an
    F-measure whose precision and recall are both 0.
    """
    per_class: dict[str, ClassMetrics] = {}
    for label in LABELS:
        i = LABEL_INDEX[label]
        hit = float(cm.counts[i, i])
        precision = _safe_ratio(hit, float(cm.counts[i, :].sum()))
        recall = _safe_ratio(hit, float(cm.counts[:, i].sum()))
        f_measure = _safe_ratio(2.0 * precision * recall, precision + recall)
        per_class[label] = ClassMetrics(precision, recall, f_measure)
    return MetricsReport(
        per_class=per_class,
        macro_precision=sum(m.precision for m in per_class.values()) / len(LABELS),
        macro_recall=sum(m.recall for m in per_class.values()) / len(LABELS),
        macro_f=sum(m.f_measure for m in per_class.values()) / len(LABELS),
    )


# ----------------------------------------------------------------------
# Fold assignment and class rebalancing.


def _label_of(item) -> str:
    label = getattr(item, "label", None)
    if label is None:
        label = item[1]
    if label not in LABELS:
        raise EvalError(f"unknown label {label!r}")
    return label


def kfold_split(examples: Sequence, k: int, seed: int) -> list[int]:
    """Stratified fold ids, one per example, deterministic in ``seed``.

    Each label's examples are shuffled and dealt round-robin, so
    per-label fold sizes differ by at most one. Labels start the deal at
    staggered offsets to keep overall fold sizes close as well.
    """
    if k < 1:
        raise EvalError("k must be >= 1")
    if k > len(examples):
        raise EvalError(f"k={k} exceeds the {len(examples)} available examples")
    rng = np.random.default_rng(seed)
    assignment = [0] * len(examples)
    for offset, label in enumerate(LABELS):
        indices = [i for i, ex in enumerate(examples) if _label_of(ex) == label]
        order = rng.permutation(len(indices))
        for position, where in enumerate(order):
            assignment[indices[int(where)]] = (position + offset) % k
    return assignment


def rebalance(examples: Sequence, seed: int) -> list:
    """Oversample minority classes to the majority count, seeded.

    Originals keep their order; duplicates are drawn uniformly with
    replacement per class and appended in label order.
    """
    if not examples:
        raise EvalError("cannot rebalance an empty training set")
    rng = np.random.default_rng(seed)
    by_label: dict[str, list] = {label: [] for label in LABELS}
    for ex in examples:
        by_label[_label_of(ex)].append(ex)
    majority = max(len(group) for group in by_label.values())
    out = list(examples)
    for label in LABELS:
        group = by_label[label]
        if not group:
            continue
        for _ in range(majority - len(group)):
            out.append(group[int(rng.integers(len(group)))])
    return out


# ----------------------------------------------------------------------
# Experiment configuration and its text format.


@dataclass(frozen=True)
class ExperimentConfig:
    k: int = 5
    rebalance: bool = True
    variant: str = "cnn"
    rng_seed: int = 0
    vocab_size: int = 5000
    augment: AugmentConfig = field(default_factory=AugmentConfig)
    learning: LearningConfig = field(default_factory=LearningConfig)
    cnn: CnnConfig = field(default_factory=CnnConfig)
    penalty: PenaltyMatrix = field(default_factory=PenaltyMatrix.default)

    def __post_init__(self) -> None:
        if self.k < 2:
            raise EvalError("k must be >= 2")
        if self.variant not in VARIANTS:
            raise EvalError(f"variant must be one of {VARIANTS}")
        if self.vocab_size < 3:
            raise EvalError("vocab_size must leave room beyond the specials")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_to_text(config: ExperimentConfig) -> str:
    """Render a config as INI-style sections, parseable back losslessly."""
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep keys verbatim
    cp["experiment"] = {
        "k": _fmt(config.k),
        "rebalance": _fmt(config.rebalance),
        "variant": config.variant,
        "rng_seed": _fmt(config.rng_seed),
        "vocab_size": _fmt(config.vocab_size),
    }
    aug = config.augment
    cp["augment"] = {
        "score_tolerance": _fmt(aug.score_tolerance),
        "max_variants_per_sample": _fmt(aug.max_variants_per_sample),
        "include_flips": _fmt(aug.include_flips),
        "rng_seed": _fmt(aug.rng_seed),
        "antonyms": " ".join(f"{a}:{b}" for a, b in sorted(aug.antonyms.items())),
        "comparatives": (
            "auto" if aug.comparatives is None else " ".join(sorted(aug.comparatives))
        ),
    }
    learn = config.learning
    cp["learning"] = {
        "max_outer_iterations": _fmt(learn.max_outer_iterations),
        "lam": _fmt(learn.lam),
        "epsilon_margin": _fmt(learn.epsilon_margin),
        "solver_tol": _fmt(learn.solver_tol),
        "solver_max_iter": _fmt(learn.solver_max_iter),
    }
    cnn = config.cnn
    cp["cnn"] = {
        "window": _fmt(cnn.window),
        "filter_count": _fmt(cnn.filter_count),
        "pool_window": _fmt(cnn.pool_window),
        "pooling": cnn.pooling,
        "activation": cnn.activation,
        "dropout_rate": _fmt(cnn.dropout_rate),
        "learning_rate": _fmt(cnn.learning_rate),
        "epochs": _fmt(cnn.epochs),
        "batch_size": _fmt(cnn.batch_size),
        "rng_seed": _fmt(cnn.rng_seed),
        "sequence_length": _fmt(cnn.sequence_length),
        "embedding_dim": _fmt(cnn.embedding_dim),
        "finetune_embeddings": _fmt(cnn.finetune_embeddings),
    }
    cp["penalty"] = {
        label: " ".join(repr(float(x)) for x in config.penalty.weights[LABEL_INDEX[label]])
        for label in LABELS
    }
    buffer = io.StringIO()
    cp.write(buffer)
    return buffer.getvalue()


def parse_experiment_config(text: str) -> ExperimentConfig:
    """Parse the INI form; absent keys fall back to defaults."""
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise EvalError(f"malformed experiment config: {exc}") from None
    defaults = ExperimentConfig()
    try:
        aug_defaults = defaults.augment
        antonyms = dict(aug_defaults.antonyms)
        if cp.has_option("augment", "antonyms"):
            antonyms = {}
            for pair in cp.get("augment", "antonyms").split():
                if ":" not in pair:
                    raise EvalError(f"bad antonym pair {pair!r}, expected a:b")
                a, b = pair.split(":", 1)
                antonyms[a] = b
        comparatives = aug_defaults.comparatives
        if cp.has_option("augment", "comparatives"):
            raw = cp.get("augment", "comparatives").strip()
            comparatives = None if raw == "auto" else frozenset(raw.split())
        augment_config = AugmentConfig(
            score_tolerance=cp.getfloat(
                "augment", "score_tolerance", fallback=aug_defaults.score_tolerance
            ),
            max_variants_per_sample=cp.getint(
                "augment",
                "max_variants_per_sample",
                fallback=aug_defaults.max_variants_per_sample,
            ),
            include_flips=cp.getboolean(
                "augment", "include_flips", fallback=aug_defaults.include_flips
            ),
            rng_seed=cp.getint("augment", "rng_seed", fallback=aug_defaults.rng_seed),
            antonyms=antonyms,
            comparatives=comparatives,
        )
        learn_defaults = defaults.learning
        learning_config = LearningConfig(
            max_outer_iterations=cp.getint(
                "learning",
                "max_outer_iterations",
                fallback=learn_defaults.max_outer_iterations,
            ),
            lam=cp.getfloat("learning", "lam", fallback=learn_defaults.lam),
            epsilon_margin=cp.getfloat(
                "learning", "epsilon_margin", fallback=learn_defaults.epsilon_margin
            ),
            solver_tol=cp.getfloat(
                "learning", "solver_tol", fallback=learn_defaults.solver_tol
            ),
            solver_max_iter=cp.getint(
                "learning", "solver_max_iter", fallback=learn_defaults.solver_max_iter
            ),
        )
        cnn_defaults = defaults.cnn
        cnn_config = CnnConfig(
            window=cp.getint("cnn", "window", fallback=cnn_defaults.window),
            filter_count=cp.getint(
                "cnn", "filter_count", fallback=cnn_defaults.filter_count
            ),
            pool_window=cp.getint(
                "cnn", "pool_window", fallback=cnn_defaults.pool_window
            ),
            pooling=cp.get("cnn", "pooling", fallback=cnn_defaults.pooling),
            activation=cp.get("cnn", "activation", fallback=cnn_defaults.activation),
            dropout_rate=cp.getfloat(
                "cnn", "dropout_rate", fallback=cnn_defaults.dropout_rate
            ),
            learning_rate=cp.getfloat(
                "cnn", "learning_rate", fallback=cnn_defaults.learning_rate
            ),
            epochs=cp.getint("cnn", "epochs", fallback=cnn_defaults.epochs),
            batch_size=cp.getint("cnn", "batch_size", fallback=cnn_defaults.batch_size),
            rng_seed=cp.getint("cnn", "rng_seed", fallback=cnn_defaults.rng_seed),
            sequence_length=cp.getint(
                "cnn", "sequence_length", fallback=cnn_defaults.sequence_length
            ),
            embedding_dim=cp.getint(
                "cnn", "embedding_dim", fallback=cnn_defaults.embedding_dim
            ),
            finetune_embeddings=cp.getboolean(
                "cnn", "finetune_embeddings", fallback=cnn_defaults.finetune_embeddings
            ),
        )
        penalty = defaults.penalty
        if cp.has_section("penalty"):
            rows = []
            for label in LABELS:
                if not cp.has_option("penalty", label):
                    raise EvalError(f"penalty section is missing the {label} row")
                rows.append([float(x) for x in cp.get("penalty", label).split()])
            penalty = PenaltyMatrix(np.array(rows))
        return ExperimentConfig(
            k=cp.getint("experiment", "k", fallback=defaults.k),
            rebalance=cp.getboolean(
                "experiment", "rebalance", fallback=defaults.rebalance
            ),
            variant=cp.get("experiment", "variant", fallback=defaults.variant),
            rng_seed=cp.getint("experiment", "rng_seed", fallback=defaults.rng_seed),
            vocab_size=cp.getint(
                "experiment", "vocab_size", fallback=defaults.vocab_size
            ),
            augment=augment_config,
            learning=learning_config,
            cnn=cnn_config,
            penalty=penalty,
        )
    except ValueError as exc:
        if isinstance(exc, EvalError):
            raise
        raise EvalError(f"malformed experiment config: {exc}") from None


def save_experiment_config(path, config: ExperimentConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config_to_text(config))


def load_experiment_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_experiment_config(fh.read())


# ----------------------------------------------------------------------
# Running an experiment.


@dataclass
class FoldResult:
    index: int
    confusion: ConfusionMatrix
    metrics: MetricsReport
    train_size: int
    test_size: int


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    folds: list[FoldResult]
    macro_precision_mean: float
    macro_precision_std: float
    macro_recall_mean: float
    macro_recall_std: float
    macro_f_mean: float
    macro_f_std: float

    @property
    def pooled_confusion(self) -> ConfusionMatrix:
        pooled = ConfusionMatrix.empty()
        for fold in self.folds:
            pooled = pooled.merged(fold.confusion)
        return pooled


def _fold_seed(base: int, fold: int) -> int:
    return (base * 1009 + fold) % 2**32


def _masked_text(record: MentionRecord) -> str:
    if record.entity:
        return mask_target(record.text, record.entity)
    return record.text


def run_experiment(
    config: ExperimentConfig,
    records: Sequence[MentionRecord],
    seed_lexicon: Lexicon | None = None,
    on_fold: Callable[[FoldResult], None] | None = None,
) -> ExperimentReport:
    """Run the k-fold pipeline for one variant and aggregate the folds.

    Per fold: optionally learn lexicon scores on the training split and
    augment it with score-similar substitutions, optionally rebalance,
    build the vocabulary from training texts only, train the classifier
    with the variant's loss, and score the held-out split. Augmentation
    and score learning never see test examples. ``on_fold`` is invoked
    with each finished fold, for progress reporting.
    """
    if not records:
        raise EvalError("corpus is empty")
    if variant_uses_learner(config.variant) and seed_lexicon is None:
        raise EvalError(f"variant {config.variant} requires a seed lexicon")
    assignment = kfold_split(records, config.k, config.rng_seed)
    penalty = config.penalty if variant_uses_weighted_loss(config.variant) else None

    fold_results: list[FoldResult] = []
    for fold in range(config.k):
        train_records = [r for r, f in zip(records, assignment) if f != fold]
        test_records = [r for r, f in zip(records, assignment) if f == fold]
        seed = _fold_seed(config.rng_seed, fold)

        samples: list[tuple[str, str]] = [
            (_masked_text(r), r.label) for r in train_records
        ]
        if variant_uses_learner(config.variant):
            mentions = prepare_mentions(train_records, seed_lexicon)
            trace = train_iterative(mentions, seed_lexicon, config.learning)
            augment_cfg = replace(config.augment, rng_seed=seed)
            for sample in augment_corpus(mentions, trace.lexicon, augment_cfg):
                samples.append((sample.text, sample.label))
        if config.rebalance:
            samples = rebalance(samples, seed)

        token_lists = [tokenize(text) for text, _ in samples]
        vocab = build_vocab(token_lists, config.vocab_size)
        cnn_cfg = replace(config.cnn, rng_seed=seed)
        dataset = [
            (
                sequence_indices(tokens, vocab, cnn_cfg.sequence_length),
                LABEL_INDEX[label],
            )
            for tokens, (_, label) in zip(token_lists, samples)
        ]
        model = init_model(len(vocab), cnn_cfg)
        model, _ = fit(model, dataset, cnn_cfg, penalty)

        cm = ConfusionMatrix.empty()
        for record in test_records:
            predicted, _ = predict(model, tokenize(_masked_text(record)), vocab, cnn_cfg)
            cm.add(predicted, record.label)
        result = FoldResult(fold, cm, metrics(cm), len(samples), len(test_records))
        fold_results.append(result)
        if on_fold is not None:
            on_fold(result)

    precisions = np.array([f.metrics.macro_precision for f in fold_results])
    recalls = np.array([f.metrics.macro_recall for f in fold_results])
    fs = np.array([f.metrics.macro_f for f in fold_results])
    return ExperimentReport(
        config=config,
        folds=fold_results,
        macro_precision_mean=float(precisions.mean()),
        macro_precision_std=float(precisions.std()),
        macro_recall_mean=float(recalls.mean()),
        macro_recall_std=float(recalls.std()),
        macro_f_mean=float(fs.mean()),
        macro_f_std=float(fs.std()),
    )


# ----------------------------------------------------------------------
# Report rendering.


def _metrics_lines(report: MetricsReport, indent: str) -> list[str]:
    lines = []
    for label in LABELS:
        m = report.per_class[label]
        lines.append(
            f"{indent}{label:<9}"
            f"precision={m.precision:.6f} recall={m.recall:.6f} f={m.f_measure:.6f}"
        )
    lines.append(
        f"{indent}{'macro':<9}"
        f"precision={report.macro_precision:.6f} "
        f"recall={report.macro_recall:.6f} f={report.macro_f:.6f}"
    )
    return lines


def _matrix_lines(cm: ConfusionMatrix, indent: str) -> list[str]:
    lines = [f"{indent}confusion [predicted x expected], order {' '.join(LABELS)}:"]
    for i in range(3):
        row = " ".join(f"{int(cm.counts[i, j]):>6d}" for j in range(3))
        lines.append(f"{indent}  {row}")
    return lines


def format_report(report: ExperimentReport) -> str:
    """Render a report as stable, diff-friendly text."""
    lines = [
        "sentiscore experiment report",
        f"variant: {report.config.variant}",
        f"folds: {len(report.folds)}",
        f"evaluated examples: {report.pooled_confusion.total}",
        "",
        "[configuration]",
    ]
    lines.extend("  " + line for line in config_to_text(report.config).splitlines())
    for fold in report.folds:
        lines.append("")
        lines.append(f"fold {fold.index}: train={fold.train_size} test={fold.test_size}")
        lines.extend(_matrix_lines(fold.confusion, "  "))
        lines.extend(_metrics_lines(fold.metrics, "  "))
    lines.append("")
    lines.append("pooled over folds:")
    lines.extend(_matrix_lines(report.pooled_confusion, "  "))
    lines.append("")
    lines.append("aggregate (mean +- std over folds):")
    lines.append(
        f"  macro precision {report.macro_precision_mean:.6f} "
        f"+- {report.macro_precision_std:.6f}"
    )
    lines.append(
        f"  macro recall    {report.macro_recall_mean:.6f} "
        f"+- {report.macro_recall_std:.6f}"
    )
    lines.append(
        f"  macro f         {report.macro_f_mean:.6f} +- {report.macro_f_std:.6f}"
    )
    lines.append("")
    return "\n".join(lines)


def save_report(path, report: ExperimentReport) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_report(report))
