"""
Comparing pipeline variants with cross validation
=================================================

The harness runs stratified k-fold evaluation for one variant at a
time. "cnn" is the plain classifier; "cnn-cross" switches to the
penalty-weighted loss; "cnn-total" adds score learning, augmentation,
and rebalancing in front of it.
"""
from sentiscore.augment import AugmentConfig
from sentiscore.cnn import CnnConfig
from sentiscore.evaluate import ExperimentConfig, format_report, run_experiment
from sentiscore.synthetic import CorpusConfig, coarse_seed_lexicon, generate_corpus

corpus_cfg = CorpusConfig(
    size=300,
    word_count=10,
    adverb_count=3,
    class_mix={"positive": 0.2, "negative": 0.3, "neutral": 0.5},
    noise_rate=0.05,
    mixed_rate=0.2,
    rng_seed=42,
)
records, truth = generate_corpus(corpus_cfg)
seed_lexicon = coarse_seed_lexicon(truth)

cnn = CnnConfig(
    filter_count=8,
    embedding_dim=16,
    sequence_length=16,
    epochs=6,
    learning_rate=0.1,
    dropout_rate=0.3,
)

for variant in ("cnn", "cnn-total"):
    config = ExperimentConfig(
        k=3,
        variant=variant,
        rebalance=True,
        rng_seed=0,
        augment=AugmentConfig(include_flips=False),
        cnn=cnn,
    )
    report = run_experiment(config, records, seed_lexicon=seed_lexicon)
    print(
        f"{variant:10s} macro P {report.macro_precision_mean:.3f}"
        f"  macro R {report.macro_recall_mean:.3f}"
        f"  macro F {report.macro_f_mean:.3f}"
    )

# The formatted report carries the full per-fold breakdown.
config = ExperimentConfig(k=3, variant="cnn", rng_seed=0, cnn=cnn)
report = run_experiment(config, records)
print()
print(format_report(report))
