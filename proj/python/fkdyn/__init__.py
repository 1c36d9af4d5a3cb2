"""Feldman-Katok distances, GIKN towers and ergodic diagnostics."""

import json

from ._fkdyn import (
    FkdynError,
    block_distribution,
    entropy_rates,
    evaluate_experiment as _evaluate,
    experiment_names,
    fk_distance,
    format_word,
    gap,
    katok,
    parse_word,
    product_blocks,
    rotation_coding,
    synthesize_tower as _synthesize,
    transport,
    word_lcs,
    word_metrics,
)


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def synthesize_tower(config):
    """Build a tower from a settings dict or JSON string."""
    return _synthesize(_text(config))


def evaluate_experiment(config):
    """Run a registered experiment in memory; returns (csv_text, summary)."""
    return _evaluate(_text(config))


__all__ = [
    "FkdynError",
    "block_distribution",
    "entropy_rates",
    "evaluate_experiment",
    "experiment_names",
    "fk_distance",
    "format_word",
    "gap",
    "katok",
    "parse_word",
    "product_blocks",
    "rotation_coding",
    "synthesize_tower",
    "transport",
    "word_lcs",
    "word_metrics",
]
