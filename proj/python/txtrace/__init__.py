"""Blockchain transaction-graph forensics toolkit.

Thin Python surface over the C++ core: chain ingestion, multi-input
clustering, the tag database, the exchange classifier, back-and-forth
exploration, relation extraction, the C&C signaling oracles, and the
synthetic chain generator.
"""

from ._txtrace import (
    ChainStore,
    ClusterMap,
    ExplorationGraph,
    RandomForest,
    TagDatabase,
    TxtraceError,
    apply_oracles,
    cerber_oracle,
    detect_coinjoin,
    detect_dust,
    explore,
    extract_features,
    feature_names,
    find_relations,
    generate_chain,
    glupteba_oracle,
    pony_oracle,
    train,
    __version__,
)

__all__ = [
    "ChainStore",
    "ClusterMap",
    "ExplorationGraph",
    "RandomForest",
    "TagDatabase",
    "TxtraceError",
    "apply_oracles",
    "cerber_oracle",
    "detect_coinjoin",
    "detect_dust",
    "explore",
    "extract_features",
    "feature_names",
    "find_relations",
    "generate_chain",
    "glupteba_oracle",
    "pony_oracle",
    "train",
    "__version__",
]
