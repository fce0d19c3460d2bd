"""Natural-frequency-zone authorship attribution."""

from ._core import (
    AttributionReport,
    BasicAttributor,
    ConfidenceReport,
    DeltaProfile,
    NFDictionary,
    NfzwdaError,
    PartitionScheme,
    PipelineConfig,
    StyleVector,
    SvmConfig,
    TokenSequence,
    build_delta_profile,
    build_dictionary,
    confidence,
    decide,
    load_corpus,
    load_dictionary,
    parse_tsv,
    partition,
    run_experiment,
    segment,
    split_words,
    style_vector,
    tokenize,
    zone_count,
    zone_index,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
