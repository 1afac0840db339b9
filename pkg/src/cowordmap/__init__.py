"""Deterministic co-word science mapping.

Parse Web of Science exports, build keyword co-occurrence networks weighted
by the equivalence index, cluster them into themes with the simple-centers
algorithm and place the themes on a centrality/density strategic diagram.
"""
__version__ = "0.1.0"

from .coword_net import CoWordNetwork, Edge, build_network, count_cooccurrences, equivalence_index, prune_by_frequency
from .keyword_norm import KeywordIndex, NormalizationRules, Thesaurus, build_index, load_thesaurus, normalize_term, rank_keywords
from .strategic_map import (
    StrategicMap,
    ThemeMetrics,
    build_strategic_map,
    callon_centrality,
    callon_density,
    classify_category,
    classify_quadrant,
    compute_origin,
    map_from_metrics,
    predict_trajectory,
)
from .theme_cluster import ClusterParams, Theme, label_theme, simple_centers, theme_doc_count
from .wos_ingest import Corpus, CorpusStats, Record, annual_growth_rate, corpus_stats, merge_corpora, parse_wos, parse_wos_plaintext, parse_wos_tabdelimited
