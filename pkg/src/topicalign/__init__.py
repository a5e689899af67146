"""Topic-pooled comparable corpus of Dcard / Weibo posts.

Pipeline: ingest source dumps into one Post schema, segment, pool by tag,
align cross-source post pairs through tf-idf + LSI + cosine similarity, and
compare the pools (stats, frequency lists, PMI collocations).
"""

from .align import (
    AlignmentResult,
    EmptyPoolError,
    PoolModels,
    TopicPool,
    align_all,
    align_query,
    anchor_index,
    fit_pool_models,
    pool_by_tag,
    splitmix64,
)
from .analyze import (
    BigramStats,
    CollocationTable,
    FrequencyList,
    PolarityLexicon,
    ReportParams,
    SideBySideReport,
    TagStats,
    build_bigram_stats,
    collocations,
    compare_sites,
    frequency_list,
    load_lexicon,
    pmi,
    polarity,
    quick_stats,
)
from .ingest import (
    Corpus,
    Gender,
    IngestStats,
    Post,
    SourceSite,
    extract_hashtags,
    parse_dcard_record,
    parse_weibo_page,
    read_corpus,
    strip_urls,
    write_corpus,
)
from .segment import (
    Dictionary,
    load_dictionary,
    make_fmm_tokenizer,
    segment_fmm,
    tokenize_corpus,
)
from .vectorspace import (
    LsiModel,
    SimilarityIndex,
    TfIdfModel,
    Vocabulary,
    build_index,
    build_vocabulary,
    cosine,
    fit_lsi,
    fit_tfidf,
    load_index,
    project_lsi,
    rank_by_similarity,
    save_index,
    to_bow,
    transform_tfidf,
)

__version__ = "0.1.0"
