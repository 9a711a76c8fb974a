"""Top-k keyword and document extraction benchmark.

Thin Python surface over the C++ core: corpus generation and ingestion,
top-k evaluation over both layouts, selectivity, plan descriptions, and the
measurement protocol.
"""

from ._core import (
    Corpus,
    __version__,
    generate_jsonl,
    plan_json,
    plan_sql,
    preprocess_text,
    published_complexity,
)

__all__ = [
    "Corpus",
    "__version__",
    "generate_jsonl",
    "plan_json",
    "plan_sql",
    "preprocess_text",
    "published_complexity",
]
