from .models import Leaning, Origin, Sentence, SentenceLabel, Topic
from .stopwords import DEFAULT_STOPWORDS, is_stopword, load_stopwords
from .store import BASELINE_COLUMNS, ContentStore, ImportReport, RowError, normalize_text, pool_ratio_warning
from .tokenizer import Token, tokenize

__all__ = [
    "BASELINE_COLUMNS",
    "ContentStore",
    "DEFAULT_STOPWORDS",
    "ImportReport",
    "Leaning",
    "Origin",
    "RowError",
    "Sentence",
    "SentenceLabel",
    "Token",
    "Topic",
    "is_stopword",
    "load_stopwords",
    "normalize_text",
    "pool_ratio_warning",
    "tokenize",
]
