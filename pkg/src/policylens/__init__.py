"""policylens: classify data-collection statements in privacy policies into
quality-attribute categories and render annotated, color-coded policies."""

from .corpus import (
    Corpus,
    CorpusStats,
    NfrLabel,
    PolicyDocument,
    Statement,
    corpus_stats,
    flesch_reading_ease,
    load_corpus,
    save_corpus,
    segment,
    serialize_corpus,
)
from .learner import (
    BrModel,
    LinearModel,
    SvmHyperparams,
    decision,
    predict_binary,
    predict_labels,
    train_binary_relevance,
    train_linear_svm,
)
from .evaluation import (
    EvalReport,
    cross_validate,
    hamming_loss,
    hamming_score,
    kfold_split,
    precision_recall_f2,
    subset_accuracy,
)
from .textprep import StopWordList, lemmatize, load_stop_words, preprocess, tokenize
from .vectorize import (
    EmbeddingTable,
    FeatureVector,
    TfidfVectorizer,
    cosine_similarity,
    embed_average,
    fit_tfidf,
    load_embeddings,
    transform_tfidf,
)
from .annotator import AnnotatedDocument, annotate_document, render_html, render_json

__version__ = "0.1.0"
