"""Build Egyptian Arabic stopword lists from social posts and measure their effect on sentiment classifiers."""
from .classify import (DTConfig, DTModel, NBModel, dt_classify, dt_train, entropy,
                       nb_classify, nb_train)
from .corpus import (CleanCorpus, FilterReport, RawRecord, annotate_from_rating, clean_corpus,
                     drop_neutral, load_corpus, run_cascade)
from .evaldrive import (ConfusionMatrix, GridConfig, SplitSpec, accuracy, f_measure,
                        make_folds, precision_recall, run_cell, run_grid, split_train_test)
from .features import FeatureSet, bigram_features, remove_stopwords, unigram_features
from .stoplist import (ExpansionRules, StopwordList, auto_validate, expand_list, expand_word,
                       extract_candidates, generate_variants, load_list, merge_lists,
                       review_candidates, save_list)
from .textnorm import (FrequencyTable, build_frequency_table, fold_variants, strip_diacritics,
                       tokenize, top_k)

__version__ = "0.1.0"
