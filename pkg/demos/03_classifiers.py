"""Train both classifiers on a toy problem and look inside them."""
import math

from edstop.classify import DTConfig, dt_classify, dt_train, entropy, nb_classify, nb_posterior, nb_train
from edstop.features import extract_features, remove_stopwords
from edstop.textnorm import tokenize

docs = [
    ("الفيلم ده حلو اوي", "positive"),
    ("بس الفيلم جميل جدا", "positive"),
    ("القصة ممتعة و حلو", "positive"),
    ("الفيلم ده وحش اوي", "negative"),
    ("بس القصة مملة جدا", "negative"),
    ("الممثل وحش و ممل", "negative"),
]
stop = {"ده", "بس", "اوي", "جدا", "و"}

examples = []
for text, label in docs:
    tokens = remove_stopwords(tokenize(text), stop)
    examples.append((extract_features(tokens, "unigram"), label))
    print(f"{label:<9} {' '.join(tokens)}")

nb = nb_train(examples)
print(f"\nP(حلو | positive) = {nb.likelihood('حلو', 'positive'):.3f}")
print(f"P(حلو | negative) = {nb.likelihood('حلو', 'negative'):.3f}")

query = extract_features(tokenize("الفيلم حلو"), "unigram")
label, scores = nb_classify(nb, query)
post = nb_posterior(nb, query)
print(f"'الفيلم حلو' -> {label}  (posterior {post[label]:.3f})")

# bigrams are built after stopword removal, so removal creates new pairs
print("\nbigrams of 'حلو بس اوي جميل':", sorted(extract_features(remove_stopwords(
    tokenize("حلو بس اوي جميل"), stop), "bigram")))

print(f"\nentropy of a 3:1 split: {entropy([3, 1]):.4f} bits")
tree = dt_train(examples, DTConfig(entropy_cutoff=0.0, support_cutoff=0))
print(f"unpruned tree: depth {tree.depth()}, {tree.node_count()} nodes")
print("training accuracy:", sum(dt_classify(tree, x) == y for x, y in examples) / len(examples))
default_tree = dt_train(examples)
print(f"with default cutoffs the tree is a single leaf: {default_tree.root}")
