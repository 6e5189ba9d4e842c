"""Per-lemma feature vectors aggregated from cue hits.

One vector summarizes all occurrences of a lemma: how many times each cue
fired around it, plus how often the lemma occurred as a noun at all. Zero
counts are meaningful and kept; lemmas never seen in the corpus get
all-zero vectors so that silent words still take part in evaluation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import Sentence
from .cues import CueSet, TARGET_FIRST_NOUN, match_sentence

EVENT = "EVENT"
NON_EVENT = "NON_EVENT"
LABELS = (EVENT, NON_EVENT)


def normalize_label(value: str) -> str:
    label = value.strip().upper()
    if label in LABELS:
        return label
    raise ValueError(f"unknown label: {value!r} (expected EVENT or NON_EVENT)")


@dataclass(frozen=True)
class FeatureVector:
    """Cue counts for one lemma. Counts are raw ints, or floats after
    :func:`to_relative`."""

    lemma: str
    counts: tuple[float, ...]
    total_occurrences: float

    def __post_init__(self):
        if any(c < 0 for c in self.counts) or self.total_occurrences < 0:
            raise ValueError(f"negative count for lemma {self.lemma!r}")
        if self.total_occurrences == 0 and any(c != 0 for c in self.counts):
            # every cue hit is an occurrence, so a never-seen lemma has no hits
            raise ValueError(f"lemma {self.lemma!r} has cue counts but no occurrences")

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.counts)


@dataclass(frozen=True)
class Dataset:
    """A fixed-order collection of feature vectors, optionally labeled."""

    cue_ids: tuple[str, ...]
    vectors: tuple[FeatureVector, ...]
    labels: Mapping[str, str] | None = None

    def __post_init__(self):
        lemmas = [v.lemma for v in self.vectors]
        if len(lemmas) != len(set(lemmas)):
            raise ValueError("duplicate lemmas in dataset")
        for v in self.vectors:
            if len(v.counts) != len(self.cue_ids):
                raise ValueError(
                    f"vector for {v.lemma!r} has {len(v.counts)} counts, "
                    f"expected {len(self.cue_ids)}")
        if self.labels is not None:
            missing = [l for l in lemmas if l not in self.labels]
            if missing:
                raise ValueError("vectors without labels: " + ", ".join(sorted(missing)))
            for label in self.labels.values():
                normalize_label(label)

    @property
    def n(self) -> int:
        return len(self.cue_ids)

    def __len__(self) -> int:
        return len(self.vectors)

    def label_of(self, lemma: str) -> str:
        if self.labels is None:
            raise ValueError("dataset is unlabeled")
        return self.labels[lemma]


def extract_features(corpus: Iterable[Sentence], cue_set: CueSet,
                     target_lemmas: Iterable[str], *,
                     target_policy: str = TARGET_FIRST_NOUN) -> Dataset:
    """Run the cue matcher over a corpus and aggregate counts per lemma.

    Single pass, so ``corpus`` may be a lazy stream. Vectors come out sorted
    by lemma. Target lemmas never observed yield all-zero vectors with a
    zero occurrence total.
    """
    targets = sorted(set(target_lemmas))
    if not targets:
        raise ValueError("target_lemmas must be non-empty")
    position = {cue_id: i for i, cue_id in enumerate(cue_set.cue_ids)}
    counts = {lemma: [0] * cue_set.n for lemma in targets}
    totals = dict.fromkeys(targets, 0)
    for sentence_index, sentence in enumerate(corpus):
        for token in sentence:
            if token.coarse == "NOUN" and token.lemma in totals:
                totals[token.lemma] += 1
        for hit in match_sentence(sentence, cue_set,
                                  sentence_index=sentence_index,
                                  target_policy=target_policy):
            if hit.lemma in counts:
                counts[hit.lemma][position[hit.cue_id]] += 1
    vectors = tuple(
        FeatureVector(lemma, tuple(counts[lemma]), totals[lemma])
        for lemma in targets)
    return Dataset(cue_set.cue_ids, vectors)


def to_relative(dataset: Dataset) -> Dataset:
    """Replace each count by count / max(total_occurrences, 1).

    Zero-total vectors stay all-zero; the guarded denominator never divides
    by zero.
    """
    vectors = tuple(
        FeatureVector(v.lemma,
                      tuple(c / max(v.total_occurrences, 1) for c in v.counts),
                      v.total_occurrences)
        for v in dataset.vectors)
    return Dataset(dataset.cue_ids, vectors, dataset.labels)


def attach_labels(dataset: Dataset, gold: Mapping[str, str]) -> Dataset:
    """Label a dataset with a gold standard.

    Every dataset lemma must appear in the gold map. Gold lemmas absent
    from the dataset are added as all-zero vectors: silent words must still
    participate in cross-validation.
    """
    gold = {lemma: normalize_label(label) for lemma, label in gold.items()}
    missing = sorted(v.lemma for v in dataset.vectors if v.lemma not in gold)
    if missing:
        raise ValueError("dataset lemmas missing from gold standard: "
                         + ", ".join(missing))
    seen = {v.lemma for v in dataset.vectors}
    zero = tuple([0] * dataset.n)
    extra = tuple(FeatureVector(lemma, zero, 0)
                  for lemma in sorted(gold) if lemma not in seen)
    vectors = tuple(sorted(dataset.vectors + extra, key=lambda v: v.lemma))
    labels = {v.lemma: gold[v.lemma] for v in vectors}
    return Dataset(dataset.cue_ids, vectors, labels)


# --- CSV round trip ---------------------------------------------------------

def _format_number(value: float) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _parse_number(text: str) -> float:
    try:
        return int(text)
    except ValueError:
        return float(text)


def write_dataset_csv(dataset: Dataset, path: str) -> None:
    """Write ``lemma,total,<cue ids...>[,label]`` rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = ["lemma", "total", *dataset.cue_ids]
        if dataset.labels is not None:
            header.append("label")
        writer.writerow(header)
        for v in dataset.vectors:
            row = [v.lemma, _format_number(v.total_occurrences),
                   *(_format_number(c) for c in v.counts)]
            if dataset.labels is not None:
                row.append(dataset.labels[v.lemma])
            writer.writerow(row)


def read_dataset_csv(path: str) -> Dataset:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty dataset file") from None
        if header[:2] != ["lemma", "total"]:
            raise ValueError(f"{path}: bad dataset header {header[:2]!r}")
        labeled = header[-1] == "label"
        cue_ids = tuple(header[2:-1] if labeled else header[2:])
        vectors = []
        labels: dict[str, str] = {}
        for row in reader:
            if not row:
                continue
            expected = 2 + len(cue_ids) + (1 if labeled else 0)
            if len(row) != expected:
                raise ValueError(f"{path}: row for {row[0]!r} has {len(row)} "
                                 f"fields, expected {expected}")
            lemma = row[0]
            total = _parse_number(row[1])
            counts = tuple(_parse_number(c) for c in row[2:2 + len(cue_ids)])
            vectors.append(FeatureVector(lemma, counts, total))
            if labeled:
                labels[lemma] = normalize_label(row[-1])
    return Dataset(cue_ids, tuple(vectors), labels if labeled else None)
