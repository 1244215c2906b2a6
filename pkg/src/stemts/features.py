"""Feature vocabularies and per-sample occurrence vectors.

A vocabulary freezes mined tuples in a canonical order (shortest first, then
lexicographic by codes) together with the context that produced them. A
sequence maps to a dense vector with one entry per tuple: overlapping
occurrence count divided by the number of window positions of that length,
which keeps every entry in [0, 1] and removes sequence-length bias. Tuples
longer than the sequence contribute 0. Codes not covered by any vocabulary
tuple are simply ignored.
"""

from __future__ import annotations

import json
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DuplicateFeatureError,
    IncompatibleVocabularyError,
    InvalidCodeError,
    SchemaError,
)
from .events import EventSequence, alphabet_size
from .mining import EventTuple, MinerConfig

__all__ = [
    "FeatureVocabulary",
    "FeatureVector",
    "build_vocabulary",
    "full_alphabet_vocabulary",
    "vectorize",
    "vectorize_dataset",
    "save_vocabulary",
    "load_vocabulary",
    "write_feature_matrix",
]


@dataclass(frozen=True, eq=False)
class FeatureVocabulary:
    """Ordered mined tuples plus the configuration that produced them."""

    features: tuple[EventTuple, ...]
    dims: int
    delta: float | None = None
    miner: MinerConfig | None = None
    index: dict[EventTuple, int] = field(init=False, repr=False)
    _by_length: dict[int, dict[EventTuple, int]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        index = {tup: i for i, tup in enumerate(self.features)}
        by_length: dict[int, dict[EventTuple, int]] = {}
        for tup, i in index.items():
            by_length.setdefault(len(tup), {})[tup] = i
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_by_length", by_length)

    def __len__(self) -> int:
        return len(self.features)


def build_vocabulary(
    features: Sequence[EventTuple],
    dims: int,
    delta: float | None = None,
    miner: MinerConfig | None = None,
) -> FeatureVocabulary:
    """Canonicalize a feature list into a vocabulary.

    Ordering is length ascending then lexicographic by codes, regardless of
    input order. Duplicates are an error; an empty list is allowed but warns,
    since every vector over it is empty.
    """
    canon = [tuple(int(c) for c in tup) for tup in features]
    if len(set(canon)) != len(canon):
        counts = Counter(canon)
        dupes = sorted(t for t, c in counts.items() if c > 1)
        raise DuplicateFeatureError(f"duplicate feature tuples: {dupes}")
    n = alphabet_size(dims)
    for tup in canon:
        if not tup:
            raise ValueError("feature tuples must be non-empty")
        for code in tup:
            if not 0 <= code < n:
                raise InvalidCodeError(f"feature {tup}: code {code} outside [0, {n})")
    if not canon:
        warnings.warn("building an empty vocabulary; all vectors will have length 0")
    canon.sort(key=lambda t: (len(t), t))
    return FeatureVocabulary(features=tuple(canon), dims=dims, delta=delta, miner=miner)


def full_alphabet_vocabulary(dims: int, delta: float | None = None) -> FeatureVocabulary:
    """All 3**dims single-code tuples; the 1-gram histogram feature space."""
    return build_vocabulary(
        [(code,) for code in range(alphabet_size(dims))], dims=dims, delta=delta
    )


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Normalized occurrence frequencies for one sample, in vocabulary order."""

    sample_id: str
    label: str | None
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr is self.values:
            arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)


def vectorize(seq: EventSequence, vocab: FeatureVocabulary) -> FeatureVector:
    """Count overlapping occurrences of each vocabulary tuple, normalized.

    Entry j is count / (len(codes) - len(tuple_j) + 1); a tuple longer than
    the sequence scores 0 because it has no window positions at all.
    """
    if seq.dims != vocab.dims:
        raise IncompatibleVocabularyError(
            f"sequence has {seq.dims} dimensions, vocabulary expects {vocab.dims}"
        )
    values = np.zeros(len(vocab.features), dtype=np.float64)
    codes = seq.codes
    for length, table in vocab._by_length.items():
        positions = len(codes) - length + 1
        if positions <= 0:
            continue
        for start in range(positions):
            j = table.get(codes[start : start + length])
            if j is not None:
                values[j] += 1.0
        for j in table.values():
            values[j] /= positions
    return FeatureVector(sample_id=seq.sample_id, label=seq.label, values=values)


def vectorize_dataset(
    sequences: Sequence[EventSequence], vocab: FeatureVocabulary
) -> list[FeatureVector]:
    """Vectorize many sequences, preserving order."""
    out = []
    for seq in sequences:
        try:
            out.append(vectorize(seq, vocab))
        except IncompatibleVocabularyError as exc:
            raise IncompatibleVocabularyError(f"sample {seq.sample_id!r}: {exc}") from None
    return out


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------


def save_vocabulary(vocab: FeatureVocabulary, path: str | Path) -> None:
    """Write a vocabulary with its context; load_vocabulary inverts exactly."""
    miner = None
    if vocab.miner is not None:
        miner = {
            "min_support": vocab.miner.min_support,
            "max_len": vocab.miner.max_len,
            "gain_gamma": vocab.miner.gain_gamma,
        }
    payload = {
        "dims": vocab.dims,
        "delta": vocab.delta,
        "miner": miner,
        "features": [list(t) for t in vocab.features],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_vocabulary(path: str | Path) -> FeatureVocabulary:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    try:
        miner = None
        if payload["miner"] is not None:
            miner = MinerConfig(
                min_support=payload["miner"]["min_support"],
                max_len=payload["miner"]["max_len"],
                gain_gamma=payload["miner"]["gain_gamma"],
            )
        features = [tuple(int(c) for c in t) for t in payload["features"]]
        delta = payload["delta"]
        return FeatureVocabulary(
            features=tuple(features),
            dims=int(payload["dims"]),
            delta=None if delta is None else float(delta),
            miner=miner,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: bad vocabulary file: {exc}") from None


def write_feature_matrix(vectors: Sequence[FeatureVector], path: str | Path) -> None:
    """Write vectors as CSV: sample_id,label,f_0,...,f_{K-1}."""
    import csv

    path = Path(path)
    width = len(vectors[0]) if vectors else 0
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sample_id", "label"] + [f"f_{j}" for j in range(width)])
        for vec in vectors:
            label = vec.label if vec.label is not None else ""
            writer.writerow([vec.sample_id, label] + [repr(float(v)) for v in vec.values])
