"""Spatial-change events: turn normalized samples into 1-d code sequences.

Each step of each dimension gets a motion symbol: +1 when the value rises by
more than ``delta``, -1 when it falls by more than ``delta``, 0 inside the
dead zone (|difference| <= delta). The D per-dimension symbols at one step
combine into a single event code via base-3 positional encoding with
dimension 0 least significant, so the alphabet has exactly 3**D codes and
encoding is a bijection.

Event sequences are stored as a CSV (``sample_id,label,t,event_code``) plus a
companion ``<path>.meta.json`` holding the dimension count and delta, which
makes decoding self-contained.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset import MtsDataset, MtsSample, normalize_sample, pad_to_length
from .errors import InvalidCodeError, MalformedDatasetError, ParseError, SchemaError, TooShortError

__all__ = [
    "SymbolizerConfig",
    "EventSequence",
    "alphabet_size",
    "symbolize_dimension",
    "encode_event",
    "decode_event",
    "symbolize_sample",
    "convert_dataset",
    "explain_event",
    "explain_tuple",
    "write_events",
    "load_events",
]

_SYMBOL_WORDS = {1: "up", 0: "flat", -1: "down"}


@dataclass(frozen=True)
class SymbolizerConfig:
    """Flatness threshold on normalized step differences."""

    delta: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")


@dataclass(frozen=True)
class EventSequence:
    """Event codes for one sample; always one code per step, so T-1 of them."""

    sample_id: str
    label: str | None
    dims: int
    codes: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dims < 1:
            raise ValueError("dims must be >= 1")
        codes = tuple(int(c) for c in self.codes)
        object.__setattr__(self, "codes", codes)
        if not codes:
            raise TooShortError(f"sequence {self.sample_id!r} has no events")
        n = alphabet_size(self.dims)
        for c in codes:
            if not 0 <= c < n:
                raise InvalidCodeError(
                    f"sequence {self.sample_id!r}: code {c} outside [0, {n})"
                )

    def __len__(self) -> int:
        return len(self.codes)


def alphabet_size(dims: int) -> int:
    """Number of distinct event codes for ``dims`` dimensions (3**dims)."""
    if dims < 1:
        raise ValueError("dims must be >= 1")
    return 3**dims


def symbolize_dimension(x: Sequence[float] | np.ndarray, delta: float) -> list[int]:
    """Motion symbols for one normalized coordinate sequence.

    Needs at least two points; values must already lie in [0, 1]. A step
    difference of exactly ``delta`` counts as flat.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise TooShortError(f"need at least 2 points in one dimension, got shape {arr.shape}")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("values must be normalized to [0, 1] before symbolization")
    SymbolizerConfig(delta)
    diffs = np.diff(arr)
    symbols = np.where(diffs > delta, 1, np.where(diffs < -delta, -1, 0))
    return [int(s) for s in symbols]


def encode_event(symbols: Sequence[int]) -> int:
    """Base-3 code of one D-tuple of motion symbols (dimension 0 least significant)."""
    code = 0
    weight = 1
    for s in symbols:
        if s not in (-1, 0, 1):
            raise ValueError(f"motion symbols must be -1, 0, or 1, got {s}")
        code += (s + 1) * weight
        weight *= 3
    if weight == 1:
        raise ValueError("need at least one motion symbol")
    return code


def decode_event(code: int, dims: int) -> tuple[int, ...]:
    """Inverse of :func:`encode_event`; raises on codes outside the alphabet."""
    n = alphabet_size(dims)
    if not 0 <= code < n:
        raise InvalidCodeError(f"code {code} outside [0, {n}) for {dims} dimensions")
    symbols = []
    for _ in range(dims):
        symbols.append(code % 3 - 1)
        code //= 3
    return tuple(symbols)


def symbolize_sample(sample: MtsSample, config: SymbolizerConfig) -> EventSequence:
    """Convert one normalized sample into its event-code sequence."""
    v = sample.values
    if v.min() < 0.0 or v.max() > 1.0:
        raise ValueError(
            f"sample {sample.id!r}: values must be normalized to [0, 1] before symbolization"
        )
    diffs = np.diff(v, axis=1)
    symbols = np.where(diffs > config.delta, 1, np.where(diffs < -config.delta, -1, 0))
    weights = 3 ** np.arange(sample.dims, dtype=np.int64)
    codes = weights @ (symbols + 1)
    return EventSequence(
        sample_id=sample.id,
        label=sample.label,
        dims=sample.dims,
        codes=tuple(int(c) for c in codes),
    )


def convert_dataset(
    dataset: MtsDataset, config: SymbolizerConfig, pad: bool = False, jobs: int = 1
) -> list[EventSequence]:
    """Normalize (optionally pad to the dataset maximum) and symbolize all samples.

    Samples are independent, so with ``jobs`` > 1 this is a thread map; output
    order always matches dataset order.
    """
    target = dataset.t_max

    def prep(sample: MtsSample) -> EventSequence:
        if pad:
            sample = pad_to_length(sample, target)
        return symbolize_sample(normalize_sample(sample), config)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(prep, dataset.samples))
    return [prep(s) for s in dataset.samples]


def explain_event(code: int, dims: int, dim_names: Sequence[str] | None = None) -> str:
    """Human-readable reading of one event code, e.g. ``dim_0: up, dim_1: flat``."""
    if dim_names is None:
        dim_names = [f"dim_{d}" for d in range(dims)]
    elif len(dim_names) != dims:
        raise ValueError(f"expected {dims} dimension names, got {len(dim_names)}")
    symbols = decode_event(code, dims)
    return ", ".join(f"{name}: {_SYMBOL_WORDS[s]}" for name, s in zip(dim_names, symbols))


def explain_tuple(
    codes: Sequence[int], dims: int, dim_names: Sequence[str] | None = None
) -> str:
    """Stepwise reading of a code tuple, steps joined by `` -> ``."""
    return " -> ".join(explain_event(c, dims, dim_names) for c in codes)


# ---------------------------------------------------------------------------
# Event sequence files
# ---------------------------------------------------------------------------


def _meta_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def write_events(
    sequences: Sequence[EventSequence], config: SymbolizerConfig, path: str | Path
) -> None:
    """Write event sequences as CSV plus a ``.meta.json`` companion."""
    path = Path(path)
    if not sequences:
        raise MalformedDatasetError("no event sequences to write")
    dims = sequences[0].dims
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sample_id", "label", "t", "event_code"])
        for seq in sequences:
            label = seq.label if seq.label is not None else ""
            for t, code in enumerate(seq.codes):
                writer.writerow([seq.sample_id, label, t, code])
    meta = {"dims": dims, "delta": config.delta}
    _meta_path(path).write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def load_events(path: str | Path) -> tuple[list[EventSequence], SymbolizerConfig, int]:
    """Load event sequences; returns (sequences, symbolizer config, dims)."""
    path = Path(path)
    meta_file = _meta_path(path)
    if not meta_file.exists():
        raise SchemaError(f"{meta_file}: companion metadata file is missing")
    meta = json.loads(meta_file.read_text(encoding="utf-8"))
    try:
        dims = int(meta["dims"])
        config = SymbolizerConfig(float(meta["delta"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{meta_file}: bad metadata: {exc}") from None

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["sample_id", "label", "t", "event_code"]:
            raise SchemaError(f"{path}: header must be sample_id,label,t,event_code")
        order: list[str] = []
        rows: dict[str, list[tuple[int, int]]] = {}
        labels: dict[str, str | None] = {}
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise SchemaError(f"{path}: row {row_num}: expected 4 fields")
            sid, label_cell = row[0], row[1] if row[1] != "" else None
            try:
                t, code = int(row[2]), int(row[3])
            except ValueError:
                raise ParseError(f"{path}: row {row_num}: non-integer t or event_code") from None
            if sid not in rows:
                order.append(sid)
                rows[sid] = []
                labels[sid] = label_cell
            elif labels[sid] != label_cell:
                raise MalformedDatasetError(f"{path}: sample {sid!r} carries conflicting labels")
            rows[sid].append((t, code))
    if not order:
        raise MalformedDatasetError(f"{path}: no event rows after the header")

    sequences = []
    for sid in order:
        entries = sorted(rows[sid], key=lambda e: e[0])
        ts = [t for t, _ in entries]
        if ts != list(range(len(ts))):
            raise MalformedDatasetError(
                f"{path}: sample {sid!r}: t values must cover 0..{len(ts) - 1}"
            )
        sequences.append(
            EventSequence(
                sample_id=sid,
                label=labels[sid],
                dims=dims,
                codes=tuple(code for _, code in entries),
            )
        )
    return sequences, config, dims
