"""Raw multidimensional time series: data model, CSV interchange, synthesis.

The on-disk interchange format is a long-form CSV (UTF-8, LF line endings):

    sample_id,label,t,dim_0,...,dim_{D-1}

- ``label`` may be empty for unlabeled samples,
- ``t`` is a 0-based integer that must cover 0..T_i-1 for every sample,
- floats are serialized via ``repr`` (shortest round-trip form, at most 17
  significant digits), so load -> write -> load is a fixed point.

Synthetic datasets are described by a small YAML spec (see ``load_synth_spec``)
and realized as piecewise-linear per-dimension trends plus uniform noise.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .errors import (
    EmptyDatasetError,
    EmptySpecError,
    InvalidTargetError,
    MalformedDatasetError,
    ParseError,
    SchemaError,
)

__all__ = [
    "MtsSample",
    "MtsDataset",
    "SynthSpec",
    "load_csv",
    "write_csv",
    "normalize_sample",
    "pad_to_length",
    "generate_synthetic",
    "noiseless_trend",
    "load_synth_spec",
]

DIRECTIONS = {"up": 1, "flat": 0, "down": -1}


@dataclass(frozen=True, eq=False)
class MtsSample:
    """One multidimensional sample: a dimension-major (D, T) matrix of reals.

    All values must be finite, every dimension must have the same length,
    and at least two time points are required (a single point has no motion).
    """

    id: str
    label: str | None
    values: np.ndarray

    def __post_init__(self) -> None:
        try:
            arr = np.asarray(self.values, dtype=np.float64)
        except (ValueError, TypeError) as exc:
            raise MalformedDatasetError(
                f"sample {self.id!r}: values are not a rectangular numeric matrix: {exc}"
            ) from None
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise MalformedDatasetError(
                f"sample {self.id!r}: values must be a dimension-major 2-d matrix"
            )
        if arr.shape[1] < 2:
            raise MalformedDatasetError(
                f"sample {self.id!r}: needs at least 2 time points, got {arr.shape[1]}"
            )
        if not np.all(np.isfinite(arr)):
            raise MalformedDatasetError(f"sample {self.id!r}: values must be finite")
        if arr is self.values:
            arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def dims(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class MtsDataset:
    """An ordered collection of samples sharing one dimension count."""

    samples: tuple[MtsSample, ...]

    def __post_init__(self) -> None:
        samples = tuple(self.samples)
        object.__setattr__(self, "samples", samples)
        if not samples:
            raise EmptyDatasetError("dataset contains no samples")
        dims = samples[0].dims
        for s in samples:
            if s.dims != dims:
                raise SchemaError(
                    f"sample {s.id!r} has {s.dims} dimensions, expected {dims}"
                )
        ids = [s.id for s in samples]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise MalformedDatasetError(f"duplicate sample ids: {dupes}")

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @property
    def dims(self) -> int:
        return self.samples[0].dims

    @property
    def t_max(self) -> int:
        return max(s.length for s in self.samples)

    @property
    def label_set(self) -> tuple[str, ...]:
        return tuple(sorted({s.label for s in self.samples if s.label is not None}))

    def by_id(self, sample_id: str) -> MtsSample:
        for s in self.samples:
            if s.id == sample_id:
                return s
        raise KeyError(sample_id)


def normalize_sample(sample: MtsSample) -> MtsSample:
    """Min-max scale each dimension independently to [0, 1].

    A constant dimension maps to all zeros so downstream symbolization sees a
    motionless coordinate instead of NaNs.
    """
    v = sample.values
    lo = v.min(axis=1, keepdims=True)
    span = v.max(axis=1, keepdims=True) - lo
    out = np.zeros_like(v)
    active = span[:, 0] > 0.0
    out[active] = (v[active] - lo[active]) / span[active]
    return MtsSample(sample.id, sample.label, out)


def pad_to_length(sample: MtsSample, length: int) -> MtsSample:
    """Extend every dimension to ``length`` by repeating its final value."""
    if length < sample.length:
        raise InvalidTargetError(
            f"sample {sample.id!r}: target length {length} < observed length {sample.length}"
        )
    if length == sample.length:
        return sample
    tail = np.repeat(sample.values[:, -1:], length - sample.length, axis=1)
    return MtsSample(sample.id, sample.label, np.hstack([sample.values, tail]))


# ---------------------------------------------------------------------------
# CSV interchange
# ---------------------------------------------------------------------------


def _expected_header(dims: int) -> list[str]:
    return ["sample_id", "label", "t"] + [f"dim_{d}" for d in range(dims)]


def load_csv(path: str | Path) -> MtsDataset:
    """Load a long-form dataset CSV.

    Samples appear in the order their first row appears; rows within a sample
    are sorted by ``t`` and must cover 0..T_i-1 with no gaps or duplicates.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty, expected a header row") from None
        if len(header) < 4 or header[:3] != ["sample_id", "label", "t"]:
            raise SchemaError(
                f"{path}: header must start with sample_id,label,t,dim_0,..."
            )
        dims = len(header) - 3
        if header != _expected_header(dims):
            raise SchemaError(
                f"{path}: dimension columns must be named dim_0..dim_{dims - 1} in order"
            )

        order: list[str] = []
        rows: dict[str, list[tuple[int, list[float]]]] = {}
        labels: dict[str, str | None] = {}
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise SchemaError(
                    f"{path}: row {row_num}: expected {len(header)} fields, got {len(row)}"
                )
            sid = row[0]
            label = row[1] if row[1] != "" else None
            try:
                t = int(row[2])
            except ValueError:
                raise ParseError(
                    f"{path}: row {row_num}: t value {row[2]!r} is not an integer"
                ) from None
            try:
                cells = [float(c) for c in row[3:]]
            except ValueError:
                raise ParseError(
                    f"{path}: row {row_num}: non-numeric value in {row[3:]!r}"
                ) from None
            if sid not in rows:
                order.append(sid)
                rows[sid] = []
                labels[sid] = label
            elif labels[sid] != label:
                raise MalformedDatasetError(
                    f"{path}: sample {sid!r} carries conflicting labels"
                )
            rows[sid].append((t, cells))

    if not order:
        raise EmptyDatasetError(f"{path}: no data rows after the header")

    samples = []
    for sid in order:
        entries = sorted(rows[sid], key=lambda e: e[0])
        ts = [t for t, _ in entries]
        if ts != list(range(len(ts))):
            raise MalformedDatasetError(
                f"{path}: sample {sid!r}: t values must cover 0..{len(ts) - 1} "
                f"without gaps or duplicates, got {ts}"
            )
        matrix = np.array([cells for _, cells in entries], dtype=np.float64).T
        samples.append(MtsSample(sid, labels[sid], matrix))
    return MtsDataset(tuple(samples))


def write_csv(dataset: MtsDataset, path: str | Path) -> None:
    """Write a dataset in the long-form CSV interchange format."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_expected_header(dataset.dims))
        for s in dataset.samples:
            label = s.label if s.label is not None else ""
            for t in range(s.length):
                writer.writerow(
                    [s.id, label, t] + [repr(float(x)) for x in s.values[:, t]]
                )


# ---------------------------------------------------------------------------
# Synthetic generation
# ---------------------------------------------------------------------------

Segment = tuple[str, int]
Motif = tuple[tuple[Segment, ...], ...]


def _coerce_motif(motif) -> Motif:
    try:
        coerced = tuple(
            tuple((str(direction), int(seg_len)) for direction, seg_len in dim_segments)
            for dim_segments in motif
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"motif is not a list of [direction, length] segments: {exc}") from None
    if not coerced or any(not dim for dim in coerced):
        raise SchemaError("motif must list at least one segment per dimension")
    for dim_segments in coerced:
        for direction, seg_len in dim_segments:
            if direction not in DIRECTIONS:
                raise SchemaError(f"unknown trend direction {direction!r}")
            if seg_len < 1:
                raise SchemaError(f"segment length must be >= 1, got {seg_len}")
    return coerced


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a seeded synthetic dataset.

    Each class is a (label, motif) pair; a motif lists, per dimension, trend
    segments of the form (direction, length) with direction one of
    ``up``/``flat``/``down``. Segments are tiled cyclically over the T-1 steps
    of every sample, each step moving by ``step_size`` in the trend direction,
    and i.i.d. uniform noise in [-noise_amplitude, +noise_amplitude] is added
    per observation.

    With ``separable=True`` the spec additionally guarantees symbol-level
    class separability: noise must stay below half a step, and the tiled
    direction sequences of distinct classes must differ somewhere.
    """

    classes: tuple[tuple[str, Motif], ...]
    samples_per_class: int
    length: int
    noise_amplitude: float
    seed: int
    step_size: float = 1.0
    separable: bool = False

    def __post_init__(self) -> None:
        classes = tuple((str(label), _coerce_motif(motif)) for label, motif in self.classes)
        object.__setattr__(self, "classes", classes)
        if not classes or self.samples_per_class < 1:
            raise EmptySpecError("need at least one class and one sample per class")
        if self.length < 2:
            raise SchemaError(f"length must be >= 2, got {self.length}")
        if self.noise_amplitude < 0:
            raise SchemaError("noise_amplitude must be >= 0")
        if self.step_size <= 0:
            raise SchemaError("step_size must be > 0")
        labels = [label for label, _ in classes]
        if len(set(labels)) != len(labels):
            raise SchemaError("class labels must be distinct")
        motifs = [motif for _, motif in classes]
        if len(set(motifs)) != len(motifs):
            raise SchemaError("motifs of distinct classes must be distinct")
        dims = len(motifs[0])
        if any(len(m) != dims for m in motifs):
            raise SchemaError("every class motif must cover the same dimensions")
        if self.separable:
            if not self.noise_amplitude < self.step_size / 2.0:
                raise SchemaError(
                    "separable mode requires noise_amplitude < step_size / 2"
                )
            tiled = [self._tiled_steps(motif) for motif in motifs]
            for i in range(len(tiled)):
                for j in range(i + 1, len(tiled)):
                    if tiled[i] == tiled[j]:
                        raise SchemaError(
                            f"separable mode: classes {labels[i]!r} and {labels[j]!r} "
                            "tile to identical direction sequences"
                        )

    @property
    def dims(self) -> int:
        return len(self.classes[0][1])

    def _tiled_steps(self, motif: Motif) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(_tile_directions(dim_segments, self.length - 1))
            for dim_segments in motif
        )


def _tile_directions(dim_segments: tuple[Segment, ...], n_steps: int) -> list[int]:
    pattern = [DIRECTIONS[d] for d, seg_len in dim_segments for _ in range(seg_len)]
    return [pattern[t % len(pattern)] for t in range(n_steps)]


def noiseless_trend(motif, length: int, step_size: float = 1.0) -> np.ndarray:
    """Realize a motif as a (D, T) piecewise-linear trend starting at zero."""
    motif = _coerce_motif(motif)
    trend = np.zeros((len(motif), length), dtype=np.float64)
    for d, dim_segments in enumerate(motif):
        steps = _tile_directions(dim_segments, length - 1)
        trend[d, 1:] = np.cumsum(np.asarray(steps, dtype=np.float64) * step_size)
    return trend


def generate_synthetic(spec: SynthSpec) -> MtsDataset:
    """Generate a dataset from a spec; identical specs yield identical data."""
    rng = np.random.default_rng(spec.seed)
    samples = []
    for label, motif in spec.classes:
        trend = noiseless_trend(motif, spec.length, spec.step_size)
        for k in range(spec.samples_per_class):
            values = trend + rng.uniform(
                -spec.noise_amplitude, spec.noise_amplitude, size=trend.shape
            )
            samples.append(MtsSample(f"{label}_{k:03d}", label, values))
    return MtsDataset(tuple(samples))


_SPEC_KEYS = {
    "classes",
    "samples_per_class",
    "length",
    "noise_amplitude",
    "seed",
    "step_size",
    "separable",
}


def load_synth_spec(path: str | Path) -> SynthSpec:
    """Read a synthetic spec from a YAML (or JSON) file.

    Expected shape::

        classes:
          - label: short-run
            motif:
              - [[up, 2], [down, 2]]   # dimension 0 segments
              - [[up, 4], [down, 4]]   # dimension 1 segments
        samples_per_class: 100
        length: 100
        noise_amplitude: 0.4
        seed: 7
        step_size: 1.0      # optional, default 1.0
        separable: true     # optional, default false
    """
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: not valid YAML: {exc}") from None
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: top level must be a mapping")
    unknown = set(raw) - _SPEC_KEYS
    if unknown:
        raise SchemaError(f"{path}: unknown keys {sorted(unknown)}")
    missing = {"classes", "samples_per_class", "length", "noise_amplitude", "seed"} - set(raw)
    if missing:
        raise SchemaError(f"{path}: missing keys {sorted(missing)}")
    if not isinstance(raw["classes"], list):
        raise SchemaError(f"{path}: 'classes' must be a list")
    classes = []
    for entry in raw["classes"]:
        if not isinstance(entry, dict) or set(entry) != {"label", "motif"}:
            raise SchemaError(
                f"{path}: each class must be a mapping with exactly 'label' and 'motif'"
            )
        classes.append((entry["label"], entry["motif"]))
    try:
        return SynthSpec(
            classes=tuple(classes),
            samples_per_class=int(raw["samples_per_class"]),
            length=int(raw["length"]),
            noise_amplitude=float(raw["noise_amplitude"]),
            seed=int(raw["seed"]),
            step_size=float(raw.get("step_size", 1.0)),
            separable=bool(raw.get("separable", False)),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: {exc}") from None
