import numpy as np
import pytest

from stemts import EventSequence, MtsSample, SynthSpec


@pytest.fixture
def toy_sequences():
    """The two-sequence mining example worked through by hand in test_mining."""
    return [
        EventSequence("A", None, 2, (4, 8, 4, 8)),
        EventSequence("B", None, 2, (4, 8, 0)),
    ]


def make_sample(values, sample_id="s", label=None):
    return MtsSample(sample_id, label, np.asarray(values, dtype=float))


def random_event_sequences(rng, n_seqs, max_len, dims):
    """Small random instances for miner equivalence checks."""
    n_codes = 3**dims
    seqs = []
    for i in range(n_seqs):
        length = int(rng.integers(1, max_len + 1))
        codes = tuple(int(c) for c in rng.integers(0, n_codes, size=length))
        seqs.append(EventSequence(f"s{i}", None, dims, codes))
    return seqs


def run_length_spec(noise, samples_per_class=100, length=100, seed=7):
    """Four 3-d classes whose oscillation run lengths differ (2/3/4/6 steps).

    All classes move up half the time and down the other half, so 1-gram code
    histograms barely separate them while longer tuples do. Noise is in units
    of the unit step size, so 0.4 means 0.4 of a step.
    """

    def motif(run):
        return ((("up", run), ("down", run)),) * 3

    return SynthSpec(
        classes=(
            ("run2", motif(2)),
            ("run3", motif(3)),
            ("run4", motif(4)),
            ("run6", motif(6)),
        ),
        samples_per_class=samples_per_class,
        length=length,
        noise_amplitude=noise,
        seed=seed,
        step_size=1.0,
        separable=True,
    )
