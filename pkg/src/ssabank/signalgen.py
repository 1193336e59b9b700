"""Seeded synthetic signals: sine mixtures, white noise and tone bursts.

Gaussian noise is produced from the raw 64-bit output of NumPy's PCG64 bit
generator (whose stream is frozen by NumPy's compatibility policy) with a
Box-Muller transform:

* ``u = ((raw >> 11) + 0.5) * 2**-53`` maps each draw to (0, 1);
* consecutive draws ``(u1, u2)`` give ``r = sqrt(-2 ln u1)`` and the pair
  ``r cos(2 pi u2), r sin(2 pi u2)``, emitted in that order.

Tones are ``a * sin(2 pi f n / fs)`` with zero initial phase. When ``f / fs``
is a short rational number the phase is reduced with integer arithmetic,
which makes noiseless signals exactly periodic.
"""

from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .core import TimeSeries
from .exceptions import InvalidParameterError

__all__ = ["SignalKind", "GenSpec", "generate", "gaussian_noise", "tone"]


class SignalKind(str, Enum):
    SINE_MIX = "sinemix"
    WHITE_NOISE = "whitenoise"
    TONE_BURSTS = "tonebursts"


@dataclass(frozen=True)
class GenSpec:
    """Description of a synthetic signal.

    For ``tonebursts`` the tones are only present in the segments whose
    ``mask`` entry is true; ``n`` defaults to ``len(mask) * segment_len``.
    """

    kind: SignalKind
    n: int = 0
    amplitudes: tuple = ()
    frequencies: tuple = ()
    sigma: float = 0.0
    seed: int = 0
    sample_rate: float = 1.0
    segment_len: int = 0
    mask: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "kind", SignalKind(self.kind))
        object.__setattr__(self, "amplitudes", tuple(float(a) for a in self.amplitudes))
        object.__setattr__(self, "frequencies", tuple(float(f) for f in self.frequencies))
        object.__setattr__(self, "mask", tuple(bool(int(b)) for b in self.mask))
        if self.kind is SignalKind.TONE_BURSTS and self.n == 0:
            object.__setattr__(self, "n", len(self.mask) * int(self.segment_len))
        self.validate()

    def validate(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {self.n!r}")
        if not self.sample_rate > 0:
            raise InvalidParameterError(f"sample_rate must be positive, got {self.sample_rate}")
        if not self.sigma >= 0:
            raise InvalidParameterError(f"sigma must be non-negative, got {self.sigma}")
        if len(self.amplitudes) != len(self.frequencies):
            raise InvalidParameterError("amplitudes and frequencies must have the same length")
        for f in self.frequencies:
            if not 0.0 <= f <= self.sample_rate / 2:
                raise InvalidParameterError(
                    f"frequency {f} outside [0, {self.sample_rate / 2}] (Nyquist)"
                )
        if self.kind is SignalKind.TONE_BURSTS:
            if self.segment_len < 1 or not self.mask:
                raise InvalidParameterError("tone bursts need segment_len >= 1 and a mask")
            if self.n != len(self.mask) * self.segment_len:
                raise InvalidParameterError("n must equal len(mask) * segment_len")

    def to_dict(self):
        d = asdict(self)
        d["kind"] = self.kind.value
        d["amplitudes"] = list(self.amplitudes)
        d["frequencies"] = list(self.frequencies)
        d["mask"] = [int(b) for b in self.mask]
        return d


def gaussian_noise(n, seed):
    """``n`` standard normal samples, reproducible from ``seed``."""
    pairs = (n + 1) // 2
    raw = np.random.PCG64(seed).random_raw(2 * pairs)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    u1, u2 = u[0::2], u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(2.0 * np.pi * u2)
    z[1::2] = r * np.sin(2.0 * np.pi * u2)
    return z[:n]


def _phase(f, n):
    # fraction of a cycle elapsed at each sample, in [0, 1)
    frac = Fraction(f).limit_denominator(1 << 20)
    if float(frac) == f:
        return (n * frac.numerator % frac.denominator) / frac.denominator
    return np.mod(f * n, 1.0)


def tone(n, amplitude, frequency, sample_rate=1.0):
    """``amplitude * sin(2 pi frequency k / sample_rate)`` for ``k = 0 .. n-1``."""
    idx = np.arange(n, dtype=np.int64)
    return amplitude * np.sin(2.0 * np.pi * _phase(frequency / sample_rate, idx))


def generate(spec):
    """Render ``spec`` into a :class:`~ssabank.core.TimeSeries`."""
    spec.validate()
    n = int(spec.n)
    x = np.zeros(n)
    if spec.kind is not SignalKind.WHITE_NOISE:
        tones = np.zeros(n)
        for a, f in zip(spec.amplitudes, spec.frequencies):
            tones += tone(n, a, f, spec.sample_rate)
        if spec.kind is SignalKind.TONE_BURSTS:
            gate = np.repeat(np.asarray(spec.mask, dtype=np.float64), spec.segment_len)
            tones *= gate
        x += tones
    if spec.sigma > 0:
        x += spec.sigma * gaussian_noise(n, spec.seed)
    return TimeSeries(x, spec.sample_rate)
