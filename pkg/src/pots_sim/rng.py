"""Per-task random streams.

Every (scenario, repetition) pair gets its own generator whose seed is a
pure function of ``(base_seed, scenario_ordinal, repetition_ordinal)``.
The three inputs are combined with the SplitMix64 finalizer:

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

applied as ``mix(mix(base_seed + GOLDEN) ^ ((scenario << 32) | repetition))``
(all arithmetic mod 2**64).  Each step is a bijection on 64-bit words, so
for a fixed base seed the map is injective whenever both ordinals fit in
32 bits.  The resulting word seeds a numpy ``PCG64`` bit generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
DEFAULT_BASE_SEED = 271828

GENERATOR_NAME = "numpy.random.PCG64"


def generator_identity() -> str:
    return f"{GENERATOR_NAME} (numpy {np.__version__})"


def splitmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(base_seed: int, scenario_ordinal: int, repetition_ordinal: int) -> int:
    if scenario_ordinal < 0 or repetition_ordinal < 0:
        raise ValueError("ordinals must be non-negative")
    if scenario_ordinal >= 1 << 32 or repetition_ordinal >= 1 << 32:
        raise ValueError("ordinals must fit in 32 bits")
    packed = (scenario_ordinal << 32) | repetition_ordinal
    return splitmix64(splitmix64(base_seed + GOLDEN) ^ packed)


class Provenance(NamedTuple):
    base_seed: int
    scenario_ordinal: int
    repetition_ordinal: int


@dataclass
class RandomStream:
    """A numpy generator tagged with the coordinates it was derived from."""

    generator: np.random.Generator
    provenance: Provenance | None = field(default=None)

    @classmethod
    def from_seed(cls, seed: int) -> "RandomStream":
        return cls(np.random.Generator(np.random.PCG64(seed & MASK64)))


def derive_stream(base_seed: int, scenario_ordinal: int, repetition_ordinal: int) -> RandomStream:
    seed = mix_seed(base_seed, scenario_ordinal, repetition_ordinal)
    return RandomStream(
        np.random.Generator(np.random.PCG64(seed)),
        Provenance(base_seed, scenario_ordinal, repetition_ordinal),
    )


def next_uniform(stream: RandomStream, low: float, high: float, size=None):
    """Uniform draw(s) on ``[low, high)``; a scalar float when ``size`` is None."""
    if not low < high:
        raise ValueError(f"need low < high, got low={low}, high={high}")
    if size is None:
        return float(stream.generator.uniform(low, high))
    return stream.generator.uniform(low, high, size)
