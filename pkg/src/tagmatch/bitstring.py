"""Fixed-width bitstring tags and deterministic random streams.

Tags are immutable bit vectors. Bit index 0 is the least-significant
position, so the unsigned reading of a tag is sum(t_i * 2**i). Byte
packing is little-endian: byte 0 holds bits 0-7 with bit 0 as that
byte's least-significant bit, and widths not divisible by 8 pad the
final byte's high bits with zeros.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tag:
    """An immutable fixed-width bit vector.

    Attributes:
        value: Unsigned integer whose bit i is the tag's bit i.
        width: Number of bit positions; at least 1.
    """

    value: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"tag width must be >= 1, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(
                f"tag value {self.value} out of range for width {self.width}"
            )

    @classmethod
    def from_bits(cls, bits) -> "Tag":
        """Builds a tag from an iterable of 0/1 ints, index 0 first."""
        bits = tuple(bits)
        if not bits:
            raise ValueError("tag needs at least one bit")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        value = 0
        for i, b in enumerate(bits):
            value |= b << i
        return cls(value=value, width=len(bits))

    @property
    def bits(self) -> tuple:
        """The bits as a tuple, index 0 (least significant) first."""
        return tuple((self.value >> i) & 1 for i in range(self.width))


def as_unsigned(tag: Tag) -> int:
    """Returns the unsigned integer reading sum(t_i * 2**i)."""
    return tag.value


def pack_tag(tag: Tag) -> bytes:
    """Packs a tag into little-endian bytes (bit 0 = byte 0's LSB)."""
    return tag.value.to_bytes((tag.width + 7) // 8, "little")


def tag_to_hex(tag: Tag) -> str:
    """Renders the packed little-endian bytes as lowercase hex."""
    return pack_tag(tag).hex()


def tag_from_hex(text: str, width: int) -> Tag:
    """Inverse of tag_to_hex for a known width."""
    raw = bytes.fromhex(text)
    if len(raw) != (width + 7) // 8:
        raise ValueError(f"hex string {text!r} wrong length for width {width}")
    return Tag(value=int.from_bytes(raw, "little"), width=width)


def flip_bit(tag: Tag, index: int) -> Tag:
    """Returns a copy of the tag with one bit inverted.

    Args:
        tag: Source tag (unchanged).
        index: Bit position to invert; must be in [0, width).

    Raises:
        IndexError: If index is outside the tag.
    """
    if not 0 <= index < tag.width:
        raise IndexError(f"bit index {index} out of range for width {tag.width}")
    return Tag(value=tag.value ^ (1 << index), width=tag.width)


class RngStream:
    """A deterministic random stream keyed by (root_seed, stream path).

    Streams with different keys are statistically independent. Every
    consumer owns its stream exclusively; parallel work derives one
    child stream per task index instead of sharing.
    """

    __slots__ = ("root_seed", "stream_key", "gen")

    def __init__(self, root_seed: int, stream_key: tuple) -> None:
        self.root_seed = int(root_seed)
        self.stream_key = tuple(int(k) for k in stream_key)
        seq = np.random.SeedSequence([self.root_seed, *self.stream_key])
        self.gen = np.random.Generator(np.random.PCG64(seq))

    @property
    def stream_id(self) -> int:
        return self.stream_key[0]

    def child(self, *keys: int) -> "RngStream":
        """Derives an independent stream extending this stream's key."""
        return RngStream(self.root_seed, self.stream_key + tuple(keys))

    def __repr__(self) -> str:
        return f"RngStream(root_seed={self.root_seed}, stream_key={self.stream_key})"


def derive_stream(root_seed: int, stream_id: int) -> RngStream:
    """Creates the stream identified by (root_seed, stream_id)."""
    return RngStream(root_seed, (stream_id,))


def derive_seed(*keys: int) -> int:
    """Mixes integer keys into a single 64-bit seed, deterministically."""
    seq = np.random.SeedSequence([int(k) for k in keys])
    return int(seq.generate_state(1, np.uint64)[0])


def draw_tag_values(rng: RngStream, count: int, width: int) -> np.ndarray:
    """Draws uniform random tag values as a uint64 array.

    Only widths up to 64 fit this packed representation; wider tags go
    through new_random_tag, which returns arbitrary-precision ints.
    """
    if width < 1:
        raise ValueError(f"tag width must be >= 1, got {width}")
    if width > 64:
        raise ValueError(f"packed tag values support width <= 64, got {width}")
    if width == 64:
        return rng.gen.integers(0, 2**64 - 1, size=count, dtype=np.uint64, endpoint=True)
    return rng.gen.integers(0, 1 << width, size=count, dtype=np.uint64)


def new_random_tag(rng: RngStream, width: int) -> Tag:
    """Draws a tag whose bits are independent fair coin flips."""
    if width < 1:
        raise ValueError(f"tag width must be >= 1, got {width}")
    if width <= 64:
        return Tag(value=int(draw_tag_values(rng, 1, width)[0]), width=width)
    # Wide tags: assemble 64-bit words and mask the excess high bits.
    n_words = (width + 63) // 64
    words = rng.gen.integers(0, 2**64 - 1, size=n_words, dtype=np.uint64, endpoint=True)
    value = 0
    for i, w in enumerate(words):
        value |= int(w) << (64 * i)
    return Tag(value=value & ((1 << width) - 1), width=width)


def mutate_per_bit(tag: Tag, rate: float, rng: RngStream) -> Tag:
    """Flips each bit independently with the given probability.

    Args:
        tag: Source tag (unchanged).
        rate: Per-bit flip probability in [0, 1]. Rate 0 returns an
            equal tag; rate 1 returns the bitwise complement.
        rng: Stream consumed for the flip decisions.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"per-bit rate must be in [0, 1], got {rate}")
    draws = rng.gen.random(tag.width)
    mask = 0
    for i in np.flatnonzero(draws < rate):
        mask |= 1 << int(i)
    return Tag(value=tag.value ^ mask, width=tag.width)
