"""Immutable bit sequences used as embedding payloads."""
from __future__ import annotations


class BitSequence:
    """An ordered, immutable sequence of 0/1 values."""

    __slots__ = ("_bits",)

    def __init__(self, bits=()):
        data = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in data):
            raise ValueError("bits must be 0 or 1")
        self._bits = data

    @property
    def bits(self) -> tuple[int, ...]:
        return self._bits

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self):
        return iter(self._bits)

    def __getitem__(self, index):
        return self._bits[index]

    def __eq__(self, other):
        if isinstance(other, BitSequence):
            return self._bits == other._bits
        return NotImplemented

    def __hash__(self):
        return hash(self._bits)

    def __repr__(self):
        head = "".join(map(str, self._bits[:64]))
        if len(self._bits) > 64:
            head += "..."
        return f"BitSequence({len(self._bits)}: {head})"

    def complement(self) -> "BitSequence":
        return BitSequence(1 - b for b in self._bits)

    @classmethod
    def from_bytes(cls, data: bytes, length: int | None = None) -> "BitSequence":
        """Unpack bytes MSB-first.

        With an explicit length the result is truncated to that many bits,
        or zero-padded when the bytes run short.
        """
        bits = []
        for byte in data:
            for shift in range(7, -1, -1):
                bits.append((byte >> shift) & 1)
        if length is not None:
            bits = bits[:length] + [0] * (length - len(bits))
        return cls(bits)

    def to_bytes(self) -> bytes:
        """Pack MSB-first, zero-padding the final partial byte."""
        out = bytearray()
        for i in range(0, len(self._bits), 8):
            chunk = self._bits[i : i + 8]
            byte = 0
            for b in chunk:
                byte = (byte << 1) | b
            out.append(byte << (8 - len(chunk)))
        return bytes(out)

    @classmethod
    def random(cls, length: int, rng) -> "BitSequence":
        """Draw `length` bits from rng, any object with randbelow(n)."""
        return cls(rng.randbelow(2) for _ in range(length))
