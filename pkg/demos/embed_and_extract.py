#!/usr/bin/env python3
"""Hide a message in the facet order of an STL file and read it back.

The carrier is a generated icosphere. Reordering facets never changes the
printed object, so the stego file is geometrically identical to the cover.
"""
from stlstego import (
    BitSequence,
    ChannelId,
    capacity,
    embed,
    extract,
    generate_test_mesh,
    write_canonical_ascii,
)

message = b"meet at dawn"
payload = BitSequence.from_bytes(message)

carrier = generate_test_mesh(2)
print(f"carrier: icosphere with {len(carrier)} facets")
for channel in (ChannelId.FACET, ChannelId.VERTEX, ChannelId.NORMAL):
    print(f"  {channel.value:<8} capacity: {capacity(carrier, channel):>5} bits")

print(f"\nembedding {len(payload)} bits ({message!r}) into the facet channel")
stego = embed(carrier, ChannelId.FACET, payload)

# the stego model serializes like any other STL
text = write_canonical_ascii(stego)
print(f"stego STL is {len(text)} characters of plain ASCII, first lines:")
print("\n".join(text.splitlines()[:3]))

recovered = extract(stego, ChannelId.FACET, len(payload))
print(f"\nextracted: {recovered.to_bytes()!r}")
assert recovered.to_bytes() == message

# same trick, different degree of freedom: vertex rotation states
stego2 = embed(carrier, ChannelId.VERTEX, payload)
assert extract(stego2, ChannelId.VERTEX, len(payload)).to_bytes() == message
print("vertex channel round trip: OK")
