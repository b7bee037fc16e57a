"""Data channels over STL carriers, with one fixed binary encoding each.

Every channel is a source of variation that leaves the printed geometry
untouched:

* ``facet``: the order of the facet list, read off disjoint consecutive
  pairs, one bit per pair (first of pair greater means 1).
* ``vertex``: the cyclic rotation of each facet's vertex list (largest
  vertex listed first means 1, smallest first is the 0 state).
* ``normal``: whether the stored normal agrees with the right-hand rule
  computed from the vertices (agreement is 0, the negated normal is 1).
* ``number`` (ASCII only): standard vs scientific notation per numeric
  token.
* ``whitespace`` (ASCII only): space vs tab indentation per indented line.
* ``robust-pair``: comparison of two consecutive facet pairs after both are
  reduced to canonical form, designed to survive a scrubber that only
  re-randomizes single consecutive pairs.

Embed and extract are exact inverses within a carrier's capacity, and the
set of usable positions is always recomputable from the carrier alone.
"""
from __future__ import annotations

import enum
from dataclasses import replace

from .bits import BitSequence
from .errors import (
    CapacityExceededError,
    ChannelUnavailableError,
    DegenerateFacetError,
)
from .floatfmt import format_scientific, format_standard, parse_float32
from .model import Facet, StlFormat, StlModel, Vec3, unit_rhr_normal
from .rawdoc import RawAsciiDocument
from .stl_io import parse_ascii, write_canonical_ascii


class ChannelId(enum.Enum):
    FACET = "facet"
    VERTEX = "vertex"
    NORMAL = "normal"
    NUMBER = "number"
    WHITESPACE = "whitespace"
    ROBUST_PAIR = "robust-pair"


TEXT_CHANNELS = frozenset({ChannelId.NUMBER, ChannelId.WHITESPACE})


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def max_vertex(a: Vec3, b: Vec3) -> Vec3:
    """The larger vertex, comparing x, then y, then z; returns a on a tie."""
    return a if a >= b else b


def _canonical_triple(facet: Facet) -> tuple[Vec3, Vec3, Vec3]:
    a, b, c = facet.v1, facet.v2, facet.v3
    if a == b or b == c or a == c:
        raise DegenerateFacetError("facet has repeated vertices")
    return min((a, b, c), (b, c, a), (c, a, b))


def canonical_vertex_rotation(facet: Facet) -> Facet:
    """Rotate the vertex list so the smallest vertex comes first.

    Normal and attribute are unchanged. Idempotent, and all three rotations
    of a facet map to the same output.
    """
    return facet.with_vertices(_canonical_triple(facet))


def compare_facets(f: Facet, g: Facet) -> Ordering:
    """Total preorder on facets: canonical vertex triples, lexicographically."""
    cf = _canonical_triple(f)
    cg = _canonical_triple(g)
    if cf < cg:
        return Ordering.LESS
    if cf > cg:
        return Ordering.GREATER
    return Ordering.EQUAL


def _usable_indices(model: StlModel) -> list[int]:
    return [i for i, f in enumerate(model.facets) if not f.is_degenerate()]


def _normal_usable_indices(model: StlModel) -> list[int]:
    # zero-area facets have no right-hand-rule normal
    return [
        i
        for i, f in enumerate(model.facets)
        if not f.is_degenerate() and unit_rhr_normal(*f.vertices) is not None
    ]


def _facet_pairs(model: StlModel) -> list[tuple[int, int]]:
    """Disjoint consecutive pairs of usable facets that differ canonically."""
    usable = _usable_indices(model)
    pairs = []
    for k in range(0, len(usable) - 1, 2):
        i, j = usable[k], usable[k + 1]
        if _canonical_triple(model.facets[i]) != _canonical_triple(model.facets[j]):
            pairs.append((i, j))
    return pairs


def _canonical_pair(f: Facet, g: Facet):
    # smallest facet first
    cf = _canonical_triple(f)
    cg = _canonical_triple(g)
    return (cf, cg) if cf <= cg else (cg, cf)


def _robust_groups(model: StlModel) -> list[tuple[int, int, int, int]]:
    """Disjoint runs of four usable facets whose two canonical pairs differ."""
    usable = _usable_indices(model)
    groups = []
    facets = model.facets
    for k in range(0, len(usable) - 3, 4):
        i0, i1, i2, i3 = usable[k : k + 4]
        if _canonical_pair(facets[i0], facets[i1]) != _canonical_pair(facets[i2], facets[i3]):
            groups.append((i0, i1, i2, i3))
    return groups


def capacity(carrier: StlModel | RawAsciiDocument, channel: ChannelId) -> int:
    """Number of payload bits the channel can hold in this carrier."""
    if isinstance(carrier, RawAsciiDocument):
        if channel is ChannelId.NUMBER:
            return len(carrier.number_tokens)
        if channel is ChannelId.WHITESPACE:
            return len(carrier.indent_runs)
        return capacity(parse_ascii(carrier.text), channel)

    if channel in TEXT_CHANNELS:
        if carrier.source_format is StlFormat.BINARY:
            raise ChannelUnavailableError(
                f"{channel.value} channel requires an ASCII source"
            )
        return capacity(RawAsciiDocument(write_canonical_ascii(carrier)), channel)
    if channel is ChannelId.FACET:
        return len(_facet_pairs(carrier))
    if channel is ChannelId.VERTEX:
        return len(_usable_indices(carrier))
    if channel is ChannelId.NORMAL:
        return len(_normal_usable_indices(carrier))
    if channel is ChannelId.ROBUST_PAIR:
        return len(_robust_groups(carrier))
    raise ValueError(f"unknown channel {channel!r}")


def _check_capacity(needed: int, available: int) -> None:
    if needed > available:
        raise CapacityExceededError(
            f"payload needs {needed} bits but the channel holds {available}"
        )


def embed_vertex(model: StlModel, payload: BitSequence) -> StlModel:
    """Set each usable facet's rotation: bit 1 lists the largest vertex
    first, bit 0 the smallest. Facets beyond the payload are unchanged."""
    usable = _usable_indices(model)
    _check_capacity(len(payload), len(usable))
    facets = list(model.facets)
    for bit, i in zip(payload, usable):
        a, b, c = facets[i].vertices
        rotations = ((a, b, c), (b, c, a), (c, a, b))
        target = max(rotations) if bit else min(rotations)
        facets[i] = facets[i].with_vertices(target)
    return model.with_facets(facets)


def extract_vertex(model: StlModel, k: int) -> BitSequence:
    """Bit i is 1 iff v1 of usable facet i is the largest of its vertices."""
    usable = _usable_indices(model)
    _check_capacity(k, len(usable))
    bits = []
    for i in usable[:k]:
        v1, v2, v3 = model.facets[i].vertices
        bits.append(1 if v1 == max_vertex(v1, max_vertex(v2, v3)) else 0)
    return BitSequence(bits)


def embed_facet(model: StlModel, payload: BitSequence) -> StlModel:
    """Order each usable consecutive pair: bit 1 puts the greater facet
    first. Only swaps within a pair; nothing crosses pair boundaries."""
    pairs = _facet_pairs(model)
    _check_capacity(len(payload), len(pairs))
    facets = list(model.facets)
    for bit, (i, j) in zip(payload, pairs):
        want = Ordering.GREATER if bit else Ordering.LESS
        if compare_facets(facets[i], facets[j]) is not want:
            facets[i], facets[j] = facets[j], facets[i]
    return model.with_facets(facets)


def extract_facet(model: StlModel, k: int) -> BitSequence:
    pairs = _facet_pairs(model)
    _check_capacity(k, len(pairs))
    bits = [
        1 if compare_facets(model.facets[i], model.facets[j]) is Ordering.GREATER else 0
        for i, j in pairs[:k]
    ]
    return BitSequence(bits)


def embed_normal(model: StlModel, payload: BitSequence) -> StlModel:
    """Store the exact RHR normal for bit 0 and its negation for bit 1."""
    usable = _normal_usable_indices(model)
    _check_capacity(len(payload), len(usable))
    facets = list(model.facets)
    for bit, i in zip(payload, usable):
        n = unit_rhr_normal(*facets[i].vertices)
        if bit:
            n = (0.0 - n[0], 0.0 - n[1], 0.0 - n[2])
        facets[i] = replace(facets[i], normal=n)
    return model.with_facets(facets)


def extract_normal(model: StlModel, k: int) -> BitSequence:
    """Bit is 1 iff the stored normal opposes the computed RHR normal.

    Zero-length stored normals (dot product 0) decode as 0 by convention.
    """
    usable = _normal_usable_indices(model)
    _check_capacity(k, len(usable))
    bits = []
    for i in usable[:k]:
        f = model.facets[i]
        n = unit_rhr_normal(*f.vertices)
        dot = f.normal[0] * n[0] + f.normal[1] * n[1] + f.normal[2] * n[2]
        bits.append(1 if dot < 0 else 0)
    return BitSequence(bits)


def embed_robust_pair(model: StlModel, payload: BitSequence) -> StlModel:
    """Encode one bit per run of four usable facets by ordering its two
    canonical pairs; a bit is changed by swapping the pairs' positions."""
    groups = _robust_groups(model)
    _check_capacity(len(payload), len(groups))
    facets = list(model.facets)
    for bit, (i0, i1, i2, i3) in zip(payload, groups):
        a = _canonical_pair(facets[i0], facets[i1])
        b = _canonical_pair(facets[i2], facets[i3])
        if (1 if a > b else 0) != bit:
            facets[i0], facets[i2] = facets[i2], facets[i0]
            facets[i1], facets[i3] = facets[i3], facets[i1]
    return model.with_facets(facets)


def extract_robust_pair(model: StlModel, k: int) -> BitSequence:
    groups = _robust_groups(model)
    _check_capacity(k, len(groups))
    bits = []
    for i0, i1, i2, i3 in groups[:k]:
        a = _canonical_pair(model.facets[i0], model.facets[i1])
        b = _canonical_pair(model.facets[i2], model.facets[i3])
        bits.append(1 if a > b else 0)
    return BitSequence(bits)


def _is_scientific(token: str) -> bool:
    return "e" in token or "E" in token


def embed_number(doc: RawAsciiDocument, payload: BitSequence) -> RawAsciiDocument:
    """Respell numeric tokens: bit 0 standard, bit 1 scientific notation.

    Tokens already in the requested notation are left untouched; rewritten
    tokens keep their single-precision value exactly.
    """
    tokens = list(doc.number_tokens)
    _check_capacity(len(payload), len(tokens))
    for idx, bit in enumerate(payload):
        token = tokens[idx]
        if bit and not _is_scientific(token):
            tokens[idx] = format_scientific(parse_float32(token))
        elif not bit and _is_scientific(token):
            tokens[idx] = format_standard(parse_float32(token))
    return doc.with_number_tokens(tokens)


def extract_number(doc: RawAsciiDocument, k: int) -> BitSequence:
    tokens = doc.number_tokens
    _check_capacity(k, len(tokens))
    return BitSequence(1 if _is_scientific(t) else 0 for t in tokens[:k])


def embed_whitespace(doc: RawAsciiDocument, payload: BitSequence) -> RawAsciiDocument:
    """Re-indent lines: bit 0 uses spaces, bit 1 tabs, preserving width."""
    runs = list(doc.indent_runs)
    _check_capacity(len(payload), len(runs))
    for idx, bit in enumerate(payload):
        runs[idx] = ("\t" if bit else " ") * len(runs[idx])
    return doc.with_indent_runs(runs)


def extract_whitespace(doc: RawAsciiDocument, k: int) -> BitSequence:
    runs = doc.indent_runs
    _check_capacity(k, len(runs))
    return BitSequence(1 if "\t" in run else 0 for run in runs[:k])


_MODEL_EMBEDDERS = {
    ChannelId.FACET: embed_facet,
    ChannelId.VERTEX: embed_vertex,
    ChannelId.NORMAL: embed_normal,
    ChannelId.ROBUST_PAIR: embed_robust_pair,
}

_MODEL_EXTRACTORS = {
    ChannelId.FACET: extract_facet,
    ChannelId.VERTEX: extract_vertex,
    ChannelId.NORMAL: extract_normal,
    ChannelId.ROBUST_PAIR: extract_robust_pair,
}

_TEXT_EMBEDDERS = {
    ChannelId.NUMBER: embed_number,
    ChannelId.WHITESPACE: embed_whitespace,
}

_TEXT_EXTRACTORS = {
    ChannelId.NUMBER: extract_number,
    ChannelId.WHITESPACE: extract_whitespace,
}


def embed(carrier, channel: ChannelId, payload: BitSequence):
    """Embed into any channel; the carrier kind must match the channel.

    Model channels take an StlModel; text channels take a RawAsciiDocument
    (an ASCII-sourced StlModel is serialized canonically first).
    """
    if channel in TEXT_CHANNELS:
        doc = _as_document(carrier, channel)
        return _TEXT_EMBEDDERS[channel](doc, payload)
    return _MODEL_EMBEDDERS[channel](carrier, payload)


def extract(carrier, channel: ChannelId, k: int) -> BitSequence:
    """Extract k bits from any channel; mirrors embed."""
    if channel in TEXT_CHANNELS:
        doc = _as_document(carrier, channel)
        return _TEXT_EXTRACTORS[channel](doc, k)
    return _MODEL_EXTRACTORS[channel](carrier, k)


def _as_document(carrier, channel: ChannelId) -> RawAsciiDocument:
    if isinstance(carrier, RawAsciiDocument):
        return carrier
    if carrier.source_format is StlFormat.BINARY:
        raise ChannelUnavailableError(f"{channel.value} channel requires an ASCII source")
    return RawAsciiDocument(write_canonical_ascii(carrier))
