"""
Shared text parsers for entlifepy inputs.

BaseTextParser: Abstract base for pluggable input parsers.
EdgeListParser: Parses graph files ("i j" per line, '#' comments, optional "n <count>" header).
ChannelJsonParser: Parses Pauli-diagonal channel documents {"n": int, "terms": [{"pauli": "IZ", "w": 0.25}, ...]}.
parse_pauli: Parses a Pauli string such as "IXZY" (site 0 leftmost).
parse_graph: Convenience wrapper that picks a parser and raises ValidationError on failure.

NOTE: parsers return raw, validated data. Channel normalization (merging,
rescaling) happens in entlifepy.noise_model.
"""

import json
import logging
import re
from abc import ABC, abstractmethod
from typing import Any, List, Tuple

import networkx as nx

from entlifepy.entlifeTypes import Graph, PauliString
from entlifepy.errors import ValidationError

logger = logging.getLogger(__name__)

_EDGE_RE = re.compile(r'^\s*(-?\d+)\s+(-?\d+)\s*$')
_HEADER_RE = re.compile(r'^\s*n\s+(\d+)\s*$', re.IGNORECASE)


# ===================================================================
# PLUGGABLE PARSER ABSTRACTION
# ===================================================================

class BaseTextParser(ABC):
    """Abstract base class for input parsers."""

    @abstractmethod
    def can_handle(self, text: str) -> bool:
        """Return True if this parser recognizes the text format."""
        pass

    @abstractmethod
    def parse(self, text: str) -> Any:
        """Parse the text; raise ValidationError on malformed input."""
        pass


class EdgeListParser(BaseTextParser):
    """
    Parser for plain-text edge lists.

    Example file:
        # linear cluster on 4 qubits
        n 4
        0 1
        1 2
        2 3

    Without a header the vertex count is max index + 1.
    """

    def can_handle(self, text: str) -> bool:
        for line in text.splitlines():
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            return bool(_EDGE_RE.match(stripped) or _HEADER_RE.match(stripped))
        return False

    def parse(self, text: str) -> Graph:
        declared_n = None
        edges: List[Tuple[int, int]] = []

        for lineno, line in enumerate(text.splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue

            header = _HEADER_RE.match(stripped)
            if header:
                if declared_n is not None:
                    raise ValidationError(f"line {lineno}: duplicate 'n' header")
                declared_n = int(header.group(1))
                continue

            edge = _EDGE_RE.match(stripped)
            if not edge:
                raise ValidationError(f"line {lineno}: expected 'i j', got {stripped!r}")
            i, j = int(edge.group(1)), int(edge.group(2))
            if i < 0 or j < 0:
                raise ValidationError(f"line {lineno}: negative vertex index in {stripped!r}")
            if i == j:
                raise ValidationError(f"line {lineno}: self-loop at vertex {i}")
            edges.append((min(i, j), max(i, j)))

        if len(set(edges)) != len(edges):
            seen, dupes = set(), set()
            for e in edges:
                (dupes if e in seen else seen).add(e)
            raise ValidationError(f"duplicate edges {sorted(dupes)}")

        inferred_n = max((max(e) for e in edges), default=-1) + 1
        if declared_n is None:
            if inferred_n == 0:
                raise ValidationError("graph file has neither edges nor an 'n' header")
            n = inferred_n
        else:
            if declared_n < inferred_n:
                raise ValidationError(f"header declares n={declared_n} but edges reference vertex {inferred_n - 1}")
            n = declared_n

        graph = nx.from_edgelist(edges)
        graph.add_nodes_from(range(n))
        logger.debug(f"EdgeListParser: {n} vertices, {graph.number_of_edges()} edges")
        return Graph.from_networkx(graph, n=n)


class ChannelJsonParser(BaseTextParser):
    """Parser for JSON channel documents; returns (n, [(PauliString, weight), ...])."""

    def can_handle(self, text: str) -> bool:
        return text.lstrip().startswith('{') and '"terms"' in text

    def parse(self, text: str) -> Tuple[int, List[Tuple[PauliString, float]]]:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"channel document is not valid JSON: {e}") from e

        if not isinstance(doc, dict) or "n" not in doc or "terms" not in doc:
            raise ValidationError("channel document needs keys 'n' and 'terms'")
        n = doc["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValidationError(f"channel 'n' must be a positive integer, got {n!r}")
        if not isinstance(doc["terms"], list):
            raise ValidationError("channel 'terms' must be a list")

        raw_terms = []
        for idx, term in enumerate(doc["terms"]):
            if not isinstance(term, dict) or "pauli" not in term or "w" not in term:
                raise ValidationError(f"term {idx}: expected {{'pauli': str, 'w': number}}")
            weight = term["w"]
            if not isinstance(weight, (int, float)) or isinstance(weight, bool):
                raise ValidationError(f"term {idx}: weight {weight!r} is not a number")
            raw_terms.append((parse_pauli(term["pauli"]), float(weight)))
        return n, raw_terms


# ===================================================================
# CONVENIENCE WRAPPERS
# ===================================================================

def parse_pauli(text: str) -> PauliString:
    """Parse 'IXZY'-style text (case-insensitive, surrounding whitespace ignored)."""
    if not isinstance(text, str):
        raise ValidationError(f"Pauli string must be text, got {text!r}")
    return PauliString(text.strip().upper())


def parse_graph(text: str) -> Graph:
    """Parse a graph description, raising ValidationError when no parser accepts it."""
    parser = EdgeListParser()
    if not parser.can_handle(text):
        raise ValidationError("unrecognized graph format (expected 'i j' edge lines)")
    return parser.parse(text)
