"""Exact solvers: matching number, max tight path, max tight linear forest.

All three return (value, witness); witnesses are validated against the
host before being returned and are deterministic: ties are broken by
lexicographic order on the canonical encodings (a path and its reversal
are the same witness, the smaller orientation is returned).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .errors import DomainError, ValidationError
from .hypergraph import Hypergraph
from .limits import Limits, load_limits


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, ...], ...]

    def validate(self, host: Hypergraph) -> None:
        es = host.edge_set()
        used = set()
        for e in self.edges:
            if e not in es:
                raise ValidationError(f"matching edge {e} not in host")
            if used & set(e):
                raise ValidationError(f"matching edge {e} overlaps another")
            used.update(e)

    def to_json(self):
        return {"type": "matching", "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True, order=True)
class TightPath:
    r: int
    vertices: tuple[int, ...]

    def windows(self):
        v = self.vertices
        return tuple(tuple(sorted(v[i : i + self.r])) for i in range(len(v) - self.r + 1))

    @property
    def edge_count(self) -> int:
        return max(0, len(self.vertices) - self.r + 1)

    def validate(self, host: Hypergraph) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("path repeats a vertex")
        if len(self.vertices) < self.r:
            raise ValidationError("path shorter than r")
        es = host.edge_set()
        for w in self.windows():
            if w not in es:
                raise ValidationError(f"window {w} not an edge of the host")

    def to_json(self):
        return {"type": "tight_path", "vertices": list(self.vertices)}


@dataclass(frozen=True)
class TightLinearForest:
    n: int
    r: int
    paths: tuple[TightPath, ...]

    @property
    def edge_count(self) -> int:
        return sum(p.edge_count for p in self.paths)

    def validate(self, host: Hypergraph) -> None:
        used = set()
        for p in self.paths:
            p.validate(host)
            vs = set(p.vertices)
            if used & vs:
                raise ValidationError("forest paths share a vertex")
            used.update(vs)

    def to_json(self):
        return {
            "type": "tight_linear_forest",
            "n": self.n,
            "paths": [list(p.vertices) for p in self.paths],
        }


def _orient(seq: tuple[int, ...]) -> tuple[int, ...]:
    rev = tuple(reversed(seq))
    return seq if seq <= rev else rev


def _limits(limits: Limits | None) -> Limits:
    return limits if limits is not None else load_limits()


def nu(h: Hypergraph, limits: Limits | None = None) -> tuple[int, Matching]:
    """Matching number with a lex-least maximum matching."""
    value, sel = kernels.nu_search(h.n, h.r, h.masks())
    witness = Matching(tuple(sorted(_mask_edge(m) for m in sel)))
    witness.validate(h)
    assert len(witness.edges) == value
    return value, witness


def max_tight_path(h: Hypergraph, limits: Limits | None = None) -> tuple[int, TightPath | None]:
    """Longest tight path by edge count; (0, None) when H has no edge."""
    _limits(limits).check_solver_state(h.n, h.r)
    value, seq = kernels.path_search(h.n, h.r, h.masks())
    if value == 0:
        return 0, None
    witness = TightPath(h.r, _orient(seq))
    witness.validate(h)
    assert witness.edge_count == value
    return value, witness


def lforest(h: Hypergraph, limits: Limits | None = None) -> tuple[int, TightLinearForest]:
    """Max edges over tight-linear-forest subgraphs, with a witness."""
    _limits(limits).check_solver_state(h.n, h.r)
    value, raw_paths = kernels.forest_search(h.n, h.r, h.masks())
    paths = tuple(
        sorted(TightPath(h.r, _orient(p)) for p in raw_paths)
    )
    witness = TightLinearForest(h.n, h.r, paths)
    witness.validate(h)
    assert witness.edge_count == value
    return value, witness


def is_forest_free(h: Hypergraph, k: int, limits: Limits | None = None) -> bool:
    """True iff H contains no tight linear forest with k edges (l(H) < k)."""
    if k < 1:
        raise DomainError(f"is_forest_free: k >= 1 required, got {k}")
    _limits(limits).check_solver_state(h.n, h.r)
    return not kernels.forest_at_least(h.n, h.r, h.masks(), k)


def _mask_edge(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def nu_value_at_least(h: Hypergraph, k: int) -> bool:
    """True iff nu(H) >= k; early-exit search used by the Turan engine."""
    return kernels.nu_at_least(h.n, h.r, h.masks(), k)
