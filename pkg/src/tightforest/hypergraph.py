"""Immutable r-uniform hypergraphs and the .hg text format.

Vertices are 0-based ints. Edges are stored as sorted tuples, the edge set
in lexicographic order, so equal hypergraphs compare equal and serialize
byte-identically.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .errors import ParseError, ValidationError

RNG_SCHEME = "py-mt19937/lex-v1"  # random.Random over lex-ordered r-subsets


@dataclass(frozen=True)
class Hypergraph:
    n: int
    r: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValidationError(f"n must be a non-negative int, got {self.n!r}")
        if not isinstance(self.r, int) or self.r < 1:
            raise ValidationError(f"r must be an int >= 1, got {self.r!r}")
        seen = set()
        for e in self.edges:
            if len(e) != self.r:
                raise ValidationError(f"edge {e} has arity {len(e)}, expected r={self.r}")
            if any(not isinstance(v, int) or v < 0 or v >= self.n for v in e):
                raise ValidationError(f"edge {e} has a vertex outside range(0, {self.n})")
            if any(e[i] >= e[i + 1] for i in range(len(e) - 1)):
                raise ValidationError(f"edge {e} is not strictly increasing")
            if e in seen:
                raise ValidationError(f"duplicate edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def masks(self) -> tuple[int, ...]:
        """Edge bitmasks, in the same lex order as .edges."""
        return tuple(edge_to_mask(e) for e in self.edges)


def make(n: int, r: int, edges) -> Hypergraph:
    """Build a Hypergraph from any iterable of vertex iterables."""
    norm = []
    for e in edges:
        t = tuple(sorted(e))
        if len(set(t)) != len(t):
            raise ValidationError(f"edge {tuple(e)} has repeated vertices")
        norm.append(t)
    return Hypergraph(n, r, tuple(norm))


def edge_to_mask(edge) -> int:
    m = 0
    for v in edge:
        m |= 1 << v
    return m


def mask_to_edge(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def complete(n: int, r: int) -> Hypergraph:
    """All C(n, r) edges on n vertices."""
    if r < 1:
        raise ValidationError("complete: r >= 1 required")
    if n < 0:
        raise ValidationError("complete: n >= 0 required")
    return Hypergraph(n, r, tuple(itertools.combinations(range(n), r)))


def empty(n: int, r: int) -> Hypergraph:
    if r < 1:
        raise ValidationError("empty: r >= 1 required")
    if n < 0:
        raise ValidationError("empty: n >= 0 required")
    return Hypergraph(n, r, ())


def disjoint_union(h1: Hypergraph, h2: Hypergraph) -> Hypergraph:
    """H1 + H2 with H2's labels shifted by h1.n."""
    if h1.r != h2.r:
        raise ValidationError(f"uniformity mismatch: {h1.r} != {h2.r}")
    shifted = tuple(tuple(v + h1.n for v in e) for e in h2.edges)
    return Hypergraph(h1.n + h2.n, h1.r, h1.edges + shifted)


def join(h1: Hypergraph, h2: Hypergraph) -> Hypergraph:
    """H1 v H2: both edge sets plus every r-set meeting both sides.

    Edge count is e1 + e2 + C(n1+n2, r) - C(n1, r) - C(n2, r).
    """
    if h1.r != h2.r:
        raise ValidationError(f"uniformity mismatch: {h1.r} != {h2.r}")
    r = h1.r
    n1, n2 = h1.n, h2.n
    edges = set(h1.edges)
    edges.update(tuple(v + n1 for v in e) for e in h2.edges)
    for e in itertools.combinations(range(n1 + n2), r):
        if e[0] < n1 and e[-1] >= n1:
            edges.add(e)
    h = Hypergraph(n1 + n2, r, tuple(edges))
    want = (
        h1.num_edges
        + h2.num_edges
        + math.comb(n1 + n2, r)
        - math.comb(n1, r)
        - math.comb(n2, r)
    )
    assert h.num_edges == want
    return h


def extremal_construction(n: int, r: int, k: int) -> tuple[Hypergraph, Hypergraph]:
    """The two candidate extremal graphs for the k-edge forest family.

    A: complete(k+r-2, r) padded with isolated vertices to order n.
    B: join(complete((k-1)//r, r), empty(n-(k-1)//r, r)).
    Requires k > r, k = 1 (mod r), n >= k+r-2.
    """
    if k <= r:
        raise ValidationError(f"extremal_construction: need k > r, got k={k}, r={r}")
    if k % r != 1:
        raise ValidationError(f"extremal_construction: need k = 1 (mod r), got k={k}, r={r}")
    if n < k + r - 2:
        raise ValidationError(f"extremal_construction: need n >= k+r-2 = {k + r - 2}, got n={n}")
    a = Hypergraph(n, r, complete(k + r - 2, r).edges)
    t = (k - 1) // r
    b = join(complete(t, r), empty(n - t, r))
    assert a.num_edges == math.comb(k + r - 2, r)
    assert b.num_edges == math.comb(n, r) - math.comb(n - t, r)
    return a, b


def perfect_matching(n: int, r: int) -> Hypergraph:
    """floor(n/r) pairwise disjoint edges {0..r-1}, {r..2r-1}, ..."""
    if r < 1:
        raise ValidationError("perfect_matching: r >= 1 required")
    edges = tuple(tuple(range(i * r, (i + 1) * r)) for i in range(n // r))
    return Hypergraph(n, r, edges)


def permute(h: Hypergraph, perm) -> Hypergraph:
    """Relabel vertices: new label of v is perm[v]."""
    p = list(perm)
    if len(p) != h.n or sorted(p) != list(range(h.n)):
        raise ValidationError(f"perm must be a bijection on range({h.n})")
    return Hypergraph(h.n, h.r, tuple(tuple(sorted(p[v] for v in e)) for e in h.edges))


def parse_hg(text: str) -> Hypergraph:
    """Parse the .hg format.

    Line 1: "<n> <r>". Each later non-empty, non-comment line: r strictly
    increasing vertex indices separated by spaces. '#' starts a comment.
    """
    lines = text.splitlines()
    header = None
    edges = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise ParseError(f"malformed header: {raw!r}")
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise ParseError(f"malformed header: {raw!r}") from None
            continue
        try:
            vs = tuple(int(p) for p in parts)
        except ValueError:
            raise ParseError(f"bad edge line: {raw!r}") from None
        edges.append(vs)
    if header is None:
        raise ParseError("empty input, expected '<n> <r>' header")
    n, r = header
    try:
        return Hypergraph(n, r, tuple(edges))
    except ValidationError as exc:
        raise ParseError(str(exc)) from None


def serialize_hg(h: Hypergraph, comments: tuple[str, ...] = ()) -> str:
    """Canonical .hg text: header, optional comments, edges in lex order."""
    out = [f"{h.n} {h.r}"]
    out.extend(f"# {c}" for c in comments)
    out.extend(" ".join(str(v) for v in e) for e in h.edges)
    return "\n".join(out) + "\n"


def random_hypergraph(n: int, r: int, p: float, seed: int) -> Hypergraph:
    """Each r-subset kept independently with probability p (scheme RNG_SCHEME)."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must be in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = tuple(e for e in itertools.combinations(range(n), r) if rng.random() < p)
    return Hypergraph(n, r, edges)


def random_hypergraph_m(n: int, r: int, m: int, seed: int) -> Hypergraph:
    """Exactly m edges sampled without replacement (scheme RNG_SCHEME)."""
    pool = list(itertools.combinations(range(n), r))
    if m < 0 or m > len(pool):
        raise ValidationError(f"m must be in [0, {len(pool)}], got {m}")
    rng = random.Random(seed)
    return Hypergraph(n, r, tuple(rng.sample(pool, m)))
