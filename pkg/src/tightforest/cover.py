"""r-partite density machinery: the exact epsilon-regularity predicate on
small instances, greedy and exact tight-path extraction, the iterative
peel cover, and reduced graphs over a balanced partition.

Parts are contiguous vertex blocks: part i holds vertices [i*m, (i+1)*m).
Every edge is transversal (one vertex per part, listed in part order), so
any tight path in such an instance visits parts in a fixed rotation:
consecutive windows swap exactly one vertex, which must come from the part
of the vertex it replaces.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InfeasibleError, InternalCheckError, ValidationError
from .hypergraph import RNG_SCHEME, Hypergraph, serialize_hg
from .limits import Limits, load_limits
from .solvers import TightPath, max_tight_path


def _limits(limits: Limits | None) -> Limits:
    return limits if limits is not None else load_limits()


@dataclass(frozen=True)
class RPartite:
    r: int
    m: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise ValidationError(f"r must be a positive int, got {self.r!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValidationError(f"m must be a positive int, got {self.m!r}")
        seen = set()
        for e in self.edges:
            if len(e) != self.r:
                raise ValidationError(f"edge {e} has arity {len(e)}, expected {self.r}")
            for i, v in enumerate(e):
                if not (i * self.m <= v < (i + 1) * self.m):
                    raise ValidationError(f"edge {e}: vertex {v} not in part {i}")
            if e in seen:
                raise ValidationError(f"duplicate edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @property
    def n(self) -> int:
        return self.r * self.m

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def part(self, i: int) -> range:
        return range(i * self.m, (i + 1) * self.m)

    def to_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.n, self.r, self.edges)


def make_rpartite(r: int, m: int, edges) -> RPartite:
    return RPartite(r, m, tuple(tuple(e) for e in edges))


def complete_rpartite(r: int, m: int) -> RPartite:
    edges = tuple(
        tuple(i * m + c for i, c in enumerate(cell))
        for cell in itertools.product(range(m), repeat=r)
    )
    return RPartite(r, m, edges)


def serialize_rpartite(h: RPartite) -> str:
    return serialize_hg(h.to_hypergraph(), comments=(f"parts: {h.m} {h.r}",))


def random_rpartite(r: int, m: int, d: float, seed: int) -> RPartite:
    """Each transversal cell kept independently with probability d.

    Cells are drawn in lexicographic coordinate order under the package RNG
    scheme, so (r, m, d, seed) fully determines the instance.
    """
    if not 0 <= d <= 1:
        raise DomainError(f"need 0 <= d <= 1, got {d}")
    rng = random.Random(seed)
    edges = []
    for cell in itertools.product(range(m), repeat=r):
        if rng.random() < d:
            edges.append(tuple(i * m + c for i, c in enumerate(cell)))
    return RPartite(r, m, tuple(edges))


RPARTITE_RNG_SCHEME = RNG_SCHEME


# --- densities and regularity ---------------------------------------------


def _density_fraction(h: RPartite, subsets=None) -> Fraction:
    if subsets is None:
        subsets = [set(h.part(i)) for i in range(h.r)]
    if len(subsets) != h.r:
        raise ValidationError(f"need {h.r} subsets, got {len(subsets)}")
    sets = []
    for i, a in enumerate(subsets):
        a = set(a)
        if not a:
            raise DomainError(f"subset for part {i} is empty")
        if not a <= set(h.part(i)):
            raise ValidationError(f"subset {sorted(a)} not contained in part {i}")
        sets.append(a)
    cnt = sum(1 for e in h.edges if all(v in sets[i] for i, v in enumerate(e)))
    size = 1
    for a in sets:
        size *= len(a)
    return Fraction(cnt, size)


def density(h: RPartite, subsets=None) -> float:
    """Edge count among the chosen subsets over the product of their sizes."""
    return float(_density_fraction(h, subsets))


def is_eps_regular(h: RPartite, eps: float, limits: Limits | None = None) -> bool:
    """Exact regularity predicate: every tuple of subsets A_i with
    |A_i| >= eps*m has density within eps of the full-parts density.

    Enumerates all qualifying subset tuples; refuses instances beyond the
    exhaustive limit rather than sampling. Comparisons run in exact
    rational arithmetic on the binary value of eps.
    """
    lim = _limits(limits)
    if h.m > lim.regular_m or h.r > lim.regular_r:
        raise InfeasibleError(
            f"is_eps_regular at m={h.m}, r={h.r} exceeds the exhaustive limit "
            f"(regular_m={lim.regular_m}, regular_r={lim.regular_r})"
        )
    eps_f = Fraction(eps)
    if eps_f <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    d0 = Fraction(h.num_edges, h.m**h.r)

    # local coordinates per edge, one per part
    coords = [tuple(v - i * h.m for i, v in enumerate(e)) for e in h.edges]
    qual_masks = []
    for _ in range(h.r):
        masks = []
        for mask in range(1, 1 << h.m):
            if mask.bit_count() >= eps_f * h.m:
                masks.append(mask)
        qual_masks.append(masks)

    def rec(part, pool, size_prod):
        if part == h.r:
            return abs(Fraction(len(pool), size_prod) - d0) <= eps_f
        for mask in qual_masks[part]:
            sub = [c for c in pool if (mask >> c[part]) & 1]
            if not rec(part + 1, sub, size_prod * mask.bit_count()):
                return False
        return True

    return rec(0, coords, 1)


# --- tight-path extraction -------------------------------------------------


def _extend_window(h_edgeset, path, m, r):
    """Lowest eligible next vertex, or None. The next vertex must lie in the
    part of the vertex about to leave the window."""
    window = tuple(path[-(r - 1) :]) if r > 1 else ()
    drop = path[-r]
    part = drop // m
    for w in range(part * m, (part + 1) * m):
        if w in path:
            continue
        cand = tuple(sorted(window + (w,)))
        if cand in h_edgeset:
            return w
    return None


def greedy_tight_path(h: RPartite) -> TightPath:
    """Deterministic greedy: start a path at the lexicographically smallest
    unused edge (trying every start order), extend by the lowest eligible
    vertex, restart when stuck; returns the longest path found."""
    if not h.edges:
        raise DomainError("greedy_tight_path needs at least one edge")
    edgeset = set(h.edges)
    used: set[int] = set()
    best: tuple[int, ...] | None = None
    for start in h.edges:
        if any(v in used for v in start):
            continue
        local_best: tuple[int, ...] | None = None
        for order in itertools.permutations(start):
            path = list(order)
            while True:
                w = _extend_window(edgeset, path, h.m, h.r)
                if w is None:
                    break
                path.append(w)
            if local_best is None or len(path) > len(local_best):
                local_best = tuple(path)
        used.update(local_best)
        if best is None or len(local_best) > len(best):
            best = local_best
    return TightPath(h.r, best)


def max_tight_path_rpartite(h: RPartite, limits: Limits | None = None):
    """Exact maximum tight-path edge count; all windows are transversal
    edges automatically since every edge of the instance is transversal."""
    lim = _limits(limits)
    if h.r * h.m > lim.rpartite_exact_rm:
        raise InfeasibleError(
            f"exact path search at r*m={h.r * h.m} exceeds "
            f"rpartite_exact_rm={lim.rpartite_exact_rm}"
        )
    return max_tight_path(h.to_hypergraph(), lim)


# --- the peel cover --------------------------------------------------------


@dataclass(frozen=True)
class CoverReport:
    r: int
    m: int
    eps: float
    d: float
    paths: tuple[TightPath, ...]
    leftover: int
    rounds: int
    density_trace: tuple[float, ...]
    violated: bool
    modes: tuple[str, ...]

    @property
    def covered(self) -> int:
        return sum(len(p.vertices) for p in self.paths)

    def to_json(self):
        return {
            "r": self.r,
            "m": self.m,
            "eps": self.eps,
            "d": self.d,
            "paths": [p.to_json() for p in self.paths],
            "leftover": self.leftover,
            "rounds": self.rounds,
            "density_trace": list(self.density_trace),
            "violated": self.violated,
            "modes": list(self.modes),
        }


def peel_cover(h: RPartite, eps: float, d: float, limits: Limits | None = None) -> CoverReport:
    """Repeatedly extract a balanced tight path (vertex count a multiple of
    r, so parts shrink equally) and delete its vertices; stop when residual
    parts drop below eps*m. violated is set if the residual density falls
    below d-eps while the parts are still >= eps*m, in which case the cover
    bounds are not asserted.
    """
    lim = _limits(limits)
    if not (0 < eps < d <= 1):
        raise DomainError(f"need 0 < eps < d <= 1, got eps={eps}, d={d}")
    survivors = [list(h.part(i)) for i in range(h.r)]
    paths: list[TightPath] = []
    trace: list[float] = []
    modes: list[str] = []
    violated = False
    host = h.to_hypergraph()

    while True:
        m_res = len(survivors[0])
        if m_res < eps * h.m:
            break
        alive = [set(s) for s in survivors]
        res_edges = [
            e for e in h.edges if all(v in alive[i] for i, v in enumerate(e))
        ]
        dens = len(res_edges) / (m_res**h.r)
        trace.append(dens)
        if dens < d - eps:
            violated = True
            break
        # compact the residual onto parts of size m_res
        back = []
        fwd = {}
        for i in range(h.r):
            for j, v in enumerate(sorted(survivors[i])):
                fwd[v] = i * m_res + j
                back.append(v)
        compact = RPartite(
            h.r,
            m_res,
            tuple(tuple(fwd[v] for v in e) for e in res_edges),
        )
        if h.r * m_res <= lim.rpartite_exact_rm:
            modes.append("exact")
            _, path = max_tight_path_rpartite(compact, lim)
        else:
            modes.append("greedy")
            path = greedy_tight_path(compact)
        s_bal = h.r * (len(path.vertices) // h.r)
        verts = tuple(back[v] for v in path.vertices[:s_bal])
        tp = TightPath(h.r, verts)
        tp.validate(host)
        paths.append(tp)
        for v in verts:
            survivors[v // h.m].remove(v)

    leftover = h.r * len(survivors[0])
    if not violated:
        cap = 3 * h.r / ((d - eps) * eps)
        if len(paths) > cap:
            raise InternalCheckError(
                f"peel produced {len(paths)} paths, bound {cap:.3f}"
            )
        if leftover > h.r * eps * h.m:
            raise InternalCheckError(
                f"leftover {leftover} exceeds {h.r * eps * h.m:.3f}"
            )
    return CoverReport(
        r=h.r,
        m=h.m,
        eps=eps,
        d=d,
        paths=tuple(paths),
        leftover=leftover,
        rounds=len(paths),
        density_trace=tuple(trace),
        violated=violated,
        modes=tuple(modes),
    )


# --- reduced graphs --------------------------------------------------------


@dataclass(frozen=True)
class ReducedGraph:
    t: int
    r: int
    edges: tuple[tuple[int, ...], ...]
    densities: dict
    modes: dict

    def to_json(self):
        def key(tup):
            return ",".join(map(str, tup))

        return {
            "t": self.t,
            "r": self.r,
            "edges": [list(e) for e in self.edges],
            "densities": {key(k): v for k, v in sorted(self.densities.items())},
            "modes": {key(k): v for k, v in sorted(self.modes.items())},
        }


def reduced_graph(h: Hypergraph, t: int, eps: float, limits: Limits | None = None) -> ReducedGraph:
    """Cluster graph over t equal classes: a class r-tuple is an edge when
    its transversal density reaches 2*eps and, when the class size is
    within the exhaustive limit, the tuple is eps-regular. Beyond the limit
    the tuple is admitted on density alone and flagged density-only.
    """
    lim = _limits(limits)
    if t < h.r:
        raise DomainError(f"need t >= r, got t={t}, r={h.r}")
    if t < 1 or h.n % t != 0:
        raise ValidationError(f"classes must be equal-sized: n={h.n} not divisible by t={t}")
    s = h.n // t
    eps_f = Fraction(eps)
    if eps_f <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    edges = []
    densities = {}
    modes = {}
    for classes in itertools.combinations(range(t), h.r):
        cls_of = {}
        for idx, c in enumerate(classes):
            for v in range(c * s, (c + 1) * s):
                cls_of[v] = idx
        trans = []
        for e in h.edges:
            if all(v in cls_of for v in e):
                idxs = [cls_of[v] for v in e]
                if sorted(idxs) == list(range(h.r)):
                    trans.append(e)
        dens = Fraction(len(trans), s**h.r)
        densities[classes] = float(dens)
        if dens < 2 * eps_f:
            modes[classes] = "sparse"
            continue
        if s <= lim.regular_m and h.r <= lim.regular_r:
            part_edges = []
            for e in trans:
                pe = [None] * h.r
                for v in e:
                    idx = cls_of[v]
                    pe[idx] = idx * s + (v - classes[idx] * s)
                part_edges.append(tuple(pe))
            sub = RPartite(h.r, s, tuple(part_edges))
            if is_eps_regular(sub, eps, lim):
                modes[classes] = "regular"
                edges.append(classes)
            else:
                modes[classes] = "irregular"
        else:
            modes[classes] = "density-only"
            edges.append(classes)
    return ReducedGraph(t=t, r=h.r, edges=tuple(sorted(edges)), densities=densities, modes=modes)
