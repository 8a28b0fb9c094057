"""Exact Turan computation for forest and matching families, plus
isomorphism utilities and verification harnesses.

Determinism contract: for a fixed instance and limits, the returned
SearchRecord is identical byte for byte regardless of worker count and
across checkpoint kill/resume. To get that, the decision tree over the
lex-ordered candidate edges is split at a fixed depth into an ordered
prefix list; every task runs against the same precomputed seed bound (no
cross-task bound sharing), and task results merge by max/sum/set-union.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass

from . import kernels
from .errors import (
    CheckpointError,
    DomainError,
    InfeasibleError,
    InternalCheckError,
    SearchAborted,
    ValidationError,
)
from .formulas import conjecture_rhs, emc_rhs, ning_wang_rhs
from .hypergraph import (
    Hypergraph,
    complete,
    edge_to_mask,
    empty,
    extremal_construction,
    join,
    mask_to_edge,
    serialize_hg,
)
from .limits import Limits, load_limits
from .solvers import lforest, nu

CHECKPOINT_VERSION = "tightforest-checkpoint-v1"
RECORD_SCHEMA = "tightforest-search-v1"
CSV_SCHEMA = "v1"
CSV_COLUMNS = ("n", "r", "k", "target", "exact", "formula", "match", "status", "nodes", "seconds")

_LABELED_CAP_FACTOR = 10  # per-task labeled-witness cap = factor * witness_cap


# --- isomorphism utilities ----------------------------------------------


def _apply_perm_mask(mask: int, perm) -> int:
    out = 0
    v = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[v]
        mask >>= 1
        v += 1
    return out


@dataclass(frozen=True)
class CanonicalForm:
    n: int
    r: int
    masks: tuple[int, ...]  # sorted edge masks of the minimal relabeling

    @property
    def encoding(self) -> str:
        return f"{self.n} {self.r} " + ",".join(map(str, self.masks))

    def graph(self) -> Hypergraph:
        return Hypergraph(self.n, self.r, tuple(mask_to_edge(m) for m in self.masks))

    def key(self):
        return (self.n, self.r, self.masks)


def canonical_form(h: Hypergraph, limits: Limits | None = None) -> CanonicalForm:
    """Minimum of the sorted edge-mask encoding over all vertex relabelings.

    Support vertices always occupy the lowest labels in the minimum (moving
    an isolated vertex below a support vertex only raises masks), so the
    branch-and-bound runs over support vertices only.
    """
    lim = limits if limits is not None else load_limits()
    if h.n > lim.canon_n:
        raise InfeasibleError(
            f"canonical_form at n={h.n} exceeds canon_n={lim.canon_n} "
            f"(override via limits if you mean it)"
        )
    if not h.edges:
        return CanonicalForm(h.n, h.r, ())
    support = sorted({v for e in h.edges for v in e})
    s = len(support)
    edges_v = [set(e) for e in h.edges]

    best: list | None = None
    assign = {}  # original vertex -> new label

    def rec(t, enc):
        nonlocal best
        if best is not None and enc > best[: len(enc)]:
            return
        if t == s:
            if best is None or enc < best:
                best = list(enc)
            return
        for v in support:
            if v in assign:
                continue
            assign[v] = t
            group = []
            for ev in edges_v:
                if v in ev and all(w in assign for w in ev):
                    m = 0
                    for w in ev:
                        m |= 1 << assign[w]
                    group.append(m)
            group.sort()
            rec(t + 1, enc + group)
            del assign[v]

    rec(0, [])
    return CanonicalForm(h.n, h.r, tuple(best))


def _partitions(n: int):
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in _partitions(n - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def count_nonisomorphic(n: int, r: int) -> int:
    """Number of r-graphs on n labeled-free vertices, by Burnside over
    cycle types acting on the r-subsets."""
    if r < 1 or n < 0:
        raise DomainError(f"count_nonisomorphic: need n >= 0, r >= 1, got n={n}, r={r}")
    total = 0
    nfact = math.factorial(n)
    for lam in _partitions(n):
        size = nfact
        for part in lam:
            size //= part
        mult: dict[int, int] = {}
        for part in lam:
            mult[part] = mult.get(part, 0) + 1
        for c in mult.values():
            size //= math.factorial(c)
        perm = []
        start = 0
        for part in lam:
            perm.extend(list(range(start + 1, start + part)) + [start])
            start += part
        seen = set()
        orbits = 0
        for sub in itertools.combinations(range(n), r):
            if sub in seen:
                continue
            orbits += 1
            cur = sub
            while True:
                cur = tuple(sorted(perm[v] for v in cur))
                if cur == sub:
                    break
                seen.add(cur)
        total += size * (1 << orbits)
    return total // nfact


# --- search records and checkpoints --------------------------------------


@dataclass(frozen=True)
class SearchRecord:
    n: int
    r: int
    k: int
    target: str
    value: int
    witnesses: tuple[CanonicalForm, ...]
    witness_cap: int
    status: str  # complete | capped-witnesses | aborted
    nodes_explored: int

    def to_json(self):
        return {
            "schema": RECORD_SCHEMA,
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "target": self.target,
            "value": self.value,
            "witnesses": [
                {"n": w.n, "r": w.r, "edges": [list(mask_to_edge(m)) for m in w.masks]}
                for w in self.witnesses
            ],
            "witness_cap": self.witness_cap,
            "status": self.status,
            "nodes_explored": self.nodes_explored,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _atomic_write_json(path: str, payload: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(payload, f, sort_keys=True)
    os.replace(tmp, path)


def _load_checkpoint(path: str, instance: dict) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from None
    for field in ("version", "instance", "best_value", "frontier", "nodes_explored", "witness_forms"):
        if field not in data:
            raise CheckpointError(f"checkpoint {path} missing field {field!r}")
    if data["version"] != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"checkpoint version {data['version']!r} != {CHECKPOINT_VERSION!r}"
        )
    if data["instance"] != instance:
        raise CheckpointError(
            f"checkpoint instance {data['instance']} does not match {instance}"
        )
    return data


# --- the engine -----------------------------------------------------------


def _target_code(target: str) -> int:
    if target == "forest":
        return kernels.TARGET_FOREST
    if target == "matching":
        return kernels.TARGET_MATCHING
    raise ValidationError(f"target must be 'forest' or 'matching', got {target!r}")


def _graph_is_free(n, r, masks, k, tcode) -> bool:
    if tcode == kernels.TARGET_FOREST:
        return not kernels.forest_at_least(n, r, masks, k)
    return not kernels.nu_at_least(n, r, masks, k + 1)


def _seed_bound(n, r, cand, k, target, tcode) -> int:
    """Best verified-free lower bound: lex-greedy plus the closed-form
    extremal constructions when they apply. Deterministic."""
    greedy: list[int] = []
    for m in cand:
        greedy.append(m)
        if not _graph_is_free(n, r, tuple(greedy), k, tcode):
            greedy.pop()
    seed = len(greedy)
    candidates: list[Hypergraph] = []
    if target == "forest" and k > r and k % r == 1 and n >= k + r - 2:
        candidates.extend(extremal_construction(n, r, k))
    if target == "matching":
        if r * k + r - 1 <= n:
            candidates.append(Hypergraph(n, r, complete(r * k + r - 1, r).edges))
        if 0 < k <= n:
            candidates.append(join(complete(k, r), empty(n - k, r)))
    for h in candidates:
        if _graph_is_free(n, r, h.masks(), k, tcode):
            seed = max(seed, h.num_edges)
    return seed


def _stabilizers(n: int, cand: tuple[int, ...], depth: int) -> list[list[tuple]]:
    """For d = 1..depth, the vertex permutations that setwise stabilize the
    first d candidate edges (identity excluded). Empty beyond n = 8."""
    if n > 8:
        return [[] for _ in range(depth)]
    out = []
    perms = list(itertools.permutations(range(n)))
    ident = tuple(range(n))
    for d in range(1, depth + 1):
        first = frozenset(cand[:d])
        grp = [
            p
            for p in perms
            if p != ident and all(_apply_perm_mask(m, p) in first for m in first)
        ]
        out.append(grp)
    return out


def _gen_prefixes(n, r, cand, k, tcode, seed, depth, iso_depth):
    """Walk the first `depth` decision levels. Returns (prefix list in DFS
    order, nodes visited). Prunes: freeness on include, cardinality against
    the seed bound (>= seed kept: phase 2 needs value ties), and sound
    shallow isomorphism rejection via the stabilizer subgroups."""
    m = len(cand)
    stabs = _stabilizers(n, cand, min(iso_depth, depth)) if depth else []
    prefixes: list[tuple[int, ...]] = []
    nodes = 0
    cur: list[int] = []
    decisions: list[int] = []

    def iso_reject(d):
        if d > len(stabs) or not stabs[d - 1]:
            return False
        s = tuple(sorted(cur))
        for p in stabs[d - 1]:
            if tuple(sorted(_apply_perm_mask(x, p) for x in s)) < s:
                return True
        return False

    def walk(i):
        nonlocal nodes
        nodes += 1
        if len(cur) + (m - i) < seed:
            return
        if i == depth:
            prefixes.append(tuple(decisions))
            return
        e = cand[i]
        cur.append(e)
        decisions.append(1)
        if _graph_is_free(n, r, tuple(cur), k, tcode) and not iso_reject(i + 1):
            walk(i + 1)
        cur.pop()
        decisions[-1] = 0
        if not iso_reject(i + 1):
            walk(i + 1)
        decisions.pop()

    walk(0)
    return prefixes, nodes


def _phase1_task(args):
    n, r, cand, prefix, k, tcode, seed = args
    return kernels.turan_phase1(n, r, cand, prefix, k, tcode, seed)


def _phase2_task(args):
    n, r, cand, prefix, k, tcode, value, labeled_cap, canon_n = args
    raw, complete_flag, nodes = kernels.turan_phase2(
        n, r, cand, prefix, k, tcode, value, labeled_cap
    )
    lim = Limits(canon_n=max(canon_n, n))
    forms = sorted(
        {
            canonical_form(
                Hypergraph(n, r, tuple(mask_to_edge(mm) for mm in w)), lim
            ).key()
            for w in raw
        }
    )
    return forms, complete_flag, nodes


def _run_tasks(fn, arglist, workers, on_done):
    if workers <= 1:
        for i, args in enumerate(arglist):
            on_done(i, fn(args))
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futs = {pool.submit(fn, args): i for i, args in enumerate(arglist)}
        for fut in as_completed(futs):
            on_done(futs[fut], fut.result())


def turan_exact(
    n: int,
    r: int,
    k: int,
    target: str = "forest",
    *,
    workers: int = 1,
    checkpoint: str | None = None,
    limits: Limits | None = None,
    abort_after_tasks: int | None = None,
) -> SearchRecord:
    """Maximum edge count of a free r-graph on n vertices, with canonical
    extremal witnesses.

    forest target: free means no tight linear forest with k edges (k >= 1).
    matching target: free means matching number <= k (k >= 0).
    """
    lim = limits if limits is not None else load_limits()
    tcode = _target_code(target)
    if target == "forest" and k < 1:
        raise DomainError(f"forest target needs k >= 1, got {k}")
    if target == "matching" and k < 0:
        raise DomainError(f"matching target needs k >= 0, got {k}")
    if n < 0 or r < 1:
        raise DomainError(f"need n >= 0, r >= 1, got n={n}, r={r}")
    lim.check_turan(n, r)
    lim.check_solver_state(n, r)

    cand = tuple(edge_to_mask(e) for e in itertools.combinations(range(n), r))
    m = len(cand)
    depth = min(lim.split_depth, max(0, m - 8))
    instance = {"n": n, "r": r, "k": k, "target": target}
    labeled_cap = _LABELED_CAP_FACTOR * lim.witness_cap

    state = None
    if checkpoint and os.path.exists(checkpoint):
        state = _load_checkpoint(checkpoint, instance)

    if state is None:
        seed = _seed_bound(n, r, cand, k, target, tcode)
        prefixes, top_nodes = _gen_prefixes(
            n, r, cand, k, tcode, seed, depth, lim.iso_depth
        )
        state = {
            "version": CHECKPOINT_VERSION,
            "instance": instance,
            "phase": 1,
            "seed_bound": seed,
            "best_value": seed,
            "frontier": ["".join(map(str, p)) for p in prefixes],
            "nodes_explored": top_nodes,
            "witness_forms": [],
            "truncated": False,
        }
        if checkpoint:
            _atomic_write_json(checkpoint, state)
    else:
        seed = state["seed_bound"]
        prefixes, _ = _gen_prefixes(n, r, cand, k, tcode, seed, depth, lim.iso_depth)

    done_count = 0

    def bump_done():
        nonlocal done_count
        done_count += 1
        if abort_after_tasks is not None and done_count >= abort_after_tasks:
            raise SearchAborted(
                f"aborted after {done_count} tasks; checkpoint "
                f"{checkpoint or '(none)'} holds the frontier"
            )

    if state["phase"] == 1:
        pending = [tuple(int(c) for c in s) for s in state["frontier"]]
        args = [(n, r, cand, p, k, tcode, seed) for p in pending]
        results: dict[int, tuple[int, int]] = {}

        def done1(i, res):
            results[i] = res
            state["best_value"] = max(state["best_value"], res[0])
            state["nodes_explored"] += res[1]
            state["frontier"] = [
                "".join(map(str, p)) for j, p in enumerate(pending) if j not in results
            ]
            if checkpoint:
                _atomic_write_json(checkpoint, state)
            bump_done()

        _run_tasks(_phase1_task, args, workers, done1)
        state["phase"] = 2
        state["frontier"] = ["".join(map(str, p)) for p in prefixes]
        if checkpoint:
            _atomic_write_json(checkpoint, state)

    vstar = state["best_value"]
    pending2 = [tuple(int(c) for c in s) for s in state["frontier"]]
    args2 = [
        (n, r, cand, p, k, tcode, vstar, labeled_cap, lim.canon_n) for p in pending2
    ]
    forms = set(_form_from_json(w) for w in state["witness_forms"])
    truncated = bool(state["truncated"])
    results2: dict[int, object] = {}

    def done2(i, res):
        nonlocal truncated
        results2[i] = True
        task_forms, complete_flag, nodes = res
        forms.update(task_forms)
        truncated = truncated or not complete_flag
        state["nodes_explored"] += nodes
        state["witness_forms"] = sorted(_form_to_json(f) for f in forms)
        state["truncated"] = truncated
        state["frontier"] = [
            "".join(map(str, p)) for j, p in enumerate(pending2) if j not in results2
        ]
        if checkpoint:
            _atomic_write_json(checkpoint, state)
        bump_done()

    _run_tasks(_phase2_task, args2, workers, done2)

    ordered = sorted(forms)
    capped = truncated or len(ordered) > lim.witness_cap
    chosen = ordered[: lim.witness_cap]
    witnesses = tuple(CanonicalForm(nn, rr, tuple(mm)) for (nn, rr, mm) in chosen)
    status = "capped-witnesses" if capped else "complete"
    record = SearchRecord(
        n=n,
        r=r,
        k=k,
        target=target,
        value=vstar,
        witnesses=witnesses,
        witness_cap=lim.witness_cap,
        status=status,
        nodes_explored=state["nodes_explored"],
    )
    _recheck_witnesses(record, lim)
    if checkpoint and os.path.exists(checkpoint):
        os.remove(checkpoint)
    return record


def _form_to_json(key):
    nn, rr, masks = key
    return [nn, rr, list(masks)]


def _form_from_json(item):
    nn, rr, masks = item
    return (nn, rr, tuple(masks))


def _recheck_witnesses(record: SearchRecord, lim: Limits) -> None:
    """Witness soundness: every emitted witness re-verified by the solvers,
    not by the search's own freeness check."""
    for w in record.witnesses:
        g = w.graph()
        if g.num_edges != record.value:
            raise InternalCheckError(
                f"witness has {g.num_edges} edges, record value {record.value}"
            )
        if record.target == "forest":
            ok = lforest(g, lim)[0] < record.k
        else:
            ok = nu(g, lim)[0] <= record.k
        if not ok:
            raise InternalCheckError("witness fails the freeness re-check")


# --- verification harnesses ----------------------------------------------


@dataclass
class VerifyRow:
    n: int
    r: int
    k: int
    target: str
    exact: int | None
    formula: int
    match: bool | None
    status: str
    nodes: int
    seconds: float
    witness_path: str = ""

    def csv_values(self):
        return [
            self.n,
            self.r,
            self.k,
            self.target,
            "" if self.exact is None else self.exact,
            self.formula,
            "" if self.match is None else str(self.match).lower(),
            self.status,
            self.nodes,
            f"{self.seconds:.3f}",
        ]

    def to_json(self):
        d = {
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "target": self.target,
            "exact": self.exact,
            "formula": self.formula,
            "match": self.match,
            "status": self.status,
            "nodes": self.nodes,
            "seconds": round(self.seconds, 3),
        }
        if self.witness_path:
            d["witness_path"] = self.witness_path
        return d


@dataclass
class VerifyReport:
    formula_name: str
    rows: list[VerifyRow]

    @property
    def all_match(self) -> bool:
        return all(row.match is not False for row in self.rows)

    def to_csv(self) -> str:
        out = [",".join(CSV_COLUMNS)]
        for row in self.rows:
            out.append(",".join(str(v) for v in row.csv_values()))
        return "\n".join(out) + "\n"

    def to_json(self):
        return {
            "csv_schema": CSV_SCHEMA,
            "formula": self.formula_name,
            "all_match": self.all_match,
            "rows": [row.to_json() for row in self.rows],
        }


def _verify_one(n, r, k, target, formula_value, lim, workers, witness_dir=None) -> VerifyRow:
    t0 = time.perf_counter()
    try:
        rec = turan_exact(n, r, k, target, workers=workers, limits=lim)
    except InfeasibleError:
        return VerifyRow(
            n, r, k, target, None, formula_value, None, "skipped-infeasible", 0, 0.0
        )
    dt = time.perf_counter() - t0
    match = rec.value == formula_value
    wpath = ""
    if not match and witness_dir and rec.witnesses:
        os.makedirs(witness_dir, exist_ok=True)
        wpath = os.path.join(witness_dir, f"counterexample_n{n}_r{r}_k{k}_{target}.hg")
        with open(wpath, "w", encoding="utf-8") as f:
            f.write(serialize_hg(rec.witnesses[0].graph()))
    return VerifyRow(n, r, k, target, rec.value, formula_value, match, rec.status, rec.nodes_explored, dt, wpath)


def verify_ning_wang(
    n_max: int = 7,
    n_min: int = 4,
    *,
    limits: Limits | None = None,
    workers: int = 1,
    witness_dir: str | None = None,
) -> VerifyReport:
    """Exact search vs the proven graph bound over 2 <= k <= n-1."""
    lim = limits if limits is not None else load_limits()
    rows = []
    for n in range(n_min, n_max + 1):
        for k in range(2, n):
            rows.append(
                _verify_one(n, 2, k, "forest", ning_wang_rhs(n, k).value, lim, workers, witness_dir)
            )
    return VerifyReport("ning-wang-rhs", rows)


def verify_conjecture(
    n_max: int,
    r: int,
    k_list,
    *,
    limits: Limits | None = None,
    workers: int = 1,
    witness_dir: str | None = None,
) -> VerifyReport:
    """Exact search vs the forest-family closed form (proven shape for r=2)."""
    lim = limits if limits is not None else load_limits()
    rows = []
    for k in k_list:
        if k <= r or k % r != 1:
            raise DomainError(f"verify_conjecture: k must satisfy k > r, k = 1 (mod r); got {k}")
        for n in range(k + r - 2, n_max + 1):
            # ning_wang_rhs needs k <= n - 1; at n = k fall back to the
            # general closed form (same value for odd k where both apply).
            if r == 2 and n >= k + 1:
                formula = ning_wang_rhs(n, k)
            else:
                formula = conjecture_rhs(n, r, k)
            rows.append(_verify_one(n, r, k, "forest", formula.value, lim, workers, witness_dir))
    name = "ning-wang-rhs" if r == 2 else "conjecture-rhs"
    return VerifyReport(name, rows)


def verify_emc_small(
    n_max: int,
    r: int,
    k_max: int,
    *,
    limits: Limits | None = None,
    workers: int = 1,
    witness_dir: str | None = None,
) -> VerifyReport:
    """Exact search vs the matching closed form, n from rk+r-1 up."""
    lim = limits if limits is not None else load_limits()
    rows = []
    for k in range(0, k_max + 1):
        for n in range(max(r * k + r - 1, 0), n_max + 1):
            rows.append(
                _verify_one(n, r, k, "matching", emc_rhs(n, r, k).value, lim, workers, witness_dir)
            )
    return VerifyReport("emc-rhs", rows)
