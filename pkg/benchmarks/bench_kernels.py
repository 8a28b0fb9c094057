"""Timing comparison of the compiled kernel lane against the pure-Python
lane on identical seeded instances. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat N] [--heavy]

The compiled lane is skipped (with a note) when the extension is not
built, so the script is usable from a pure install as well.
"""

import argparse
import statistics
import time

from tightforest import _kernel_py
from tightforest.hypergraph import complete, random_hypergraph

try:
    from tightforest import _kernel_c
except ImportError:
    _kernel_c = None


def instances(heavy):
    out = []
    n_rand = 8 if heavy else 7
    for r in (2, 3):
        for seed in range(4):
            h = random_hypergraph(n_rand, r, 0.5, seed=9000 + 10 * r + seed)
            out.append((f"random n={n_rand} r={r} seed={seed}", h))
    out.append(("complete n=7 r=3", complete(7, 3)))
    if heavy:
        out.append(("complete n=8 r=3", complete(8, 3)))
    return out


def timed(fn, *args, repeat=3):
    vals = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        vals.append(time.perf_counter() - t0)
    return result, min(vals), statistics.median(vals)


def bench_lane(mod, insts, repeat):
    rows = []
    for name, h in insts:
        masks = h.masks()
        for kernel in ("nu_search", "forest_search", "path_search"):
            res, best, med = timed(getattr(mod, kernel), h.n, h.r, masks, repeat=repeat)
            value = res[0] if isinstance(res, tuple) else res
            rows.append((name, kernel, value, best, med))
    # one branch-and-bound phase on the complete instance
    h = complete(6, 3)
    cand = h.masks()
    res, best, med = timed(
        mod.turan_phase1, h.n, h.r, cand, (), 4, 0, 10, repeat=repeat
    )
    rows.append(("complete n=6 r=3", "turan_phase1 k=4", res[0], best, med))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="timings per kernel (default 3)")
    ap.add_argument("--heavy", action="store_true", help="larger instances")
    args = ap.parse_args(argv)

    insts = instances(args.heavy)
    lanes = [("py", _kernel_py)]
    if _kernel_c is not None:
        lanes.append(("c", _kernel_c))
    else:
        print("compiled lane not built; timing the pure lane only")

    results = {label: bench_lane(mod, insts, args.repeat) for label, mod in lanes}

    py_rows = results["py"]
    c_rows = results.get("c")
    print(f"{'instance':<28} {'kernel':<20} {'value':>6} {'py best':>10}", end="")
    if c_rows:
        print(f" {'c best':>10} {'speedup':>8}")
    else:
        print()
    for i, (name, kernel, value, py_best, _) in enumerate(py_rows):
        line = f"{name:<28} {kernel:<20} {value:>6} {py_best * 1e3:>8.2f}ms"
        if c_rows:
            c_name, c_kernel, c_value, c_best, _ = c_rows[i]
            assert (c_name, c_kernel) == (name, kernel)
            if c_value != value:
                raise SystemExit(
                    f"lane disagreement on {name} {kernel}: py={value} c={c_value}"
                )
            line += f" {c_best * 1e3:>8.2f}ms {py_best / c_best:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
