"""Figure rendering for trace and benchmark output files.

Everything here draws to files through the Agg backend; no window is ever
opened. Each CSV the command line emits gets a sibling PNG from one of
these helpers.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["font.size"] = 9
plt.rcParams["axes.grid"] = True
plt.rcParams["grid.alpha"] = 0.3
plt.rcParams["figure.figsize"] = (10.0, 4.0)


def save_trace_figure(rows: list[dict], path: str, problem: str) -> None:
    """Arc fans in the first two coordinates plus the merit history.

    rows are the trace records: iter, alpha, x1..xn, phi, with 50 samples
    per iteration; sample alpha=0 of each block is the iterate itself.
    """
    iters = sorted({r["iter"] for r in rows})
    fig, (ax_arc, ax_phi) = plt.subplots(1, 2)

    for k in iters:
        block = [r for r in rows if r["iter"] == k]
        block.sort(key=lambda r: r["alpha"])
        xs = np.array([r["x1"] for r in block])
        ys = np.array([r.get("x2", 0.0) for r in block])
        ax_arc.plot(xs, ys, lw=0.8, color="C0", alpha=0.6)
        ax_arc.plot(xs[0], ys[0], "k.", ms=4)
    ax_arc.set_xlabel("x1")
    ax_arc.set_ylabel("x2")
    ax_arc.set_title(f"{problem}: search arcs per iteration")

    phis = [next(r for r in rows if r["iter"] == k)["phi"] for k in iters]
    ax_phi.semilogy(iters, phis, "o-", ms=3, color="C1")
    ax_phi.set_xlabel("iteration")
    ax_phi.set_ylabel("merit")
    ax_phi.set_title("merit at accepted iterates")

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bench_figure(rows: list[dict], path: str) -> None:
    """Iteration counts against the reference table, problems on the x axis."""
    names = [r["Prob"] for r in rows]
    idx = np.arange(len(names))
    iters = [r["Iter"] if r.get("Iter") is not None else 0 for r in rows]
    refs = [r.get("RefIter") for r in rows]

    fig, ax = plt.subplots(figsize=(max(6.0, 0.6 * len(names)), 4.0))
    ax.bar(idx - 0.2, iters, width=0.4, label="this run", color="C0")
    ref_idx = [i for i, v in enumerate(refs) if v is not None]
    ax.bar([i + 0.2 for i in ref_idx], [refs[i] for i in ref_idx],
           width=0.4, label="reference", color="C1")
    failed = [i for i, r in enumerate(rows) if r.get("Status") not in (None, "Converged")]
    for i in failed:
        ax.annotate(rows[i].get("Status", "?"), (idx[i] - 0.2, iters[i]),
                    rotation=90, fontsize=7, ha="center", va="bottom")
    ax.set_xticks(idx)
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("iterations")
    ax.legend()

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_compare_figure(per_variant: dict[int, list[dict]], path: str) -> None:
    """Grouped iteration counts for a variant side-by-side comparison."""
    variants = sorted(per_variant)
    names = [r["Prob"] for r in per_variant[variants[0]]]
    idx = np.arange(len(names))
    width = 0.8 / max(1, len(variants))

    fig, ax = plt.subplots(figsize=(max(6.0, 0.7 * len(names)), 4.0))
    for j, var in enumerate(variants):
        vals = [r["Iter"] if r.get("Iter") is not None else 0
                for r in per_variant[var]]
        ax.bar(idx + (j - (len(variants) - 1) / 2.0) * width, vals,
               width=width, label=f"variant {var}")
    ax.set_xticks(idx)
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("iterations")
    ax.legend()

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
