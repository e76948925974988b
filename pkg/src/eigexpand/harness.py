"""Experiment driver: expansion sweeps, trace persistence, plots.

Every strategy starts from the same seeded d-dimensional random subspace and
expands it until the target dimension m.  Each row of the trace records the
distance of the subspace to the reference eigenvector and the relative
residual norms of both the standard Rayleigh-Ritz and the refined extraction
on the current subspace, so a single sweep yields the paired standard/refined
curves for every expansion policy.
"""

from dataclasses import dataclass

import numpy as np

from . import extraction, linalg, problems, strategies, subspace

CSV_HEADER = "k,strategy,dim,sin_angle,cos_angle,rel_res_standard,rel_res_refined,rank_R"

# exceptions that halt a single strategy without aborting the sweep
HALTING = (strategies.Stagnated, subspace.InvariantSubspace,
           subspace.NotOrthogonal, linalg.AllDeficient, linalg.ZeroMatrix,
           linalg.NoConvergence, extraction.SingularPencil)


@dataclass
class TraceRow:
    k: int                     # expansion iteration (k = d for the start)
    strategy: str
    dim: int                   # subspace dimension (ahead of k for vr/pairs)
    sin_angle: float
    cos_angle: float
    rel_res_standard: float
    rel_res_refined: float
    rank_r: int
    halted: bool = False       # not serialized; marks where a strategy stopped


@dataclass
class ExperimentConfig:
    problem: problems.Problem
    d: int
    m: int
    seed: int
    strategies: list
    target: extraction.TargetSpec

    def __post_init__(self):
        n = self.problem.a.shape[0]
        if not (1 <= self.d <= self.m <= n):
            raise ValueError("need 1 <= d <= m <= n, got d=%d m=%d n=%d"
                             % (self.d, self.m, n))
        if not self.strategies:
            raise ValueError("at least one strategy is required")
        if self.problem.reference is None:
            raise ValueError("the problem needs a reference eigenpair")


def _measure(state, tag, k_iter, x):
    # the trace follows the reference pair, so the measured Ritz pair is the
    # one nearest to x; spectral selection would hop between cluster members
    cos, sin = linalg.angles(state.v, x)
    try:
        pairs = extraction.ritz_pairs(state.a, state.v, state.av,
                                      a_norm1=state.a_norm1)
        near = extraction.TargetSpec(extraction.NEAREST_TO_REFERENCE, reference=x)
        sel = extraction.select(pairs, near)
        res_std = sel.res_norm
        refined = extraction.refined_vector(state.a, state.v, state.av,
                                            sel.value, a_norm1=state.a_norm1)
        res_ref = refined.res_norm
    except HALTING:
        res_std = res_ref = float("nan")
    if subspace.residual_vanished(state):
        rank = 0
    else:
        _, rank = linalg.rank_revealing_basis(state.r)
    return TraceRow(k=k_iter, strategy=tag, dim=state.k, sin_angle=sin,
                    cos_angle=cos, rel_res_standard=res_std,
                    rel_res_refined=res_ref, rank_r=rank)


def run_experiment(cfg):
    """Run the d-to-m expansion sweep for every strategy in the config.

    All strategies share the same seeded starting basis.  A strategy hitting
    stagnation or an invariant subspace keeps its last row flagged as halted
    while the others continue.  Rows come back sorted by (strategy, k).
    """
    lam, x = cfg.problem.reference
    a = cfg.problem.a
    v0 = problems.initial_basis(a.shape[0], cfg.d, cfg.seed)
    rows = []
    for strat in cfg.strategies:
        state = subspace.init(a, v0)
        k_iter = cfg.d
        srows = [_measure(state, strat.tag, k_iter, x)]
        while state.k < cfg.m:
            try:
                prop = strategies.propose(strat, state, reference=x)
                for j in range(prop.directions.shape[1]):
                    if state.k >= cfg.m:
                        break
                    state = subspace.expand(state, prop.directions[:, j])
            except HALTING:
                srows[-1].halted = True
                break
            k_iter += 1
            srows.append(_measure(state, strat.tag, k_iter, x))
        rows.extend(srows)
    rows.sort(key=lambda r: (r.strategy, r.k))
    return rows


def _fmt(v):
    return format(float(v), ".17g")


def write_trace_csv(rows, path):
    """Write rows as UTF-8 CSV with 17 significant digits, (strategy, k) sorted."""
    if not rows:
        raise ValueError("no rows to write")
    out = [CSV_HEADER]
    for r in sorted(rows, key=lambda r: (r.strategy, r.k)):
        out.append(",".join([str(r.k), r.strategy, str(r.dim), _fmt(r.sin_angle),
                             _fmt(r.cos_angle), _fmt(r.rel_res_standard),
                             _fmt(r.rel_res_refined), str(r.rank_r)]))
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(out) + "\n")


def read_trace_csv(path):
    """Read back a trace CSV written by write_trace_csv."""
    with open(path, "r", encoding="utf-8") as f:
        lines = [ln for ln in f.read().splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unrecognized trace header in %s" % path)
    rows = []
    for ln in lines[1:]:
        t = ln.split(",")
        rows.append(TraceRow(k=int(t[0]), strategy=t[1], dim=int(t[2]),
                             sin_angle=float(t[3]), cos_angle=float(t[4]),
                             rel_res_standard=float(t[5]),
                             rel_res_refined=float(t[6]), rank_r=int(t[7])))
    return rows


QUANTITIES = ("sin_angle", "rel_res_standard", "rel_res_refined")


def emit_plot(rows, path, quantity="sin_angle"):
    """One log-scale curve per strategy of the chosen quantity vs dimension.

    Saved as a self-contained vector-graphics file (format from the file
    extension, svg by default).  NaN cells of halted strategies truncate the
    curve instead of crashing.
    """
    if not rows:
        raise ValueError("no rows to plot")
    if quantity not in QUANTITIES:
        raise ValueError("unknown quantity %r" % (quantity,))
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    tags = sorted({r.strategy for r in rows})
    for tag in tags:
        sub = sorted((r for r in rows if r.strategy == tag), key=lambda r: r.k)
        xs = np.array([r.dim for r in sub], dtype=float)
        ys = np.array([getattr(r, quantity) for r in sub], dtype=float)
        keep = np.isfinite(ys)
        ax.semilogy(xs[keep], ys[keep],
                    label=strategies.DISPLAY.get(tag, tag))
    ax.set_xlabel("subspace dimension")
    ax.set_ylabel(quantity.replace("_", " "))
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fmt = path.rsplit(".", 1)[-1].lower() if "." in path else "svg"
    if fmt not in ("svg", "pdf", "eps", "ps"):
        fmt = "svg"
    fig.savefig(path, format=fmt)
    plt.close(fig)
