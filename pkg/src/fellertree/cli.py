"""Command-line interface: density grids, trees, oracle runs, self-checks, mtE numbers.

Numbers are written with 17 significant digits; grids are row-major with
the time axis ``s`` varying fastest.  Exit codes: 0 success, 1 usage
error, 2 domain error, 3 convergence failure, 4 resource cap, 5 a
self-check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import densities as D
from . import gof, kernel, oracle, samplers, selfcheck
from .errors import ConvergenceError, DomainError, ResourceCapError

SEED_ENV = "FELLERTREE_SEED"

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_RESOURCE, EXIT_SELFCHECK = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else fmt(f)
    return v


def render(header: Sequence[str], rows: List[Sequence], form: str) -> str:
    if form == "json":
        recs = [{h: _json_value(v) for h, v in zip(header, r)} for r in rows]
        return json.dumps(recs, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class GridSpec:
    s_min: float
    s_max: float
    s_steps: int
    z_min: float
    z_max: float
    z_steps: int
    s_log: bool = False
    z_log: bool = False

    def __post_init__(self):
        for lo, hi, n, name in ((self.s_min, self.s_max, self.s_steps, "s"),
                                (self.z_min, self.z_max, self.z_steps, "z")):
            if not lo < hi:
                raise UsageError(f"--{name}-min must be below --{name}-max")
            if n < 2:
                raise UsageError(f"--{name}-steps must be >= 2")
        if self.s_log and self.s_min <= 0 or self.z_log and self.z_min <= 0:
            raise UsageError("log axes need positive minima")

    @staticmethod
    def _axis(lo, hi, n, log):
        return np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)

    def s_axis(self):
        return self._axis(self.s_min, self.s_max, self.s_steps, self.s_log)

    def z_axis(self):
        return self._axis(self.z_min, self.z_max, self.z_steps, self.z_log)


@dataclass(frozen=True)
class Distribution:
    """A named grid-evaluable quantity.

    ``axes`` lists the varying arguments by role: ``s`` (a time), ``z``
    (a population) and ``k`` (an integer count).  ``fn`` is called as
    ``fn(ctx, s, z, k)`` with scalars.
    """

    axes: Tuple[str, ...]
    columns: Tuple[str, ...]
    regimes: Optional[Tuple[str, ...]]
    fn: Callable
    value: str = "density"
    needs: Tuple[str, ...] = ()


def _r(ctx):
    return ctx["regime"]


DISTRIBUTIONS: Dict[str, Distribution] = {
    "ancestors-pmf": Distribution(
        ("k", "s"), ("k", "s"), ("fixed-t1", "inf-t1", "unif-t1"),
        lambda c, s, z, k: D.ancestors_pmf(k, s, c["x"], _r(c), c["alpha"]), "probability"),
    "ancestors-pmf-unconditioned": Distribution(
        ("k", "s"), ("k", "s"), ("fixed-t1",),
        lambda c, s, z, k: D.ancestors_pmf_unconditioned_x(k, s, _r(c), c["alpha"]),
        "probability"),
    "initial-ancestors-pmf": Distribution(
        ("k",), ("k",), ("unif-x0",),
        lambda c, s, z, k: D.ancestors_pmf(k, _r(c).t, c["x"], _r(c), c["alpha"]),
        "probability"),
    "sample-ancestors-pmf": Distribution(
        ("k", "s"), ("k", "s"), ("fixed-t1", "inf-t1"),
        lambda c, s, z, k: D.sample_ancestors_pmf(k, c["n"], s, c["x"], _r(c), c["alpha"]),
        "probability", ("n",)),
    "sample-ancestors-pmf-unconditioned": Distribution(
        ("k", "s"), ("k", "s"), ("fixed-t1",),
        lambda c, s, z, k: D.sample_ancestors_pmf_unconditioned_x(
            k, c["n"], s, _r(c), c["alpha"]), "probability", ("n",)),
    "sample-mrca-cdf": Distribution(
        ("s",), ("s",), ("fixed-t1",),
        lambda c, s, z, k: D.sample_mrca_cdf(c["n"], s, _r(c), c["alpha"]), "cdf", ("n",)),
    "coalescent-marginal": Distribution(
        ("s",), ("s",), ("fixed-t1", "inf-t1", "unif-t1"),
        lambda c, s, z, k: D.coalescent_time_marginal(c["k"], s, c["x"], _r(c), c["alpha"]),
        needs=("k",)),
    "coalescent-cdf": Distribution(
        ("s",), ("s",), ("fixed-t1", "inf-t1", "unif-t1"),
        lambda c, s, z, k: D.coalescent_time_cdf(c["k"], s, c["x"], _r(c), c["alpha"]),
        "cdf", ("k",)),
    "coalescent-marginal-unconditioned": Distribution(
        ("s",), ("s",), ("fixed-t1",),
        lambda c, s, z, k: D.coalescent_time_marginal_unconditioned_x(
            c["k"], s, _r(c), c["alpha"]), needs=("k",)),
    "past-pop": Distribution(
        ("s", "z"), ("s", "z"), ("fixed-t1", "inf-t1"),
        lambda c, s, z, k: D.past_pop_density(z, s, c["x"], _r(c), c["alpha"])),
    "mrca-joint": Distribution(
        ("s", "z"), ("s", "z"), ("fixed-t1", "inf-t1", "unif-t1"),
        lambda c, s, z, k: D.mrca_joint_density(s, z, c["x"], _r(c), c["alpha"])),
    "final-pop": Distribution(
        ("z",), ("x",), ("fixed-t1",),
        lambda c, s, z, k: D.final_pop_density(z, _r(c), c["alpha"])),
    "transition": Distribution(
        ("z",), ("x",), None,
        lambda c, s, z, k: D.transition_density(c["x0"], z, c["t"], c["alpha"]).density,
        needs=("x0", "t")),
    "posterior-t1": Distribution(
        ("s",), ("t",), None,
        lambda c, s, z, k: D.posterior_t1_density(s, c["x"], c["alpha"])),
    "posterior-x0": Distribution(
        ("z",), ("x0",), None,
        lambda c, s, z, k: D.posterior_x0_density(z, c["x"], c["t"], c["alpha"]),
        needs=("t",)),
    "both-endpoints-pmf": Distribution(
        ("k",), ("l",), None,
        lambda c, s, z, k: D.ancestors_pmf_both_endpoints(k, c["x0"], c["x"], c["t"],
                                                          c["alpha"]),
        "probability", ("x0", "t")),
    "largex-marginal": Distribution(
        ("s",), ("s_tilde",), None,
        lambda c, s, z, k: D.largex_marginal(c["k"], s, c["alpha"]), needs=("k",)),
    "largex-mrca-joint": Distribution(
        ("s", "z"), ("s_tilde", "z"), None,
        lambda c, s, z, k: D.largex_mrca_joint(s, z, c["alpha"])),
}


# distributions that do not take the current population x
NO_X = frozenset({"ancestors-pmf-unconditioned", "sample-ancestors-pmf-unconditioned",
                  "sample-mrca-cdf", "coalescent-marginal-unconditioned", "final-pop",
                  "transition", "largex-marginal", "largex-mrca-joint"})


def evaluate_grid(dist: Distribution, ctx: dict, grid: GridSpec, k_range=(1, 10)):
    """Rows of the grid, outer axis first and ``s`` fastest."""
    s_ax = grid.s_axis() if "s" in dist.axes else [None]
    z_ax = grid.z_axis() if "z" in dist.axes else [None]
    k_ax = range(k_range[0], k_range[1] + 1) if "k" in dist.axes else [None]
    rows = []
    for k in k_ax:
        for z in z_ax:
            for s in s_ax:
                coords = {"s": s, "z": z, "k": k}
                val = dist.fn(ctx, s, z, k)
                rows.append([coords[a] for a in _ordered(dist.axes)] + [val])
    return rows


def _ordered(axes):
    """Column order: outer axes before ``s``."""
    return tuple(a for a in axes if a != "s") + (("s",) if "s" in axes else ())


def _header(dist: Distribution):
    names = dict(zip(dist.axes, dist.columns))
    return [names[a] for a in _ordered(dist.axes)] + [dist.value]


# ---------------------------------------------------------------------------
# argument handling


def _add_model(p, need_regime=True):
    if need_regime:
        p.add_argument("--regime", choices=D.REGIME_TAGS)
    p.add_argument("--alpha", type=float, default=1.0,
                   help="growth rate; with --alpha-x/--alpha-t only its sign is used")
    p.add_argument("--x", type=float, help="current population")
    p.add_argument("--t", type=float, help="time since the founder (fixed-t1, unif-x0)")
    p.add_argument("--alpha-x", type=float, help="dimensionless population alpha x")
    p.add_argument("--alpha-t", type=float, help="dimensionless time alpha t")


def _add_grid(p, s=(0.1, 4.0, 40), z=(0.05, 4.0, 40)):
    p.add_argument("--s-min", type=float, default=s[0])
    p.add_argument("--s-max", type=float, default=s[1])
    p.add_argument("--s-steps", type=int, default=s[2])
    p.add_argument("--z-min", type=float, default=z[0])
    p.add_argument("--z-max", type=float, default=z[1])
    p.add_argument("--z-steps", type=int, default=z[2])
    p.add_argument("--s-log", action="store_true")
    p.add_argument("--z-log", action="store_true")


def _model(args) -> dict:
    """Resolve raw or dimensionless parameters to ``alpha, x, t``."""
    alpha, x, t = args.alpha, args.x, args.t
    if args.alpha_x is not None or args.alpha_t is not None:
        if alpha == 0:
            raise UsageError("dimensionless inputs need a nonzero --alpha sign")
        alpha = math.copysign(1.0, alpha)
        if args.alpha_x is not None:
            if x is not None:
                raise UsageError("give either --x or --alpha-x")
            x = args.alpha_x
        if args.alpha_t is not None:
            if t is not None:
                raise UsageError("give either --t or --alpha-t")
            t = args.alpha_t
    return {"alpha": alpha, "x": x, "t": t}


def _regime(args, m) -> Optional[D.ConditioningRegime]:
    if getattr(args, "regime", None) is None:
        return None
    if args.regime in ("fixed-t1", "unif-x0") and m["t"] is None:
        raise UsageError(f"--regime {args.regime} needs --t or --alpha-t")
    return D.make_regime(args.regime, m["t"])


def _grid(args) -> GridSpec:
    return GridSpec(args.s_min, args.s_max, args.s_steps, args.z_min, args.z_max,
                    args.z_steps, args.s_log, args.z_log)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}")
    return samplers.DEFAULT_SEED


# ---------------------------------------------------------------------------
# commands


def _density_rows(name, args):
    if name not in DISTRIBUTIONS:
        raise UsageError(f"unknown distribution {name!r}; valid names: "
                         + ", ".join(sorted(DISTRIBUTIONS)))
    dist = DISTRIBUTIONS[name]
    m = _model(args)
    regime = _regime(args, m)
    if dist.regimes is not None:
        if regime is None or regime.tag not in dist.regimes:
            raise UsageError(f"{name} needs --regime in {{{', '.join(dist.regimes)}}}")
    ctx = dict(m, regime=regime, n=args.n, k=args.k, x0=args.x0)
    for need in dist.needs:
        if ctx.get(need) is None:
            raise UsageError(f"{name} needs --{need}")
    if name not in NO_X and ctx["x"] is None:
        raise UsageError(f"{name} needs --x or --alpha-x")
    if args.k_min > args.k_max:
        raise UsageError("--k-min must not exceed --k-max")
    return _header(dist), evaluate_grid(dist, ctx, _grid(args), (args.k_min, args.k_max))


def cmd_density(args):
    return _density_rows(args.distribution, args)


def cmd_mrca_joint(args):
    return _density_rows("mrca-joint", args)


def cmd_tree(args):
    m = _model(args)
    if args.regime not in ("fixed-t1", "inf-t1", "unif-t1"):
        raise UsageError("tree supports --regime fixed-t1, inf-t1 or unif-t1")
    if m["x"] is None:
        raise UsageError("tree needs --x or --alpha-x")
    if args.depth < 1 or args.count < 1:
        raise UsageError("--depth and --count must be >= 1")
    regime = _regime(args, m)
    rng = samplers.make_rng(_seed(args))
    trees = [samplers.sample_tree(regime, m["x"], m["alpha"], rng, args.depth)
             for _ in range(args.count)]
    if args.format in (None, "newick"):
        return None, [samplers.to_newick(tr) for tr in trees]
    header = ["tree", "index", "time"]
    rows = [[i, j + tr.first, v] for i, tr in enumerate(trees) for j, v in enumerate(tr.times)]
    return header, rows


def _bgw_summary(args):
    cfg = oracle.BgwConfig(args.lam, args.generations)
    rng = samplers.make_rng(_seed(args))
    res = oracle.survivors(cfg, args.paths, rng, back=args.back, min_pairs=args.paths)
    t = float(cfg.scaled_time(cfg.generations))
    regime = D.FixedT1(t)
    x = res.scaled_final()[:args.paths]
    ks_x = gof.ks_test(x, lambda v: D.final_pop_cdf(v, regime, 1.0))
    depth = res.mrca[res.final >= 2][:args.paths]
    lat = np.arange(0, cfg.generations + 1)
    ks_t2 = gof.lattice_ks(
        depth, lambda d: D.sample_mrca_cdf(2, min(float(cfg.scaled_time(d)), t), regime, 1.0),
        lat)
    s = float(cfg.scaled_time(args.back))
    anc = res.ancestors[:args.paths]
    kk = np.arange(1, max(int(anc.max()), 1) + 40)
    expected = np.array([np.sum(D.ancestors_pmf(k, s, x, regime, 1.0)) for k in kk])
    observed = np.bincount(anc, minlength=kk[-1] + 1)[1:kk[-1] + 1]
    chi = gof.pooled_chisquare(observed, expected)
    rows = [["paths", args.paths], ["attempted", res.attempted],
            ["survival_fraction", res.final.size / res.attempted],
            ["alpha_t", t], ["alpha_s", s],
            ["mean_alpha_x", float(np.mean(x))], ["beta_t", kernel.beta(t, 1.0)],
            ["ks_final_population", ks_x.statistic], ["ks_pair_mrca", ks_t2],
            ["chi2_ancestors", chi.statistic], ["chi2_ancestors_p", chi.pvalue]]
    return ["statistic", "value"], rows


def _bgw_trajectories(args):
    cfg = oracle.BgwConfig(args.lam, args.generations)
    rng = samplers.make_rng(_seed(args))
    kept = []
    while len(kept) < args.paths:
        y = oracle.simulate_bgw_sizes(cfg, rng, 1000)
        kept.extend(y[y[:, -1] > 0])
    y = np.array(kept[:args.paths])
    g = np.arange(cfg.generations + 1)
    at = cfg.scaled_time(g)
    ref = 0.5 * np.exp(at)
    rows = [[i, int(gi), float(at[gi]), float(cfg.scaled_population(y[i, gi])), float(ref[gi])]
            for i in range(y.shape[0]) for gi in g]
    return ["path", "generation", "alpha_t", "alpha_x", "reference"], rows


def _bd_summary(args):
    cfg = oracle.BdConfig(args.epsilon, args.alpha, args.horizon)
    rng = samplers.make_rng(_seed(args))
    got = []
    tried = 0
    while sum(v.size for v in got) < args.paths:
        m = oracle.simulate_bd_sizes(cfg, rng, args.batch)
        tried += args.batch
        got.append(m[m > 0])
    m = np.concatenate(got)[:args.paths]
    x = cfg.epsilon * m
    regime = D.FixedT1(cfg.horizon)
    ks = gof.ks_test(x, lambda v: D.final_pop_cdf(v, regime, cfg.alpha))
    rows = [["paths", args.paths], ["attempted", tried],
            ["survival_fraction", sum(v.size for v in got) / tried],
            ["survival_diffusion", -math.expm1(-cfg.epsilon * kernel.mu(cfg.horizon, cfg.alpha))],
            ["mean_x", float(np.mean(x))], ["beta_t", kernel.beta(cfg.horizon, cfg.alpha)],
            ["ks_final_population", ks.statistic], ["ks_p", ks.pvalue]]
    return ["statistic", "value"], rows


def cmd_oracle(args):
    if args.paths < 1:
        raise UsageError("--paths must be >= 1")
    if args.process == "bgw":
        if args.emit_trajectories:
            return _bgw_trajectories(args)
        return _bgw_summary(args)
    return _bd_summary(args)


def cmd_selfcheck(args):
    ident, norm, (t_id, t_norm) = selfcheck.run_all(args.identity_draws, args.norm_draws,
                                                    args.seed if args.seed is not None else 0)
    lines = ["identity suite"] + [r.line() for r in ident]
    lines += [f"time {t_id:.3f}s", "normalization suite"] + [r.line() for r in norm]
    lines.append(f"time {t_norm:.3f}s")
    ok = all(r.passed for r in ident + norm)
    lines.append("ALL PASS" if ok else "FAILURES PRESENT")
    return None, lines, (EXIT_OK if ok else EXIT_SELFCHECK)


def cmd_mte(args):
    if not args.generation_years > 0:
        raise UsageError("--generation-years must be positive")
    r = D.mte_summary(args.y, args.log_lambda, args.sigma2)
    g = args.generation_years
    rows = [["alpha_x", r.alpha_x], ["mean_generations", r.mean_generations],
            ["var_generations", r.var_generations], ["sd_generations", r.sd_generations],
            ["mean_years", g * r.mean_generations], ["sd_years", g * r.sd_generations],
            ["mean_population", r.mean_population], ["var_population", r.var_population],
            ["sd_population", r.sd_population]]
    return ["quantity", "value"], rows


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="fellertree", description=__doc__.splitlines()[0])
    top.add_argument("--format", choices=("csv", "json", "newick"), default=None,
                     help="output format (csv by default, newick for trees)")
    top.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("density", help="evaluate a named distribution on a grid")
    p.add_argument("distribution", help="one of: " + ", ".join(sorted(DISTRIBUTIONS)))
    _add_model(p)
    _add_grid(p)
    p.add_argument("--k", type=int, help="coalescent index")
    p.add_argument("--n", type=int, help="sample size")
    p.add_argument("--x0", type=float, help="initial population")
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=10)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("mrca-joint", help="joint density of the MRCA time and population")
    _add_model(p)
    _add_grid(p)
    p.set_defaults(func=cmd_mrca_joint, k=None, n=None, x0=None, k_min=1, k_max=1)

    p = sub.add_parser("tree", help="sample truncated coalescent trees")
    _add_model(p)
    p.add_argument("--depth", type=int, default=samplers.DEFAULT_DEPTH)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("oracle", help="branching-process Monte Carlo against the diffusion")
    osub = p.add_subparsers(dest="process", parser_class=_Parser)
    b = osub.add_parser("bgw")
    b.add_argument("--lambda", dest="lam", type=float, default=1.01)
    b.add_argument("--generations", type=int, default=100)
    b.add_argument("--paths", type=int, default=10_000)
    b.add_argument("--back", type=int, default=50)
    b.add_argument("--seed", type=int)
    b.add_argument("--emit-trajectories", action="store_true")
    b.set_defaults(func=cmd_oracle)
    d = osub.add_parser("bd")
    d.add_argument("--epsilon", type=float, default=0.02)
    d.add_argument("--alpha", type=float, default=1.0)
    d.add_argument("--horizon", type=float, default=1.0)
    d.add_argument("--paths", type=int, default=2000)
    d.add_argument("--batch", type=int, default=20_000)
    d.add_argument("--seed", type=int)
    d.set_defaults(func=cmd_oracle)

    p = sub.add_parser("selfcheck", help="identity and normalization suites")
    p.add_argument("--identity-draws", type=int, default=200)
    p.add_argument("--norm-draws", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_selfcheck)

    p = sub.add_parser("mte", help="time back to a population MRCA for a growing population")
    p.add_argument("--y", type=float, default=3e6, help="current head count")
    p.add_argument("--log-lambda", type=float, default=0.0015)
    p.add_argument("--sigma2", type=float, default=2.0)
    p.add_argument("--generation-years", type=float, default=20.0)
    p.set_defaults(func=cmd_mte)
    return top


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            raise UsageError(parser.format_usage().strip())
        result = args.func(args)
        code = EXIT_OK
        if len(result) == 3:
            header, rows, code = result
        else:
            header, rows = result
        form = args.format or ("newick" if args.command == "tree" else "csv")
        if header is None:
            if form == "json":
                text = json.dumps(rows, indent=1) + "\n"
            else:
                text = "\n".join(rows) + "\n"
        else:
            if form == "newick":
                raise UsageError("--format newick applies to the tree command only")
            text = render(header, rows, form)
        _emit(text, args.output)
        return code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main(argv: Optional[Sequence[str]] = None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
