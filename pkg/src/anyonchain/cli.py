"""Command line driver: ``anyonchain <subcommand> [options]``.

Every subcommand writes a CSV table (header row, 17 significant digits) to
``--output`` or stdout, and the fully resolved configuration as ``key=value``
lines next to it (``<output>.config``) or on stderr. Options may also come from
a flat ``key=value`` file given by ``--config``; command line flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import tempfile

import numpy as np

from . import analytic, category, entropy, fusion, hamiltonian
from .svgplot import Figure


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# value parsing


def int_list(text: str) -> list[int]:
    """``"5"``, ``"2,4,8"`` or an inclusive range ``"8:20"`` / ``"8:20:2"``."""
    text = str(text).strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            a, b, s = parts
            if s <= 0:
                raise ValueError
            return list(range(a, b + 1, s))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None


def float_list(text: str) -> list[float]:
    """Comma list of floats, or ``"start:stop:count"`` for evenly spaced values."""
    text = str(text).strip()
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return [float(v) for v in np.linspace(float(a), float(b), int(n))]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a float list: {text!r}") from None


def parity_value(text: str):
    text = str(text).strip().lower()
    if text in ("+1", "1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    if text in ("both", "none", "all"):
        return None
    raise argparse.ArgumentTypeError(f"parity must be +1, -1 or both, got {text!r}")


def _bool(text: str) -> bool:
    text = str(text).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    if v is None:
        return ""
    return str(v)


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


# ---------------------------------------------------------------------------
# output


def atomic_write(path: str, text: str):
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


_INTERNAL = {"func", "config"}


def config_text(args) -> str:
    items = sorted((k, v) for k, v in vars(args).items() if k not in _INTERNAL)
    lines = []
    for k, v in items:
        if isinstance(v, list):
            v = ",".join(fmt(x) for x in v)
        lines.append(f"{k}={fmt(v)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# model selection


def _model(args) -> category.AnyonModel:
    if args.model == "su2k":
        if args.k is None:
            raise ConfigError("--k is required for su2k")
        return category.build_su2k(args.k)
    if args.model == "zn":
        if args.n is None:
            raise ConfigError("--n is required for zn")
        return category.build_abelian_zn(args.n)
    return category.build_fibonacci()


def _param(args):
    return {"su2k": args.k, "zn": args.n}.get(args.model)


def _default_jext(args, model) -> str:
    if args.jext is not None:
        return args.jext
    return {"su2k": "1/2", "fibonacci": "tau", "zn": "1"}[args.model]


def _charges(model, J) -> list[int]:
    if J is None:
        return list(range(model.n))
    return [model.index(j) for j in J.split(",")]


def _L_values(args) -> list[int]:
    if args.L is None:
        raise ConfigError("--L is required")
    Ls = args.L
    if any(L < 1 for L in Ls):
        raise ConfigError("chain lengths must be positive")
    return Ls


# ---------------------------------------------------------------------------
# subcommands; each returns (header, rows, figure or None)


def cmd_validate(args):
    model = _model(args)
    rep = category.validate(model, tol=args.tol)
    if args.dump:
        atomic_write(args.dump, category.dump_model(model))
    r = rep.residuals
    header = ["model", "k", "pentagon", "hexagon", "f_unitarity", "verlinde", "qdim", "valid"]
    row = [args.model, _param(args), r["pentagon"], r["hexagon"], r["f_unitarity"], r["verlinde"], r["qdim"], rep.valid]
    return header, [row], None


def cmd_dims(args):
    model = _model(args)
    jext = model.index(_default_jext(args, model))
    rows = []
    for L in _L_values(args):
        for J in _charges(model, args.J):
            dv = fusion.dim_verlinde(model, jext, L, J) if model.is_modular else float("nan")
            rows.append(
                [args.model, _param(args), model.labels[jext], L, model.labels[J],
                 fusion.dim_bruteforce(model, jext, L, J), dv]
            )
    header = ["model", "k", "jext", "L", "J", "dim_bruteforce", "dim_verlinde"]
    return header, rows, None


def _LA_values(args, L) -> list[int]:
    LAs = args.LA if args.LA is not None else list(range(1, L))
    bad = [x for x in LAs if not 1 <= x <= L]
    if bad:
        raise ConfigError(f"LA values {bad} outside 1..{L}")
    return LAs


def cmd_page_curve(args):
    if args.analytic == args.montecarlo:
        raise ConfigError("choose exactly one of --analytic / --montecarlo")
    model = _model(args)
    jext = model.index(_default_jext(args, model))
    J = model.index(args.J or "0")
    rows = []
    fig_series = {}
    for L in _L_values(args):
        if fusion.dim_bruteforce(model, jext, L, J) == 0:
            raise ConfigError(f"charge {model.labels[J]} is not reachable with L={L}")
        for LA in _LA_values(args, L):
            base = [args.model, _param(args), model.labels[jext], L, LA, model.labels[J]]
            if args.analytic:
                dims = analytic.sector_dims(model, jext, L, LA, J)
                ex = analytic.exact_average_aee(dims)
                asy = analytic.asymptotic_aee(model, jext, J, L, LA / L)
                rows.append(base + [ex, asy, analytic.exact_variance(dims)])
                fig_series.setdefault(L, []).append((LA / L, ex, asy))
            else:
                dec = fusion.bipartite_decomposition(model, jext, L, LA, J)
                st = entropy.monte_carlo_aee(dec, args.n_samples, [args.seed, LA], args.threads)
                rows.append(base + [args.n_samples, args.seed, st.mean, st.standard_error, st.sample_variance])
                fig_series.setdefault(L, []).append((LA / L, st.mean, float("nan")))
    if args.analytic:
        header = ["model", "k", "jext", "L", "LA", "J", "exact_aee", "asympt_aee", "exact_var"]
    else:
        header = ["model", "k", "jext", "L", "LA", "J", "n_samples", "seed", "mean_aee", "stderr", "sample_var"]
    fig = Figure("Average anyonic entanglement entropy", "f = LA / L", "AEE (nats)")
    for L, pts in fig_series.items():
        pts = np.array(pts)
        fig.line(pts[:, 0], pts[:, 1], f"L={L}", markers=True)
        if args.analytic:
            fig.line(pts[:, 0], pts[:, 2], f"L={L} asymptotic", dashed=True)
    return header, rows, fig


def cmd_variance(args):
    model = _model(args)
    jext = model.index(_default_jext(args, model))
    J = model.index(args.J or "0")
    rows = []
    for L in _L_values(args):
        LAs = args.LA if args.LA is not None else [L // 2]
        for LA in LAs:
            if not 1 <= LA < L:
                raise ConfigError(f"LA={LA} outside 1..{L - 1}")
            var = analytic.exact_variance(analytic.sector_dims(model, jext, L, LA, J))
            rows.append(
                [args.model, _param(args), model.labels[jext], L, LA, model.labels[J], LA / L, var,
                 math.log(var) if var > 0 else float("-inf"),
                 analytic.asymptotic_variance(model, jext, L, LA / L)]
            )
    header = ["model", "k", "jext", "L", "LA", "J", "f", "exact_var", "log_exact_var", "asympt_log_var"]
    return header, rows, None


def cmd_crossover(args):
    model = _model(args)
    jext = model.index(_default_jext(args, model))
    J = model.index(args.J or "0")
    rows = []
    fig = Figure("Resolved crossover", "Lambda", "AEE (nats)")
    for L in _L_values(args):
        vals = []
        for lam in args.Lam:
            val = analytic.resolved_crossover(model, jext, J, L, lam, args.s)
            vals.append(val)
            rows.append([args.model, _param(args), model.labels[jext], L, model.labels[J], args.s, lam,
                         0.5 + lam / (2 * L**args.s), val])
        fig.line(args.Lam, vals, f"L={L}")
    header = ["model", "k", "jext", "L", "J", "s", "Lambda", "f", "resolved_aee"]
    return header, rows, fig


def cmd_qsree(args):
    if args.k is None:
        raise ConfigError("--k is required")
    jext = args.jext or "1/2"
    J = args.J or "0"
    rows = []
    for L in _L_values(args):
        for f in args.f:
            if not 0 < f <= 0.5:
                raise ConfigError("q-SREE closed forms need 0 < f <= 1/2")
            cases = [args.parity_case] if args.parity_case else [analytic.INTEGER, analytic.HALF_INTEGER]
            if args.k % 2 == 1:
                cases = cases[:1]
            for case in cases:
                rows.append([args.k, jext, J, L, f, case, analytic.q_sree(args.k, jext, J, L, f, case)])
    return ["k", "jext", "J", "L", "f", "parity_case", "q_sree"], rows, None


def _chain_spec(args, L, parity):
    return hamiltonian.GoldenChainSpec(L, args.lam, args.J or "0", parity)


def cmd_gc_spectrum(args):
    rows = []
    for L in _L_values(args):
        spec = _chain_spec(args, L, args.parity)
        res = hamiltonian.golden_chain_spectrum(spec)
        for m, (E, p) in enumerate(zip(res.eigenvalues, res.parities)):
            rows.append([L, spec.J, int(p), args.lam, m, E])
    return ["L", "J", "parity", "lambda", "m", "E_m"], rows, None


def cmd_gc_levels(args):
    parity = 1 if args.parity is None else args.parity
    rows = []
    fig = None
    for L in _L_values(args):
        spec = _chain_spec(args, L, parity)
        res = hamiltonian.golden_chain_spectrum(spec)
        stats = hamiltonian.level_spacing_ratios(res.eigenvalues, bins=args.bins)
        for m, (E, r) in enumerate(zip(res.eigenvalues, stats.ratios)):
            rows.append([L, spec.J, parity, args.lam, m, E, r])
        print(f"L={L} lambda={fmt(args.lam)} mean_r={fmt(stats.mean)} dropped={stats.n_dropped}", file=sys.stderr)
        fig = Figure(f"Level-spacing ratios (L={L}, lambda={args.lam:g})", "r", "P(r)")
        fig.histogram(stats.bin_edges, stats.histogram)
        r = np.linspace(0, 1, 201)
        ref = hamiltonian.reference_ratio_pdfs(r, caption_variant=args.caption_variant)
        fig.line(r, ref["goe"], "GOE", dashed=True)
        fig.line(r, ref["poisson"], "Poisson", dashed=True)
    return ["L", "J", "parity", "lambda", "m", "E_m", "r_m"], rows, fig


def cmd_gc_aee(args):
    parity = 1 if args.parity is None else args.parity
    rows = []
    fig = Figure("Mid-spectrum eigenstate AEE", "f = LA / L", "AEE (nats)")
    for L in _L_values(args):
        spec = _chain_spec(args, L, parity)
        LAs = args.LA if args.LA is not None else list(range(1, L))
        if any(not 1 <= x <= L - 1 for x in LAs):
            raise ConfigError(f"LA values must lie in 1..{L - 1}")
        c = hamiltonian.eigenstate_aee_curve(spec, args.window, LAs, args.threads)
        for i, LA in enumerate(c.LA):
            rows.append([L, spec.J, parity, args.lam, LA, c.f[i], c.mean_aee[i], c.n_states,
                         c.analytic_exact[i], c.analytic_asymptotic[i]])
        fig.line(c.f, c.mean_aee, f"eigenstates L={L}", markers=True)
        fig.line(c.f, c.analytic_exact, f"Haar exact L={L}")
        fig.line(c.f, c.analytic_asymptotic, f"asymptotic L={L}", dashed=True)
    header = ["L", "J", "parity", "lambda", "LA", "f", "mean_aee", "n_states", "analytic_exact", "analytic_asymptotic"]
    return header, rows, fig


def cmd_gc_asymmetry(args):
    parity = 1 if args.parity is None else args.parity
    rows = []
    fig = Figure("Asymmetry of the eigenstate Page curve", "f", "Delta(f)")
    for L in _L_values(args):
        spec = _chain_spec(args, L, parity)
        LAs = args.LA if args.LA is not None else list(range(1, L // 2 + 1))
        if any(not 1 <= x <= L - 1 for x in LAs):
            raise ConfigError(f"LA values must lie in 1..{L - 1}")
        f, d = hamiltonian.asymmetry_curve(spec, LAs, args.window, args.threads)
        for LA, fv, dv in zip(LAs, f, d):
            rows.append([L, spec.J, parity, args.lam, LA, fv, dv])
        fig.line(f, d, f"L={L}", markers=True)
        fig.line(f, np.full(len(f), math.log(spec.model.qdim[spec.model.index(spec.J)])), "log d_J", dashed=True)
    return ["L", "J", "parity", "lambda", "LA", "f", "delta"], rows, fig


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, model=True):
    p.add_argument("--config", help="flat key=value file; flags override its keys")
    p.add_argument("--output", "-o", help="CSV path (default: stdout)")
    p.add_argument("--svg", help="optional SVG plot path")
    p.add_argument("--threads", type=int, help="worker threads (default: ANYONCHAIN_THREADS or CPU count)")
    if model:
        p.add_argument("--model", choices=["su2k", "fibonacci", "zn"], default="fibonacci")
        p.add_argument("--k", type=int, help="level of SU(2)_k")
        p.add_argument("--n", type=int, help="order of Z_n")
        p.add_argument("--jext", help="charge of each anyon (label name, e.g. 1/2, 1, tau)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anyonchain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    model_p = sub.add_parser("model", help="anyon model utilities")
    model_sub = model_p.add_subparsers(dest="action", required=True)
    p = model_sub.add_parser("validate", help="pentagon/hexagon/unitarity/Verlinde residuals")
    _common(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--dump", help="also write the model as JSON to this path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dims", help="fusion-space dimensions")
    _common(p)
    p.add_argument("--L", type=int_list)
    p.add_argument("--J", help="comma list of total charges (default: all)")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("page-curve", help="average AEE versus subsystem size")
    _common(p)
    p.add_argument("--analytic", action="store_true")
    p.add_argument("--montecarlo", action="store_true")
    p.add_argument("--L", type=int_list)
    p.add_argument("--LA", type=int_list)
    p.add_argument("--J")
    p.add_argument("--n-samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_page_curve)

    p = sub.add_parser("variance", help="exact Haar variance of the AEE")
    _common(p)
    p.add_argument("--L", type=int_list)
    p.add_argument("--LA", type=int_list, help="default: L // 2")
    p.add_argument("--J")
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("crossover", help="AEE in the double-scaling window around f = 1/2")
    _common(p)
    p.add_argument("--L", type=int_list)
    p.add_argument("--J")
    p.add_argument("--Lam", type=float_list, default=float_list("-3:3:13"))
    p.add_argument("--s", type=float, default=1.0)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("qsree", help="large-L q-deformed symmetry-resolved entropy of SU(2)_k")
    _common(p, model=False)
    p.add_argument("--k", type=int)
    p.add_argument("--jext")
    p.add_argument("--J")
    p.add_argument("--L", type=int_list)
    p.add_argument("--f", type=float_list, default=[0.5])
    p.add_argument("--parity-case", choices=[analytic.INTEGER, analytic.HALF_INTEGER])
    p.set_defaults(func=cmd_qsree)

    gc = sub.add_parser("golden-chain", help="golden chain exact diagonalization")
    gc_sub = gc.add_subparsers(dest="action", required=True)
    for name, func, helptext in [
        ("spectrum", cmd_gc_spectrum, "eigenvalues"),
        ("levels", cmd_gc_levels, "level-spacing ratios"),
        ("aee-curve", cmd_gc_aee, "mid-spectrum eigenstate AEE per cut"),
        ("asymmetry", cmd_gc_asymmetry, "Delta(f) = |S(f) - S(1-f)|"),
    ]:
        p = gc_sub.add_parser(name, help=helptext)
        _common(p, model=False)
        p.add_argument("--L", type=int_list)
        p.add_argument("--lam", "--lambda", type=float, default=0.9, dest="lam")
        p.add_argument("--J", help="0 or tau")
        p.add_argument("--parity", type=parity_value, help="+1, -1 or both")
        if name in ("aee-curve", "asymmetry"):
            p.add_argument("--LA", type=int_list)
            p.add_argument("--window", type=int, help="number of central eigenstates")
        if name == "levels":
            p.add_argument("--bins", type=int, default=20)
            p.add_argument("--caption-variant", action="store_true",
                           help="overlay 2/(1+r^2) instead of 2/(1+r)^2")
        p.set_defaults(func=func)
    return parser


def _leaf_parser(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.ArgumentParser:
    """The sub-parser selected by the leading positional words of ``argv``."""
    current = parser
    for word in argv:
        if word.startswith("-"):
            break
        subs = [a for a in current._actions if isinstance(a, argparse._SubParsersAction)]
        if not subs or word not in subs[0].choices:
            break
        current = subs[0].choices[word]
    return current


def _apply_config(leaf: argparse.ArgumentParser, cfg: dict[str, str]):
    actions = {a.dest: a for a in leaf._actions}
    defaults = {}
    for key, raw in cfg.items():
        if key in _INTERNAL or key in ("command", "action"):
            continue
        act = actions.get(key)
        if act is None:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(act, argparse._StoreTrueAction):
            value = _bool(raw)
        elif act.type is not None:
            try:
                value = act.type(raw)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {exc}") from None
        else:
            value = raw
        if act.choices is not None and value not in act.choices:
            raise ConfigError(f"{key} must be one of {sorted(act.choices)}")
        defaults[key] = value
    leaf.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    leaf = _leaf_parser(parser, argv)
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        if known.config:
            _apply_config(leaf, read_config(known.config))
    except ConfigError as exc:
        print(f"anyonchain: error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = entropy._default_threads()
    if args.threads < 1:
        print("anyonchain: error: --threads must be positive", file=sys.stderr)
        return 2
    try:
        header, rows, fig = args.func(args)
    except (ConfigError, ValueError, fusion.UnsupportedOperation) as exc:
        print(f"anyonchain: error: {exc}", file=sys.stderr)
        return 2
    text = csv_text(header, rows)
    cfg = config_text(args)
    if args.output:
        atomic_write(args.output, text)
        atomic_write(args.output + ".config", cfg)
    else:
        sys.stdout.write(text)
        sys.stderr.write(cfg)
    if args.svg and fig is not None and fig.series:
        atomic_write(args.svg, fig.render())
    return 0


if __name__ == "__main__":
    sys.exit(main())
