"""Command-line harness: data generation, solvers, evaluation and sweeps.

Subcommands::

    roid generate  --dims 40,40,40 --rank 3 --seed 7 --out t.dns
    roid mask      --input t.dns --ratio 0.3 --seed 1 --out obs.coo
    roid noise     --input t.dns --nf 0.1 --seed 2 --out tn.dns
    roid complete  --method roid --obs obs.coo --rank 3,3,3 --out rec.dns --report rep.csv
    roid decompose --method hooi --input t.dns --rank 3 --out rec.dns
    roid evaluate  --pred rec.dns --truth t.dns
    roid bench     --spec sweep.cfg --out results.csv --jobs 4

Solver parameters may come from a flat ``key = value`` file given with
``--config``; explicit flags win over file values.  Exit status is 0 on
success, 1 on usage or input errors, and 2 when ``--strict`` is set and a
solver stops without converging.
"""

import argparse
import hashlib
import itertools
import json
import os
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np

from . import io as rio
from .datagen import add_noise, gen_tucker, knn_affinity, laplacian_from_affinity, sample_mask
from .metrics import auc, rse
from .solvers import SolverConfig, solve_full, solve_groid, solve_hooi, solve_roid, solve_shooi

__all__ = ["main", "run"]

COMPLETION_METHODS = ("roid", "groid", "shooi")
DECOMPOSITION_METHODS = ("full", "hooi")

# config-file keys that map onto SolverConfig fields
SOLVER_KEYS = {
    "lambda": ("lam", float),
    "lam": ("lam", float),
    "mu": ("mu", float),
    "rho0": ("rho0", float),
    "gamma": ("gamma", float),
    "rho_min": ("rho_min", float),
    "rho_max": ("rho_max", float),
    "tol": ("tol", float),
    "maxiter": ("maxiter", int),
    "init": ("init", str),
    "seed": ("seed", int),
}

# seed offsets keep the tensor, mask and noise streams of one cell apart
MASK_SEED_OFFSET = 1_000_003
NOISE_SEED_OFFSET = 2_000_003


class UsageError(Exception):
    """Bad arguments or unreadable inputs; reported with exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _log(msg):
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------- parsing


def parse_triple(text):
    """``"40"``, ``"40,40,40"`` or ``"40x40x40"`` to a triple of ints."""
    parts = [p for p in str(text).replace("x", ",").split(",") if p.strip()]
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"expected integers, got {text!r}") from None
    if len(vals) == 1:
        vals = vals * 3
    if len(vals) != 3 or min(vals) < 1:
        raise UsageError(f"expected one or three positive integers, got {text!r}")
    return vals


def parse_weights(text):
    try:
        vals = tuple(float(p) for p in str(text).split(","))
    except ValueError:
        raise UsageError(f"weights must be three numbers, got {text!r}") from None
    if len(vals) != 3:
        raise UsageError(f"weights must be three numbers, got {text!r}")
    return vals


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}: line {lineno}: expected key = value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value.strip("\"'")
    return out


def apply_overrides(cfg, pairs):
    for pair in pairs or ():
        if "=" not in pair:
            raise UsageError(f"--set expects key=value, got {pair!r}")
        key, value = (s.strip() for s in pair.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def solver_config(values, rank):
    """Build a :class:`SolverConfig` from string-valued settings."""
    kwargs = {}
    for key, raw in values.items():
        if key in SOLVER_KEYS:
            name, conv = SOLVER_KEYS[key]
            try:
                kwargs[name] = conv(raw)
            except ValueError:
                raise UsageError(f"bad value for {key}: {raw!r}") from None
    if "weights" in values:
        kwargs["weights"] = parse_weights(values["weights"])
    try:
        return SolverConfig(rank=rank, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _solver_settings(args):
    """Config-file values overridden by explicit flags."""
    values = read_config(args.config) if args.config else {}
    for key in ("lam", "mu", "tol", "maxiter", "rho0", "init", "seed", "weights"):
        flag = getattr(args, key, None)
        if flag is not None:
            values["lambda" if key == "lam" else key] = str(flag)
    if "lam" in values:
        values.setdefault("lambda", values.pop("lam"))
    return values


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _dims_text(dims):
    return "x".join(str(int(d)) for d in dims)


def _hash(payload):
    text = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _load_laplacians(spec, dims):
    """``none`` for zeros, else three comma-separated affinity files (``none`` per mode allowed)."""
    if spec is None or spec == "none":
        return [np.zeros((d, d)) for d in dims]
    paths = spec.split(",")
    if len(paths) != 3:
        raise UsageError(f"--graphs needs three comma-separated files, got {spec!r}")
    laps = []
    for path, d in zip(paths, dims):
        if path == "none":
            laps.append(np.zeros((d, d)))
            continue
        try:
            w = np.loadtxt(path, ndmin=2)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read affinity {path}: {exc}") from None
        laps.append(laplacian_from_affinity(w))
    return laps


# ---------------------------------------------------------------- solving


def _complete(method, omega, config, laplacians=None, reference=None):
    if method == "roid":
        return solve_roid(omega, config, reference=reference)
    if method == "groid":
        if laplacians is None:
            laplacians = [np.zeros((d, d)) for d in omega.dims]
        return solve_groid(omega, laplacians, config, reference=reference)
    if method == "shooi":
        return solve_shooi(omega, config, reference=reference)
    raise UsageError(f"unknown completion method {method!r}")


def _decompose(method, t, config, reference=None):
    """Returns ``(reconstruction, iterations, converged, result_or_none)``."""
    if method == "full":
        res = solve_full(t, config, reference=reference)
        return res.completed, res.iterations, res.converged, res
    if method == "hooi":
        model, fits = solve_hooi(t, config.rank, tol=config.tol, maxiter=config.maxiter, return_fits=True)
        iters = len(fits) - 1
        return model.full(), iters, iters < config.maxiter, None
    raise UsageError(f"unknown decomposition method {method!r}")


# ---------------------------------------------------------------- commands


def cmd_generate(args):
    t = gen_tucker(parse_triple(args.dims), parse_triple(args.rank), seed=args.seed)
    rio.write_dense(args.out, t)
    _log(f"wrote {_dims_text(t.shape)} tensor to {args.out}")
    return 0


def cmd_mask(args):
    t = rio.read_dense(args.input)
    omega = sample_mask(t.shape, args.ratio, seed=args.seed).fill(t)
    rio.write_coo(args.out, omega)
    _log(f"wrote {len(omega)} observations to {args.out}")
    return 0


def cmd_noise(args):
    rio.write_dense(args.out, add_noise(rio.read_dense(args.input), args.nf, seed=args.seed))
    return 0


def _report_row(method, dims, config, ratio, seed, err, auc_value, iters, seconds, converged, extra):
    payload = {"method": method, "dims": dims, "config": config.digest(), **extra}
    return {
        "method": method,
        "dims": _dims_text(dims),
        "rank": _dims_text(config.rank),
        "ratio": _fmt(ratio),
        "lambda": _fmt(config.lam),
        "seed": seed,
        "rse": _fmt(err),
        "auc": _fmt(auc_value),
        "iters": iters,
        "seconds": _fmt(seconds),
        "converged": _fmt(converged),
        "config_hash": _hash(payload),
    }


def _labels_auc(pred, labels_path):
    if not labels_path:
        return float("nan")
    labels = rio.read_coo(labels_path)
    if labels.dims != pred.shape:
        raise UsageError(f"labels dims {labels.dims} do not match prediction {pred.shape}")
    return auc(pred.reshape(-1, order="F")[labels.linear], labels.values)


def cmd_complete(args):
    omega = rio.read_coo(args.obs)
    config = solver_config(_solver_settings(args), parse_triple(args.rank))
    truth = rio.read_dense(args.truth) if args.truth else None
    if truth is not None and truth.shape != omega.dims:
        raise UsageError(f"truth shape {truth.shape} does not match observations {omega.dims}")
    if args.trace:
        config.record_trace = True
    laps = _load_laplacians(args.graphs, omega.dims) if args.method == "groid" else None
    start = time.perf_counter()
    res = _complete(args.method, omega, config, laps, truth)
    seconds = time.perf_counter() - start
    if args.out:
        rio.write_dense(args.out, res.completed)
    if args.trace:
        res.trace.to_csv(args.trace)
    if truth is not None:
        err = rse(res.completed, truth)
    else:
        # without ground truth, report the fit on the observed entries
        err = rse(res.model.full().reshape(-1, order="F")[omega.linear], omega.values)
    row = _report_row(
        args.method, omega.dims, config, omega.ratio, config.seed, err,
        _labels_auc(res.completed, args.labels), res.iterations, seconds, res.converged,
        {"obs": os.path.abspath(args.obs)},
    )
    _emit(row, args.report)
    _log(f"{args.method}: {res.iterations} iterations, converged={res.converged}, rse={err:.3e}")
    return 2 if args.strict and not res.converged else 0


def cmd_decompose(args):
    t = rio.read_dense(args.input)
    config = solver_config(_solver_settings(args), parse_triple(args.rank))
    truth = rio.read_dense(args.truth) if args.truth else t
    start = time.perf_counter()
    recon, iters, conv, res = _decompose(args.method, t, config)
    seconds = time.perf_counter() - start
    if args.out:
        rio.write_dense(args.out, recon)
    if args.trace and res is not None:
        res.trace.to_csv(args.trace)
    err = rse(recon, truth)
    row = _report_row(
        args.method, t.shape, config, 1.0, config.seed, err, float("nan"), iters, seconds, conv,
        {"input": os.path.abspath(args.input)},
    )
    _emit(row, args.report)
    _log(f"{args.method}: {iters} iterations, converged={conv}, rse={err:.3e}")
    return 2 if args.strict and not conv else 0


def _emit(row, report):
    if report:
        rio.write_results(report, [row])
    else:
        rio.write_results_stream(sys.stdout, [row])


def cmd_evaluate(args):
    pred = rio.read_dense(args.pred)
    print("metric,value")
    if args.truth:
        truth = rio.read_dense(args.truth)
        print(f"rse,{_fmt(rse(pred, truth))}")
    if args.labels:
        print(f"auc,{_fmt(_labels_auc(pred, args.labels))}")
    if not args.truth and not args.labels:
        raise UsageError("evaluate needs --truth and/or --labels")
    return 0


# ---------------------------------------------------------------- bench


def _list(values, key, conv, default=None):
    raw = values.get(key)
    if raw is None:
        if default is None:
            raise UsageError(f"bench spec is missing {key!r}")
        return list(default)
    out = []
    for part in str(raw).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part and conv is int:
            lo, hi = part.split(":", 1)
            out.extend(range(int(lo), int(hi) + 1))
            continue
        try:
            out.append(conv(part))
        except ValueError:
            raise UsageError(f"bad value in {key}: {part!r}") from None
    if not out:
        raise UsageError(f"{key} has no values")
    return out


def bench_grid(values):
    """Expand a bench spec into an ordered list of cells.

    Keys: ``methods`` (list), ``dims``, ``true_rank``, ``rank`` (list, ``a:b``
    ranges allowed), ``ratio`` (list), ``lambda`` (list), ``nf`` (list),
    ``repetitions``, ``seed`` (base), ``graph_k`` and the solver keys.
    """
    methods = _list(values, "methods", str)
    for m in methods:
        if m not in COMPLETION_METHODS + DECOMPOSITION_METHODS:
            raise UsageError(f"unknown method {m!r}")
    dims = parse_triple(values.get("dims", "40"))
    true_rank = parse_triple(values.get("true_rank", "3"))
    ranks = _list(values, "rank", int, default=[true_rank[0]])
    ratios = _list(values, "ratio", float, default=[1.0])
    lams = _list(values, "lambda", float, default=[100.0])
    nfs = _list(values, "nf", float, default=[0.0])
    reps = int(values.get("repetitions", 1))
    base = int(values.get("seed", 0))
    if reps < 1:
        raise UsageError("repetitions must be at least 1")
    cells = []
    for method, rank, ratio, lam, nf, rep in itertools.product(methods, ranks, ratios, lams, nfs, range(reps)):
        cells.append(
            dict(index=len(cells), method=method, dims=dims, true_rank=true_rank, rank=rank,
                 ratio=ratio, lam=lam, nf=nf, seed=base + rep)
        )
    return cells


def run_cell(cell, values):
    """One independent solver run of a sweep; returns a results row."""
    settings = {k: v for k, v in values.items() if k in SOLVER_KEYS or k == "weights"}
    settings["lambda"] = str(cell["lam"])
    settings["seed"] = str(cell["seed"])
    settings.pop("lam", None)
    config = solver_config(settings, (cell["rank"],) * 3)
    seed = cell["seed"]
    truth, (_, true_factors) = gen_tucker(cell["dims"], cell["true_rank"], seed=seed, return_factors=True)
    data = add_noise(truth, cell["nf"], seed=seed + NOISE_SEED_OFFSET)
    method = cell["method"]
    start = time.perf_counter()
    if method in COMPLETION_METHODS:
        omega = sample_mask(cell["dims"], cell["ratio"], seed=seed + MASK_SEED_OFFSET).fill(data)
        laps = None
        if method == "groid":
            k = int(values.get("graph_k", 0))
            laps = [laplacian_from_affinity(knn_affinity(f, k)) for f in true_factors]
        res = _complete(method, omega, config, laps)
        seconds = time.perf_counter() - start
        recon, iters, conv = res.completed, res.iterations, res.converged
    else:
        recon, iters, conv, _ = _decompose(method, data, config)
        seconds = time.perf_counter() - start
    extra = {k: cell[k] for k in ("true_rank", "nf", "ratio")}
    extra["graph_k"] = values.get("graph_k")
    return _report_row(method, cell["dims"], config, cell["ratio"], seed, rse(recon, truth),
                       float("nan"), iters, seconds, conv, extra)


def cmd_bench(args):
    values = read_config(args.spec) if args.spec else {}
    apply_overrides(values, args.set)
    cells = bench_grid(values)
    jobs = args.jobs
    if jobs is None:
        env = os.environ.get("ROID_JOBS", "1")
        try:
            jobs = int(env)
        except ValueError:
            raise UsageError(f"ROID_JOBS must be an integer, got {env!r}") from None
    if jobs < 1:
        raise UsageError(f"--jobs must be at least 1, got {jobs}")
    lock = threading.Lock()
    done = []

    def work(cell):
        row = run_cell(cell, values)
        with lock:
            done.append((cell["index"], row))
            _log(f"[{len(done)}/{len(cells)}] {row['method']} rank={row['rank']} seed={row['seed']} "
                 f"rse={float(row['rse']):.3e} converged={row['converged']}")
        return row

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for fut in as_completed([pool.submit(work, c) for c in cells]):
            fut.result()
    rows = [row for _, row in sorted(done, key=lambda p: p[0])]
    rio.write_results(args.out, rows)
    failed = sum(r["converged"] != "true" for r in rows)
    _log(f"wrote {len(rows)} rows to {args.out}; {failed} not converged")
    return 2 if args.strict and failed else 0


# ---------------------------------------------------------------- entry


def _solver_flags(p):
    p.add_argument("--rank", required=True, help="one or three integers, e.g. 3 or 3,3,3")
    p.add_argument("--config", help="flat key = value file with solver settings")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--maxiter", type=int)
    p.add_argument("--rho0", type=float)
    p.add_argument("--init", choices=("hosvd", "random"))
    p.add_argument("--seed", type=int)
    p.add_argument("--weights", help="three per-mode trace-norm weights, e.g. 0.5,0.25,0.25")
    p.add_argument("--out", help="dense file for the reconstruction")
    p.add_argument("--report", help="results CSV (default: standard output)")
    p.add_argument("--trace", help="per-iteration CSV")
    p.add_argument("--truth", help="dense ground truth for RSE")
    p.add_argument("--strict", action="store_true", help="exit 2 when the solver does not converge")


def build_parser():
    parser = _Parser(prog="roid", description="Tensor decomposition and completion by regularized orthogonal iteration.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="random low multi-linear rank tensor")
    p.add_argument("--dims", required=True)
    p.add_argument("--rank", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("mask", help="sample observed entries of a dense tensor")
    p.add_argument("--input", required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("noise", help="add Gaussian noise to a dense tensor")
    p.add_argument("--input", required=True)
    p.add_argument("--nf", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("complete", help="complete a tensor from observed entries")
    p.add_argument("--method", choices=COMPLETION_METHODS, default="roid")
    p.add_argument("--obs", required=True, help="COO file of observations")
    p.add_argument("--mu", type=float)
    p.add_argument("--graphs", help="three affinity matrix files for groid, comma separated")
    p.add_argument("--labels", help="COO file of 0/1 labels; reports AUC of the completion")
    _solver_flags(p)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("decompose", help="decompose a fully observed tensor")
    p.add_argument("--method", choices=DECOMPOSITION_METHODS, default="full")
    p.add_argument("--input", required=True)
    _solver_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("evaluate", help="RSE and AUC of a prediction")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth")
    p.add_argument("--labels")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="run a parameter sweep")
    p.add_argument("--spec", help="flat key = value sweep description")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a spec value")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, help="concurrent runs (default: $ROID_JOBS or 1)")
    p.add_argument("--strict", action="store_true", help="exit 2 when any run does not converge")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv=None):
    """Run one command; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _log(str(exc))
        return 1
    except (OSError, ValueError) as exc:
        _log(f"error: {exc}")
        return 1


def main(argv=None):
    sys.exit(run(argv))
