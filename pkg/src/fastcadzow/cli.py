"""
Command-line front end.

    fastcadzow generate {spectral,dirac,linear-events} ... -o PATH
    fastcadzow solve INPUT --variant V --rank R ... -o OUTPUT
    fastcadzow bench SUITE.cfg [-o PREFIX] [--jobs N]

Errors are printed to stderr as one line ``fastcadzow: error[CODE]: ...``.
``solve`` exits 0 on convergence, 2 when ``--max-iter`` is reached first
and 1 on any error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import signals, tensorfile
from .errors import CadzowError, ConfigError, NumericalError, ParseError
from .metrics import ExperimentConfig, TrialTable, preset, run_trials
from .solvers import VARIANTS, SolverOptions, run

EXIT_OK, EXIT_ERROR, EXIT_NOT_CONVERGED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fail(code: str, message) -> int:
    print(f"fastcadzow: error[{code}]: {message}", file=sys.stderr)
    return EXIT_ERROR


def _dims(text: str) -> tuple:
    parts = text.replace("x", ",").split(",")
    try:
        dims = tuple(int(p) for p in parts if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dims {text!r}") from None
    if not dims or any(n < 1 for n in dims):
        raise argparse.ArgumentTypeError(f"invalid dims {text!r}")
    return dims


def _resolve_seed(seed):
    if seed is not None:
        return seed
    seed = int(np.random.SeedSequence().entropy % 2**32)
    print(f"fastcadzow: generated seed {seed}", file=sys.stderr)
    return seed


def _stem(path: str) -> str:
    return path[:-5] if path.endswith(".htns") else path


def cmd_generate(args) -> int:
    seed = _resolve_seed(args.seed)
    rng = np.random.default_rng(seed)
    paths = {}
    params = {}
    if args.kind == "spectral":
        dims = args.dims or (4096,)
        x, _ = signals.gen_spectral(dims, args.rank, rng)
        params = dict(dims=list(dims), rank=args.rank)
        paths["truth"] = args.output
        tensorfile.write_tensor(args.output, x)
    elif args.kind == "dirac":
        p = signals.random_dirac_params(args.rank, args.bandwidth, args.samples, rng)
        fourier, samples = signals.gen_dirac_fourier(p)
        params = dict(rank=args.rank, bandwidth=p.bandwidth, samples=p.samples,
                      weights=p.weights.tolist(), locations=p.locations.tolist())
        stem = _stem(args.output)
        paths["fourier"] = f"{stem}.fourier.htns"
        paths["time"] = f"{stem}.time.htns"
        tensorfile.write_tensor(paths["fourier"], fourier)
        tensorfile.write_tensor(paths["time"], samples)
        x = samples
    else:
        dims = args.dims or (8, 8)
        x = signals.gen_linear_events(dims, args.time_len, args.events, rng)
        params = dict(dims=list(dims), time_len=args.time_len, events=args.events)
        paths["truth"] = args.output
        tensorfile.write_tensor(args.output, x)

    if args.eps is not None:
        params["eps"] = args.eps
        y = signals.add_noise(x, args.eps, rng)
        if args.kind == "dirac":
            paths["time_noisy"] = f"{_stem(args.output)}.time.noisy.htns"
            paths["fourier_noisy"] = f"{_stem(args.output)}.fourier.noisy.htns"
            tensorfile.write_tensor(paths["time_noisy"], y)
            tensorfile.write_tensor(paths["fourier_noisy"],
                                    signals.samples_to_fourier(y, args.bandwidth))
    else:
        y = x
    if args.fraction is not None and args.kind != "dirac":
        params["fraction"] = args.fraction
        # linear-events volumes lose whole traces
        spatial = x.shape[1:] if args.kind == "linear-events" else x.shape
        observed = np.broadcast_to(signals.sample_mask(spatial, args.fraction, rng).to_bool(),
                                   x.shape)
        paths["mask"] = f"{_stem(args.output)}.mask.htns"
        tensorfile.write_tensor(paths["mask"], observed.astype(float))
        y = np.where(observed, y, 0)
    if y is not x and args.kind != "dirac":
        paths["observed"] = f"{_stem(args.output)}.observed.htns"
        tensorfile.write_tensor(paths["observed"], y)

    print(json.dumps(dict(kind=args.kind, params=params, seed=seed, paths=paths)))
    return EXIT_OK


def cmd_solve(args) -> int:
    if args.mask is not None and args.variant in ("gradient", "fast_gradient"):
        raise UsageError(f"--mask is not supported with variant {args.variant}")
    y = tensorfile.read_tensor(args.input)
    mask = None
    if args.mask is not None:
        mask = tensorfile.read_tensor(args.mask) != 0
    truth = tensorfile.read_tensor(args.truth) if args.truth is not None else None
    opts = SolverOptions(variant=args.variant, rank=args.rank, tol=args.tol,
                         max_iter=args.max_iter, alpha=args.alpha, fixed_iter=args.fixed_iter)
    res = run(y, None, opts, mask=mask, truth=truth)
    tensorfile.write_tensor(args.output, res.final)
    if args.trace is not None:
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iter", "rel_change", "mse", "seconds"])
            for rec in res.trace:
                w.writerow([rec.iteration, repr(rec.rel_change),
                            "" if rec.mse is None else repr(rec.mse), repr(rec.seconds)])
    status = "converged" if res.converged else "not converged"
    print(f"{status} after {res.iterations} iterations", file=sys.stderr)
    if res.converged or args.fixed_iter:
        return EXIT_OK
    return EXIT_NOT_CONVERGED


_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)}


def _parse_value(key, value):
    if key in ("dims",):
        return _dims(value)
    if key in ("variants",):
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if key in ("rank", "trials", "max_iter", "seed"):
        return int(value)
    if key in ("eps", "fraction", "tol", "alpha"):
        return float(value)
    if key == "fixed_iter":
        return value.strip().lower() in ("1", "true", "yes", "on")
    return value.strip()


def load_suites(path, seed=None) -> list:
    """Read a suite file into a list of :class:`ExperimentConfig`.

    Every ``[section]`` is one suite. ``preset = NAME`` starts from a named
    preset; other keys override its fields. ``rank`` may be a comma
    separated list, which expands to one config per rank.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    configs = []
    for name in parser.sections():
        section = dict(parser[name])
        unknown = set(section) - _CONFIG_KEYS - {"preset"}
        if unknown:
            raise ConfigError(f"[{name}]: unknown keys {sorted(unknown)}")
        try:
            ranks = [None]
            if "rank" in section:
                ranks = [int(v) for v in section.pop("rank").split(",") if v.strip()]
            overrides = {k: _parse_value(k, v) for k, v in section.items() if k != "preset"}
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"[{name}]: {exc}") from exc
        overrides["name"] = name
        if seed is not None and "seed" not in overrides:
            overrides["seed"] = seed
        for r in ranks:
            if r is not None:
                overrides["rank"] = r
            if "preset" in section:
                configs.append(preset(section["preset"], **overrides))
            else:
                configs.append(ExperimentConfig(**overrides))
    return configs


def cmd_bench(args) -> int:
    seed = _resolve_seed(args.seed)
    configs = load_suites(args.config, seed)
    table = TrialTable()
    for cfg in configs:
        part = run_trials(cfg, jobs=args.jobs)
        table.rows.extend(part.rows)
        for g in part.summary():
            print(f"{cfg.name:>16s} {g['variant']:>14s} r={g['r']:<3d} trials={g['trials']:<4d} "
                  f"mse={g['mse']:.3e} iter={g['iterations']:.2f} "
                  f"time={g['wall_time_seconds']:.4f}s positive={g['positive']:.4f}")
    prefix = args.output
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(f"{prefix}.csv")
    table.to_json(f"{prefix}.json")
    print(json.dumps(dict(rows=len(table), csv=f"{prefix}.csv", json=f"{prefix}.json")))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fastcadzow", description="Cadzow-type low-rank Hankel denoising and recovery.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic ground-truth signal")
    g.add_argument("kind", choices=["spectral", "dirac", "linear-events"])
    g.add_argument("--dims", type=_dims, help="extents, e.g. 4096 or 64x64 (spatial for linear-events)")
    g.add_argument("--rank", "--r", type=int, default=5, help="harmonics / Diracs")
    g.add_argument("--bandwidth", type=int, default=71)
    g.add_argument("--samples", type=int, default=None, help="dirac time samples (default: bandwidth)")
    g.add_argument("--time-len", type=int, default=256)
    g.add_argument("--events", type=int, default=3)
    g.add_argument("--eps", type=float, default=None, help="also write a noisy copy")
    g.add_argument("--fraction", type=float, default=None, help="also write a sampling mask")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="run a solver on a tensor file")
    s.add_argument("input")
    s.add_argument("--variant", choices=VARIANTS, default="fast_cadzow")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--max-iter", type=int, default=500)
    s.add_argument("--fixed-iter", action="store_true", help="run exactly --max-iter iterations")
    s.add_argument("--alpha", type=float, default=0.8)
    s.add_argument("--mask", default=None, help="tensor file, nonzero = observed")
    s.add_argument("--truth", default=None)
    s.add_argument("--trace", default=None, help="per-iteration CSV")
    s.add_argument("--seed", type=int, default=None, help="accepted for uniformity; solve is deterministic")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a benchmark suite file")
    b.add_argument("config")
    b.add_argument("-o", "--output", default="bench", help="output prefix for .csv and .json")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--seed", type=int, default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail("USAGE", exc)
    except ParseError as exc:
        return _fail("PARSE", exc)
    except ConfigError as exc:
        return _fail("CONFIG", exc)
    except NumericalError as exc:
        return _fail("NUMERICAL", exc)
    except CadzowError as exc:
        return _fail("INVALID", exc)
    except OSError as exc:
        return _fail("IO", exc)


if __name__ == "__main__":
    sys.exit(main())
