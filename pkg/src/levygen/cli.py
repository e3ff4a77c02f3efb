"""Command-line interface: ``levygen <subcommand> [flags]``.

Each run writes a CSV and a sidecar manifest ``<csv>.manifest.json`` with
every resolved parameter. ``levygen replay MANIFEST`` reruns it; all
subcommands are deterministic, so the replayed CSV is byte-identical.

Exit codes: 0 success, 1 runtime or accuracy failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ContractError, DomainError, LevyGenError
from .exit_time import solve_exit_time
from .montecarlo import McConfig, mc_exit_estimate
from .operator import (
    apply,
    convergence_study,
    gaussian_density,
    gaussian_spectrum,
    reference_apply,
    sample_on_grid,
    stencil_reach,
)
from .symbols import SchemeKind, StableParams
from .weights import DEFAULT_QUAD_TOL, build_weights

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _interval(text: str) -> list[float]:
    vals = _float_list(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(f"expected 'a,b' with a < b, got {text!r}")
    return vals


def _scheme_list(text: str) -> list[str]:
    return [SchemeKind.parse(s.strip()).value for s in str(text).split(",") if s.strip()]


def _params(ns) -> StableParams:
    return StableParams(ns.alpha, ns.beta)


def _default_jmax(h: float) -> int:
    return max(math.ceil(2.0 / h), 64)


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


# --------------------------------------------------------------- commands


def cmd_weights(ns) -> tuple[list[str], list]:
    jmax = ns.jmax if ns.jmax is not None else _default_jmax(ns.h)
    table = build_weights(ns.scheme, _params(ns), ns.h, jmax, ns.quad_tol)
    return ["j", "w"], [(int(j), float(w)) for j, w in zip(table.indices, table.values)]


def cmd_apply(ns) -> tuple[list[str], list]:
    p = _params(ns)
    u = sample_on_grid(gaussian_density, ns.h, *ns.sample_window)
    lo = math.ceil(ns.window[0] / ns.h - 1e-9)
    hi = math.floor(ns.window[1] / ns.h + 1e-9)
    reach = stencil_reach(u, (lo, hi))
    jmax = reach if ns.jmax is None else ns.jmax
    if jmax < reach:
        raise ContractError(f"--jmax {jmax} is below the stencil reach {reach} of the sampling window")
    table = build_weights(ns.scheme, p, ns.h, jmax, ns.quad_tol)
    au = apply(table, u, (lo, hi))
    ref = reference_apply(p, gaussian_spectrum(), au.x, ns.ref_tol)
    rows = [(float(x), float(a), float(r), float(abs(a - r))) for x, a, r in zip(au.x, au.samples, ref)]
    return ["x", "Au_numeric", "Au_reference", "abs_error"], rows


def cmd_convergence(ns) -> tuple[list[str], list]:
    rows = convergence_study(
        ns.schemes,
        _params(ns),
        gaussian_spectrum(),
        gaussian_density,
        ns.hs,
        window=tuple(ns.window),
        sample_window=tuple(ns.sample_window),
        quad_tol=ns.quad_tol,
        ref_tol=ns.ref_tol,
    )
    return ["scheme", "h", "sup_error", "slope"], [(r.scheme.value, r.h, r.sup_error, r.slope) for r in rows]


def cmd_exit_time(ns) -> tuple[list[str], list]:
    sol = solve_exit_time(ns.scheme, _params(ns), ns.h, method=ns.method, quad_tol=ns.quad_tol)
    x, u = sol.with_boundary()
    return ["x", "u"], [(float(a), float(b)) for a, b in zip(x, u)]


def cmd_mc_exit(ns) -> tuple[list[str], list]:
    if ns.seed is None:
        raise UsageError("mc-exit requires --seed")
    cfg = McConfig(n_paths=ns.paths, dt=ns.dt, seed=ns.seed, max_time=ns.max_time)
    rows = []
    for x0 in ns.x0:
        est = mc_exit_estimate(x0, _params(ns), cfg)
        rows.append((float(x0), est.mean, est.stderr, est.n_paths, est.censored))
    return ["x0", "mean", "stderr", "n_paths", "censored"], rows


COMMANDS = {
    "weights": cmd_weights,
    "apply": cmd_apply,
    "convergence": cmd_convergence,
    "exit-time": cmd_exit_time,
    "mc-exit": cmd_mc_exit,
}


# ----------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser, scheme: bool = True) -> None:
    if scheme:
        p.add_argument("--scheme", type=lambda s: SchemeKind.parse(s).value, required=True, help="sp, gl or rs")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--out", type=Path, default=None, help="CSV path (default: <subcommand>.csv)")
    p.add_argument("--config", type=Path, default=None, help="file of 'key = value' lines; flags override it")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="levygen", description="Discretised stable-process generators.")
    parser.add_argument("--version", action="version", version=f"levygen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subs: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("weights", help="weight table j,w")
    _common(p)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--jmax", type=int, default=None, help="half-width (default max(2/h, 64))")
    p.add_argument("--quad-tol", type=float, default=DEFAULT_QUAD_TOL)
    subs["weights"] = p

    p = sub.add_parser("apply", help="apply a scheme to the standard Gaussian")
    _common(p)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--jmax", type=int, default=None, help="half-width (default: exact stencil reach)")
    p.add_argument("--window", type=_interval, default=[-4.0, 4.0])
    p.add_argument("--sample-window", type=_interval, default=[-8.0, 8.0])
    p.add_argument("--quad-tol", type=float, default=DEFAULT_QUAD_TOL)
    p.add_argument("--ref-tol", type=float, default=1e-11)
    subs["apply"] = p

    p = sub.add_parser("convergence", help="sup-error convergence table")
    _common(p, scheme=False)
    p.add_argument("--schemes", type=_scheme_list, default=["gl", "rs"])
    p.add_argument("--hs", type=_float_list, default=[0.4, 0.2, 0.1, 0.05])
    p.add_argument("--window", type=_interval, default=[-4.0, 4.0])
    p.add_argument("--sample-window", type=_interval, default=[-8.0, 8.0])
    p.add_argument("--quad-tol", type=float, default=DEFAULT_QUAD_TOL)
    p.add_argument("--ref-tol", type=float, default=1e-11)
    subs["convergence"] = p

    p = sub.add_parser("exit-time", help="finite-difference mean exit time on (-1, 1)")
    _common(p)
    p.add_argument("--h", type=float, required=True, help="grid spacing, 1/h must be an integer")
    p.add_argument("--method", choices=["dense", "levinson"], default="dense")
    p.add_argument("--quad-tol", type=float, default=DEFAULT_QUAD_TOL)
    subs["exit-time"] = p

    p = sub.add_parser("mc-exit", help="Monte Carlo mean exit time")
    _common(p, scheme=False)
    p.add_argument("--x0", type=_float_list, required=True, help="start point(s), comma separated")
    p.add_argument("--paths", type=int, default=10_000)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-time", type=float, default=1e3)
    subs["mc-exit"] = p

    p = sub.add_parser("replay", help="rerun a manifest")
    p.add_argument("manifest", type=Path)
    p.add_argument("--out", type=Path, default=None, help="CSV path (default: the manifest's output)")
    subs["replay"] = p
    return parser, subs


def read_config(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, keys use dashes or underscores."""
    out: dict[str, str] = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _parse(argv) -> argparse.Namespace:
    parser, subs = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config", type=Path, default=None)
    first, _ = pre.parse_known_args(argv)
    if first.config is not None and first.command in COMMANDS:
        sp = subs[first.command]
        known = {a.dest for a in sp._actions}
        cfg = read_config(first.config)
        unknown = sorted(set(cfg) - known - {"config", "out"})
        if unknown:
            raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
        # File values become defaults, so explicit flags win and argparse
        # applies its type conversion to them.
        for a in sp._actions:
            if a.dest in cfg:
                a.required = False
        sp.set_defaults(**cfg)
    return parser.parse_args(argv)


def _resolved(ns) -> dict:
    skip = {"command", "out", "config"}
    out = {}
    for k, v in sorted(vars(ns).items()):
        if k in skip:
            continue
        out[k] = v
    return out


def _manifest_path(csv_path: Path) -> Path:
    return csv_path.with_name(csv_path.name + ".manifest.json")


def run(command: str, params: dict, out: Path) -> Path:
    ns = argparse.Namespace(**params)
    header, rows = COMMANDS[command](ns)
    _write_csv(out, header, rows)
    manifest = {
        "subcommand": command,
        "parameters": params,
        "version": __version__,
        "seed": params.get("seed"),
        "output": str(out),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    mpath = _manifest_path(out)
    mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return mpath


def _replay(ns) -> Path:
    data = json.loads(Path(ns.manifest).read_text(encoding="utf-8"))
    command = data.get("subcommand")
    if command not in COMMANDS:
        raise UsageError(f"manifest names unknown subcommand {command!r}")
    out = ns.out if ns.out is not None else Path(data["output"])
    return run(command, data["parameters"], out)


def main(argv=None) -> int:
    try:
        ns = _parse(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"levygen: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if ns.command == "replay":
            mpath = _replay(ns)
        else:
            out = ns.out if ns.out is not None else Path(f"{ns.command}.csv")
            mpath = run(ns.command, _resolved(ns), out)
    except UsageError as exc:
        print(f"levygen: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ContractError) as exc:
        print(f"levygen: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LevyGenError, ArithmeticError, OSError) as exc:
        print(f"levygen: failed: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"wrote {json.loads(mpath.read_text())['output']} (manifest {mpath})")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
