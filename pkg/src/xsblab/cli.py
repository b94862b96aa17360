"""Command-line front end: ``python -m xsblab <subcommand> ...``.

Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 rejected
quadruple (``classify`` only), 4 internal incoherence (a counterexample to an
admissible quadruple).  Outputs are written atomically; a failed run leaves
no partial files behind.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile

import numpy as np

from . import __version__
from .dyadic import random_cell_field, single_modulation_ratio, sweep_csv
from .families import (WavePacket, airy_packet_profile, make_family, packet_envelope, packet_profile_norm,
                       packet_xgrid)
from .indices import (FAMILIES, IndexQuadruple, classify, format_rational, parse_exponent, parse_rational,
                      region_csv, region_slice)
from .io import remove_field, write_field
from .lab import (COUNTER_RESIDUAL, COUNTER_SLOPE, CONSISTENT, CONSISTENT_SLOPE, COUNTEREXAMPLE, DEFAULT_N_LIST,
                  INCONCLUSIVE, PROBE_N_LIST, SCHEMA_VERSION, _cell_rng, _ols, default_threads, fit_family,
                  fits_csv, l2_linfty_check, necessity_battery, strichartz_check, sufficiency_probe)

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_REJECTED, EXIT_INCOHERENT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-1/4" through as a value, like argparse already does for "-0.25"
        self._negative_number_matcher = re.compile(r"^-(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?$")

    def error(self, message):
        raise UsageError(message)


def _exponent(text):
    try:
        return parse_exponent(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from None


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_indices(p, required=True, which="qrsb"):
    for k in which:
        conv = _exponent if k in "qr" else _rational
        p.add_argument(f"--{k}", type=conv, required=required, help=f"index {k} (p/q, decimal or inf)")


def _add_common(p, formats=("json", "csv"), default="json"):
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=formats, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xsblab", description="X^{s,b} embedding laboratory")
    parser.add_argument("--version", action="version", version=f"xsblab {__version__}")
    parser.add_argument("--threads", type=_positive_int, default=None,
                        help="worker threads (default: $XSB_LAB_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="admissibility verdict as JSON")
    _add_indices(p)
    p.add_argument("--out")

    p = sub.add_parser("region", help="classify an (s, b) rectangle")
    _add_indices(p, which="qr")
    p.add_argument("--s-range", type=_rational, nargs=2, metavar=("LO", "HI"), required=True)
    p.add_argument("--b-range", type=_rational, nargs=2, metavar=("LO", "HI"), required=True)
    p.add_argument("--resolution", type=int, default=11)
    _add_common(p, default="csv")

    p = sub.add_parser("sweep", help="family scaling fits, or the single-modulation sweep")
    p.add_argument("--kind", choices=("family", "modulation"), default="family")
    p.add_argument("--family", choices=FAMILIES + ("all",), default="all")
    _add_indices(p, required=False)
    p.add_argument("--n-list", type=_int_list, default=None)
    p.add_argument("--l-list", type=_int_list, default=None)
    p.add_argument("--draws", type=_positive_int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field-out", help="also write the smallest-N realisation of --family")
    _add_common(p, default="csv")

    p = sub.add_parser("battery", help="necessity battery against the classifier")
    _add_indices(p)
    p.add_argument("--n-list", type=_int_list, default=list(DEFAULT_N_LIST))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=_positive_int, default=8, help="probe draws per cell")
    p.add_argument("--no-probe", action="store_true", help="skip the sufficiency probe")
    _add_common(p)

    p = sub.add_parser("probe", help="sufficiency probes")
    p.add_argument("--kind", choices=("sufficiency", "strichartz", "l2-linfty"), default="sufficiency")
    _add_indices(p, required=False)
    p.add_argument("--n-list", type=_int_list, default=list(PROBE_N_LIST))
    p.add_argument("--draws", type=_positive_int, default=8)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, formats=("json",))

    p = sub.add_parser("packet", help="Airy packet profile decay diagnostics")
    p.add_argument("--N", type=_positive_int, default=16)
    p.add_argument("--t", type=_float_list, default=None, help="times (default: 64 uniform in [N^-1.5, 1])")
    p.add_argument("--r-list", type=_int_list, default=[2, 4, 8])
    p.add_argument("--field-out", help="also write the lab-frame wave packet v_N (slow for N > 4)")
    _add_common(p)
    return parser


# ---------------------------------------------------------------- output


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".xsblab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_with_field(text: str, out, field_path, make_field, **meta):
    """Write the optional field file, then the main output; undo the field if that fails."""
    if field_path:
        write_field(field_path, make_field(), **meta)
    try:
        _emit(text, out)
    except BaseException:
        if field_path:
            remove_field(field_path)
        raise


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv_with_header(config: dict, body: str) -> str:
    return "# " + json.dumps(config, sort_keys=True, separators=(",", ":")) + "\n" + body


def _indices(args) -> IndexQuadruple:
    missing = [k for k in "qrsb" if getattr(args, k) is None]
    if missing:
        raise UsageError(f"missing index flag(s): {', '.join('--' + k for k in missing)}")
    try:
        return IndexQuadruple(args.q, args.r, args.s, args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config(args, **extra) -> dict:
    cfg = {"schema": SCHEMA_VERSION, "command": args.command}
    for k, v in sorted(vars(args).items()):
        if k in ("command", "threads", "out", "field_out"):
            continue
        if k in "qrsb" and len(k) == 1:
            v = format_rational(v) if v is not None else None
        elif k in ("s_range", "b_range"):
            v = [format_rational(x) for x in v]
        cfg[k] = v
    cfg.update(extra)
    return cfg


def _conclusion(fit) -> str:
    if fit.slope >= COUNTER_SLOPE and fit.max_residual <= COUNTER_RESIDUAL:
        return COUNTEREXAMPLE
    if fit.slope <= CONSISTENT_SLOPE:
        return CONSISTENT
    return INCONCLUSIVE


# --------------------------------------------------------------- commands


def _cmd_classify(args, threads):
    v = classify(_indices(args))
    text = json.dumps(v.as_dict(), separators=(",", ":")) + "\n"
    _emit(text, args.out)
    if args.out is not None:
        sys.stdout.write(text)
    return EXIT_OK if v.admissible else EXIT_REJECTED


def _cmd_region(args, threads):
    try:
        rows = region_slice(args.q, args.r, args.s_range, args.b_range, args.resolution)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = _config(args)
    if args.format == "csv":
        text = _csv_with_header(cfg, region_csv(rows))
    else:
        text = _json({"config": cfg, "rows": [
            {"s": format_rational(s), "b": format_rational(b), **v.as_dict()} for s, b, v in rows]})
    _emit(text, args.out)
    return EXIT_OK


class _FitReport:
    def __init__(self, fit):
        self.indices = fit.indices
        self.fits = {fit.family: fit}
        self.conclusion = _conclusion(fit)


def _cmd_sweep(args, threads):
    if args.kind == "modulation":
        if args.r is None:
            raise UsageError("--r is required for the modulation sweep")
        n_list = args.n_list or [2, 4, 8, 16, 32, 64]
        l_list = args.l_list or [2, 4, 8, 16, 32, 64]
        rows = []
        for N in n_list:
            for L in l_list:
                rng = _cell_rng(args.seed, N, L)
                for _ in range(args.draws):
                    try:
                        ratio = single_modulation_ratio(random_cell_field(N, L, rng), N, L, args.r)
                    except ValueError as exc:
                        raise UsageError(str(exc)) from None
                    rows.append((N, L, format_rational(args.r), ratio))
        cfg = _config(args, n_list=n_list, l_list=l_list)
        if args.format == "csv":
            text = _csv_with_header(cfg, sweep_csv(rows))
        else:
            text = _json({"config": cfg, "rows": [{"N": N, "L": L, "r": r, "ratio": x} for N, L, r, x in rows]})
        _emit(text, args.out)
        return EXIT_OK

    idx = _indices(args)
    if args.field_out and args.family == "all":
        raise UsageError("--field-out needs a single --family")
    n_list = args.n_list or list(DEFAULT_N_LIST)
    families = FAMILIES if args.family == "all" else (args.family,)
    try:
        fits = [fit_family(f, idx, n_list, threads=threads) for f in families]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = _config(args, n_list=sorted(n_list))
    if args.format == "csv":
        text = _csv_with_header(cfg, fits_csv([_FitReport(f) for f in fits]))
    else:
        text = _json({"config": cfg, "fits": [{**f.as_dict(), "conclusion": _conclusion(f)} for f in fits]})
    N = min(n_list)
    fam = make_family(args.family, N) if args.field_out else None

    def field():
        return fam.modulation_field() if args.family == "ModulationShell" else fam.direct_field()

    _emit_with_field(text, args.out, args.field_out, field, family=args.family, N=N)
    return EXIT_OK


def _cmd_battery(args, threads):
    idx = _indices(args)
    try:
        rep = necessity_battery(idx, args.n_list, threads=threads, probe=not args.no_probe,
                                probe_options={"draws": args.draws, "seed": args.seed})
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.config["cli"] = _config(args)
    if args.format == "json":
        text = rep.to_json()
    else:
        text = _csv_with_header(rep.config["cli"], fits_csv([rep]))
    _emit(text, args.out)
    return EXIT_OK if rep.coherent else EXIT_INCOHERENT


def _cmd_probe(args, threads):
    opts = {"n_list": args.n_list, "draws": args.draws, "seed": args.seed, "threads": threads}
    try:
        if args.kind == "sufficiency":
            rep = sufficiency_probe(_indices(args), **opts)
        elif args.kind == "strichartz":
            if args.q is None or args.r is None:
                raise UsageError("--q and --r are required")
            rep = strichartz_check(args.q, args.r, **opts)
        else:
            if args.b is None:
                raise UsageError("--b is required")
            rep = l2_linfty_check(args.b, **opts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.config["cli"] = _config(args)
    _emit(rep.to_json(), args.out)
    return EXIT_OK


def _cmd_packet(args, threads):
    N = args.N
    ts = args.t if args.t is not None else list(np.linspace(N**-1.5, 1.0, 64))
    if any(t < 0 for t in ts):
        raise UsageError("times must be nonnegative")
    rows = []
    for t in ts:
        spread = t * (6 * N**1.5 * 1.25 + 4.7)
        x = packet_xgrid(0.125, 2 * (spread + 256))
        peak = float(np.abs(airy_packet_profile(N, t, x)).max())
        env = float(packet_envelope(N, t))
        norms = {str(r): packet_profile_norm(N, t, r) for r in args.r_list}
        floor = {str(r): norms[str(r)] / env ** (1 - 2 / r) for r in args.r_list}
        rows.append({"t": float(t), "max_abs": peak, "envelope": env, "norms": norms, "floor": floor})
    positive = [row for row in rows if row["t"] > 0]
    decay = _ols(np.log([r["t"] for r in positive]), np.log([r["max_abs"] for r in positive]))[0] \
        if len(positive) >= 2 else None
    cfg = _config(args, t=[float(t) for t in ts])
    if args.format == "json":
        text = _json({"config": cfg, "rows": rows, "decay_slope": decay,
                      "floor_min": {str(r): min(row["floor"][str(r)] for row in rows) for r in args.r_list}})
    else:
        lines = ["t,max_abs,envelope,r,norm,floor"]
        for row in rows:
            for r in args.r_list:
                lines.append(f"{row['t']!r},{row['max_abs']!r},{row['envelope']!r},{r},"
                             f"{row['norms'][str(r)]!r},{row['floor'][str(r)]!r}")
        text = _csv_with_header(cfg, "\n".join(lines) + "\n")
    _emit_with_field(text, args.out, args.field_out, lambda: WavePacket(N).direct_field(), family="WavePacket",
                     N=N)
    return EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "region": _cmd_region,
    "sweep": _cmd_sweep,
    "battery": _cmd_battery,
    "probe": _cmd_probe,
    "packet": _cmd_packet,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        try:
            threads = args.threads if args.threads is not None else default_threads()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return _COMMANDS[args.command](args, threads)
    except UsageError as exc:
        sys.stderr.write(f"xsblab: error: {exc}\n")
        return EXIT_USAGE
    except (RuntimeError, ValueError, OSError, MemoryError) as exc:
        sys.stderr.write(f"xsblab: failed: {exc}\n")
        return EXIT_FAILURE
