"""Command-line front end.

Every command prints one JSON document on stdout. Result payloads (spectra,
fields) go to ``--out`` when given and are embedded under ``"result"``
otherwise; ``--csv`` writes them as ``index,re,im`` rows instead.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import errors
from ._numerics import Residual
from .fields import GaussianFunction, SampledField, dump_json, load_json, sample
from .forms import Side, classify, geometric_pair, structure_from_json
from .fraclap import FracParams, Path as FracPath, frac_laplacian, path_agreement
from .identities import run_suite
from .lattice import Lattice, PoissonForm, poisson_check
from .spectral import Method, Spectrum, geometric_ft, inverse_geometric_ft, sheared_lattice

log = logging.getLogger("geoft")

EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_NOT_PD = 4
EXIT_PARAM = 5
EXIT_TAIL = 6
EXIT_OTHER = 7

_EXIT_CODES = [
    (errors.Degenerate, EXIT_DEGENERATE),
    (errors.NotPositiveDefinite, EXIT_NOT_PD),
    (errors.ParamOutOfRange, EXIT_PARAM),
    (errors.TailBoundViolated, EXIT_TAIL),
]


class InputError(Exception):
    """Unreadable or malformed input file."""


def _read(path) -> dict:
    try:
        return load_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _pair(path):
    data = _read(path)
    if "matrix" not in data:
        raise InputError(f"{path}: structure file needs a 'matrix' entry")
    return geometric_pair(structure_from_json(data))


def _load_input(path):
    """A ``SampledField``, ``Spectrum`` or ``GaussianFunction`` by file shape."""
    data = _read(path)
    try:
        if data.get("domain") == "frequency":
            return Spectrum.from_json(data)
        if "grid" in data and "values" in data:
            return SampledField.from_json(data)
        if "A" in data:
            return GaussianFunction.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, errors.GeoFTError):
            raise
        raise InputError(f"{path}: {exc}") from exc
    raise InputError(f"{path}: not a field, spectrum or Gaussian")


def _csv_rows(values) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "re", "im"])
    for i, v in enumerate(np.ravel(values)):
        writer.writerow([i, repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def _emit(doc: dict, values, args, meta: dict) -> dict:
    """Write the payload to ``--out`` (JSON or CSV) or embed it in ``meta``."""
    if args.csv:
        text = _csv_rows(values)
        if args.out:
            Path(args.out).write_text(text)
            meta["out"] = str(args.out)
        else:
            meta["csv"] = text
        return meta
    if args.out:
        dump_json(doc, args.out)
        meta["out"] = str(args.out)
    else:
        meta["result"] = doc
    return meta


def _points_doc(points, values) -> dict:
    return {"domain": "space", "points": np.asarray(points).tolist(),
            "values": np.stack([values.real, values.imag], axis=-1).tolist()}


def _doc_of(result):
    if isinstance(result, (SampledField, Spectrum)):
        return result.to_json(), (result.flat if isinstance(result, SampledField) else result.values)
    raise TypeError(type(result))


# --- commands -------------------------------------------------------------------


def cmd_pair(args) -> dict:
    pair = _pair(args.structure)
    c = classify(pair)
    return {"dim": pair.dim, "B": pair.B.tolist(), "det_b": float(pair.det_b),
            "classification": {"symmetric": c.symmetric, "skew_symmetric": c.skew_symmetric,
                               "positive_definite": c.positive_definite},
            "condition_estimate": float(pair.condition)}


def _read_points(path, dim: int) -> np.ndarray:
    data = _read(path)
    pts = data.get("freqs", data.get("points")) if isinstance(data, dict) else data
    try:
        arr = np.asarray(pts, dtype=float).reshape(-1, dim)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: points must be a list of {dim}-vectors") from exc
    if arr.size == 0:
        raise errors.EmptyFrequencyList("no points given")
    return arr


def _forward(f: SampledField, pair, side, method, freqs_arg):
    if method is Method.FFT:
        return geometric_ft(f, pair, side, method=Method.FFT)
    if freqs_arg == "auto":
        lat = sheared_lattice(f.grid, pair, side)
        spec = geometric_ft(f, pair, side, freqs=lat.points(), method=Method.DIRECT)
        return Spectrum(spec.values, spec.freqs, lat, f.grid)
    return geometric_ft(f, pair, side, freqs=_read_points(freqs_arg, pair.dim), method=Method.DIRECT)


def _inverse(spec: Spectrum, pair, side, method, freqs_arg):
    if method is Method.FFT:
        return inverse_geometric_ft(spec, pair, side, method=Method.FFT)
    if freqs_arg == "auto":
        if spec.grid is None:
            raise errors.EmptyFrequencyList("Direct inverse of a spectrum without a grid needs --freqs")
        return SampledField(spec.grid, inverse_geometric_ft(spec, pair, side, method=Method.DIRECT))
    pts = _read_points(freqs_arg, pair.dim)
    return pts, inverse_geometric_ft(spec, pair, side, pts, method=Method.DIRECT)


def cmd_transform(args) -> dict:
    pair = _pair(args.structure)
    side = Side.coerce(args.side)
    method = Method.coerce(args.method)
    src = _load_input(args.input)
    meta = {"side": side.value, "inverse": bool(args.inverse), "method": method.value}
    if args.inverse:
        if isinstance(src, GaussianFunction):
            grid = src.default_grid()
            src = Spectrum.from_field(sample(src, grid))
        elif isinstance(src, SampledField):
            src = Spectrum.from_field(src)
        meta["det_factor"] = float(pair.abs_det_b)
        log.info("inverse transform applies |det b| = %r", float(pair.abs_det_b))
        out = _inverse(src, pair, side, method, args.freqs)
        if isinstance(out, tuple):
            return _emit(_points_doc(*out), out[1], args, meta)
        doc, values = _doc_of(out)
        return _emit(doc, values, args, meta)
    if isinstance(src, GaussianFunction):
        src = sample(src, src.default_grid())
    if isinstance(src, Spectrum):
        raise InputError(f"{args.input}: forward transform needs a field or Gaussian")
    spec = _forward(src, pair, side, method, args.freqs)
    if args.roundtrip:
        if spec.lattice is None:
            raise errors.UnsupportedMode("round trip needs --freqs auto")
        back = _inverse(spec, pair, side, method, "auto")
        r = Residual.compare(back.flat, src.flat)
        meta["roundtrip_residual"] = r.residual
        log.info("round trip residual %.3e", r.residual)
    return _emit(spec.to_json(), spec.values, args, meta)


def cmd_frac(args) -> dict:
    pair = _pair(args.structure)
    src = _load_input(args.input)
    if not isinstance(src, SampledField):
        raise InputError(f"{args.input}: fractional Laplacian needs a sampled field")
    params = FracParams(args.s, pair)
    meta = {"s": params.s, "path": args.path}
    if args.path == "all":
        agreement = path_agreement(src, params)
        meta["path_agreement_residual"] = agreement.residual
        meta["path_gaps"] = agreement.detail
        result = frac_laplacian(src, params, FracPath.CLASSICAL)
    else:
        result = frac_laplacian(src, params, FracPath.coerce(args.path))
    return _emit(result.to_json(), result.flat, args, meta)


def _vector(text: str | None, dim: int) -> np.ndarray:
    if text is None:
        return np.zeros(dim)
    try:
        vec = np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise InputError(f"--x must be comma separated numbers, got {text!r}") from exc
    if vec.shape != (dim,):
        raise errors.DimensionMismatch(f"--x has {vec.size} entries, expected {dim}")
    return vec


def cmd_poisson(args) -> dict:
    g = _load_input(args.gaussian)
    if not isinstance(g, GaussianFunction):
        raise InputError(f"{args.gaussian}: Poisson summation needs a Gaussian")
    data = _read(args.lattice)
    if "generator" not in data:
        raise InputError(f"{args.lattice}: lattice file needs a 'generator' entry")
    L = Lattice.from_json(data)
    rep = poisson_check(g, L, _vector(args.x, L.dim), args.form, args.radius_space, args.radius_freq, args.tol)
    return rep.to_json()


def cmd_verify(args) -> dict:
    filters = [f for chunk in (args.filter or []) for f in chunk.split(",") if f]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        suite = run_suite(filters, args.seed)
    report = suite.to_json(timings=args.timings)
    if args.out:
        dump_json(report, args.out)
    failed = [r.id for r in suite.reports if not r.passed]
    out = {"summary": suite.summary, "failed": failed}
    if args.out:
        out["out"] = str(args.out)
    args._exit = 0 if suite.ok else EXIT_FAIL
    return out


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser = argparse.ArgumentParser(prog="geoft", description="Geometric Fourier analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(parents=[common], name="pair", help="inverse structure, det b and classification")
    p.add_argument("structure")
    p.set_defaults(func=cmd_pair)

    def outputs(sp):
        sp.add_argument("--out", help="write the result here instead of embedding it")
        sp.add_argument("--csv", action="store_true", help="flatten the result to index,re,im rows")

    p = sub.add_parser(parents=[common], name="transform", help="left/right geometric transform or its inverse")
    p.add_argument("input", help="field, Gaussian or spectrum JSON")
    p.add_argument("structure")
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--method", choices=["direct", "fft"], default="fft")
    p.add_argument("--freqs", default="auto", help="points file, or 'auto' for the natural lattice")
    p.add_argument("--roundtrip", action="store_true", help="also report the round-trip residual")
    outputs(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser(parents=[common], name="frac", help="fractional b-Laplacian of a periodic field")
    p.add_argument("input")
    p.add_argument("structure")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--path", choices=["left", "right", "classical", "all"], default="classical")
    outputs(p)
    p.set_defaults(func=cmd_frac)

    p = sub.add_parser(parents=[common], name="poisson", help="both sides of a Poisson summation formula")
    p.add_argument("gaussian")
    p.add_argument("lattice")
    p.add_argument("--x", help="shift vector, comma separated")
    p.add_argument("--form", default="Classical", help=", ".join(f.value for f in PoissonForm))
    p.add_argument("--tol", type=float, default=1e-14, help="allowed truncated tail mass")
    p.add_argument("--radius-space", type=float)
    p.add_argument("--radius-freq", type=float)
    p.set_defaults(func=cmd_poisson)

    p = sub.add_parser(parents=[common], name="verify", help="run the identity catalog")
    p.add_argument("--filter", action="append", help="id prefixes, comma separated or repeated")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the full report JSON here")
    p.add_argument("--timings", action="store_true", help="include per-check runtimes in the report")
    p.set_defaults(func=cmd_verify)
    return parser


def _fail(code: int, exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    args._exit = 0
    try:
        out = args.func(args)
    except InputError as exc:
        return _fail(EXIT_PARSE, exc)
    except errors.GeoFTError as exc:
        for cls, code in _EXIT_CODES:
            if isinstance(exc, cls):
                return _fail(code, exc)
        return _fail(EXIT_OTHER, exc)
    except ValueError as exc:
        # enum coercion of a bad --form and similar option values
        return _fail(EXIT_PARSE, exc)
    sys.stdout.write(json.dumps(out, indent=1, sort_keys=True) + "\n")
    return args._exit


if __name__ == "__main__":
    sys.exit(main())
