"""Command-line front end.

Subcommands: ``gen``, ``decompose``, ``spectrum``, ``group``, ``sense`` and
``replay``. Every run writes its outputs plus ``manifest.json`` (the fully
resolved configuration) into ``--out``; ``ssabank replay manifest.json``
re-executes a run from its manifest.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .applications import BandSpec, calibrate_threshold, group_components, sense
from .core import CorrelationMode
from .exceptions import ConvergenceError, SSAError
from .filterbank import (
    DEFAULT_NFFT,
    Ordering,
    build_model,
    extract_components,
    noise_floor_weights,
    top_weights,
)
from .io import read_signal, write_json, write_signal, write_table
from .signalgen import GenSpec, generate
from .spectra import autocorr_psd, eigen_spectrum, welch_psd

EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def parse_gen_spec(text, seed=0, sample_rate=None):
    """Build a :class:`GenSpec` from a JSON file path or an inline description.

    Inline form: ``kind:key=value;key=value`` with comma-separated lists,
    e.g. ``sinemix:amplitudes=2,4;frequencies=0.1,0.4;sigma=1;n=1024``.
    Keys: ``n``, ``amplitudes`` (``a``), ``frequencies`` (``f``), ``sigma``,
    ``fs``, ``segment_len``, ``mask`` (a 0/1 string).
    """
    path = Path(text)
    if path.suffix == ".json" and path.exists():
        fields = json.loads(path.read_text())
    else:
        kind, _, rest = text.partition(":")
        fields = {"kind": kind.strip().lower()}
        aliases = {"a": "amplitudes", "f": "frequencies", "fs": "sample_rate"}
        for item in filter(None, (s.strip() for s in rest.split(";"))):
            key, sep, val = item.partition("=")
            if not sep:
                raise UsageError(f"malformed generator field {item!r}")
            key = aliases.get(key.strip(), key.strip())
            if key in ("amplitudes", "frequencies"):
                fields[key] = [float(v) for v in val.split(",") if v.strip()]
            elif key == "mask":
                fields[key] = [int(c) for c in val.strip() if c in "01"]
            elif key in ("n", "segment_len", "seed"):
                fields[key] = int(val)
            else:
                fields[key] = float(val)
    fields.setdefault("seed", seed)
    if sample_rate is not None:
        fields["sample_rate"] = sample_rate
    try:
        return GenSpec(**fields)
    except TypeError as exc:
        raise UsageError(f"invalid generator spec: {exc}") from exc


def parse_weights(text):
    """``all`` | ``topL=<k>`` | ``noise=<k>`` -> (kind, k)."""
    if text == "all":
        return "all", None
    kind, sep, val = text.partition("=")
    if sep and kind in ("topL", "top", "noise") and val.isdigit():
        return ("top" if kind.startswith("top") else "noise"), int(val)
    raise UsageError(f"invalid weights spec {text!r} (use all, topL=<k> or noise=<k>)")


def resolve_weights(model, text):
    kind, k = parse_weights(text)
    if kind == "all":
        return np.ones(model.M)
    if kind == "top":
        return top_weights(model, k)
    return noise_floor_weights(model, k)


def load_input(args):
    if args.gen is not None:
        spec = parse_gen_spec(args.gen, seed=args.seed, sample_rate=args.fs)
        return generate(spec), spec
    if args.input is None:
        raise UsageError("one of --input or --gen is required")
    return read_signal(args.input, sample_rate=args.fs), None


def _model(args, x):
    return build_model(x, args.M, args.mode, args.order, args.nfft)


def cmd_gen(args):
    if args.gen is None:
        raise UsageError("gen requires --gen")
    x, spec = load_input(args)
    name = "signal.f64" if args.format == "f64" else "signal.csv"
    outputs = {name: lambda p: write_signal(p, x)}
    return outputs, {"gen_spec": spec.to_dict()}


def cmd_decompose(args):
    x, _ = load_input(args)
    model = _model(args, x)
    weights = resolve_weights(model, args.weights)
    comps = extract_components(x, model, weights)
    summary = {
        "M": model.M,
        "N": model.N,
        "mode": model.mode.value,
        "ordering": model.ordering.value,
        "nfft": model.nfft,
        "sample_rate": model.sample_rate,
        "eigenvalues": model.eigenvalues.tolist(),
        "peak_frequencies": model.peak_frequencies.tolist(),
        "weights": weights.tolist(),
    }
    header = ["n"] + [f"c{m + 1}" for m in range(model.M)]
    columns = [np.arange(model.N)] + list(comps.components)
    return {
        "model.json": lambda p: write_json(p, summary),
        "components.csv": lambda p: write_table(p, header, columns),
    }, {}


def cmd_spectrum(args):
    x, _ = load_input(args)
    estimators = args.estimator or ["autocorr", "eigen", "welch"]
    outputs = {}
    for name in dict.fromkeys(estimators):
        if name == "autocorr":
            est = autocorr_psd(x, args.M, args.nfft)
        elif name == "eigen":
            est = eigen_spectrum(_model(args, x))
        else:
            seg = args.welch_seg_len or min(256, len(x))
            est = welch_psd(x, seg, args.overlap, nfft=args.welch_nfft, window=args.window)
        outputs[f"spectrum_{name}.csv"] = (
            lambda p, e=est: write_table(p, ["frequency", "power"], [e.frequencies, e.powers])
        )
    return outputs, {}


def cmd_group(args):
    if args.bands is None:
        raise UsageError("group requires --bands")
    bands = BandSpec.parse(args.bands)
    x, _ = load_input(args)
    model = _model(args, x)
    weights = resolve_weights(model, args.weights)
    comps = extract_components(x, model, weights)
    grouped = group_components(comps, model.peak_frequencies, bands)
    header = ["n"] + [f"band{b + 1}" for b in range(len(bands))] + ["leftover"]
    columns = [np.arange(model.N)] + list(grouped.signals) + [grouped.leftover]
    summary = {
        "bands": [list(b) for b in bands],
        "counts": list(grouped.counts),
        "members": [m.tolist() for m in grouped.members],
        "leftover_count": grouped.leftover_count,
        "leftover_members": grouped.leftover_members.tolist(),
        "peak_frequencies": model.peak_frequencies.tolist(),
    }
    return {
        "groups.csv": lambda p: write_table(p, header, columns),
        "groups.json": lambda p: write_json(p, summary),
    }, {}


def cmd_sense(args):
    if args.segment_len is None:
        raise UsageError("sense requires --segment-len")
    if args.threshold is None and not args.labels:
        raise UsageError("sense needs --threshold or calibration --labels")
    x, _ = load_input(args)
    extra = {}
    threshold = args.threshold
    if threshold is None:
        labels = [int(c) for c in args.labels if c in "01"]
        probe = sense(x, args.segment_len, args.M, 0.0, args.mode)
        if len(labels) > len(probe.segments):
            raise UsageError(f"{len(labels)} labels for {len(probe.segments)} segments")
        threshold = calibrate_threshold(probe.ratios[: len(labels)], labels)
        extra["calibrated_threshold"] = threshold
    report = sense(
        x, args.segment_len, args.M, threshold, args.mode,
        emit_spectra=args.emit_spectra, nfft=args.nfft,
    )
    rows = report.rows()
    columns = [
        np.array([r[0] for r in rows]),
        np.array([r[1] for r in rows]),
        np.array([r[2] for r in rows]),
        np.array([r[3] for r in rows]),
    ]
    outputs = {
        "sensing.csv": lambda p: write_table(p, ["segment", "ratio", "ratio_db", "decision"], columns)
    }
    if args.emit_spectra:
        for seg in report.segments:
            outputs[f"spectra/segment_{seg.index:04d}.csv"] = (
                lambda p, s=seg.spectrum: write_table(
                    p, ["frequency", "eigenvalue"], [s.frequencies, s.powers]
                )
            )
    return outputs, extra


COMMANDS = {
    "gen": cmd_gen,
    "decompose": cmd_decompose,
    "spectrum": cmd_spectrum,
    "group": cmd_group,
    "sense": cmd_sense,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ssabank", description="Singular spectrum analysis as a zero-phase filter bank."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", help="signal file (.csv/.txt or .f64/.bin)")
    src.add_argument("--gen", help="generator spec (inline or .json file)")
    common.add_argument("--fs", type=float, default=None, help="sample rate override")
    common.add_argument("--seed", type=int, default=0, help="generator seed")
    common.add_argument("--out", required=True, help="output directory")

    model_opts = argparse.ArgumentParser(add_help=False)
    model_opts.add_argument("--M", type=int, default=30, help="window length (default 30)")
    model_opts.add_argument(
        "--mode", choices=[m.value for m in CorrelationMode], default="toeplitz"
    )
    model_opts.add_argument("--order", choices=[o.value for o in Ordering], default="eigenvalue")
    model_opts.add_argument("--nfft", type=int, default=DEFAULT_NFFT)

    p = sub.add_parser("gen", parents=[common], help="generate a synthetic signal")
    p.add_argument("--format", choices=["csv", "f64"], default="csv")

    p = sub.add_parser("decompose", parents=[common, model_opts], help="model + components")
    p.add_argument("--weights", default="all", help="all | topL=<k> | noise=<k>")

    p = sub.add_parser("spectrum", parents=[common, model_opts], help="power spectra")
    p.add_argument(
        "--estimator", action="append", choices=["autocorr", "eigen", "welch"],
        help="repeatable; default: all three",
    )
    p.add_argument("--welch-seg-len", type=int, default=None)
    p.add_argument("--overlap", type=float, default=0.5)
    p.add_argument("--welch-nfft", type=int, default=None)
    p.add_argument("--window", default="hamming")

    p = sub.add_parser("group", parents=[common, model_opts], help="band grouping")
    p.add_argument("--bands", help='half-open bands "lo:hi,lo:hi,..."')
    p.add_argument("--weights", default="all", help="all | topL=<k> | noise=<k>")

    p = sub.add_parser("sense", parents=[common, model_opts], help="occupancy detection")
    p.add_argument("--segment-len", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--labels", default=None, help="0/1 string labelling the first segments")
    p.add_argument("--emit-spectra", action="store_true")

    p = sub.add_parser("replay", help="re-run a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None, help="output directory (default: manifest's)")
    return parser


def run(args):
    """Execute a parsed configuration and write its outputs; returns the manifest."""
    outputs, extra = COMMANDS[args.command](args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, writer in outputs.items():
        target = out / name
        target.parent.mkdir(parents=True, exist_ok=True)
        writer(target)
    manifest = {
        "command": args.command,
        "config": {k: v for k, v in sorted(vars(args).items())},
        "outputs": sorted(outputs),
        "version": __version__,
        **extra,
    }
    write_json(out / "manifest.json", manifest)
    return manifest


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            manifest = json.loads(Path(args.manifest).read_text())
            config = dict(manifest["config"])
            if args.out is not None:
                config["out"] = args.out
            args = argparse.Namespace(**config)
        run(args)
    except ConvergenceError as exc:
        print(f"ssabank: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, SSAError, OSError, ValueError, KeyError) as exc:
        print(f"ssabank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
