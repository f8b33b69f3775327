"""Batch command line front-end.

Exit codes: 0 on success, 2 on invalid flags, 1 on runtime failure.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
import time

import numpy as np

from . import __version__, _kernels
from ._parallel import chunked_map
from .entanglement import entangling_capability, max_disagreement
from .expressibility import DEFAULT_BINS, fidelity_histogram, kl_divergence, sample_fidelities
from .fourier import coefficient_stats, max_frequency, spectra_for, dft_spectrum
from .model import ModelConfig, construct, evaluate, evaluate_batch, sample_parameters
from .noise import NoiseParams

log = logging.getLogger("qfmkit")

NOISE_FLAGS = {
    "p_bf": "--p-bf",
    "p_pf": "--p-pf",
    "p_dp": "--p-dp",
    "p_ad": "--p-ad",
    "p_pd": "--p-pd",
    "p_me": "--p-me",
    "p_sp": "--p-sp",
    "t1": "--t1",
    "t2": "--t2",
    "t_factor": "--t-factor",
    "gate_error_mu": "--gate-error-mu",
}


class UsageError(Exception):
    pass


def _common(p, samples_default, fmt_default="json"):
    p.add_argument("--ansatz", required=True, help="template name (case-insensitive)")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--encoding", default="X", help="X, Y, Z or a comma list, one per qubit")
    p.add_argument("--observable", default="Z0", help='Pauli string, e.g. "Z0", "Z0Z1", "ZIII"')
    p.add_argument("--samples", type=int, default=samples_default)
    p.add_argument("--seed", type=int, default=None, help="falls back to $QFM_SEED, then 0")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
    p.add_argument("--threads", type=int, default=1)


def _noise_flags(p):
    g = p.add_argument_group("noise")
    for name, flag in NOISE_FLAGS.items():
        g.add_argument(flag, dest=name, type=float, default=0.0)
    g.add_argument("--noise-json", default=None, help="JSON object with noise field names")
    g.add_argument(
        "--no-encoding-gate-error",
        action="store_true",
        help="apply the coherent angle error to trainable rotations only",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coefficients", help="Fourier coefficients by DFT and/or the analytical tree")
    _common(p, samples_default=1)
    p.add_argument("--method", choices=("dft", "analytical", "both"), default="dft")
    p.add_argument("--params", choices=("zero", "random"), default="random")
    p.add_argument("--threshold", type=float, default=1e-10, help="support threshold on mean |c|")
    _noise_flags(p)

    p = sub.add_parser("expressibility", help="KL divergence against Haar fidelities")
    _common(p, samples_default=5000)
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--x", type=float, default=0.0, help="fixed input during sampling")

    p = sub.add_parser("entanglement", help="entangling capability")
    _common(p, samples_default=5000)
    p.add_argument("--method", choices=("meyer_wallach", "bell", "both"), default="meyer_wallach")
    p.add_argument("--x", type=float, default=0.0, help="fixed input during sampling")

    p = sub.add_parser("evaluate", help="model output f(x), optionally noisy")
    _common(p, samples_default=1, fmt_default="csv")
    p.add_argument("--x", default="0", help="comma-separated inputs")
    p.add_argument("--params", choices=("zero", "random"), default="random")
    _noise_flags(p)
    return parser


# --------------------------------------------------------------------------
# setup
# --------------------------------------------------------------------------
def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QFM_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QFM_SEED must be an integer, got {env!r}")


def _noise(args):
    if not hasattr(args, "p_bf"):
        return None
    values = {name: getattr(args, name) for name in NOISE_FLAGS}
    if args.noise_json:
        try:
            extra = json.loads(args.noise_json)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--noise-json: {exc}")
        if not isinstance(extra, dict):
            raise UsageError("--noise-json must be a JSON object")
        values.update(extra)
    if args.no_encoding_gate_error:
        values["gate_error_on_encoding"] = False
    noise = NoiseParams.from_dict(values)
    return None if noise.is_zero else noise


def _parse_xs(text):
    try:
        xs = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"malformed --x {text!r}")
    if not xs or not all(np.isfinite(xs)):
        raise UsageError(f"malformed --x {text!r}")
    return xs


def _setup(args):
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    seed = _seed(args)
    noise = _noise(args)
    encoding = [e for e in args.encoding.split(",")]
    config = ModelConfig(
        args.ansatz,
        args.qubits,
        args.layers,
        encoding=encoding if len(encoding) > 1 else encoding[0],
        observable=args.observable,
        noise=noise,
        seed=seed,
    )
    ir = construct(config)
    return config, ir


def _manifest(args, config, ir, extra):
    return {
        "subcommand": args.command,
        "config": {
            "ansatz": config.spec.name,
            "n_qubits": config.n_qubits,
            "n_layers": config.n_layers,
            "encoding": "".join(config.axes),
            "observable": str(ir.observable),
            "noise": config.noise.to_dict() if config.noise else None,
            "n_samples": args.samples,
            "seed": config.seed,
            **extra,
        },
        "version": __version__,
        "kernel_backend": _kernels.backend(),
    }


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------
def cmd_coefficients(args, config, ir):
    methods = ["dft", "analytical"] if args.method == "both" else [args.method]
    if config.noise is not None and "analytical" in methods:
        raise UsageError("the analytical method is noiseless; drop the noise flags")
    if args.layers < 1 or max_frequency(ir) < 1:
        raise UsageError("coefficients need at least one encoding layer")
    manifest = _manifest(args, config, ir, {"method": args.method, "params": args.params})
    yield manifest

    rng = np.random.default_rng(config.seed)
    n = 1 if args.params == "zero" else args.samples
    params = np.zeros((1, ir.param_count)) if args.params == "zero" else sample_parameters(ir, n, rng)
    k = max_frequency(ir)
    results = {}
    coeffs = {}
    for m in methods:
        if m == "dft" and config.noise is not None:
            streams = np.random.SeedSequence(config.seed).spawn(n)
            c = np.stack(
                [
                    dft_spectrum(ir, p, config.noise, np.random.default_rng(s)).coefficients
                    for p, s in zip(params, streams)
                ]
            )
        else:
            c = chunked_map(lambda blk, m=m: spectra_for(ir, blk, m), params, args.threads, chunk=64)
        coeffs[m] = c
        entry = coefficient_stats(c, k, m, args.threshold).to_dict()
        if n == 1:
            entry["coefficients"] = [[float(v.real), float(v.imag)] for v in c[0]]
        results[m] = entry
    out = {"frequencies": list(range(-k, k + 1)), "results": results}
    if len(methods) == 2:
        diff = np.abs(coeffs["dft"] - coeffs["analytical"]).max(axis=0)
        out["max_discrepancy"] = [float(v) for v in diff]
        out["max_discrepancy_overall"] = float(diff.max())
    yield out


def cmd_expressibility(args, config, ir):
    if config.noise is not None:
        raise UsageError("expressibility needs a noiseless model")
    if args.samples < 2:
        raise UsageError("--samples must be >= 2 for expressibility")
    if args.bins < 2:
        raise UsageError("--bins must be >= 2")
    yield _manifest(args, config, ir, {"n_bins": args.bins, "x": args.x})
    rng = np.random.default_rng(config.seed)
    fids = sample_fidelities(ir, args.samples, rng, x=args.x, threads=args.threads)
    kl = kl_divergence(fidelity_histogram(fids, ir.n_qubits, args.bins))
    yield {"n_samples": args.samples, "n_bins": args.bins, "kl_divergence": kl}


def cmd_entanglement(args, config, ir):
    if ir.n_qubits < 2:
        raise UsageError("entangling capability needs --qubits >= 2")
    yield _manifest(args, config, ir, {"method": args.method, "x": args.x})
    rng = np.random.default_rng(config.seed)
    results = entangling_capability(ir, args.samples, rng, args.method, x=args.x, threads=args.threads)
    if len(results) == 1:
        yield results[0].to_dict()
    else:
        yield {
            "method": "both",
            "n_samples": args.samples,
            "results": [r.to_dict() for r in results],
            "max_abs_dq": max_disagreement(results),
        }


def cmd_evaluate(args, config, ir):
    xs = _parse_xs(args.x)
    yield _manifest(args, config, ir, {"params": args.params, "x": xs})
    n = 1 if args.params == "zero" else args.samples
    rng = np.random.default_rng(config.seed)
    params = np.zeros((1, ir.param_count)) if args.params == "zero" else sample_parameters(ir, n, rng)
    if config.noise is None:
        batch = np.repeat(params, len(xs), axis=0)
        f = evaluate_batch(ir, batch, np.tile(xs, n)).reshape(n, len(xs))
    else:
        streams = np.random.SeedSequence(config.seed).spawn(n)
        f = np.array(
            [
                [evaluate(ir, p, x, config.noise, gen) for x in xs]
                for p, gen in ((p, np.random.default_rng(s)) for p, s in zip(params, streams))
            ]
        )
    rows = [
        {"sample": i, "x": x, "f": float(f[i, j])} for i in range(n) for j, x in enumerate(xs)
    ]
    yield {"rows": rows}


COMMANDS = {
    "coefficients": cmd_coefficients,
    "expressibility": cmd_expressibility,
    "entanglement": cmd_entanglement,
    "evaluate": cmd_evaluate,
}


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------
def _csv_rows(command, payload):
    if command == "evaluate":
        return ["sample", "x", "f"], [[r["sample"], fmt_float(r["x"]), fmt_float(r["f"])] for r in payload["rows"]]
    if command == "coefficients":
        methods = list(payload["results"])
        header = ["frequency"]
        for m in methods:
            header.append(f"{m}_mean_abs")
            if "coefficients" in payload["results"][m]:
                header += [f"{m}_re", f"{m}_im"]
        if "max_discrepancy" in payload:
            header.append("max_discrepancy")
        rows = []
        for i, w in enumerate(payload["frequencies"]):
            row = [w]
            for m in methods:
                res = payload["results"][m]
                row.append(fmt_float(res["mean_abs"][i]))
                if "coefficients" in res:
                    row += [fmt_float(v) for v in res["coefficients"][i]]
            if "max_discrepancy" in payload:
                row.append(fmt_float(payload["max_discrepancy"][i]))
            rows.append(row)
        return header, rows
    flat = {k: v for k, v in payload.items() if not isinstance(v, list)}
    if "results" in payload:
        for r in payload["results"]:
            flat[f"{r['method']}_q_mean"] = r["q_mean"]
    return ["key", "value"], [[k, fmt_float(v) if isinstance(v, float) else v] for k, v in flat.items()]


def fmt_float(v: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    if not np.isfinite(v):
        raise ValueError(f"cannot serialise non-finite value {v}")
    text = format(float(v), ".17g")
    # keep a float marker so integral values still parse back as floats
    return text if any(ch in text for ch in ".e") else text + ".0"


def to_json(obj, indent: int = 0) -> str:
    """JSON text with every float written by :func:`fmt_float`."""
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        items = [inner + to_json(v, indent + 2) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    return json.dumps(str(obj))


def render(command, manifest, payload, fmt) -> str:
    if fmt == "json":
        return to_json({"manifest": manifest, **payload}) + "\n"
    buf = io.StringIO()
    buf.write("# manifest: " + " ".join(ln.strip() for ln in to_json(manifest).splitlines()) + "\n")
    header, rows = _csv_rows(command, payload)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    start = time.perf_counter()
    try:
        config, ir = _setup(args)
        steps = COMMANDS[args.command](args, config, ir)
        manifest = next(steps)
    except (UsageError, ValueError) as exc:
        print(f"qfm {args.command}: error: {exc}", file=sys.stderr)
        return 2
    try:
        payload = next(steps)
        manifest["duration_s"] = time.perf_counter() - start
        text = render(args.command, manifest, payload, args.format)
        if args.output == "-":
            sys.stdout.write(text)
        else:
            with open(args.output, "w") as fh:
                fh.write(text)
    except UsageError as exc:
        print(f"qfm {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"qfm {args.command}: runtime error: {exc}", file=sys.stderr)
        return 1
    log.info("%s finished in %.3fs", args.command, manifest["duration_s"])
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
