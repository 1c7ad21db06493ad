"""Batch command-line front end.

Subcommands design codebooks, measure their minimum chordal distance, and
run the link-level and waveform benchmarks, emitting plot-ready CSV plus a
JSON manifest per run. Every command is deterministic given its seed; reruns
produce byte-identical CSV. BLAS threading (OMP_NUM_THREADS) only affects
speed, never results.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .audit import complexity_report, real_variable_count
from .codebooks import (
    OptimizerConfig,
    QUARTER_GRID,
    build_expmap,
    build_general_sparse,
    build_sparse_2M,
    load_codebook,
    nr_codebook_4_2,
    optimize_manopt,
    proposed_codebook_4_2,
    save_codebook,
)
from .errors import GrasspackError
from .grassmann import min_chordal_distance
from .linksim import gain_cdf, rate_curve
from .wavesim import (
    WaveformConfig,
    ccdf,
    constellation_samples,
    papr_experiment,
    row_sparse_precoder,
)

_METHODS = ("sparse2m", "sparse-general", "manopt", "expmap", "nr42", "prop42")


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_manifest(args, command, outputs, t0):
    params = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "command": command,
        "parameters": {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()},
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "outputs": [str(o) for o in outputs],
        "wall_time_s": time.time() - t0,
    }
    path = Path(outputs[0]).with_suffix(Path(outputs[0]).suffix + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _parse_grid(text):
    if text in (None, "", "none"):
        return None
    if text == "quarter":
        return QUARTER_GRID
    return tuple(float(v) for v in text.split(","))


def _parse_indices(text):
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _parse_axis(text):
    """start:stop:step (inclusive) or a comma list."""
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        n = int(round((stop - start) / step)) + 1
        return [start + i * step for i in range(n)]
    return [float(v) for v in text.split(",")]


def _stem(path):
    s = Path(path).stem
    return "".join(c if c.isalnum() else "_" for c in s)


def cmd_design(args):
    t0 = time.time()
    cfg = OptimizerConfig(
        seed=args.seed,
        phase_grid=_parse_grid(args.grid),
        restarts=args.restarts,
        max_iters=args.iters,
        expmap_scale=args.scale,
    )
    if args.method == "sparse2m":
        if args.M is None or args.size is None:
            raise GrasspackError("sparse2m requires -M and --size")
        book = build_sparse_2M(args.M, args.size, cfg)
    elif args.method == "sparse-general":
        if None in (args.T, args.M, args.sparsity, args.size):
            raise GrasspackError("sparse-general requires -T, -M, -s and --size")
        book = build_general_sparse(args.T, args.M, args.sparsity, args.size, cfg)
    elif args.method == "manopt":
        if None in (args.T, args.M, args.size):
            raise GrasspackError("manopt requires -T, -M and --size")
        book = optimize_manopt(args.T, args.M, args.size, cfg)
    elif args.method == "expmap":
        if None in (args.T, args.M, args.size):
            raise GrasspackError("expmap requires -T, -M and --size")
        book = build_expmap(args.T, args.M, args.size, cfg)
    elif args.method == "nr42":
        book = nr_codebook_4_2()
    else:
        book = proposed_codebook_4_2()
    if args.indices:
        book = book.subset(_parse_indices(args.indices))
    out = args.out or f"{args.method}.json"
    save_codebook(book, out)
    if len(book) >= 2:
        mcd, pair = min_chordal_distance(book)
        print(f"wrote {out}: size={len(book)} mcd={mcd:.12f} pair=({pair[0]},{pair[1]})")
    else:
        print(f"wrote {out}: size={len(book)} mcd=nan (need >= 2 codewords)")
    _write_manifest(args, "design", [out], t0)
    return 0


def cmd_mcd(args):
    t0 = time.time()
    rows = []
    for path in args.files:
        book = load_codebook(path)
        mcd, pair = min_chordal_distance(book)
        rows.append([path, len(book), mcd, pair[0], pair[1]])
    header = ["file", "size", "mcd", "argmin_i", "argmin_j"]
    if args.out:
        _write_csv(args.out, header, rows)
        _write_manifest(args, "mcd", [args.out], t0)
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(_fmt(v) for v in row))
    return 0


def cmd_rate(args):
    t0 = time.time()
    books = [load_codebook(p) for p in args.codebooks]
    names = [_stem(p) for p in args.codebooks]
    snr_db = _parse_axis(args.snr_db)
    sweep = rate_curve(books, args.N, snr_db, args.trials, args.seed, names)
    header = ["snr_db"] + [f"rate_{n}" for n in names]
    for j in range(1, len(names)):
        header += [f"diff_{names[j]}_vs_{names[0]}", f"se_{names[j]}_vs_{names[0]}"]
    rows = []
    for si, snr in enumerate(snr_db):
        row = [snr] + [res.mean_rates[si] for res in sweep.results]
        for j in range(1, len(names)):
            row += [sweep.diff_mean[(0, j)][si], sweep.diff_se[(0, j)][si]]
        rows.append(row)
    _write_csv(args.out, header, rows)
    _write_manifest(args, "rate", [args.out], t0)
    print(f"wrote {args.out}: {len(rows)} SNR points, {args.trials} paired trials")
    return 0


def cmd_gain_cdf(args):
    t0 = time.time()
    books = [load_codebook(p) for p in args.codebooks]
    names = [_stem(p) for p in args.codebooks]
    kfactors = [float(v) for v in args.k_factors.split(",")]
    columns, header = [], ["rank"]
    for k in kfactors:
        ktag = "inf" if np.isinf(k) else _fmt(k).replace(".", "p")
        for book, name in zip(books, names):
            header.append(f"gain_{name}_K{ktag}")
            columns.append(gain_cdf(book, args.N, k, args.trials, args.seed))
    rows = [[r + 1] + [col[r] for col in columns] for r in range(args.trials)]
    _write_csv(args.out, header, rows)
    _write_manifest(args, "gain-cdf", [args.out], t0)
    print(f"wrote {args.out}: {args.trials} sorted gains per column")
    return 0


def _papr_schemes(args):
    schemes = []
    for path in args.codebooks or []:
        schemes.append((_stem(path), load_codebook(path)))
    for spec in args.row_sparse or []:
        t, m, ell = (int(v) for v in spec.split(","))
        thetas = [float(v) for v in args.thetas.split(",")] if args.thetas else None
        w = row_sparse_precoder(t, m, ell, thetas=thetas, seed=args.seed)
        schemes.append((f"rows_T{t}M{m}l{ell}", w))
    if not schemes:
        raise GrasspackError("papr needs --codebooks and/or --row-sparse")
    return schemes


def cmd_papr(args):
    t0 = time.time()
    schemes = _papr_schemes(args)
    waveforms = ["ofdm", "dft-s-ofdm"] if args.waveform == "both" else [args.waveform]
    thresholds = _parse_axis(args.thresholds)
    header = ["threshold_db"]
    curves = []
    outputs = []
    for wf in waveforms:
        cfg = WaveformConfig(
            n_used=args.subcarriers,
            n_fft=args.fft,
            oversample=args.oversample,
            waveform=wf,
        )
        for name, source in schemes:
            samples = papr_experiment(
                source, cfg, args.trials, args.seed, antenna_mean=args.antenna_mean
            )
            header.append(f"ccdf_{name}_{wf.replace('-', '')}")
            curves.append(ccdf(samples, thresholds)[:, 1])
    rows = [[thr] + [c[i] for c in curves] for i, thr in enumerate(thresholds)]
    _write_csv(args.out, header, rows)
    outputs.append(args.out)
    if args.scatter:
        name, source = schemes[0]
        cfg = WaveformConfig(
            n_used=args.subcarriers,
            n_fft=args.fft,
            oversample=1,
            waveform=waveforms[0],
        )
        pts = constellation_samples(source, cfg, args.scatter_frames, args.seed)
        _write_csv(args.scatter, ["re", "im"], [[z.real, z.imag] for z in pts])
        outputs.append(args.scatter)
    _write_manifest(args, "papr", outputs, t0)
    print(f"wrote {args.out}: {len(curves)} CCDF curves, {args.trials} frames each")
    return 0


def cmd_audit(args):
    t0 = time.time()
    if args.sweep:
        sizes = [int(v) for v in _parse_axis(args.sweep)]
        header = ["size", "manopt_real_vars", "proposed2m_real_vars"]
        rows = []
        for size in sizes:
            prop = (
                real_variable_count("proposed2m", args.T, args.M, size)
                if args.T == 2 * args.M
                else ""
            )
            rows.append([size, real_variable_count("manopt", args.T, args.M, size), prop])
        _write_csv(args.out, header, rows)
    else:
        report = complexity_report(args.T, args.M, args.N, args.size)
        text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
        Path(args.out).write_text(text, encoding="utf-8")
    _write_manifest(args, "audit", [args.out], t0)
    print(f"wrote {args.out}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="grasspack",
        description="Design sparse Grassmannian precoding codebooks and benchmark "
        "them against dense baselines.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="construct a codebook and save it as JSON")
    p.add_argument("--method", required=True, choices=_METHODS)
    p.add_argument("-T", type=int)
    p.add_argument("-M", type=int)
    p.add_argument("-s", "--sparsity", type=int)
    p.add_argument("--size", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", default=None, help="'quarter', 'none', or comma-separated radians")
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--scale", type=float, default=0.5, help="exp-map QAM spread factor")
    p.add_argument("--indices", default=None, help="keep 1-based entries, e.g. '15-22'")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("mcd", help="minimum chordal distance of codebook files")
    p.add_argument("files", nargs="+")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_mcd)

    p = sub.add_parser("rate", help="paired achievable-rate sweep under Rayleigh fading")
    p.add_argument("--codebooks", nargs="+", required=True)
    p.add_argument("-N", type=int, default=32)
    p.add_argument("--snr-db", default="0:20:2")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("gain-cdf", help="effective-gain CDF under Rician fading")
    p.add_argument("--codebooks", nargs="+", required=True)
    p.add_argument("-N", type=int, default=32)
    p.add_argument("--k-factors", default="0,1,inf")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gain_cdf)

    p = sub.add_parser("papr", help="PAPR CCDF per scheme for OFDM / DFT-s-OFDM")
    p.add_argument("--codebooks", nargs="*", default=None)
    p.add_argument("--row-sparse", nargs="*", default=None, metavar="T,M,ELL")
    p.add_argument("--thetas", default=None, help="comma-separated row phases (radians)")
    p.add_argument("--waveform", choices=["ofdm", "dft-s-ofdm", "both"], default="both")
    p.add_argument("--subcarriers", type=int, default=624)
    p.add_argument("--fft", type=int, default=1024)
    p.add_argument("--oversample", type=int, default=8)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--thresholds", default="4:13:0.25")
    p.add_argument("--antenna-mean", action="store_true", help="one per-frame antenna average per sample")
    p.add_argument("--scatter", default=None, help="also dump Nyquist-rate samples of scheme 1 to CSV")
    p.add_argument("--scatter-frames", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_papr)

    p = sub.add_parser("audit", help="analytic complexity report or size sweep")
    p.add_argument("-T", type=int, required=True)
    p.add_argument("-M", type=int, required=True)
    p.add_argument("-N", type=int, default=32)
    p.add_argument("--size", type=int, default=22)
    p.add_argument("--sweep", default=None, help="sizes as start:stop:step or comma list")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GrasspackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
