"""Command-line front end.

Exit codes: 0 success, 1 valid run with a negative verdict, 2 input error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from scipy.io import wavfile
from scipy.optimize import linear_sum_assignment

from . import region, statespace, topologies
from .charpoly import generalized_charpoly
from .formats import ParseError, encode_complex, parse_matrix, parse_system, read_text, system_to_json
from .model import FdnError, FdnSystem
from .roots import poly_roots
from .simulate import render_ir
from .unilossless import DEFAULT_TOL, certificate_residual, is_unilossless

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
METHOD_AGREEMENT = 1e-6

SCHROEDER_GAINS = [0.805, 0.827, 0.783, 0.764, 0.7, 0.7]
SCHROEDER_DELAYS = [1426, 1781, 1973, 2098, 240, 82]
DEFAULT_DELAY_POOL = [1009, 1213, 1327, 1499, 1601, 1733, 1871, 1997, 2111, 2237, 2357, 2477, 2591, 2713, 2837, 2953]


class NumericalFailure(RuntimeError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _complex_pair(text: str) -> complex:
    vals = _floats(text)
    if len(vals) == 1:
        return complex(vals[0])
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im got {text!r}")
    return complex(vals[0], vals[1])


def _emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _match_roots(a: np.ndarray, b: np.ndarray) -> float:
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()) if r.size else 0.0


def cmd_analyze(args) -> int:
    A = parse_matrix(read_text(args.matrix), args.matrix)
    report = is_unilossless(A, tol=args.tol, zero_tol=args.zero_tol)
    out = report.to_dict()
    out["eigenvalue_magnitudes"] = sorted(np.abs(np.linalg.eigvals(A)).tolist())
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK if report.is_unilossless else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    """Re-check each block certificate of a saved analyze report against the matrix."""
    A = parse_matrix(read_text(args.matrix), args.matrix)
    try:
        report = json.loads(read_text(args.report))
        blocks = report["blocks"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"not an analyze report: {exc}", args.report) from None
    ok = True
    lines = []
    for blk in blocks:
        idx = blk["indices"]
        e = blk.get("certificate_e")
        if e is None:
            ok = False
            lines.append(f"block {idx}: no certificate")
            continue
        if any(i < 0 or i >= A.shape[0] for i in idx) or len(e) != len(idx):
            raise ParseError(f"block {idx} does not fit a {A.shape[0]}x{A.shape[0]} matrix", args.report)
        B = A[np.ix_(idx, idx)]
        res = certificate_residual(B, e)
        passed = res <= args.tol and all(v > 0 for v in e)
        ok &= passed
        lines.append(f"block {idx}: residual {res:.3e} {'ok' if passed else 'FAIL'}")
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_poles(args) -> int:
    A = parse_matrix(read_text(args.matrix), args.matrix)
    sys_ = FdnSystem(A, args.delays)

    def by(method):
        if method == "minors":
            return poly_roots(generalized_charpoly(sys_.A, sys_.m)).roots
        return statespace.poles(sys_).roots

    roots = by(args.method)
    other = "statespace" if args.method == "minors" else "minors"
    if np.any(~np.isfinite(roots)):
        raise NumericalFailure("non-finite roots")
    lines = [f"# method: {args.method}", "re,im,magnitude"]
    lines += [f"{r.real:.15g},{r.imag:.15g},{abs(r):.15g}" for r in roots]
    dev = float(np.max(np.abs(np.abs(roots) - 1)))
    lossless = dev <= args.tol
    lines.append(f"# max | |r| - 1 | = {dev:.6e}")
    lines.append(f"# max |r| = {np.max(np.abs(roots)):.6f}")
    lines.append(f"# verdict: {'lossless' if lossless else 'not lossless'}")
    print("\n".join(lines))
    if not args.no_check:
        alt = by(other)
        gap = _match_roots(roots, alt)
        if gap > METHOD_AGREEMENT:
            print(f"warning: {args.method} and {other} roots differ by {gap:.3e}", file=sys.stderr)
            for name, rs in ((args.method, roots), (other, alt)):
                print(f"  {name}: " + " ".join(f"{r:.10g}" for r in rs), file=sys.stderr)
    return EXIT_OK if lossless else EXIT_NEGATIVE


def cmd_ir(args) -> int:
    sys_ = parse_system(read_text(args.system), args.system)
    with np.errstate(over="ignore", invalid="ignore"):
        h = render_ir(sys_, args.samples)
    if not np.all(np.isfinite(h)):
        bad = int(np.argmax(~np.isfinite(h)))
        raise NumericalFailure(f"impulse response became non-finite at sample {bad}; the system is unstable")
    fmt = args.format or ("csv" if str(args.out).endswith(".csv") else "wav")
    report = {"samples": args.samples, "format": fmt, "out": args.out}
    if fmt == "csv":
        rows = ["index,re,im"] + [f"{n},{v.real:.17g},{v.imag:.17g}" for n, v in enumerate(h)]
        _emit("\n".join(rows) + "\n", args.out)
    else:
        x = h.real
        peak = float(np.max(np.abs(x)))
        scale = 1.0 / peak if peak > 0 else 1.0
        x = x * scale
        if args.wav_format == "pcm16":
            data = np.round(x * 32767).astype(np.int16)
        else:
            data = x.astype(np.float32)
        wavfile.write(args.out, args.sample_rate, data)
        report.update(sample_rate=args.sample_rate, wav_format=args.wav_format, peak=peak, scale=scale)
    print(json.dumps(report), file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_region(args) -> int:
    eps = args.eps
    if abs(abs(eps) - 1) > 1e-12:
        raise FdnError(f"--eps must be unimodular, |eps| = {abs(eps)}")
    pts = region.region_boundary(
        eps, args.k, args.angles, args.tol, m1=args.m1, r_max=args.r_max, workers=args.workers
    )
    _emit(region.boundary_csv(pts), args.out)
    return EXIT_OK


def cmd_topology(args) -> int:
    if args.kind == "schroeder":
        g = args.g or SCHROEDER_GAINS
        m = args.m or SCHROEDER_DELAYS
        if len(g) != 6 or len(m) != 6:
            raise FdnError("schroeder needs 6 gains and 6 delays")
        sys_ = topologies.schroeder(g, m)
    elif args.kind == "allpass":
        if not args.matrix:
            raise FdnError("allpass needs --matrix")
        A = parse_matrix(read_text(args.matrix), args.matrix)
        n = A.shape[0]
        g = args.g or [0.5] * n
        m = args.m or DEFAULT_DELAY_POOL[:n]
        m_ap = args.m_ap or [max(1, k // 7) for k in m]
        A_ap, m_full = topologies.allpass_fdn(A, g, m, m_ap)
        b = np.concatenate([np.ones(n), np.zeros(n)]) if args.b is None else args.b
        c = np.concatenate([np.ones(n), np.zeros(n)]) if args.c is None else args.c
        sys_ = FdnSystem(A_ap, m_full, b, c, 0.0)
    else:
        if not args.y:
            raise FdnError("sdn needs --y")
        y = args.y
        A = topologies.sdn_even(y) if args.sdn_kind == "even" else topologies.sdn_householder(y)
        n = len(y)
        if n > len(DEFAULT_DELAY_POOL) and not args.m:
            raise FdnError("give --m for more than 16 lines")
        sys_ = FdnSystem(A, args.m or DEFAULT_DELAY_POOL[:n])
    _emit(json.dumps(system_to_json(sys_)) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fdnlossless", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="certify a feedback matrix as lossless for all delays")
    a.add_argument("matrix", help="matrix file (JSON or text), - for stdin")
    a.add_argument("--tol", type=float, default=DEFAULT_TOL, help="certificate tolerance")
    a.add_argument("--zero-tol", type=float, default=0.0, help="entries at or below this count as zero in the graph")
    a.add_argument("--out", help="write the JSON report here instead of stdout")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="re-check certificates from an analyze report")
    v.add_argument("report", help="JSON report from analyze")
    v.add_argument("matrix", help="the matrix the report was made for")
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("poles", help="poles of an FDN with given delays")
    q.add_argument("matrix", help="matrix file (JSON or text)")
    q.add_argument("--delays", type=_ints, required=True, help="comma-separated delays in samples")
    q.add_argument("--method", choices=("minors", "statespace"), default="minors")
    q.add_argument("--tol", type=float, default=1e-8, help="allowed | |r| - 1 | for a lossless verdict")
    q.add_argument("--no-check", action="store_true", help="skip the cross-method comparison")
    q.set_defaults(func=cmd_poles)

    r = sub.add_parser("ir", help="render an impulse response to WAV or CSV")
    r.add_argument("system", help="JSON system file")
    r.add_argument("--samples", type=int, default=48000)
    r.add_argument("--out", required=True)
    r.add_argument("--format", choices=("wav", "csv"), help="default: from the --out suffix")
    r.add_argument("--sample-rate", type=int, default=48000)
    r.add_argument("--wav-format", choices=("pcm16", "float32"), default="pcm16")
    r.set_defaults(func=cmd_ir)

    g = sub.add_parser("region", help="lossless region of a11 for 2x2 matrices")
    g.add_argument("--eps", type=_complex_pair, default=complex(-1), help="unimodular determinant as re,im")
    g.add_argument("--k", type=int, default=2, help="second delay")
    g.add_argument("--m1", type=int, default=1, help="first delay")
    g.add_argument("--angles", type=int, default=360, help="number of uniformly spaced angles")
    g.add_argument("--tol", type=float, default=1e-6, help="radial bisection tolerance")
    g.add_argument("--r-max", type=float, default=4.0, help="radius cap for unbounded regions")
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--out")
    g.set_defaults(func=cmd_region)

    t = sub.add_parser("topology", help="write a system file for a classic structure")
    t.add_argument("kind", choices=("schroeder", "allpass", "sdn"))
    t.add_argument("--g", type=_floats, help="comb or allpass gains")
    t.add_argument("--m", type=_ints, help="main delays")
    t.add_argument("--m-ap", type=_ints, help="allpass delays")
    t.add_argument("--matrix", help="core matrix file for allpass")
    t.add_argument("--y", type=_floats, help="SDN admittances")
    t.add_argument("--kind", dest="sdn_kind", choices=("even", "householder"), default="even")
    t.add_argument("--b", type=_floats)
    t.add_argument("--c", type=_floats)
    t.add_argument("--out")
    t.set_defaults(func=cmd_topology)
    return p


def _join_negative_values(argv: list[str]) -> list[str]:
    # "--eps -1,0" would otherwise be read as an unknown option.
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--eps",) and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, FdnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
