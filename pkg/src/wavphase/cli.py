"""Command-line front end.

Subcommands: analyze, synth, reconstruct, evaluate, verify, reassign.
Settings come from flags, optionally on top of a ``key=value`` config file
(``--config``); flags win.

Exit codes: 0 success, 1 computation failure, 2 usage error, 3 I/O error,
4 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .dcwt import FilterBankSpec, FrameError, SynthesisError, analyze, build_frame, frame_bound_ratio, synthesize
from .io import GridFormatError, WavFormatError, load_grid, read_wav, save_grid, write_wav
from .kernels import CauchyParams, center_frequency
from .metrics import REPORT_COLUMNS, Method, ReconstructionReport, write_reports
from .phase import MagnitudeGrid
from .pipeline import evaluate_signal, reconstruct
from .verify import DenseWtGrid, reassign_from_magnitude, write_report_csv
from .verify_suite import CHECKS, WAVELETS, run_check

log = logging.getLogger("wavphase")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_CONFIG = 0, 1, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    alpha: float = 300.0
    beta: float = 0.0
    gamma_re: float = 1.0
    gamma_im: float = 0.0
    K: int = 240
    B: float | None = None
    fmin: float | None = None
    fmax: float | None = None
    a_d: int = 12
    y_m: float | None = None
    tol: float = 1e-6
    seed: int = 0
    max_iter: int = 150
    momentum: float = 0.99

    def params(self) -> CauchyParams:
        return CauchyParams(self.alpha, self.beta, self.gamma_re, self.gamma_im)

    def spec(self, L: int, rate: float) -> FilterBankSpec:
        """Channel layout for a signal of length L at the given rate.

        Frequencies are given in Hz; without explicit bounds the range is
        (rate / 20) * [2^-6, 2^3.3].
        """
        p = self.params()
        if self.B is not None and self.y_m is not None:
            return FilterBankSpec(L, rate, self.K, self.B, self.y_m, self.a_d)
        fmax = self.fmax if self.fmax is not None else rate / 20 * 2 ** 3.3
        if self.B is not None:
            y_m = self.y_m if self.y_m is not None else center_frequency(p) / fmax
            return FilterBankSpec(L, rate, self.K, self.B, y_m, self.a_d)
        fmin = self.fmin if self.fmin is not None else rate / 20 * 2 ** -6
        return FilterBankSpec.from_range(L, rate, self.K, fmin, fmax, self.a_d, p)

    def validate(self) -> "RunConfig":
        try:
            self.params()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.K < 1 or self.a_d < 1:
            raise ConfigError("K and a_d must be positive")
        if not 0 < self.tol <= 1:
            raise ConfigError("tol must lie in (0, 1]")
        if not 0 <= self.momentum < 1:
            raise ConfigError("momentum must lie in [0, 1)")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be positive")
        return self


# config-file keys and their aliases (flag spellings are accepted too)
_ALIASES = {"channels": "K", "k": "K", "bins_per_octave": "B", "b": "B", "decimation": "a_d",
            "gamma-re": "gamma_re", "gamma-im": "gamma_im", "max-iter": "max_iter",
            "bins-per-octave": "B"}
_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, value: str):
    kind = str(_TYPES[key])
    if "int" in kind:
        return int(value)
    return float(value)


def parse_config_file(path) -> dict:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key not in _TYPES:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{n}: bad value for {key}: {value!r}") from exc
    return out


def build_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(parse_config_file(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    return RunConfig(**values).validate()


# --------------------------------------------------------------------------
# commands


def _frame_for(cfg: RunConfig, L: int, rate: float):
    return build_frame(cfg.spec(L, rate), cfg.params())


def cmd_analyze(args) -> int:
    cfg = build_config(args)
    s, rate = read_wav(args.input)
    spec = cfg.spec(len(s), rate)
    frame = build_frame(spec, cfg.params())
    grid = analyze(s, frame)
    save_grid(args.out, grid, frame.params)
    ratio = frame_bound_ratio(frame, method="blocks")
    print(f"channels={spec.K} hops={spec.n_hops} redundancy={spec.redundancy:.4g} "
          f"frame_bound_ratio={ratio:.6g}")
    return EXIT_OK


def cmd_synth(args) -> int:
    grid, params = load_grid(args.input)
    frame = build_frame(grid.spec, params)
    s = synthesize(grid, frame, method=args.synthesis)
    clipped = write_wav(args.out, s, int(round(grid.spec.xi_s)))
    if clipped:
        log.warning("%d samples clipped", clipped)
    return EXIT_OK


def _load_magnitudes(path, args):
    """Magnitudes and frame from a grid file, or from a WAV file analyzed first."""
    if str(path).lower().endswith(".wav"):
        cfg = build_config(args)
        s, rate = read_wav(path)
        frame = _frame_for(cfg, len(s), rate)
        grid = analyze(s, frame)
    else:
        grid, params = load_grid(path)
        cfg = build_config(args)
        cfg.alpha, cfg.beta, cfg.gamma_re, cfg.gamma_im = params.alpha, params.beta, params.gamma_re, params.gamma_im
        frame = build_frame(grid.spec, cfg.params())
    return MagnitudeGrid.from_coefficients(grid), frame, cfg


def cmd_reconstruct(args) -> int:
    m, frame, cfg = _load_magnitudes(args.input, args)
    r = reconstruct(m, frame, args.method, cfg.tol, cfg.seed, cfg.max_iter, cfg.momentum)
    clipped = write_wav(args.out, r.signal, int(round(frame.spec.xi_s)))
    if clipped:
        log.warning("%d samples clipped", clipped)
    spec, p = frame.spec, frame.params
    rep = ReconstructionReport(Path(args.input).stem, r.method, p.alpha, p.beta, spec.a_d, spec.K, spec.B,
                               r.sc_db, r.runtime_ms, cfg.seed)
    text = write_reports([rep], args.report)
    if args.report is None:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_tuples(text: str) -> list[tuple[float, int, int]]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            a, ad, K = part.split(",")
            out.append((float(a), int(ad), int(K)))
        except ValueError as exc:
            raise ConfigError(f"bad parameter tuple {part!r}; expected alpha,a_d,K") from exc
    if not out:
        raise ConfigError("no parameter tuples given")
    return out


def _evaluate_one(job):
    name, path, cfg, alpha, a_d, K, methods = job
    s, rate = read_wav(path)
    c = RunConfig(**{**cfg.__dict__, "alpha": alpha, "a_d": a_d, "K": K})
    frame = _frame_for(c, len(s), rate)
    return evaluate_signal(name, s, frame, methods, tol=c.tol, seed=c.seed, max_iter=c.max_iter,
                           momentum=c.momentum)


def summary_rows(reports) -> list[dict]:
    """Mean and standard deviation of SC per (method, alpha, a_d, K)."""
    groups: dict = {}
    for r in reports:
        groups.setdefault((r.method.value, r.alpha, r.a_d, r.K), []).append(r)
    rows = []
    for (method, alpha, a_d, K), rs in sorted(groups.items(), key=lambda kv: (kv[0][1], kv[0][3] / kv[0][2], kv[0][0])):
        sc = np.array([r.sc_db for r in rs])
        rt = np.array([r.runtime_ms for r in rs])
        for stat, fn in (("mean", np.mean), ("std", np.std)):
            rows.append({"signal_id": f"__{stat}__", "method": method, "alpha": alpha, "beta": rs[0].beta,
                         "a_d": a_d, "K": K, "B": rs[0].B, "sc_db": float(fn(sc)),
                         "runtime_ms": float(fn(rt)), "seed": rs[0].seed})
    return rows


def cmd_evaluate(args) -> int:
    cfg = build_config(args)
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise FileNotFoundError(corpus)
    files = sorted(corpus.glob("*.wav"))
    if not files:
        raise ConfigError(f"no .wav files in {corpus}")
    tuples = _parse_tuples(args.tuples)
    try:
        methods = tuple(Method(m).value for m in args.methods.split(","))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    jobs = [(f.stem, str(f), cfg, a, ad, K, methods) for (a, ad, K) in tuples for f in files]
    reports, failed = [], 0
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_safe_eval, jobs))
    else:
        results = [_safe_eval(j) for j in jobs]
    for job, res in zip(jobs, results):
        if isinstance(res, str):
            failed += 1
            log.error("%s (alpha=%s, a_d=%s, K=%s) failed: %s", job[0], job[3], job[4], job[5], res)
        else:
            reports.extend(res)
    rows = [r.row() for r in reports] + summary_rows(reports)
    text = write_reports(rows, args.report)
    if args.report is None:
        sys.stdout.write(text)
    return EXIT_FAIL if failed else EXIT_OK


def _safe_eval(job):
    try:
        return _evaluate_one(job)
    except Exception as exc:  # per-signal failures are logged, the run continues
        return f"{type(exc).__name__}: {exc}"


def cmd_verify(args) -> int:
    cfg = build_config(args)
    report = run_check(args.check, cfg.params(), refine=args.refine, wavelet=args.wavelet,
                       probes=args.probes, spacing=args.spacing)
    text = write_report_csv(report, args.report)
    if args.report is None:
        sys.stdout.write(text)
    if args.check == "ridge":
        mismatch = report.rows[0].rms_residual
        print("ridges coincide" if mismatch == 0 else f"ridges diverge (mismatch {mismatch:.3f})",
              file=sys.stderr)
    return EXIT_OK


def cmd_reassign(args) -> int:
    cfg = build_config(args)
    if cfg.gamma_re != 1 or cfg.gamma_im != 0:
        raise ConfigError("reassignment from magnitudes needs gamma = 1")
    s, rate = read_wav(args.input)
    cfg.a_d = 1
    frame = _frame_for(cfg, len(s), rate)
    grid = DenseWtGrid.from_dcwt(analyze(s, frame))
    field = reassign_from_magnitude(grid, cfg.params())
    k_idx, n_idx = np.nonzero(field.mask)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "n", "xi", "x", "magnitude", "xi_hat", "x_hat"])
    mag = np.abs(grid.values)
    for k, n in zip(k_idx, n_idx):
        w.writerow([int(k), int(n)] + [repr(float(v)) for v in (grid.axis[k], grid.x[n], mag[k, n],
                                                                 field.xi_hat[k, n], field.x_hat[k, n])])
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_wavelet_flags(p):
    g = p.add_argument_group("wavelet")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--gamma-re", dest="gamma_re", type=float)
    g.add_argument("--gamma-im", dest="gamma_im", type=float)
    p.add_argument("--config", help="key=value settings file; flags take precedence")


def _add_bank_flags(p):
    g = p.add_argument_group("filter bank")
    g.add_argument("--channels", dest="K", type=int, help="number of wavelet channels K")
    g.add_argument("--bins-per-octave", dest="B", type=float)
    g.add_argument("--fmin", type=float, help="lowest channel center (Hz)")
    g.add_argument("--fmax", type=float, help="highest channel center (Hz)")
    g.add_argument("--decimation", dest="a_d", type=int, help="decimation step a_d")
    g.add_argument("--y-m", dest="y_m", type=float, help="minimum scale (s)")


def _add_method_flags(p):
    g = p.add_argument_group("reconstruction")
    g.add_argument("--tol", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--max-iter", dest="max_iter", type=int)
    g.add_argument("--momentum", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavphase", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="WAV -> coefficient grid file")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    _add_wavelet_flags(p)
    _add_bank_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="coefficient grid file -> WAV")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--synthesis", choices=("cg", "direct"), default="cg")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("reconstruct", help="phaseless reconstruction from a grid file or WAV")
    p.add_argument("input")
    p.add_argument("--method", choices=[m.value for m in Method], default="wpghi")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    _add_wavelet_flags(p)
    _add_bank_flags(p)
    _add_method_flags(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("evaluate", help="all methods x signals x parameter tuples -> CSV")
    p.add_argument("corpus", help="directory of .wav files")
    p.add_argument("--tuples", default="30,5,100",
                   help="';'-separated alpha,a_d,K tuples (default: 30,5,100)")
    p.add_argument("--methods", default="wpghi,rfglim,wfglim")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report")
    _add_wavelet_flags(p)
    _add_bank_flags(p)
    _add_method_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("verify", help="numerical identity checks -> CSV")
    p.add_argument("check", choices=CHECKS)
    p.add_argument("--refine", type=int, default=3, help="number of spacings (each halving)")
    p.add_argument("--wavelet", choices=WAVELETS, default="cauchy")
    p.add_argument("--probes", type=int, default=9)
    p.add_argument("--spacing", type=float, help="coarsest finite-difference step")
    p.add_argument("--report")
    _add_wavelet_flags(p)
    p.set_defaults(func=cmd_verify, alpha_default=100.0)

    p = sub.add_parser("reassign", help="magnitude-only reassignment of a WAV file -> CSV")
    p.add_argument("input")
    p.add_argument("--out")
    _add_wavelet_flags(p)
    _add_bank_flags(p)
    p.set_defaults(func=cmd_reassign)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.alpha is None:
        args.alpha = args.alpha_default
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: cannot access {exc.filename or exc}", file=sys.stderr)
        return EXIT_IO
    except (GridFormatError, WavFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, FrameError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SynthesisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
