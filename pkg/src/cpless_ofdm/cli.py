"""Command-line entry point: config parsing, subcommands, CSV emission.

Subcommands:
    analyze-sir   closed-form saturation SIR of a power delay profile
    sweep-sinr    Monte Carlo SINR versus antenna count / SNR
    sweep-ber     Monte Carlo uncoded BER versus SNR
    validate      oracle-equivalence self-test suite

Config files are flat ``key = value`` text ('#' comments allowed); command
line overrides are applied last. Output CSVs are written atomically via a
temp file in the target directory followed by a rename.
"""

import argparse
import dataclasses
import math
import os
import sys
import tempfile

import numpy as np

from .analysis import asymptotic_sir, avg_delay_spread
from .channel import exp_pdp, load_pdp, make_rng, sample_channels
from .montecarlo import (
    RECEIVERS,
    SimConfig,
    SweepResult,
    decompose,
    sweep_ber,
    sweep_sinr,
)
from .numerics import SingularSystemError

CSV_COLUMNS = (
    "receiver,M,K,N,L,alpha,snr_db,trials,failed_trials,metric_name,metric_value,stderr"
)

_INT_KEYS = {"N", "L", "K", "Q", "trials", "seed", "cp_len"}
_FLOAT_KEYS = {"alpha"}
_INT_LIST_KEYS = {"M_list"}
_FLOAT_LIST_KEYS = {"snr_db_list"}
_STR_KEYS = {"receiver", "constellation", "pdp_file"}
_BOOL_KEYS = {"interior_only"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _INT_LIST_KEYS | _FLOAT_LIST_KEYS | _STR_KEYS | _BOOL_KEYS


def _coerce(key, raw):
    if isinstance(raw, str):
        raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return None if raw in ("none", "") else int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_LIST_KEYS:
            return [int(v) for v in str(raw).split(",") if v.strip()]
        if key in _FLOAT_LIST_KEYS:
            return [float(v) for v in str(raw).split(",") if v.strip()]
        if key in _BOOL_KEYS:
            if str(raw).lower() in ("true", "1", "yes"):
                return True
            if str(raw).lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return None if raw in ("none", "") else str(raw)
    except (TypeError, ValueError):
        raise ValueError(f"bad value for config key {key!r}: {raw!r}") from None


def load_config(path=None, overrides=None):
    """SimConfig from defaults, then a flat key=value file, then overrides."""
    data = {}
    if path:
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value, got {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in _ALL_KEYS:
                    raise ValueError(f"unknown config key {key!r}")
                data[key] = _coerce(key, value)
    for key, value in (overrides or {}).items():
        if key not in _ALL_KEYS:
            raise ValueError(f"unknown config key {key!r}")
        data[key] = _coerce(key, value)
    return SimConfig(**data).validate()


def dump(cfg):
    """Flat key=value text that load_config reads back to an equal SimConfig."""
    lines = []
    for f in dataclasses.fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def _fmt(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return format(value, ".12g")
    return str(value)


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_sweep_csv(path, result):
    lines = [f"# snr_definition={result.snr_definition}", f"# seed={result.seed}", CSV_COLUMNS]
    for r in result.rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.receiver, r.M, r.K, r.N, r.L, r.alpha, r.snr_db,
                    r.trials, r.failed_trials, r.metric_name, r.metric_value, r.stderr,
                )
            )
        )
    _write_atomic(path, "\n".join(lines) + "\n")


def _add_config_flags(parser, include_sim=True):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--out", default=None, help="output CSV path")
    parser.add_argument("--N", type=int)
    parser.add_argument("--L", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--pdp", dest="pdp_file", help="power delay profile text file")
    if include_sim:
        parser.add_argument("--K", type=int)
        parser.add_argument("--Q", type=int)
        parser.add_argument("--M", dest="M_list", help="comma-separated antenna counts")
        parser.add_argument("--snr", dest="snr_db_list", help="comma-separated SNRs in dB")
        parser.add_argument("--trials", type=int)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--receivers", default=None,
                            help=f"comma-separated subset of {','.join(RECEIVERS)}")
        parser.add_argument("--constellation", choices=["qpsk", "qam16"])
        parser.add_argument("--cp-len", dest="cp_len", type=int)
        parser.add_argument("--all-symbols", action="store_true",
                            help="include frame-edge symbols in statistics")


def _overrides_from_args(args):
    overrides = {}
    for key in _ALL_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "all_symbols", False):
        overrides["interior_only"] = False
    return overrides


def _cmd_analyze_sir(args):
    if args.pdp_file:
        pdp = load_pdp(args.pdp_file)
    else:
        L = args.L if args.L is not None else 15
        alpha = args.alpha if args.alpha is not None else 0.1
        pdp = exp_pdp(L, alpha)
    N = args.N if args.N is not None else 256
    terms = asymptotic_sir(pdp, N)
    print(f"avg_delay_spread = {avg_delay_spread(pdp):.6f} samples")
    print(f"p_signal = {terms.p_signal:.9f}")
    print(f"sir = {_fmt(terms.sir_db)} dB")
    if args.out:
        lines = [f"# p_signal={_fmt(terms.p_signal)}",
                 f"# sir_db={_fmt(terms.sir_db)}",
                 "d,p_ici,p_isi"]
        lines.append(f"0,0,{_fmt(terms.p_isi[0])}")
        for d in range(1, N):
            lines.append(f"{d},{_fmt(terms.p_ici[d - 1])},{_fmt(terms.p_isi[d])}")
        _write_atomic(args.out, "\n".join(lines) + "\n")
    return 0


def _expand_receivers(cfg, receivers_flag):
    if not receivers_flag:
        return [cfg]
    configs = []
    for name in receivers_flag.split(","):
        name = name.strip()
        if not name:
            continue
        configs.append(dataclasses.replace(cfg, receiver=name).validate())
    if not configs:
        raise ValueError("empty --receivers list")
    return configs


def _run_sweep(args, sweep):
    cfg = load_config(args.config, _overrides_from_args(args))
    configs = _expand_receivers(cfg, getattr(args, "receivers", None))
    rows = []
    for one in configs:
        rows.extend(sweep(one).rows)
    rows.sort(key=lambda r: (r.receiver, r.M, r.snr_db))
    result = SweepResult(rows=rows, seed=cfg.seed)
    if args.out:
        write_sweep_csv(args.out, result)
    else:
        print(CSV_COLUMNS)
        for r in rows:
            print(",".join(_fmt(v) for v in dataclasses.astuple(r)))
    overloaded = [r for r in rows if 2 * r.failed_trials > r.trials]
    if overloaded:
        bad = overloaded[0]
        print(
            f"error: {bad.failed_trials}/{bad.trials} singular trials at "
            f"receiver={bad.receiver} M={bad.M} snr_db={bad.snr_db}",
            file=sys.stderr,
        )
        return 3
    return 0


def _cmd_validate(args):
    """Cross-route consistency checks; prints one PASS/FAIL line per check."""
    from .equalizers import (
        build_G_matrices,
        gtilde_diag,
        gtilde_stack,
        tr_channel,
        tr_channel_matrix,
        tr_zf_detect,
        tr_zf_detect_batched,
    )

    checks = []
    rng = make_rng(20240815)
    pdp = exp_pdp(6, 0.2)
    channels = sample_channels(pdp, 3, 16, rng)

    # 1) TR channel matrix route vs pairwise convolution route
    gmat = tr_channel_matrix(channels)
    worst = max(
        float(np.max(np.abs(gmat[k, j] - tr_channel(channels, k, j).taps)))
        for k in range(3)
        for j in range(3)
    )
    checks.append(("tr-channel matrix vs convolution", worst < 1e-10))

    # 2) effective diagonal gain vs explicit DFT of the banded matrix
    N = 32
    g = gmat[0, 0]
    G_ici, _, _ = build_G_matrices(g, N)
    F = np.fft.fft(np.eye(N), norm="ortho")
    explicit = np.diag(F @ G_ici @ np.conj(F.T))
    checks.append(
        ("effective gain vs explicit DFT diagonal",
         float(np.max(np.abs(gtilde_diag(g, N) - explicit))) < 1e-10)
    )

    # 3) batched vs per-subcarrier ZF post-equalization
    gstack = gtilde_stack(channels, N)
    demod = rng.standard_normal((3, N)) + 1j * rng.standard_normal((3, N))
    delta = np.max(np.abs(tr_zf_detect(demod, gstack) - tr_zf_detect_batched(demod, gstack)))
    checks.append(("zf post-equalization batched vs looped", float(delta) < 1e-9))

    # 4) closed-form saturation SIR vs Monte Carlo (single user, large M)
    terms = asymptotic_sir(exp_pdp(6, 0.2), 64)
    cfg = SimConfig(N=64, L=6, alpha=0.2, K=1, Q=6, M_list=[512],
                    snr_db_list=[math.inf], trials=24, seed=77,
                    receiver="mrc", constellation="qam16")
    measured = sweep_sinr(cfg).rows[0].metric_value
    checks.append(
        ("closed-form SIR vs Monte Carlo",
         abs(measured - terms.sir_db) < 1.0)
    )

    # 5) superposition audit across receivers
    audit_ok = True
    for receiver in RECEIVERS:
        c = SimConfig(N=32, L=4, alpha=0.2, K=3, Q=4, M_list=[8],
                      snr_db_list=[10.0], trials=1, seed=5,
                      receiver=receiver, constellation="qam16")
        r = make_rng(5)
        ch = sample_channels(exp_pdp(4, 0.2), 3, 8, r)
        audit_ok &= decompose(c, ch, r).reconstruction_rel_error < 1e-6
    checks.append(("output decomposition superposition audit", audit_ok))

    failed = 0
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}: {name}")
        failed += 0 if ok else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cpless-ofdm",
        description="Link-level simulator for CP-less OFDM uplink with many-antenna receivers",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_sir = sub.add_parser("analyze-sir", help="closed-form saturation SIR of a PDP")
    _add_config_flags(p_sir, include_sim=False)

    p_sinr = sub.add_parser("sweep-sinr", help="Monte Carlo SINR sweep")
    _add_config_flags(p_sinr)

    p_ber = sub.add_parser("sweep-ber", help="Monte Carlo uncoded BER sweep")
    _add_config_flags(p_ber)

    sub.add_parser("validate", help="run oracle-equivalence self-tests")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "analyze-sir":
            return _cmd_analyze_sir(args)
        if args.subcommand == "sweep-sinr":
            return _run_sweep(args, sweep_sinr)
        if args.subcommand == "sweep-ber":
            return _run_sweep(args, sweep_ber)
        if args.subcommand == "validate":
            return _cmd_validate(args)
        parser.error(f"unknown subcommand {args.subcommand!r}")
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (SingularSystemError, ArithmeticError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
