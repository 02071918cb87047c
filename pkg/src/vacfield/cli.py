"""Command-line front end: ``scan``, ``hom``, ``point`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 config error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import config as cfgmod
from .config import ConfigError
from .correlations import (
    amplitude_method_rate,
    coincidence_rate,
    first_order_correlation,
    visibility_distinguishability,
)
from .fock_algebra import tampered_commutator
from .scan_engine import (
    InsufficientFringes,
    dominant_period_nm,
    ideal_visibility,
    run_scan,
    write_csv,
)
from .spdc_model import BeamSplitter, CrystalParams, hom_detector_fields
from .verification import run_all, two_crystal_fields

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

UNIT_TOL = 1e-9


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vacfield", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for command, schema in cfgmod.SCHEMAS.items():
        p = sub.add_parser(command)
        p.add_argument("--config", help="key=value file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one key (repeatable)")
        if command in ("scan", "hom"):
            p.add_argument("--out", help="CSV output path")
        for key, spec in schema.items():
            if key == "seed":
                continue
            p.add_argument(_flag(key), dest=f"key_{key}", metavar=key.upper(), help=spec.help or None)
        if "seed" in schema:
            p.add_argument("--seed", dest="key_seed", metavar="U64")
        if command == "verify":
            p.add_argument("--tamper-commutator", type=float, help=argparse.SUPPRESS)
    return parser


def gather(args: argparse.Namespace) -> dict[str, Any]:
    pairs: dict[str, str] = {}
    if args.config:
        try:
            with open(args.config) as fh:
                pairs.update(cfgmod.read_text(fh.read()))
        except OSError as exc:
            raise ConfigError(None, f"cannot read config: {exc}") from None
    for name, value in vars(args).items():
        if name.startswith("key_") and value is not None:
            pairs[name[4:]] = value
    for item in args.set:
        key, value = cfgmod.split_assignment(item)
        pairs[key] = value
    return cfgmod.parse_pairs(pairs, args.command)


def cmd_scan(values: dict[str, Any], out: str | None) -> int:
    cfg, cc = cfgmod.scan_configs(values)
    sr = run_scan(cfg, cc)
    period, bin_width = dominant_period_nm(sr.delays, sr.ideal_rate)
    period_ok = abs(1 / period - 1 / cfg.wavelength_nm) <= bin_width
    meta = {k: cfgmod.format_value(v) for k, v in cfgmod.resolve(values, "scan").items()}
    meta["ideal_visibility"] = repr(ideal_visibility(cfg))
    if sr.fitted_v is not None:
        meta["fitted_visibility"] = f"{sr.fitted_v:.6f}"
        meta["fitted_visibility_stderr"] = f"{sr.fitted_v_stderr:.6f}"
    meta["fringe_period_nm"] = f"{period:.3f}"
    if out:
        write_csv(sr, out, meta)
        print(f"wrote {len(sr.delays)} rows to {out}")
    if sr.fitted_v is not None:
        print(f"fitted V = {sr.fitted_v:.4f} +/- {sr.fitted_v_stderr:.4f} "
              f"(ideal {ideal_visibility(cfg):.4f})")
    else:
        print("fitted V: not available (fewer than two fringes in the fit window)")
    print(f"fringe period = {period:.1f} nm vs wavelength {cfg.wavelength_nm:g} nm "
          f"[{'ok' if period_ok else 'MISMATCH'}]")
    return EXIT_OK


def hom_rate(r: complex, t: complex, gain: complex) -> float:
    """HOM coincidence rate in units of ``|D|^2``."""
    bs = BeamSplitter(r, t, tol=UNIT_TOL)
    e_a, e_b = hom_detector_fields(CrystalParams(gain), bs)
    return coincidence_rate(e_a, e_b).value / abs(gain) ** 2


def cmd_hom(values: dict[str, Any], out: str | None) -> int:
    v = cfgmod.resolve(values, "hom")
    gain = v["gain"]
    if not 0 < abs(gain) < 1:
        raise ConfigError("gain", "need 0 < |gain| < 1")
    rows = []
    if v["sweep_points"] > 0:
        if v["sweep_points"] < 2:
            raise ConfigError("sweep_points", "need at least 2 points")
        for big_t in np.linspace(0.0, 1.0, v["sweep_points"]):
            r, t = 1j * math.sqrt(1 - big_t), math.sqrt(big_t)
            rows.append((float(big_t), hom_rate(r, t, gain)))
    else:
        r, t = v["r"], v["t"]
        try:
            BeamSplitter(r, t, tol=UNIT_TOL)
        except ValueError as exc:
            raise ConfigError("r", str(exc)) from None
        rows.append((abs(t) ** 2, hom_rate(r, t, gain)))
    lines = ["transmittance,rate_per_gain2"] + [f"{bt:.6f},{rate:.12e}" for bt, rate in rows]
    if out:
        with open(out, "w", newline="") as fh:
            fh.write("".join(line + "\n" for line in lines))
    for line in lines:
        print(line)
    if len(rows) > 1:
        best = min(rows, key=lambda row: row[1])
        print(f"# minimum rate {best[1]:.3e} at |t|^2 = {best[0]:.4f}")
    return EXIT_OK


def cmd_point(values: dict[str, Any]) -> int:
    v = cfgmod.resolve(values, "point")
    try:
        bs = BeamSplitter(v["r"], v["t"], tol=UNIT_TOL)
    except ValueError as exc:
        raise ConfigError("r", str(exc)) from None
    gain, alpha = v["gain"], v["alpha"]
    if not 0 < abs(gain) < 1 or not abs(gain * alpha) < 1:
        raise ConfigError("gain", "need 0 < |gain| and |gain|, |gain * alpha| < 1")
    e_a, e_b = two_crystal_fields(gain, alpha, v["phi1_rad"], v["phi2_rad"], bs)
    rate = coincidence_rate(e_a, e_b).value
    closed = amplitude_method_rate(gain, gain * alpha, v["phi1_rad"], v["phi2_rad"], bs.r, bs.t)
    pair = visibility_distinguishability(alpha)
    print(f"R_AB = {rate:.12e}  ({rate / abs(gain) ** 2:.12f} |D1|^2)")
    print(f"amplitude formula = {closed:.12e}")
    print(f"<E_B^- E_A^+> = {first_order_correlation(e_a, e_b):.3e}")
    print(f"V = {pair.V:.12f}  K = {pair.K:.12f}  K^2+V^2 = {pair.K**2 + pair.V**2:.15f}")
    return EXIT_OK


def cmd_verify(values: dict[str, Any], tamper: float | None) -> int:
    v = cfgmod.resolve(values, "verify")
    if v["cases"] < 1:
        raise ConfigError("cases", "need at least one case")
    if tamper is None:
        results = run_all(v["cases"], v["seed"])
    else:
        with tampered_commutator(tamper):
            results = run_all(v["cases"], v["seed"])
    for res in results:
        print(res.line())
    ok = all(r.passed for r in results)
    print("all suites passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = gather(args)
        if args.command == "scan":
            return cmd_scan(values, args.out)
        if args.command == "hom":
            return cmd_hom(values, args.out)
        if args.command == "point":
            return cmd_point(values)
        return cmd_verify(values, args.tamper_commutator)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, InsufficientFringes, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
