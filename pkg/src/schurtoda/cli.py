"""Command-line entry point.

Every command prints JSON lines, one record per result, each carrying its
bound.  A flat JSON config (``--config``) supplies defaults; flags win.

Exit codes: 0 ok, 2 bad config, 3 numerical failure, 4 an identity or
adjudication failed beyond tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import adjudication, fock, hirota, measures
from .fredholm import NumericError, gap_probability, tau_conjugated, tau_n
from .kernel import SigmaError, SigmaWeight, kernel_matrix
from .partitions import HalfInt, SizeLimitError, TruncationError
from .symfun import ParamSeq

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_MISMATCH = 0, 2, 3, 4

CAPS = {"M": 512, "cutoff": 2048, "E_max": 20, "N_enum": 40, "P": 1024}

DEFAULTS = {
    "t": [],
    "tp": [],
    "sigma": "indicator",
    "u": None,
    "n": 0,
    "m": 0,
    "l": 0,
    "M": 24,
    "cutoff": 48,
    "E_max": 12,
    "rho": 0.3,
    "P": 64,
    "N_enum": None,
    "route": "direct",
    "kind": "correlation",
    "X": [],
    "s": [],
    "sp": [],
    "reading": "negated",
    "which": "all",
    "tol": None,
    "format": "json",
    "output": None,
    "allow_nonstandard_sigma": False,
}


class ConfigError(ValueError):
    pass


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex values are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def parse_params(raw) -> ParamSeq:
    """A ParamSeq from a JSON string, list of values or {"k": [re, im]} map."""
    if isinstance(raw, ParamSeq):
        return raw
    if isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"cannot parse parameter sequence {raw!r}") from exc
    if isinstance(raw, (int, float)):
        raw = [raw]
    if isinstance(raw, dict):
        return ParamSeq.from_json(raw)
    if isinstance(raw, list):
        return ParamSeq.of([_complex(v) for v in raw])
    raise ConfigError(f"cannot parse parameter sequence {raw!r}")


def parse_sigma(raw, u=None) -> SigmaWeight:
    """"indicator", "zero", "fermi" (with u), "fermi:0.4", a SigmaWeight JSON
    object, or a path to a JSON file holding one (an empty file is sigma = 0)."""
    if isinstance(raw, SigmaWeight):
        return raw
    if isinstance(raw, dict):
        return SigmaWeight.from_json(raw)
    if not isinstance(raw, str):
        raise ConfigError(f"cannot parse sigma {raw!r}")
    name, _, arg = raw.partition(":")
    if name in ("indicator", "zero"):
        return getattr(SigmaWeight, name)()
    if name in ("fermi", "fermi_mirror", "bose"):
        val = float(arg) if arg else u
        if val is None:
            raise ConfigError(f"sigma {name} needs u")
        return SigmaWeight(name, float(val))
    path = Path(raw)
    if path.exists():
        text = path.read_text().strip()
        return SigmaWeight.from_json(json.loads(text)) if text else SigmaWeight.zero()
    try:
        return SigmaWeight.from_json(json.loads(raw))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"unknown sigma {raw!r}") from exc


def _c(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat JSON config file; flags override it")
    p.add_argument("--t", help="t as JSON: [t1, t2, ...] or {\"1\": [re, im]}")
    p.add_argument("--tp", help="t' in the same format")
    p.add_argument("--sigma", help="indicator | zero | fermi:u | path/JSON of a SigmaWeight")
    p.add_argument("--u", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--E-max", dest="E_max", type=int)
    p.add_argument("--N-enum", dest="N_enum", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--P", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--output", help="write records here instead of stdout")
    p.add_argument("--allow-nonstandard-sigma", dest="allow_nonstandard_sigma", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schurtoda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("kernel", help="dump K on l2{n+1/2, ..., n+M-1/2}")
    _add_common(p)
    p = sub.add_parser("tau", help="tau_n with truncation bound")
    _add_common(p)
    p.add_argument("--route", choices=["direct", "conjugated"])
    p = sub.add_parser("gap", help="P(lam_1 <= n) as a Fredholm determinant")
    _add_common(p)
    p = sub.add_parser("bruteforce", help="oracle values by enumerating partitions")
    _add_common(p)
    p.add_argument("--kind", choices=["correlation", "mult", "gap", "normalization", "finite-temp"])
    p.add_argument("--X", nargs="*", help="half-integers, e.g. 1/2 -3/2")
    p = sub.add_parser("fock-check", help="operator audit suite")
    _add_common(p)
    p = sub.add_parser("hirota", help="bilinear residual suite")
    _add_common(p)
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--s")
    p.add_argument("--sp")
    p.add_argument("--reading", choices=list(hirota.READINGS))
    p.add_argument("--single", action="store_true", help="one case from the flags instead of the default grid")
    p = sub.add_parser("adjudicate", help="sigma_u and Fock index verdicts")
    _add_common(p)
    p.add_argument("--which", choices=["sigma", "lemma", "all"])
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Defaults <- config file <- flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a flat JSON object")
        unknown = set(data) - set(DEFAULTS) - {"single"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    for key, val in vars(args).items():
        if key in ("config", "command") or val is None:
            continue
        cfg[key] = val
    for key, cap in CAPS.items():
        if cfg[key] is not None and not 0 < int(cfg[key]) <= cap:
            raise ConfigError(f"{key} = {cfg[key]} outside (0, {cap}]")
    cfg["t"] = parse_params(cfg["t"])
    cfg["tp"] = parse_params(cfg["tp"])
    cfg["s"] = parse_params(cfg["s"])
    cfg["sp"] = parse_params(cfg["sp"])
    cfg["sigma"] = parse_sigma(cfg["sigma"], cfg["u"])
    if not cfg["sigma"].is_standard and not cfg["allow_nonstandard_sigma"]:
        raise ConfigError(f"sigma {cfg['sigma'].kind} violates [0,1]/summability; pass --allow-nonstandard-sigma")
    try:
        cfg["X"] = [HalfInt.of(x) for x in cfg["X"]]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def _tau_record(tv) -> dict:
    return {"value": _c(tv.value), **tv.to_json()}


def cmd_kernel(cfg) -> tuple[list, int]:
    km = kernel_matrix(cfg["t"], cfg["tp"], cfg["sigma"], cfg["n"], cfg["M"], cfg["cutoff"])
    if cfg["format"] == "csv":
        return [km.to_csv()], EXIT_OK
    rec = km.to_json()
    rec["bound"] = km.tail_bound
    return [rec], EXIT_OK


def cmd_tau(cfg) -> tuple[list, int]:
    fn = tau_conjugated if cfg["route"] == "conjugated" else tau_n
    tv = fn(cfg["t"], cfg["tp"], cfg["sigma"], cfg["n"], cfg["M"], cfg["cutoff"], cfg["allow_nonstandard_sigma"])
    return [_tau_record(tv)], EXIT_OK


def cmd_gap(cfg) -> tuple[list, int]:
    val, bound = gap_probability(cfg["t"], cfg["tp"], cfg["n"], cfg["M"], cfg["cutoff"])
    return [{"gap_probability": val, "bound": bound, "n": cfg["n"], "M": cfg["M"], "cutoff": cfg["cutoff"]}], EXIT_OK


def cmd_bruteforce(cfg) -> tuple[list, int]:
    t, tp, kind = cfg["t"], cfg["tp"], cfg["kind"]
    N = cfg["N_enum"] or (10 if kind == "finite-temp" else 16)
    base = {"kind": kind, "N": N}
    if kind == "gap":
        val, bound = measures.gap_bruteforce(t, tp, cfg["n"], N)
        return [{**base, "n": cfg["n"], "value": _c(val), "bound": bound}], EXIT_OK
    table = measures.schur_table(t, tp, N)
    missing = abs(1 - table.mass)
    if kind == "normalization":
        return [{**base, "value": _c(table.mass), "bound": missing}], EXIT_OK
    if kind == "correlation":
        val = measures.correlation_bruteforce(cfg["X"], t, tp, N)
        return [{**base, "X": [str(x) for x in cfg["X"]], "value": _c(val), "bound": missing}], EXIT_OK
    if kind == "mult":
        val = measures.mult_stat_expectation(cfg["sigma"], cfg["n"], t, tp, N)
        return [{**base, "n": cfg["n"], "value": _c(val), "bound": missing}], EXIT_OK
    if cfg["u"] is None:
        raise ConfigError("finite-temp needs --u")
    val = measures.finite_temp_correlation_bruteforce(cfg["X"], cfg["u"], t, tp, N)
    tail = measures.finite_temp_table(cfg["u"], t, tp, N).tail_estimate
    return [{**base, "u": cfg["u"], "X": [str(x) for x in cfg["X"]], "value": _c(val), "bound": tail}], EXIT_OK


# thresholds for the audit suite, by audit name prefix
AUDIT_TOL = {
    "psi_psistar": 1e-13,
    "psi_psi": 1e-13,
    "psistar_psistar": 1e-13,
    "projectors": 1e-13,
    "psi_adjoint": 1e-13,
    "alpha_commutator": 1e-12,
    "charge_sectors": 0.0,
    "gamma_plus_gamma_minus": 1e-10,
    "gamma_psi_exchange": 1e-10,
    "gamma_adjoint": 1e-10,
    "boson_fermion_psi": 1e-9,
    "boson_fermion_psistar": 1e-9,
    "alpha_psi_commutator": 1e-9,
    "psi_tensor_commutation": 1e-12,
}


def audit_tolerance(name: str) -> float:
    return AUDIT_TOL[name.split("[")[0]]


def cmd_fock_check(cfg) -> tuple[list, int]:
    t = cfg["t"] if cfg["t"].entries else ParamSeq.of([0.5])
    tp = cfg["tp"] if cfg["tp"].entries else ParamSeq.of([0.5])
    audits = fock.run_audit_suite(t, tp, E_max=cfg["E_max"])
    records, status = [], EXIT_OK
    for a in audits:
        tol = audit_tolerance(a.name)
        ok = a.max_residual <= tol
        records.append({**json.loads(a.to_json()), "bound": tol, "ok": ok})
        if not ok:
            status = EXIT_MISMATCH
    return records, status


def cmd_hirota(cfg, single: bool) -> tuple[list, int]:
    tol = cfg["tol"] if cfg["tol"] is not None else 1e-6
    if single:
        cases = [
            hirota.HirotaCase(
                cfg["m"], cfg["l"], cfg["s"], cfg["sp"], cfg["sigma"], cfg["t"], cfg["tp"], cfg["rho"], cfg["P"], reading=cfg["reading"]
            )
        ]
    else:
        cases = hirota.default_grid(reading=cfg["reading"])
    results = hirota.hirota_suite(cases, M=cfg["M"], cutoff=cfg["cutoff"])
    if cfg["format"] == "csv":
        records = [hirota.suite_csv(results)]
    else:
        records = [c.to_json() for c in results]
    summary = hirota.suite_summary(results)
    summary["bound"] = max((c.bound for c in results), default=0.0)
    summary["tolerance"] = tol
    if cfg["format"] == "json":
        records.append({"summary": summary})
    worst = summary["max_residual"]
    return records, EXIT_MISMATCH if worst is not None and worst > tol else EXIT_OK


def cmd_adjudicate(cfg) -> tuple[list, int]:
    records, status = [], EXIT_OK
    if cfg["which"] in ("sigma", "all"):
        u = cfg["u"] if cfg["u"] is not None else 0.4
        t = cfg["t"] if cfg["t"].entries else (0.2,)
        tp = cfg["tp"] if cfg["tp"].entries else (0.2,)
        N = cfg["N_enum"] or 10
        v = adjudication.adjudicate_sigma(u, t, tp, N=N, tol=cfg["tol"] or 1e-4)
        rec = v.to_json()
        rec["bound"] = v.tolerance
        records.append(rec)
        status = status if v.unique else EXIT_MISMATCH
    if cfg["which"] in ("lemma", "all"):
        t = cfg["t"] if cfg["t"].entries else (0.5,)
        tp = cfg["tp"] if cfg["tp"].entries else (0.5,)
        v = adjudication.adjudicate_lemma_sign(t, tp, E_max=cfg["E_max"], tol=cfg["tol"] or 1e-8)
        rec = v.to_json()
        rec["bound"] = v.details["max_tau_bound"]
        records.append(rec)
        status = status if v.unique else EXIT_MISMATCH
    return records, status


def _emit(records: list, cfg) -> None:
    lines = [r if isinstance(r, str) else json.dumps(r) for r in records]
    text = "\n".join(line.rstrip("\n") for line in lines) + "\n"
    if cfg["output"]:
        Path(cfg["output"]).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    single = bool(getattr(args, "single", False))
    try:
        cfg = resolve(args)
        handlers = {
            "kernel": cmd_kernel,
            "tau": cmd_tau,
            "gap": cmd_gap,
            "bruteforce": cmd_bruteforce,
            "fock-check": cmd_fock_check,
            "adjudicate": cmd_adjudicate,
        }
        if args.command == "hirota":
            records, status = cmd_hirota(cfg, single)
        else:
            records, status = handlers[args.command](cfg)
    except (ConfigError, SigmaError, SizeLimitError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, TruncationError, hirota.HirotaError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(records, cfg)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
