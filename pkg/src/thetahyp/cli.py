"""JSON batch driver.

Subcommands: eval, verify, ellipticity, sample. Input and output files are
UTF-8 JSON; complex scalars are [re, im] pairs. Exit codes: 0 all checks
passed, 1 at least one numeric failure, 2 input/contract error (a
diagnostic object is still written/printed on exit 2).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .errors import BranchError, NonConvergenceError, PoleError, ThetaDomainError
from .report import EllipticityReport, complex_to_json
from .theta import Nome
from .series import (
    ThetaSeriesSpec,
    VwpSpec,
    eval_E,
    eval_G,
    eval_vwp,
    ge_split_check,
    spec_from_json,
    term_ratio_at,
)
from .identities import (
    DEFAULT_BAND,
    BaileyParams,
    FTParams,
    Multi1Params,
    Multi2Params,
    sample_bailey,
    sample_ft,
    sample_multi1,
    sample_multi2,
    verify_bailey,
    verify_ft_sum,
    verify_multi1,
    verify_multi2,
)
from .ellipticity import check_ellipticity

DEFAULT_NOME = Nome(0.35 + 0.1j, 0.25 + 0.05j)

_PARAM_TYPES = {
    "ft_sum": FTParams,
    "bailey": BaileyParams,
    "multi1": Multi1Params,
    "multi2": Multi2Params,
}

_VERIFIERS = {
    "ft_sum": verify_ft_sum,
    "bailey": verify_bailey,
    "multi1": verify_multi1,
    "multi2": verify_multi2,
}


class InputError(Exception):
    """Contract violation in a CLI input file or flag combination."""


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read JSON input {path}: {exc}") from exc


def _write_output(obj: dict, out_path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_nome(flag: str | None) -> Nome:
    if flag is None:
        return DEFAULT_NOME
    parts = flag.split(",")
    if len(parts) != 4:
        raise InputError("--nome expects q_re,q_im,p_re,p_im")
    try:
        vals = [float(x) for x in parts]
    except ValueError as exc:
        raise InputError(f"--nome expects four reals: {exc}") from exc
    return Nome(complex(vals[0], vals[1]), complex(vals[2], vals[3]))


def _parse_band(flag: str | None) -> tuple[float, float]:
    if flag is None:
        return DEFAULT_BAND
    parts = flag.split(",")
    if len(parts) != 2:
        raise InputError("--band expects lo,hi")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise InputError(f"--band expects two reals: {exc}") from exc
    if not (0.0 < lo < hi < 1.0):
        raise InputError("--band expects 0 < lo < hi < 1")
    return lo, hi


def _sample_one(target: str, seed: int, args: argparse.Namespace, nome: Nome, band):
    if target == "ft_sum":
        return sample_ft(seed, args.N, nome, band)
    if target == "bailey":
        return sample_bailey(seed, args.N, nome, band)
    if target == "multi1":
        return sample_multi1(seed, args.n, args.N, nome, band)
    if target == "multi2":
        Ns = tuple([args.N] * args.n)
        return sample_multi2(seed, args.n, Ns, nome, band)
    raise InputError(f"unknown sample target {target!r}")


def run_eval(args: argparse.Namespace) -> int:
    obj = _load_json(args.input)
    if not isinstance(obj, dict):
        raise InputError("eval input must be a JSON object")
    trunc = obj.pop("trunc", None)
    window = obj.pop("window", None)
    spec = spec_from_json(obj)
    if isinstance(spec, VwpSpec):
        if spec.kind == "bilateral":
            if window is None:
                raise InputError("bilateral spec needs a window")
            sv = eval_vwp(spec, window=(int(window[0]), int(window[1])))
        else:
            sv = eval_vwp(spec, trunc=None if trunc is None else int(trunc))
    elif spec.kind == "bilateral_G":
        if window is None:
            raise InputError("bilateral spec needs a window")
        sv = eval_G(spec, (int(window[0]), int(window[1])))
    else:
        sv = eval_E(spec, None if trunc is None else int(trunc))
    _write_output(sv.to_json(), args.out)
    return 0


def _verify_params(args: argparse.Namespace) -> list:
    """Parameter sets from the input file (explicit or sampler settings) or
    from the sampler flags alone."""
    target = args.target
    cls = _PARAM_TYPES[target]
    if args.input is not None:
        obj = _load_json(args.input)
        if isinstance(obj, dict) and "params" in obj:
            entries = obj["params"]
        elif isinstance(obj, list):
            entries = obj
        elif isinstance(obj, dict):
            entries = [obj]
        else:
            raise InputError("verify input must be an object or array of parameter sets")
        try:
            return [cls.from_json(e) for e in entries]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"invalid {target} parameters: {exc}") from exc
    nome = _parse_nome(args.nome)
    band = _parse_band(args.band)
    out = []
    for i in range(args.draws):
        out.append(_sample_one(target, args.seed + i, args, nome, band))
    return out


def run_verify(args: argparse.Namespace) -> int:
    target = args.target
    if target == "ge_split":
        return _run_verify_ge_split(args)
    if target not in _VERIFIERS:
        raise InputError(f"unknown verify target {target!r}")
    try:
        param_sets = _verify_params(args)
    except (ValueError, RuntimeError) as exc:
        raise InputError(str(exc)) from exc
    verify = _VERIFIERS[target]
    reports = [verify(p, tol=args.tol) for p in param_sets]
    n_fail = sum(1 for r in reports if not r.passed)
    payload = {
        "target": target,
        "reports": [r.to_json() for r in reports],
        "summary": {"total": len(reports), "failed": n_fail, "pass": n_fail == 0},
    }
    _write_output(payload, args.out)
    return 0 if n_fail == 0 else 1


def _run_verify_ge_split(args: argparse.Namespace) -> int:
    if args.input is None:
        raise InputError("ge_split verification needs an input file with bilateral specs")
    obj = _load_json(args.input)
    entries = obj["specs"] if isinstance(obj, dict) and "specs" in obj else obj
    if isinstance(entries, dict):
        entries = [entries]
    if not isinstance(entries, list):
        raise InputError("ge_split input must be an array of spec objects")
    reports = []
    for e in entries:
        windows = e.get("windows", [2, 2])
        try:
            spec = VwpSpec.from_json(e["spec"] if "spec" in e else e)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"invalid ge_split spec: {exc}") from exc
        reports.append(ge_split_check(spec, int(windows[0]), int(windows[1]), tol=args.tol))
    n_fail = sum(1 for r in reports if not r.passed)
    payload = {
        "target": "ge_split",
        "reports": [r.to_json() for r in reports],
        "summary": {"total": len(reports), "failed": n_fail, "pass": n_fail == 0},
    }
    _write_output(payload, args.out)
    return 0 if n_fail == 0 else 1


def run_ellipticity(args: argparse.Namespace) -> int:
    obj = _load_json(args.input)
    if not isinstance(obj, dict):
        raise InputError("ellipticity input must be a JSON object")
    entries = obj.get("specs", [obj])
    reports: list[EllipticityReport] = []
    for e in entries:
        try:
            spec = spec_from_json(e)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"invalid series spec: {exc}") from exc
        if isinstance(spec, VwpSpec):
            raise InputError("ellipticity target expects a theta series spec with explicit lists")
        report = check_ellipticity(
            lambda w, s=spec: term_ratio_at(s, w),
            spec.nome,
            samples=args.draws,
            tol=args.tol,
            seed=args.seed,
        )
        reports.append(report)
    n_fail = sum(1 for r in reports if not r.passed)
    payload = {
        "reports": [r.to_json() for r in reports],
        "summary": {"total": len(reports), "failed": n_fail, "pass": n_fail == 0},
    }
    _write_output(payload, args.out)
    return 0 if n_fail == 0 else 1


def run_sample(args: argparse.Namespace) -> int:
    target = args.target
    if target not in _PARAM_TYPES:
        raise InputError(f"unknown sample target {target!r}")
    if args.draws < 1:
        raise InputError("--draws must be >= 1")
    nome = _parse_nome(args.nome)
    band = _parse_band(args.band)
    try:
        params = [_sample_one(target, args.seed + i, args, nome, band) for i in range(args.draws)]
    except RuntimeError as exc:
        raise InputError(str(exc)) from exc
    payload = {
        "target": target,
        "seed": args.seed,
        "params": [p.to_json() for p in params],
    }
    _write_output(payload, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetahyp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--draws", type=int, default=10)
        p.add_argument("--out", default=None)
        p.add_argument("--band", default=None, help="sampler modulus band lo,hi")
        p.add_argument("--nome", default=None, help="q_re,q_im,p_re,p_im")
        p.add_argument("--n", type=int, default=2, help="rank of the multivariable families")
        p.add_argument("--N", type=int, default=2, help="truncation depth")

    p_eval = sub.add_parser("eval", help="evaluate one series spec")
    p_eval.add_argument("input")
    common(p_eval)
    p_eval.set_defaults(func=run_eval)

    p_verify = sub.add_parser("verify", help="verify an identity on explicit or sampled parameters")
    p_verify.add_argument("target", choices=["ft_sum", "bailey", "multi1", "multi2", "ge_split"])
    p_verify.add_argument("input", nargs="?", default=None)
    common(p_verify)
    p_verify.set_defaults(func=run_verify)

    p_ell = sub.add_parser("ellipticity", help="index-shift invariance of a series term ratio")
    p_ell.add_argument("input")
    common(p_ell)
    p_ell.set_defaults(func=run_ellipticity)

    p_sample = sub.add_parser("sample", help="draw admissible identity parameters")
    p_sample.add_argument("target", choices=["ft_sum", "bailey", "multi1", "multi2"])
    common(p_sample)
    p_sample.set_defaults(func=run_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors already
        return int(exc.code or 0)
    if args.tol is not None and not (0.0 < args.tol < 1.0):
        _emit_diagnostic("tolerance must lie in (0, 1)", args)
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        _emit_diagnostic(str(exc), args)
        return 2
    except (ThetaDomainError, PoleError, BranchError, NonConvergenceError, ValueError, KeyError) as exc:
        _emit_diagnostic(f"{type(exc).__name__}: {exc}", args)
        return 2


def _emit_diagnostic(message: str, args: argparse.Namespace) -> None:
    diag = {"error": message, "command": getattr(args, "command", None)}
    out = getattr(args, "out", None)
    try:
        _write_output(diag, out)
    except OSError:
        sys.stderr.write(json.dumps(diag) + "\n")


if __name__ == "__main__":
    raise SystemExit(main())
