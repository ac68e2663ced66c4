"""Command-line front end: evaluate, sample, transform, verify.

Machine-readable throughout: one JSON object per ``eval``, CSV with a
header for ``sample`` and ``transform`` (stdin to stdout), JSON lines
for ``verify``.  Floats are printed with full round-trip precision, so
piping outputs back in loses nothing.  Exit codes: 0 success, 1 domain
or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import checks, distributions as dist
from .simplex import (
    Composition,
    LogRatioVector,
    RatioVector,
    log_det_jacobian_log_ratio_inverse,
    log_det_jacobian_ratio_inverse,
    log_ratio_forward,
    log_ratio_inverse,
    ratio_forward,
    ratio_inverse,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Malformed input: bad JSON/CSV, unknown names, wrong arity."""


def _fmt(value: float) -> str:
    return repr(float(value))


def _load_params(args) -> dict:
    if (args.params is None) == (args.params_file is None):
        raise UsageError("exactly one of --params or --params-file is required")
    text = args.params
    if args.params_file is not None:
        try:
            with open(args.params_file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read params file: {exc}") from exc
    try:
        params = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"params are not valid JSON: {exc}") from exc
    if not isinstance(params, dict):
        raise UsageError("params must be a JSON object")
    return params


def _require_keys(params: dict, required: set[str], dist_name: str) -> None:
    keys = set(params)
    missing = required - keys
    unknown = keys - required
    if missing:
        raise UsageError(f"{dist_name} params missing keys: {sorted(missing)}")
    if unknown:
        raise UsageError(f"{dist_name} params has unknown keys: {sorted(unknown)}")


def _vector(params: dict, key: str):
    value = params[key]
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) for v in value):
        raise UsageError(f"param '{key}' must be a JSON array of numbers")
    return [float(v) for v in value]


def _number(params: dict, key: str) -> float:
    value = params[key]
    if not isinstance(value, (int, float)):
        raise UsageError(f"param '{key}' must be a number")
    return float(value)


def _integer(params: dict, key: str) -> int:
    value = params[key]
    if not isinstance(value, int):
        raise UsageError(f"param '{key}' must be an integer")
    return value


def _parse_point(text: str, want: str):
    parts = [p.strip() for p in text.split(",") if p.strip() != ""]
    if not parts:
        raise UsageError("empty --point")
    try:
        if want == "ints":
            return [int(p) for p in parts]
        return [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"--point is not a comma-separated {want} list: {text!r}") from exc


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

_EVAL_DISTS = (
    "dirichlet",
    "inverted-dirichlet",
    "alr-dirichlet",
    "negative-binomial",
    "multinomial",
    "dirichlet-multinomial",
    "beta-binomial",
    "normalized-nb",
)


def _eval_log_value(name: str, params: dict, point_text: str) -> tuple[float, list]:
    if name == "dirichlet":
        _require_keys(params, {"alpha"}, name)
        point = _parse_point(point_text, "floats")
        value = dist.dirichlet_log_pdf(
            dist.DirichletParams(_vector(params, "alpha")), Composition(point)
        )
    elif name == "inverted-dirichlet":
        _require_keys(params, {"alpha"}, name)
        point = _parse_point(point_text, "floats")
        value = dist.inverted_dirichlet_log_pdf(
            dist.DirichletParams(_vector(params, "alpha")), RatioVector(point)
        )
    elif name == "alr-dirichlet":
        _require_keys(params, {"alpha"}, name)
        point = _parse_point(point_text, "floats")
        value = dist.alr_dirichlet_log_pdf(
            dist.DirichletParams(_vector(params, "alpha")), LogRatioVector(point)
        )
    elif name == "negative-binomial":
        _require_keys(params, {"R", "p"}, name)
        point = _parse_point(point_text, "ints")
        if len(point) != 1:
            raise UsageError("negative-binomial expects a single integer point m")
        value = dist.negative_binomial_log_pmf(
            _number(params, "R"), _number(params, "p"), point[0]
        )
    elif name == "multinomial":
        _require_keys(params, {"probs"}, name)
        point = _parse_point(point_text, "ints")
        x = dist.CountVector(point)
        value = dist.multinomial_log_pmf(x.total, Composition(_vector(params, "probs")), x)
    elif name == "dirichlet-multinomial":
        _require_keys(params, {"shapes"}, name)
        point = _parse_point(point_text, "ints")
        x = dist.CountVector(point)
        value = dist.dirichlet_multinomial_log_pmf(_vector(params, "shapes"), x.total, x)
    elif name == "beta-binomial":
        _require_keys(params, {"a", "b", "m"}, name)
        point = _parse_point(point_text, "ints")
        if len(point) != 1:
            raise UsageError("beta-binomial expects a single integer point k")
        bb = dist.BetaBinomialParams(
            _number(params, "a"), _number(params, "b"), _integer(params, "m")
        )
        value = dist.beta_binomial_log_pmf(bb, point[0])
    elif name == "normalized-nb":
        _require_keys(params, {"shapes", "scale", "component"}, name)
        point = _parse_point(point_text, "ints")
        if len(point) != 2:
            raise UsageError("normalized-nb expects an integer pair point k,m")
        gm = dist.GammaMixtureParams(_vector(params, "shapes"), _number(params, "scale"))
        value = dist.normalized_nb_log_pmf(gm, _integer(params, "component"), point[0], point[1])
    else:
        raise UsageError(f"unknown distribution {name!r}; choose from {', '.join(_EVAL_DISTS)}")
    return value, point


def _cmd_eval(args, out) -> int:
    params = _load_params(args)
    log_value, point = _eval_log_value(args.dist, params, args.point)
    record = {
        "dist": args.dist,
        "params": params,
        "point": point,
        "logValue": log_value,
    }
    # The linear value is plain exponentiation; omit it when float64
    # cannot represent it (underflow to 0 or overflow past exp(709.78)).
    if not args.log and log_value <= 709.78:
        linear = math.exp(log_value)
        if linear > 0.0:
            record["value"] = linear
    out.write(json.dumps(record) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

_SAMPLE_DISTS = ("dirichlet", "gamma", "poisson", "negative-binomial", "multinomial")


def _cmd_sample(args, out) -> int:
    params = _load_params(args)
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    rng = np.random.default_rng(args.seed)
    name = args.dist
    if name == "dirichlet":
        _require_keys(params, {"alpha"}, name)
        dp = dist.DirichletParams(_vector(params, "alpha"))
        header = [f"x{i + 1}" for i in range(dp.n)]
        rows = (dist.dirichlet_sample(dp, rng).entries for _ in range(args.count))
    elif name == "gamma":
        _require_keys(params, {"shape", "scale"}, name)
        shape, scale = _number(params, "shape"), _number(params, "scale")
        header = ["value"]
        rows = ([dist.gamma_sample(shape, scale, rng)] for _ in range(args.count))
    elif name == "poisson":
        _require_keys(params, {"rate"}, name)
        rate = _number(params, "rate")
        header = ["value"]
        rows = ([dist.poisson_sample(rate, rng)] for _ in range(args.count))
    elif name == "negative-binomial":
        if set(params) == {"R", "theta"}:
            big_r, theta = _number(params, "R"), _number(params, "theta")
        else:
            _require_keys(params, {"shapes", "scale"}, name)
            gm = dist.GammaMixtureParams(_vector(params, "shapes"), _number(params, "scale"))
            big_r, theta = gm.total_shape, gm.scale
        header = ["value"]
        rows = (
            [dist.negative_binomial_sample_via_mixture(big_r, theta, rng)]
            for _ in range(args.count)
        )
    elif name == "multinomial":
        _require_keys(params, {"probs", "m"}, name)
        probs = Composition(_vector(params, "probs"))
        m = _integer(params, "m")
        header = [f"x{i + 1}" for i in range(probs.n)]
        rows = (dist.multinomial_sample(m, probs, rng).counts for _ in range(args.count))
    elif name in _EVAL_DISTS:
        raise ValueError(f"no sampler for {name!r}; samplers exist for {', '.join(_SAMPLE_DISTS)}")
    else:
        raise UsageError(
            f"unknown distribution {name!r}; samplers exist for {', '.join(_SAMPLE_DISTS)}"
        )
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) if isinstance(v, float) else str(int(v)) for v in row) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------


def _read_csv_rows(stream) -> list[tuple[int, list[float]]]:
    rows = []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        try:
            rows.append((lineno, [float(p) for p in parts]))
        except ValueError as exc:
            if lineno == 1:
                continue  # header row
            raise UsageError(f"row {lineno}: not numeric CSV: {line!r}") from exc
    return rows


def _cmd_transform(args, stream_in, out) -> int:
    rows = _read_csv_rows(stream_in)
    out_rows = []
    header = None
    for lineno, row in rows:
        try:
            if args.direction == "forward":
                x = Composition(row)
                if args.kind == "ratio":
                    y = ratio_forward(x)
                    jac = log_det_jacobian_ratio_inverse(y, x.n)
                else:
                    y = log_ratio_forward(x)
                    jac = log_det_jacobian_log_ratio_inverse(y, x.n)
                values = list(y.entries)
                header = [f"y{j + 1}" for j in range(len(values))]
            else:
                if args.kind == "ratio":
                    y = RatioVector(row)
                    x = ratio_inverse(y)
                    jac = log_det_jacobian_ratio_inverse(y, x.n)
                else:
                    y = LogRatioVector(row)
                    x = log_ratio_inverse(y)
                    jac = log_det_jacobian_log_ratio_inverse(y, x.n)
                values = list(x.entries)
                header = [f"x{j + 1}" for j in range(len(values))]
        except ValueError as exc:
            raise ValueError(f"row {lineno}: {exc}") from exc
        if args.jacobian:
            values.append(jac)
        out_rows.append(values)
    if header is not None:
        if args.jacobian:
            header = header + ["log_det_jacobian_inverse"]
        out.write(",".join(header) + "\n")
    for values in out_rows:
        out.write(",".join(_fmt(v) for v in values) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _cmd_verify(args, out) -> int:
    reports = checks.run_all(args.seed, args.level)
    for report in reports:
        out.write(json.dumps(report.to_json_dict()) + "\n")
    return EXIT_OK if checks.all_passed(reports) else EXIT_DOMAIN


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="countcomp",
        description="Distributions on counts and compositions, with a verification suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a log density / log PMF at a point")
    p_eval.add_argument("--dist", required=True)
    p_eval.add_argument("--params", help="JSON object of parameters")
    p_eval.add_argument("--params-file", help="path to a JSON parameter file")
    p_eval.add_argument("--point", required=True, help="comma-separated point")
    p_eval.add_argument("--log", action="store_true", help="emit only the log value")

    p_sample = sub.add_parser("sample", help="draw samples as CSV rows")
    p_sample.add_argument("--dist", required=True)
    p_sample.add_argument("--params", help="JSON object of parameters")
    p_sample.add_argument("--params-file", help="path to a JSON parameter file")
    p_sample.add_argument("--count", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)

    p_transform = sub.add_parser(
        "transform", help="map CSV rows between the simplex and ratio/log-ratio coordinates"
    )
    p_transform.add_argument("kind", choices=["ratio", "alr"])
    p_transform.add_argument("direction", choices=["forward", "inverse"])
    p_transform.add_argument(
        "--jacobian", action="store_true",
        help="append the closed-form log |det J| of the inverse map at the ratio point",
    )

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--level", choices=["quick", "full"], default="full")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if args.command == "eval":
            return _cmd_eval(args, sys.stdout)
        if args.command == "sample":
            return _cmd_sample(args, sys.stdout)
        if args.command == "transform":
            return _cmd_transform(args, sys.stdin, sys.stdout)
        return _cmd_verify(args, sys.stdout)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
