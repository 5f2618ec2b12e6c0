"""Command-line driver with reproducible, file-based outputs.

Commands: ortho-check, eigencheck, kernel-compare, cesaro, mehler, expand.
Every report echoes its resolved configuration, the library version, and the
tolerances used; identical configurations and seeds give byte-identical
output.  Exit codes: 0 pass, 1 numeric failure, 2 usage/parameter error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, bases, diffops, domain, fourier, kernels
from .domain import WeightParams
from .errors import ArgumentError, CapabilityError, ParameterError

DOMAINS = (
    "surface-cone",
    "surface-hyp",
    "solid-cone",
    "solid-hyp",
    "upper-cone-surface",
    "upper-cone-solid",
)

TOLERANCES = {
    "ortho": 1e-10,
    "eigen": 1e-5,
    "kernel": 1e-8,
    "mehler": 1e-8,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    domain: str
    d: int
    rho: float
    beta: float
    gamma: float | None
    mu: float | None
    family: str
    nmax: int
    delta: tuple[float, ...]
    nlist: tuple[int, ...]
    r: float
    seed: int
    out: str | None
    format: str
    operator: str | None = None
    pairs: int = 50
    probe: str = "brink"
    function: str = "t2"


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def resolve_params(cfg: RunConfig) -> WeightParams:
    """Map a CLI configuration onto weight parameters, validating geometry."""
    fam = cfg.family
    if cfg.domain in ("upper-cone-surface", "upper-cone-solid"):
        if fam not in ("jacobi", "laguerre"):
            raise ParameterError("upper-cone domains take --family jacobi or laguerre")
        mu = cfg.mu if cfg.domain == "upper-cone-solid" else None
        if cfg.domain == "upper-cone-solid" and mu is None:
            raise ParameterError("upper-cone-solid requires --mu")
        if fam == "jacobi":
            if cfg.gamma is None:
                raise ParameterError("jacobi family requires --gamma")
            return WeightParams.jacobi_upper(cfg.d, cfg.beta, cfg.gamma, mu)
        return WeightParams.laguerre_upper(cfg.d, cfg.beta, mu)
    if fam not in ("gegenbauer", "hermite"):
        raise ParameterError("double domains take --family gegenbauer or hermite")
    surface = cfg.domain.startswith("surface")
    hyp = cfg.domain.endswith("hyp")
    rho = cfg.rho
    if hyp and not rho > 0:
        raise ParameterError("hyperboloid domains require --rho > 0")
    if not hyp and rho != 0:
        raise ParameterError("cone domains require --rho 0")
    if fam == "gegenbauer":
        if cfg.gamma is None:
            raise ParameterError("gegenbauer family requires --gamma")
        if surface:
            return WeightParams.gegenbauer_surface(cfg.d, cfg.beta, cfg.gamma, rho)
        if cfg.mu is None:
            raise ParameterError("solid domains require --mu")
        return WeightParams.gegenbauer_solid(cfg.d, cfg.beta, cfg.gamma, cfg.mu, rho)
    if surface:
        return WeightParams.hermite_surface(cfg.d, cfg.beta, rho)
    if cfg.mu is None:
        raise ParameterError("solid domains require --mu")
    return WeightParams.hermite_solid(cfg.d, cfg.beta, cfg.mu, rho)


def _report_header(cfg: RunConfig) -> dict:
    raw = asdict(cfg)
    raw["delta"] = list(raw["delta"])
    raw["nlist"] = list(raw["nlist"])
    raw.pop("out")  # the destination is not part of the reproducible config
    return {
        "version": __version__,
        "config": raw,
        "tolerances": dict(TOLERANCES),
    }


def _emit(cfg: RunConfig, report: dict, csv_rows=None, csv_header=None) -> None:
    if cfg.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        lines = ["# " + json.dumps(report.get("config", {}), sort_keys=True)]
        lines.append(",".join(csv_header))
        for row in csv_rows:
            lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
        text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_ortho_check(cfg: RunConfig) -> int:
    params = resolve_params(cfg)
    x, t, w = domain.grid(params)
    els = [e for n in range(cfg.nmax + 1) for e in _ortho_elements(params, n)]
    V = np.stack([e(x, t) / math.sqrt(e.norm_sq) for e in els])
    G = (V * w) @ V.T
    offdiag = float(np.max(np.abs(G - np.diag(np.diag(G))))) if len(els) > 1 else 0.0
    diag = float(np.max(np.abs(np.diag(G) - 1.0)))
    report = _report_header(cfg)
    report["results"] = {
        "n_elements": len(els),
        "max_offdiag": offdiag,
        "max_diag_deviation": diag,
        "pass": bool(offdiag < TOLERANCES["ortho"] and diag < TOLERANCES["ortho"]),
    }
    _emit(cfg, report,
          [[len(els), offdiag, diag]], ["n_elements", "max_offdiag", "max_diag_deviation"])
    return 0 if report["results"]["pass"] else 1


def _ortho_elements(params: WeightParams, n: int):
    if params.rho > 0:
        return bases.parity_basis(params, n, 0)
    return bases.basis(params, n)


def cmd_eigencheck(cfg: RunConfig) -> int:
    params = resolve_params(cfg)
    name = cfg.operator
    if name is None:
        raise ParameterError("eigencheck requires --operator (see hyperbasis eigencheck --help)")
    rep = diffops.eigencheck(name, params, n_max=cfg.nmax, nsamples=30, seed=cfg.seed)
    report = _report_header(cfg)
    report["results"] = {
        "operator": name,
        "max_residual": rep["max_residual"],
        "per_degree": {f"{k[0]},{k[1]}": v for k, v in sorted(rep["per_degree"].items())},
        "pass": bool(rep["max_residual"] < TOLERANCES["eigen"]),
    }
    rows = [[f"{k[0]}", f"{k[1]}", v] for k, v in sorted(rep["per_degree"].items())]
    _emit(cfg, report, rows, ["n", "m", "max_residual"])
    return 0 if report["results"]["pass"] else 1


def cmd_kernel_compare(cfg: RunConfig) -> int:
    params = resolve_params(cfg)
    if params.family != "gegenbauer":
        raise ParameterError(
            "the addition-formula route exists for the Gegenbauer-type weights only; "
            "Hermite-type kernels have Mehler forms (use the mehler command)"
        )
    parities = ("even",) if params.rho > 0 else ("even", "odd")
    worst = 0.0
    rows = []
    for n in range(cfg.nmax + 1):
        for k in range(max(1, cfg.pairs // max(1, cfg.nmax + 1))):
            a, b = domain.sample_points(params, count=2, seed=cfg.seed + 1000 * n + k)
            for parity in parities:
                s = kernels.kernel_sum(params, n, a, b, parity)
                if params.rho > 0:
                    i = kernels.hyperboloid_transfer(params, n, a, b, "integral")
                elif params.kind == "surface":
                    i = kernels.addition_surface(params, n, parity, a, b)
                else:
                    i = kernels.addition_solid(params, n, parity, a, b)
                diff = abs(s - i)
                worst = max(worst, diff)
                rows.append([n, parity, s, i, diff])
    report = _report_header(cfg)
    report["results"] = {
        "max_discrepancy": worst,
        "n_comparisons": len(rows),
        "pass": bool(worst < TOLERANCES["kernel"]),
    }
    _emit(cfg, report, rows, ["n", "parity", "sum_route", "integral_route", "abs_diff"])
    return 0 if report["results"]["pass"] else 1


def cmd_cesaro(cfg: RunConfig) -> int:
    params = resolve_params(cfg)
    rows = fourier.summability_table(params, cfg.nlist, cfg.delta, probes=(cfg.probe,))
    report = _report_header(cfg)
    report["results"] = {"table": rows}
    csv_rows = [[r["n"], r["delta"], r["probe"], r["lebesgue_value"]] for r in rows]
    _emit(cfg, report, csv_rows, ["n", "delta", "probe", "lebesgue_value"])
    return 0


def cmd_mehler(cfg: RunConfig) -> int:
    params = resolve_params(cfg)
    if params.family != "hermite":
        raise ParameterError("the Mehler kernel applies to the Hermite-type weights")
    a, b = domain.sample_points(params, count=2, seed=cfg.seed)
    fn = kernels.mehler_surface if params.kind == "surface" else kernels.mehler_solid
    closed = fn(params, cfg.r, a, b)
    nmax = cfg.nmax if cfg.nmax > 0 else 30
    series = kernels.poisson_series(params, cfg.r, a, b, nmax, "even")
    diff = abs(closed - series)
    tail = abs(kernels.kernel_sum(params, nmax, a, b, "even")) * cfg.r**nmax / max(1e-12, 1 - cfg.r)
    report = _report_header(cfg)
    report["results"] = {
        "r": cfg.r,
        "closed_form": closed,
        "truncated_series": series,
        "abs_diff": diff,
        "series_tail_bound": tail,
        "pass": bool(diff < TOLERANCES["mehler"] + tail),
    }
    _emit(cfg, report, [[cfg.r, closed, series, diff]],
          ["r", "closed_form", "truncated_series", "abs_diff"])
    return 0 if report["results"]["pass"] else 1


_TEST_FUNCTIONS = {
    "one": lambda x, t: np.ones_like(t),
    "t2": lambda x, t: t * t,
    "xsq": lambda x, t: x[..., 0] ** 2,
    "gauss": lambda x, t: np.exp(-(t * t)),
}


def cmd_expand(cfg: RunConfig) -> int:
    params = resolve_params(cfg)
    try:
        f = _TEST_FUNCTIONS[cfg.function]
    except KeyError:
        raise ParameterError(f"--function must be one of {sorted(_TEST_FUNCTIONS)}") from None
    co = fourier.expand(f, params, cfg.nmax)
    coeffs = {json.dumps(ix.to_json(), sort_keys=True): c for ix, c in co.coeffs.items()}
    report = _report_header(cfg)
    report["results"] = {
        "function": cfg.function,
        "coefficients": dict(sorted(coeffs.items())),
        "parseval_sum": co.parseval_sum(),
        "max_odd_parity_coefficient": co.odd_energy(),
    }
    rows = [[ix.n, ix.m, str(ix.k).replace(",", ";"), c] for ix, c in co.coeffs.items()]
    _emit(cfg, report, rows, ["n", "m", "k", "coefficient"])
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hyperbasis",
        description="Orthogonal bases, kernels, and Fourier series on cones and hyperboloids.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("ortho-check", "eigencheck", "kernel-compare", "cesaro", "mehler", "expand"):
        p = sub.add_parser(name)
        p.add_argument("--domain", choices=DOMAINS, default="surface-cone")
        p.add_argument("--d", type=int, default=2)
        p.add_argument("--rho", type=float, default=0.0)
        p.add_argument("--beta", type=float, default=0.0)
        p.add_argument("--gamma", type=float, default=None)
        p.add_argument("--mu", type=float, default=None)
        p.add_argument("--family", choices=("gegenbauer", "hermite", "jacobi", "laguerre"),
                       default="gegenbauer")
        p.add_argument("--nmax", type=int, default=4)
        p.add_argument("--n", default="8,16,32", help="comma-separated degrees (cesaro)")
        p.add_argument("--delta", default="0", help="comma-separated Cesaro orders")
        p.add_argument("--r", type=float, default=0.4)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--operator", default=None, choices=diffops.registry_names())
        p.add_argument("--pairs", type=int, default=50)
        p.add_argument("--probe", choices=("brink", "apex", "grid"), default="brink")
        p.add_argument("--function", default="t2")
    return ap


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        domain=args.domain,
        d=args.d,
        rho=args.rho,
        beta=args.beta,
        gamma=args.gamma,
        mu=args.mu,
        family=args.family,
        nmax=args.nmax,
        delta=tuple(float(v) for v in str(args.delta).split(",") if v != ""),
        nlist=tuple(int(v) for v in str(args.n).split(",") if v != ""),
        r=args.r,
        seed=args.seed,
        out=args.out,
        format=args.format,
        operator=args.operator,
        pairs=args.pairs,
        probe=args.probe,
        function=args.function,
    )


_COMMANDS = {
    "ortho-check": cmd_ortho_check,
    "eigencheck": cmd_eigencheck,
    "kernel-compare": cmd_kernel_compare,
    "cesaro": cmd_cesaro,
    "mehler": cmd_mehler,
    "expand": cmd_expand,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        return _COMMANDS[cfg.command](cfg)
    except (ParameterError, CapabilityError, ArgumentError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
