"""Command-line front end: ``chernoff-lab <kind> --config <path>``.

Each experiment kind reads a flat JSON config, writes a CSV table to
``<output>.csv`` and a plain-text report to ``<output>.report.txt``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import chernoff as ch
from . import experiments as ex
from .errors import ChernoffLabError, DegenerateFitError
from .semigroups import HEAT_QUADRATURE, HEAT_SPECTRAL, TRANSLATION, heat_oracle, translation_oracle
from .testfns import CATALOG as FUNCTION_CATALOG
from .testfns import parse_function

KINDS = ("rates", "compare", "slow", "tangency", "moments", "subspace", "linearity")


class UsageError(Exception):
    """Invalid or incomplete configuration."""


@dataclass
class ExperimentConfig:
    kind: str
    family: str = "heat_G"
    families: list = field(default_factory=list)
    function: str = "sine:1"
    g: str = "gaussian:1"
    a: float = 1.0
    t: list = field(default_factory=lambda: [1.0])
    ns: list = field(default_factory=lambda: list(ex.DEFAULT_NS))
    domain: Optional[dict] = None
    oracle: str = HEAT_SPECTRAL
    nodes: int = 64
    kmax: int = 8
    rate: str = "power:0.5"
    alpha: float = 1.0
    beta: float = 1.0
    draws: int = 100
    seed: int = 0
    n_min_cut: int = 0
    output: str = "chernoff_out"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise UsageError(f"unknown config field(s): {', '.join(unknown)}")
        if "kind" not in data:
            raise UsageError("config field 'kind' is required")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def validate(self):
        if self.kind not in KINDS:
            raise UsageError(f"field 'kind': expected one of {', '.join(KINDS)}, got {self.kind!r}")
        if not isinstance(self.t, list) or not self.t:
            raise UsageError("field 't': needs a non-empty list of times")
        if any(not isinstance(v, (int, float)) or not v > 0 for v in self.t):
            raise UsageError("field 't': all times must be positive numbers")
        if not isinstance(self.ns, list) or not self.ns:
            raise UsageError("field 'ns': needs a non-empty list of integers")
        if any(not isinstance(n, int) or isinstance(n, bool) or n < 1 for n in self.ns):
            raise UsageError("field 'ns': entries must be positive integers")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise UsageError("field 'ns': must be strictly ascending")
        if not isinstance(self.a, (int, float)) or not self.a > 0:
            raise UsageError("field 'a': must be positive")
        if self.oracle not in (HEAT_SPECTRAL, HEAT_QUADRATURE):
            raise UsageError(f"field 'oracle': expected {HEAT_SPECTRAL} or {HEAT_QUADRATURE}")
        if self.domain is not None:
            if not isinstance(self.domain, dict) or set(self.domain) != {"x_min", "x_max", "points"}:
                raise UsageError("field 'domain': needs exactly x_min, x_max, points (or null)")
        if self.kind == "compare" and len(self.families) < 2:
            raise UsageError("field 'families': compare needs at least two families")
        if self.kind == "tangency" and any(b >= a for a, b in zip(self.t, self.t[1:])):
            raise UsageError("field 't': tangency times must be strictly decreasing")
        if self.kind == "moments" and (not isinstance(self.kmax, int) or self.kmax < 2):
            raise UsageError("field 'kmax': must be an integer >= 2")
        if self.kind == "linearity" and (not isinstance(self.draws, int) or self.draws < 1):
            raise UsageError("field 'draws': must be a positive integer")


TEMPLATES = {
    "rates": dict(family="heat_G", function="sine:1"),
    "compare": dict(families=["heat_G", "heat_S"], function="sine:1"),
    "slow": dict(family="perturbed_shift:inv_log", rate="inv_log"),
    "tangency": dict(family="heat_G", function="sine:1", t=[1e-1, 1e-2, 1e-3, 1e-4, 1e-5]),
    "moments": dict(family="heat_S", kmax=8),
    "subspace": dict(family="quadratic_shift:1", function="holder_sine:0.5", rate="power:0.5",
                     t=[0.5, 1.0]),
    "linearity": dict(family="heat_G", function="sine:1", g="gaussian:1"),
}


def template(kind: str) -> ExperimentConfig:
    if kind not in KINDS:
        raise UsageError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return ExperimentConfig(kind=kind, output=f"{kind}_out", **TEMPLATES[kind])


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return format(float(v), ".17g")


def _oracle_for(fam, cfg):
    if fam.target == TRANSLATION:
        return translation_oracle()
    return heat_oracle(fam.a, kind=cfg.oracle, nodes=cfg.nodes)


def _domain(cfg):
    if cfg.domain is None:
        return None
    return ex.SamplingDomain(float(cfg.domain["x_min"]), float(cfg.domain["x_max"]),
                             int(cfg.domain["points"]))


def _fit_line(curve, n_min_cut):
    try:
        fit = ex.fit_rate(curve, n_min_cut)
    except DegenerateFitError:
        return None, "fitted exponent: none (fewer than 3 positive errors; faster than measurable)"
    return fit, (f"fitted exponent p = {fit.exponent:.6f}  (r^2 = {fit.r_squared:.6f}, "
                 f"n in [{fit.n_range[0]}, {fit.n_range[1]}])")


def _run_rates(cfg):
    fam = ch.parse_family(cfg.family, cfg.a)
    f = parse_function(cfg.function)
    oracle = _oracle_for(fam, cfg)
    rows, lines = [], []
    for t in cfg.t:
        curve = ex.error_curve(fam, oracle, f, t, cfg.ns, _domain(cfg))
        rows += [(t, n, e) for n, e in zip(curve.ns, curve.errors)]
        lines.append(f"t = {t:g}: " + _fit_line(curve, cfg.n_min_cut)[1])
    return ["t", "n", "error"], rows, lines


def _run_compare(cfg):
    fams = [ch.parse_family(s, cfg.a) for s in cfg.families]
    f = parse_function(cfg.function)
    header = ["t", "n"] + [f"error_{fam.name}" for fam in fams]
    rows, lines = [], []
    for t in cfg.t:
        curves = [ex.error_curve(fam, _oracle_for(fam, cfg), f, t, cfg.ns, _domain(cfg)) for fam in fams]
        for i, n in enumerate(cfg.ns):
            rows.append((t, n) + tuple(c.errors[i] for c in curves))
        fits = {}
        for fam, c in zip(fams, curves):
            fit, text = _fit_line(c, cfg.n_min_cut)
            fits[fam.name] = fit
            lines.append(f"t = {t:g}, {fam.name}: {text}")
        measurable = {k: v.exponent for k, v in fits.items() if v is not None}
        if measurable:
            best = max(measurable, key=measurable.get)
            lines.append(f"t = {t:g}: largest fitted exponent: {best}")
        first, rest = curves[0], curves[1:]
        for fam, c in zip(fams[1:], rest):
            smaller = all(e2 < e1 for e1, e2 in zip(first.errors, c.errors))
            lines.append(f"t = {t:g}: {fam.name} error below {fams[0].name} at every n: "
                         f"{'yes' if smaller else 'no'}")
    return header, rows, lines


def _run_slow(cfg):
    w = ch.parse_rate(cfg.rate)
    t = cfg.t[0]
    res = ex.slow_convergence_experiment(w, t, cfg.ns, _domain(cfg))
    rows = [(n, e, b, e >= b) for n, e, b in zip(res.curve.ns, res.curve.errors, res.lower_bounds)]
    lines = [f"family: perturbed_shift with w = {w.description}, f = sine:1, t = {t:g}",
             f"lower bound t*w(n/t)/2 holds beyond n0 = {res.n0}: {'yes' if res.holds else 'no'}"]
    try:
        fit = ex.fit_rate(res.curve, cfg.n_min_cut)
        lines.append(f"fitted exponent p = {fit.exponent:.6f} (r^2 = {fit.r_squared:.6f})")
    except DegenerateFitError:
        lines.append("fitted exponent: none")
    return ["n", "error", "lower_bound", "bound_holds"], rows, lines


def _run_tangency(cfg):
    fam = ch.parse_family(cfg.family, cfg.a)
    f = parse_function(cfg.function)
    lf = ch.generator_action(fam, f)
    domain = _domain(cfg) or ex.default_domain(f, fam.a or 0.0, 0.0)
    res = ch.tangency_check(fam, f, lf, cfg.t, domain)
    lines = [f"family {fam.name}, f = {f.name}",
             f"residual ratio last/first = {res[-1] / res[0]:.6e}" if res[0] > 0 else "first residual is 0",
             f"tangency probe passes (monotone within 10%, last <= first/10): "
             f"{'yes' if ch.tangency_ok(res) else 'no'}"]
    return ["t", "residual"], list(zip(cfg.t, res)), lines


def _run_moments(cfg):
    fam = ch.parse_family(cfg.family, cfg.a)
    t = cfg.t[0]
    mm = ch.moment_match_order(fam, cfg.a, t, cfg.kmax)
    var = 2 * cfg.a ** 2 * t
    rows = []
    for k, (m, g) in enumerate(zip(mm.moments, mm.gaussian)):
        scale = max(abs(g), var ** (k / 2))
        rows.append((k, m, g, abs(m - g) <= ch.MOMENT_RTOL * scale))
    if mm.first_mismatch_k is None:
        lines = [f"all moments up to k = {cfg.kmax} match the heat kernel"]
    else:
        lines = [f"first mismatch k = {mm.first_mismatch_k}",
                 f"predicted exponent = {mm.predicted_rate_exponent:g} (heuristic, not a theorem)"]
    return ["k", "moment", "gaussian_moment", "match"], rows, lines


def _run_subspace(cfg):
    fam = ch.parse_family(cfg.family, cfg.a)
    f = parse_function(cfg.function)
    w = ch.parse_rate(cfg.rate)
    oracle = _oracle_for(fam, cfg)
    curves = [ex.error_curve(fam, oracle, f, t, cfg.ns, _domain(cfg)) for t in cfg.t]
    verdict = ex.subspace_probe(curves, w)
    r = np.max([c.errors for c in curves], axis=0)
    rows = [(n, rn, float(w(n)), q) for n, rn, q in zip(cfg.ns, r, verdict.ratios)]
    lines = [f"tau = {cfg.t}, w(n) = {w.description}",
             f"sup ratio = {verdict.sup_ratio:.6e}",
             f"bounded (heuristic tail <= 2 x median rule): {'yes' if verdict.bounded else 'no'}"]
    return ["n", "max_error_over_tau", "w", "ratio"], rows, lines


def _run_linearity(cfg):
    fam = ch.parse_family(cfg.family, cfg.a)
    f, g = parse_function(cfg.function), parse_function(cfg.g)
    oracle = _oracle_for(fam, cfg)
    rng = np.random.default_rng(cfg.seed)
    t = cfg.t[0]
    rows = []
    for i in range(cfg.draws):
        alpha, beta = rng.uniform(-10.0, 10.0, size=2)
        v = ex.linearity_check(fam, oracle, f, g, float(alpha), float(beta), t, cfg.ns, _domain(cfg))
        rows.append((i, alpha, beta, v))
    worst = max(r[3] for r in rows)
    lines = [f"{cfg.draws} random (alpha, beta) in [-10, 10]^2, f = {f.name}, g = {g.name}",
             f"max triangle-inequality violation = {worst:.6e}"]
    return ["draw", "alpha", "beta", "max_violation"], rows, lines


RUNNERS = {
    "rates": _run_rates,
    "compare": _run_compare,
    "slow": _run_slow,
    "tangency": _run_tangency,
    "moments": _run_moments,
    "subspace": _run_subspace,
    "linearity": _run_linearity,
}


def run(cfg: ExperimentConfig) -> tuple[str, str]:
    """Run one experiment and write its CSV and report; returns both paths."""
    header, rows, lines = RUNNERS[cfg.kind](cfg)
    csv_path = f"{cfg.output}.csv"
    report_path = f"{cfg.output}.report.txt"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    with open(report_path, "w", newline="\n") as fh:
        fh.write(f"chernoff-lab {cfg.kind}\n\nconfig:\n")
        fh.write(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n\nresults:\n")
        for line in lines:
            fh.write(f"  {line}\n")
    return csv_path, report_path


def load_config(path: str, kind: Optional[str] = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if kind is not None and isinstance(data, dict):
        data.setdefault("kind", kind)
        if data["kind"] != kind:
            raise UsageError(f"field 'kind': config says {data['kind']!r} but subcommand is {kind!r}")
    return ExperimentConfig.from_dict(data)


def catalog_text() -> str:
    lines = ["families:"]
    lines += [f"  {v}" for v in ch.FAMILY_CATALOG.values()]
    lines.append("functions:")
    lines += [f"  {v[1]}" for v in FUNCTION_CATALOG.values()]
    lines.append("rate functions:")
    lines += [f"  {v[1]}" for v in ch.RATE_CATALOG.values()]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chernoff-lab",
                                     description="Convergence experiments for Chernoff approximations.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="print the family, function and rate catalogs")
    init = sub.add_parser("init", help="write a template config for an experiment kind")
    init.add_argument("kind", choices=KINDS)
    init.add_argument("--output", "-o", help="file to write (default: stdout)")
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        p.add_argument("--config", "-c", required=True, help="path to a JSON config")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            print(catalog_text())
            return 0
        if args.command == "init":
            text = json.dumps(template(args.kind).to_dict(), indent=2, sort_keys=True) + "\n"
            if args.output:
                with open(args.output, "w", newline="\n") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return 0
        cfg = load_config(args.config, args.command)
        csv_path, report_path = run(cfg)
    except UsageError as exc:
        print(f"chernoff-lab: usage error: {exc}", file=sys.stderr)
        return 2
    except ChernoffLabError as exc:
        msg = str(exc)
        code = 2 if "unknown" in msg else 1
        print(f"chernoff-lab: error: {msg}", file=sys.stderr)
        if code == 2:
            print(catalog_text(), file=sys.stderr)
        return code
    print(f"wrote {csv_path} and {report_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
