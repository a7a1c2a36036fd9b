"""Batch front door: one subcommand per verification or computation.

Reports are JSON by default, with exact rationals serialized as "num/den"
strings so downstream diffs never meet a float.  Every report embeds the
full run configuration and the package version; identical configurations
and seeds reproduce byte-identical output apart from the timestamp field.
Exit code 0 means every check passed; nonzero means a failure (exact
identity or theorem-level inequality) or a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__, d4, fq, lseries, mds, moments, weyl
from .rings import QuadValue, QuarticValue, rat_equal, tower_float


ENV_PREFIX = "MDSFORGE_"


def _env_default(name, fallback, cast):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return fallback
    return cast(raw)


def rational_str(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def encode_value(v):
    if isinstance(v, QuadValue):
        return {"a": rational_str(v.a), "b": rational_str(v.b), "q": v.q,
                "float": tower_float(v).real}
    if isinstance(v, QuarticValue):
        coords = v.coordinates()
        return {"coords_over_q_quarter_basis": [rational_str(c) for c in coords],
                "float_re": tower_float(v).real, "float_im": tower_float(v).imag}
    if isinstance(v, Fraction):
        return rational_str(v)
    if isinstance(v, dict):
        return {k: encode_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [encode_value(x) for x in v]
    if isinstance(v, float):
        return v
    if hasattr(v, "real") and hasattr(v, "imag") and not isinstance(v, (int, bool)):
        try:
            return {"re": float(v.real), "im": float(v.imag)}
        except (TypeError, ValueError):
            return str(v)
    if isinstance(v, (str, int, bool)) or v is None:
        return v
    return str(v)


class Report:
    def __init__(self, command, config):
        self.command = command
        self.config = config
        self.items = []
        self.status = "pass"

    def add(self, name, ok=None, **fields):
        fields.pop("ok", None)  # callers may splat reports carrying their own flag
        item = {"name": name}
        if ok is not None:
            item["status"] = "pass" if ok else "fail"
            if not ok:
                self.status = "fail"
        item.update({k: encode_value(v) for k, v in fields.items()})
        self.items.append(item)

    def mark_diagnostic(self):
        if self.status == "pass":
            self.status = "diagnostic"

    def finish(self, fmt="json", stream=None):
        if stream is None:
            stream = sys.stdout
        doc = {
            "command": self.command,
            "status": self.status,
            "version": __version__,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "config": self.config,
            "items": self.items,
        }
        if fmt == "json":
            json.dump(doc, stream, indent=1, sort_keys=True)
            stream.write("\n")
        elif fmt == "csv":
            stream.write("name,status,detail\n")
            for item in self.items:
                detail = ";".join(f"{k}={v}" for k, v in item.items()
                                  if k not in ("name", "status"))
                stream.write(f"{item['name']},{item.get('status', '')},\"{detail}\"\n")
        else:
            stream.write(f"{self.command}: {self.status}\n")
            for item in self.items:
                status = item.get("status", "-")
                extras = {k: v for k, v in item.items() if k not in ("name", "status")}
                stream.write(f"  [{status}] {item['name']} {extras}\n")
        return 0 if self.status in ("pass", "diagnostic") else 1


def _field(args) -> fq.FqField:
    return fq.build_field(args.q_char, args.ext_degree)


def _config(args):
    keys = ("q_char", "ext_degree", "cutoff", "n_max", "d_max", "h_deg_max",
            "prod_deg_max", "trials", "seed", "threads", "cache_dir",
            "format", "precision")
    return {k: getattr(args, k, None) for k in keys}


# -- subcommand bodies -------------------------------------------------------

def cmd_verify_cg(args, report):
    rep = weyl.verify_against_explicit(trials=args.trials, seed=args.seed)
    report.add("averaging_matches_explicit", ok=rep["equal"], **rep)
    rs = weyl.build_root_system("D4")
    f = d4.explicit_f()
    report.add("denominator_factor_count", ok=len(f.den) == 12, count=len(f.den))
    report.add("origin_value", ok=weyl.value_at_origin(f).is_one())
    for i in (1, 2, 3, 4):
        report.add(f"limiting_condition_node{i}",
                   ok=weyl.check_limiting_condition(f, rs, i))
    for i in (1, 4):
        fi = weyl.act_reflection(f, rs, i)
        eq, wit = rat_equal(fi, f, "randomized", trials=args.trials // 2 or 6,
                            seed=args.seed + i)
        report.add(f"reflection_invariance_node{i}", ok=eq,
                   witness=wit, trials=args.trials // 2 or 6, seed=args.seed + i)


def cmd_extract(args, report):
    cutoff = args.cutoff
    laws_ok = True
    for k1 in range(cutoff + 1):
        for k2 in range(cutoff + 1 - k1):
            for k3 in range(cutoff + 1 - k1 - k2):
                for l in range(cutoff + 1 - k1 - k2 - k3):
                    a = d4.a_coeff(k1, k2, k3, l, cutoff)
                    if l == 0 or (k1, k2, k3) == (0, 0, 0):
                        if not a.is_one():
                            laws_ok = False
                    if (k1 + k2 + k3) % 2 == 1 and l % 2 == 1 and not a.is_zero():
                        laws_ok = False
    report.add("coefficient_laws_total_deg_le_%d" % cutoff, ok=laws_ok)
    pq = d4.check_pq_functional_eqs(8, 8)
    report.add("correction_polynomial_functional_eqs", ok=not pq["failures"], **pq)
    recon_p = d4.reconstruct_from_p(cutoff) == d4.f_series_total(cutoff)
    recon_q = d4.reconstruct_from_q(cutoff) == d4.f_series_total(cutoff)
    report.add("reconstruction_outer", ok=recon_p)
    report.add("reconstruction_central", ok=recon_q)
    for parity, sign, closed in (("odd", 1, d4.specialized_odd_closed(args.n_max)),
                                 ("even", 1, d4.specialized_even_closed(1, args.n_max)),
                                 ("even", -1, d4.specialized_even_closed(-1, args.n_max))):
        got = d4.specialize_center_series(parity, sign, args.n_max)
        report.add(f"centre_specialization_{parity}_{sign:+d}",
                   ok=got == closed.truncate(args.n_max))


def cmd_verify_series(args, report):
    F = _field(args)
    x = (0, 1)
    xp1 = (1, 1)
    theta = F.nonsquare_unit
    twists = [mds.TwistSpec(F),
              mds.TwistSpec(F, c1=x, a2=theta),
              mds.TwistSpec(F, c2=x, a1=theta),
              mds.TwistSpec(F, c3=x, a1=theta, a2=theta),
              mds.TwistSpec(F, c1=x, c3=xp1)]
    for tw in twists:
        rep = mds.compare_routes(F, tw, n4_max=args.n_max, total_max=args.n_max + 1)
        report.add(f"route_agreement[{tw!r}]", ok=rep["ok"],
                   buckets=rep["buckets"], diffs=rep["diffs"][:3])
    for a2 in (1, theta):
        rep = mds.check_sieve_identity(F, a2, args.d_max)
        report.add(f"sieve_identity_a2_{a2}", ok=rep.pop("ok"), **rep)
    for h, n in (((0, 1), args.n_max), (fq.pmul(F, x, xp1), args.n_max - 1)):
        for a2 in (1, theta):
            rep = mds.check_fundamental_decomposition(F, h, a2, n)
            report.add(f"decomposition_h_{fq.poly_str(h)}_a2_{a2}",
                       ok=rep.pop("ok"), **rep)


def cmd_gamma(args, report):
    F = _field(args)
    rows = mds.gamma_table(F.q)
    report.add("eight_rows_match_defining_sum", ok=True,
               distinct=len({r["value"] for r in rows}))
    for r in rows:
        report.add(f"gamma_a2_{r['a2']}_rho_{r['rho']}", ok=True, value=r["value"])


def cmd_residues(args, report):
    F = _field(args)
    w1 = mds.check_residue_w1()
    report.add("boundary_residue_identity", ok=w1.pop("ok"), **w1)
    x = (0, 1)
    xp1 = (1, 1)
    theta = F.nonsquare_unit
    count = 0
    bad = 0
    for tw in (mds.TwistSpec(F), mds.TwistSpec(F, c1=x), mds.TwistSpec(F, c2=x, a2=theta),
               mds.TwistSpec(F, c3=xp1), mds.TwistSpec(F, c1=x, c2=xp1)):
        for rho in mds.RHO_CLASSES:
            count += 1
            closed = mds.residue_three_quarters(F, tw, rho)
            ssum = mds.residue_three_quarters_sum_route(F, tw, rho)
            if closed != ssum:
                bad += 1
    report.add("closed_form_vs_divisor_sum", ok=bad == 0, cases=count, failures=bad)
    ok_direct = all(
        mds.explicit_residue_c1(F.q, rho) == mds.residue_three_quarters(F, mds.TwistSpec(F), rho)
        for rho in mds.RHO_CLASSES)
    report.add("c1_matches_explicit_function_residue", ok=ok_direct)


def cmd_residue_z0(args, report):
    F = _field(args)
    for rho in mds.RHO_CLASSES:
        rep = mds.residue_z0_three_quarters(
            F, 1, rho, h_deg_max=args.h_deg_max, prod_deg_max=args.prod_deg_max,
            extended_deg=max(args.h_deg_max, 24))
        prod_final = rep["product_partials"][-1]
        floor = 4 * abs(rep["product_partials"][-1] - rep["product_partials"][-2])
        deltas = [abs(tower_float(v) - prod_final) for v in rep["extended_partials"]]
        grid = list(range(4, len(deltas), 4))
        monotone = all(deltas[a] > deltas[b] or deltas[b] <= floor
                       for a, b in zip(grid, grid[1:]))
        within = all(d <= t + rep["product_tail_logs"][-1] * abs(prod_final) + 1e-12
                     for d, t in zip(deltas, rep["h_tail_bounds"]))
        report.add(f"two_route_rho_{rho}", ok=monotone and within,
                   final_delta=deltas[-1], reference_floor=floor,
                   h_value_at_cut=rep["h_partials"][-1],
                   product_value=rep["product_partials"][-1],
                   monotone_grid=grid, within_tail_bounds=within)


def cmd_moments(args, report):
    F = _field(args)
    table = moments.moment_table(F, args.d_max, cache_dir=args.cache_dir,
                                 workers=args.threads)
    ok0 = table[0] == lseries.zeta_half(F.q) ** 3
    ok1 = args.d_max < 1 or table[1] == QuadValue(F.q, F.q, 0)
    report.add("boundary_values", ok=ok0 and ok1)
    for D in range(args.d_max + 1):
        report.add(f"S({D})", ok=True, value=table[D])
    upto = min(args.d_max, 5)
    ok_sieve = all(table[D] == moments.sieve_reconstructed_moment(F, D)
                   for D in range(upto + 1))
    report.add("sieve_reconstruction_cross_check", ok=ok_sieve, up_to=upto)


def cmd_rterm(args, report):
    F = _field(args)
    for D in range(min(args.d_max, 7) + 1):
        rt = moments.r_term(F, D, deg_max=args.prod_deg_max, dps=args.precision)
        agree = abs(float(rt["value"] - rt["pole_class_expansion"])) <= 1e-10 * (
            1 + abs(float(rt["value"])))
        report.add(f"R({D},{F.q})", ok=agree, value=float(rt["value"]),
                   tail_bound=rt["tail_bound"])


def cmd_bounds(args, report):
    F = _field(args)
    rep = moments.bound_suite(F)
    for item in rep["items"]:
        name = item.pop("name")
        ok = item.pop("ok", True)
        report.add(name, ok=ok, **{k: v for k, v in item.items()
                                   if k not in ("rows", "partials")})
    report.add("aggregate", ok=rep["ok"])


def cmd_report_secondary(args, report):
    F = _field(args)
    rep = moments.secondary_term_report(F, args.d_max, cache_dir=args.cache_dir,
                                        workers=args.threads)
    if rep.get("declined"):
        report.add("declined", ok=True, reason=rep["reason"])
    else:
        report.add("diagnostics", ok=True,
                   growth_ratios=rep["growth_ratios"],
                   fits=rep["fits"],
                   generating_series_partials=rep["generating_series_partials"],
                   caveat=rep["caveat"])
    report.mark_diagnostic()


COMMANDS = {
    "verify-cg": cmd_verify_cg,
    "extract": cmd_extract,
    "verify-series": cmd_verify_series,
    "gamma": cmd_gamma,
    "residues": cmd_residues,
    "residue-z0": cmd_residue_z0,
    "moments": cmd_moments,
    "rterm": cmd_rterm,
    "bounds": cmd_bounds,
    "report-secondary": cmd_report_secondary,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mdsforge",
        description="Exact verification toolkit for the cubic-moment multiple "
                    "Dirichlet series over rational function fields.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--q", dest="q_char", type=int,
                       default=_env_default("q", 5, int),
                       help="characteristic (prime) of the base field")
        p.add_argument("--ext-degree", type=int,
                       default=_env_default("ext_degree", 1, int))
        p.add_argument("--cutoff", type=int, default=_env_default("cutoff", 10, int))
        p.add_argument("--n-max", type=int, default=_env_default("n_max", 4, int))
        p.add_argument("--d-max", type=int, default=_env_default("d_max", 5, int))
        p.add_argument("--h-deg-max", type=int,
                       default=_env_default("h_deg_max", 4, int))
        p.add_argument("--prod-deg-max", type=int,
                       default=_env_default("prod_deg_max", 8, int))
        p.add_argument("--trials", type=int, default=_env_default("trials", 24, int))
        p.add_argument("--seed", type=int, default=_env_default("seed", 20240901, int))
        p.add_argument("--threads", type=int, default=_env_default("threads", 1, int))
        p.add_argument("--cache-dir", default=_env_default("cache_dir", None, str))
        p.add_argument("--format", choices=("json", "csv", "text"),
                       default=_env_default("format", "json", str))
        p.add_argument("--precision", type=int,
                       default=_env_default("precision", 50, int))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(args.command, _config(args))
    try:
        COMMANDS[args.command](args, report)
    except Exception as exc:  # surfaced as a failing report, not a traceback
        report.add("internal_error", ok=False, error=repr(exc))
    return report.finish(fmt=args.format)


if __name__ == "__main__":
    sys.exit(main())
