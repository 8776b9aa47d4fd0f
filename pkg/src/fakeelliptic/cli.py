"""Command line front end: dispatch, JSON reports, property suites.

Every command emits one JSON report (schema 1) with the echoed inputs,
typed results, the mathematical statement each result instantiates, and
wall-clock timings.  Exit code 0 means the computation ran; the suite
commands additionally exit nonzero when an invariant fails.
"""

import argparse
import json
import random
import sys
import time

import mpmath
from mpmath import mp

from . import cm as cm_points
from . import family, orders, quaternions, splitting
from .config import (ConfigError, _fraction_list, complex_pair, default_config,
                     load_config, parse_complex)
from .exactlinalg import ComputationError

CITE_ALGEBRA = ("A quaternion algebra over Q is a division algebra exactly "
                "when some place ramifies, and the ramified set is finite of "
                "even size; the modular family needs an indefinite division "
                "algebra.")
CITE_DISC = ("The reduced discriminant of an order is the square root of "
             "the determinant of the trace pairing Gram matrix; for a "
             "maximal order it equals the product of the finite ramified "
             "primes.")
CITE_UNITS = ("Norm-one units act on the upper half plane through the "
              "fixed embedding; the subgroup congruent to 1 modulo N at "
              "least 3 acts freely.")
CITE_CM = ("An order element with positive reduced norm and trd^2 < 4 nrd "
           "fixes a unique point of the upper half plane, and the fiber "
           "there is isogenous to a product of an elliptic curve with "
           "itself.")
CITE_RIEMANN = ("Some rational multiple of E(m1, m2) = trd(rho m1 conj(m2)) "
                "is a polarization of every fiber: integral on the lattice, "
                "compatible with the complex structure, and positive.")
CITE_COCYCLE = ("The factor of automorphy satisfies the cocycle identity "
                "a(g1 g2, x) = a(g1, g2 x) a(g2, x), so it glues the "
                "cotangent directions into a bundle on the quotient; its "
                "determinant (c tau + d)^-4 is the canonical factor.")
CITE_ISOGENY = ("For a norm-one unit gamma, the period lattice at "
                "gamma(tau) is (c tau + d)^-1 times the lattice at tau, so "
                "the fibers over equivalent points are isomorphic.")
CITE_ELLIPTIC_FAMILY = ("The fiber of the elliptic modular family also "
                        "never splits, by the same two-generator system "
                        "with determinant one.")


def _mpf_tol(cfg):
    return mpmath.mpf(cfg.tolerance.numerator) / cfg.tolerance.denominator


# ---------------------------------------------------------------------------
# command handlers: (args, cfg) -> (results, citations, ok)


def _cmd_algebra_check(args, cfg):
    params = cfg.algebra()
    ram = quaternions.ramified_primes(params)
    results = {
        "a": str(params.a),
        "b": str(params.b),
        "ramified": ram,
        "division": bool(ram),
        "indefinite": quaternions.hilbert_symbol(
            params.a, params.b, quaternions.INFINITE_PLACE) == 1,
    }
    return results, [CITE_ALGEBRA], True


def _basis_strings(order):
    return [[str(c) for c in row] for row in order.basis]


def _cmd_order_verify(args, cfg):
    order = cfg.build_order()
    ok, problems = orders.is_order(order)
    return ({"is_order": ok, "problems": problems,
             "basis": _basis_strings(order)}, [CITE_DISC], True)


def _cmd_order_disc(args, cfg):
    order = cfg.build_order()
    return ({"reduced_discriminant": str(orders.reduced_discriminant(order)),
             "basis": _basis_strings(order)}, [CITE_DISC], True)


def _cmd_order_maximal(args, cfg):
    order = cfg.build_order()
    ram = quaternions.ramified_primes(order.params)
    target = 1
    for p in ram:
        target *= p
    return ({"maximal": orders.is_maximal(order),
             "reduced_discriminant": str(orders.reduced_discriminant(order)),
             "target": str(target)}, [CITE_DISC], True)


def _cmd_order_saturate(args, cfg):
    params = cfg.algebra()
    if cfg.order_mode == "explicit":
        start = cfg.build_order()
    else:
        start = orders.standard_order(params)
    disc_before = orders.reduced_discriminant(start)
    result = orders.saturate(start)
    return ({"disc_before": str(disc_before),
             "disc_after": str(orders.reduced_discriminant(result)),
             "maximal": orders.is_maximal(result),
             "basis": _basis_strings(result)}, [CITE_DISC], True)


def _cmd_units(args, cfg):
    order = cfg.build_order()
    units = orders.enumerate_units(order, args.height)
    results = {"height": args.height, "count": len(units),
               "units": [{"coords": list(u.coords),
                          "elliptic": u.is_elliptic} for u in units]}
    if args.congruence is not None:
        kept = orders.congruence_filter(units, args.congruence, order)
        results["congruence"] = args.congruence
        results["kept"] = [list(u.coords) for u in kept]
        results["kept_count"] = len(kept)
    return results, [CITE_UNITS], True


def _quad_pair(q):
    return [str(q.u), str(q.v)]


def _cmd_cm_enumerate(args, cfg):
    order = cfg.build_order()
    window = None
    if args.window is not None:
        parts = args.window.split(",")
        if len(parts) != 4:
            raise ConfigError("--window takes re_min,re_max,im_min,im_max")
        window = tuple(mpmath.mpf(p) for p in parts)
    pts = cm_points.enumerate_cm_points(order, args.height, window,
                                        cfg.precision)
    entries = []
    for pt in pts:
        c2, c1, c0 = pt.tau.quad
        entries.append({
            "coords": list(pt.coords),
            "mu": [str(c) for c in pt.mu.coords()],
            "tau": complex_pair(pt.tau.tau),
            "tau_prime": complex_pair(pt.tau_prime),
            "char_poly": {"trd": str(pt.char_poly[0]),
                          "nrd": str(pt.char_poly[1])},
            "quadratic": {"sqrt": str(order.params.a),
                          "c2": _quad_pair(c2), "c1": _quad_pair(c1),
                          "c0": _quad_pair(c0)},
        })
    results = {"height": args.height, "count": len(pts), "points": entries}
    if window is not None:
        results["window"] = [mpmath.nstr(w, 10) for w in window]
    return results, [CITE_CM], True


def _cmd_fiber_h0(args, cfg):
    order = cfg.build_order()
    tau = parse_complex(args.tau)
    report = splitting.fiber_splitting_report(order, tau, cfg.precision,
                                              cfg.tolerance)
    results = report.as_dict()
    results["tau"] = complex_pair(tau)
    return results, [splitting.CITE_FIBER], True


def _cmd_curve_split(args, cfg):
    order = cfg.build_order()
    coords = _fraction_list(args.mu, 4)
    mu = quaternions.QuatElement(order.params, *coords)
    if not order.contains(mu):
        raise ComputationError("mu does not lie in the configured order")
    pt = cm_points.cm_point(mu, cfg.precision)
    report = splitting.curve_splitting_report(pt, cfg.precision, cfg.tolerance)
    results = report.as_dict()
    results["dphi"] = complex_pair(report.dphi_value)
    results["mu"] = [str(c) for c in pt.mu.coords()]
    results["tau"] = complex_pair(pt.tau.tau)
    results["tau_prime"] = complex_pair(pt.tau_prime)
    return results, [splitting.CITE_ELLIPTIC, CITE_CM], True


def _cmd_classify(args, cfg):
    report = splitting.classify_candidate(args.genus, args.in_fiber,
                                          args.degree, args.ramification,
                                          args.gc)
    return report.as_dict(), [report.certificate.get("citation", "")], True


def _suite_riemann(cfg, order, trials):
    pol = cfg.polarization(order)
    rng = random.Random(cfg.seed)
    tol = _mpf_tol(cfg)
    failures = []
    taus = [mpmath.mpc(0, 1)] + [family.random_tau(rng) for _ in range(trials)]
    for tau in taus:
        lattice = family.PeriodLattice(order, tau, cfg.precision)
        rep = family.riemann_conditions_check(lattice, pol, cfg.precision, tol)
        if not rep["all_pass"]:
            failures.append({"tau": complex_pair(tau),
                             "conditions": {k: v["pass"] for k, v in
                                            rep["conditions"].items()}})
    return {"trials": len(taus), "scale": str(pol.scale),
            "failures": failures}


def _suite_cocycle(cfg, order, trials):
    units = orders.enumerate_units(order, 1)
    rng = random.Random(cfg.seed + 1)
    failures = 0
    for _ in range(trials):
        g1 = family.random_group_element(order, units, rng)
        g2 = family.random_group_element(order, units, rng)
        tau = family.random_tau(rng)
        z = (mpmath.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)),
             mpmath.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)))
        if not family.cocycle_check(g1, g2, z, tau, cfg.precision):
            failures += 1
        if not family.canonical_degree_check(g1, z, tau, cfg.precision):
            failures += 1
    return {"trials": trials, "failures": failures}


def _suite_isogeny(cfg, order, trials):
    units = orders.enumerate_units(order, 1)
    rng = random.Random(cfg.seed + 2)
    tol = _mpf_tol(cfg)
    failures = 0
    for _ in range(trials):
        gamma = rng.choice([u.element for u in units])
        tau = family.random_tau(rng)
        if not family.isogeny_lattice_check(gamma, tau, order, cfg.precision,
                                            tol):
            failures += 1
    return {"trials": trials, "failures": failures}


_SUITES = {"riemann": (_suite_riemann, CITE_RIEMANN),
           "cocycle": (_suite_cocycle, CITE_COCYCLE),
           "isogeny": (_suite_isogeny, CITE_ISOGENY)}


def _cmd_suite(args, cfg):
    order = cfg.build_order()
    names = list(_SUITES) if args.name == "all" else [args.name]
    results = {"suites": {}}
    citations = []
    ok = True
    for name in names:
        run, cite = _SUITES[name]
        with mp.workprec(cfg.precision):
            out = run(cfg, order, args.trials)
        failed = out["failures"] if isinstance(out["failures"], int) \
            else len(out["failures"])
        out["pass"] = failed == 0
        ok = ok and failed == 0
        results["suites"][name] = out
        citations.append(cite)
    results["pass"] = ok
    return results, citations, ok


# ---------------------------------------------------------------------------
# parser and dispatch


def _add_common(p):
    p.add_argument("config", nargs="?", default=None,
                   help="configuration file (defaults to the built-in "
                        "(3,-1) example)")
    p.add_argument("--out", default=None,
                   help="write the JSON report to this file instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fakeelliptic",
        description="Modular families of fake elliptic curves: orders, "
                    "CM points, and splitting certificates.")
    sub = parser.add_subparsers(dest="group", required=True)

    algebra = sub.add_parser("algebra", help="local invariants of (a, b / Q)")
    asub = algebra.add_subparsers(dest="action", required=True)
    p = asub.add_parser("check", help="ramified primes and division test")
    p.set_defaults(handler=_cmd_algebra_check, command="algebra check")
    _add_common(p)

    order = sub.add_parser("order", help="order certification and saturation")
    osub = order.add_subparsers(dest="action", required=True)
    for name, handler, help_ in (
            ("verify", _cmd_order_verify, "check the order axioms"),
            ("disc", _cmd_order_disc, "reduced discriminant"),
            ("maximal", _cmd_order_maximal, "compare disc to the ramified product"),
            ("saturate", _cmd_order_saturate, "grow to a maximal order")):
        p = osub.add_parser(name, help=help_)
        p.set_defaults(handler=handler, command=f"order {name}")
        _add_common(p)

    p = sub.add_parser("units", help="norm-one units in a coordinate box")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--congruence", type=int, default=None,
                   help="keep units congruent to 1 modulo N")
    p.set_defaults(handler=_cmd_units, command="units")
    _add_common(p)

    cm = sub.add_parser("cm", help="CM points of elliptic order elements")
    csub = cm.add_subparsers(dest="action", required=True)
    p = csub.add_parser("enumerate", help="all CM points up to a height")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--window", default=None,
                   help="re_min,re_max,im_min,im_max rectangle filter")
    p.set_defaults(handler=_cmd_cm_enumerate, command="cm enumerate")
    _add_common(p)

    fiber = sub.add_parser("fiber", help="section space on a fiber")
    fsub = fiber.add_subparsers(dest="action", required=True)
    p = fsub.add_parser("h0", help="h^0 of the restricted cotangent bundle")
    p.add_argument("--tau", required=True, help='upper half plane point, e.g. "i" or "0.5+2i"')
    p.set_defaults(handler=_cmd_fiber_h0, command="fiber h0")
    _add_common(p)

    curve = sub.add_parser("curve", help="elliptic curves in fibers")
    cusub = curve.add_subparsers(dest="action", required=True)
    p = cusub.add_parser("split", help="splitting certificate for the curve of mu")
    p.add_argument("--mu", required=True,
                   help='order element "k,l,m,n" in (1,x,y,xy) coordinates')
    p.set_defaults(handler=_cmd_curve_split, command="curve split")
    _add_common(p)

    p = sub.add_parser("classify", help="verdict for a candidate submanifold")
    p.add_argument("--genus", type=int, default=None,
                   help="curve genus; omit for a surface candidate")
    p.add_argument("--in-fiber", action="store_true", dest="in_fiber")
    p.add_argument("--degree", type=int, default=0,
                   help="degree over the base curve")
    p.add_argument("--ramification", type=int, default=0,
                   help="total ramification degree over the base")
    p.add_argument("--gc", type=int, default=2, help="genus of the base curve")
    p.set_defaults(handler=_cmd_classify, command="classify")
    _add_common(p)

    p = sub.add_parser("suite", help="randomized property suites")
    p.add_argument("name", choices=["riemann", "cocycle", "isogeny", "all"])
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(handler=_cmd_suite, command="suite")
    _add_common(p)

    return parser


def _emit(report, out_path):
    text = json.dumps(report, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else default_config()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    inputs = {"config": cfg.as_dict()}
    for key in ("height", "congruence", "window", "tau", "mu", "genus",
                "in_fiber", "degree", "ramification", "gc", "name", "trials"):
        if hasattr(args, key) and getattr(args, key) is not None:
            inputs[key] = getattr(args, key)

    start = time.perf_counter()
    try:
        with mp.workprec(cfg.precision):
            results, citations, ok = args.handler(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"computation error: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - start

    command = args.command
    if command == "suite":
        command = f"suite {args.name}"
    report = {"schema": 1, "command": command, "inputs": inputs,
              "results": results, "citations": citations,
              "timings": {"seconds": round(elapsed, 6)}}
    _emit(report, args.out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
