"""Command-line front end: node and matrix dumps, table reproduction, solves."""

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import birkhoff, colloc, evolve, lacore
from .diffmat import dtilde_first, dtilde_second, psdm
from .gridgen import ConvergenceError, make_nodes
from .problems import REGISTRY, get_problem

LOBATTO = ("lgl", "cgl")
RADAU = ("lgr", "cgr")
FAMILY_OF = {"lgl": "legendre", "lgr": "legendre", "cgl": "chebyshev", "cgr": "chebyshev"}

# condition numbers and errors of the prior integration-preconditioned scheme,
# shown for comparison next to table 1; not recomputed here
TABLE1_REFERENCE = {
    "legendre": {64: (37.2, 9.99e-16), 128: (75.5, 1.33e-15), 256: (146, 2.55e-15),
                 512: (292, 3.11e-15), 1024: (582, 6.81e-15)},
    "chebyshev": {64: (37.3, 9.99e-16), 128: (73.7, 1.78e-15), 256: (146, 2.99e-15),
                  512: (292, 3.89e-15), 1024: (583, 7.44e-15)},
}

TABLE_NS = {
    1: (64, 128, 256, 512, 1024),
    2: (32, 64, 128, 256, 512, 1024),
    3: (32, 64, 128, 256, 512, 1024),
    4: (128, 256, 512, 1024),
}


class UsageError(Exception):
    pass


def fmt(v):
    """Shortest round-trip decimal; empty for missing values."""
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def write_csv(path, header, rows):
    fh = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _nodes(family, n):
    try:
        return make_nodes(family, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_nodes(args):
    ns = _nodes(args.family, args.n)
    write_csv(args.out, ["index", "node", "weight"],
              ((j, x, w) for j, (x, w) in enumerate(zip(ns.nodes, ns.weights))))


def _variant(name):
    table = {
        "dirichlet": birkhoff.dirichlet(),
        "mixed": birkhoff.mixed(1.0, -1.0, 1.0, 1.0),
        "neumann": birkhoff.neumann(),
        "radau": birkhoff.radau(),
        "odd3": birkhoff.odd_order(3),
        "odd5": birkhoff.odd_order(5),
    }
    return table[name]


def _matrix(args):
    ns = _nodes(args.family, args.n)
    what = args.what
    if what in ("d", "d2", "dtilde2", "dtilde1"):
        k = 2 if what in ("d2", "dtilde2") else 1
        d = psdm(ns, k)
        if what == "dtilde2":
            return ns, None, dtilde_second(d)
        if what == "dtilde1":
            return ns, None, dtilde_first(d)
        return ns, None, d.full
    try:
        psim = birkhoff.build_psim(ns, _variant(args.bc))
    except (birkhoff.PsimError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    return ns, psim, psim.B if what == "b" else psim.B1


def cmd_matrix(args):
    try:
        ns, psim, M = _matrix(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.verify:
        if psim is None or args.what != "b":
            raise UsageError("--verify needs --what b")
        print(f"max|Dtilde B - I| = {fmt(_verify_inverse(ns, psim))}", file=sys.stderr)
    write_csv(args.out, None, M)


def _verify_inverse(ns, psim):
    if psim.variant.kind == "dirichlet":
        P = dtilde_second(psdm(ns, 2)) @ psim.B
    elif psim.variant.kind == "radau":
        P = dtilde_first(psdm(ns, 1)) @ psim.B
    else:
        # general case: the highest derivative of the basis at interior nodes
        Bp = psim.derivative(psim.order)
        return float(np.abs(psim.block(Bp) - np.eye(psim.interior_rows.size)).max())
    return float(np.abs(P - np.eye(P.shape[0])).max())


def table_rows(which, quick=False):
    """Header and rows for one of the four condition-number tables."""
    Ns = TABLE_NS[which]
    if quick:
        Ns = tuple(n for n in Ns if n <= 512)
    fams = ("chebyshev", "legendre")
    rows = []
    if which == 1:
        header = ["family", "N", "lcol_cond", "lcol_err", "reference_cond", "reference_err",
                  "bcol_cond", "bcol_err", "plcol_cond", "plcol_err"]
        p = get_problem("gauss-bvp")
        for fam in ("legendre", "chebyshev"):
            for N in Ns:
                res = [colloc.solve(p, s, fam, N) for s in ("lcol", "bcol", "plcol")]
                ref = TABLE1_REFERENCE[fam][N]
                rows.append([fam, N, res[0].cond2, res[0].max_error, float(ref[0]), ref[1],
                             res[1].cond2, res[1].max_error, res[2].cond2, res[2].max_error])
        return header, rows
    if which in (2, 3):
        pids = ("mixed-s", "mixed-rs") if which == 2 else ("ivp-const", "ivp-cubic")
        header = ["problem", "family", "N", "bcol_cond", "lcol_cond", "bcol_err", "lcol_err"]
        for pid in pids:
            p = get_problem(pid)
            for fam in fams:
                for N in Ns:
                    b = colloc.solve(p, "bcol", fam, N)
                    l = colloc.solve(p, "lcol", fam, N)
                    rows.append([pid, fam, N, b.cond2, l.cond2, b.max_error, l.max_error])
        return header, rows
    if which == 4:
        pids = ("third-t", "third-st", "third-rt", "third-rst")
        header = ["N"] + [f"{pid}_cond" for pid in pids]
        for N in Ns:
            rows.append([N] + [colloc.solve(get_problem(pid), "bcol", "chebyshev", N).cond2
                               for pid in pids])
        return header, rows
    raise UsageError(f"no table {which}")


def cmd_table(args):
    header, rows = table_rows(args.which, quick=args.quick)
    write_csv(args.out, header, rows)


def cmd_solve(args):
    try:
        p = get_problem(args.problem)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    if p.kind == "poisson2d":
        raise UsageError("use the poisson2d command for two-dimensional problems")
    family = FAMILY_OF.get(args.family, args.family)
    try:
        rep = colloc.solve(p, args.scheme, family, args.n, compute_cond=not args.no_cond)
    except (colloc.SchemeError, birkhoff.PsimError) as exc:
        raise UsageError(str(exc)) from None
    exact = p.exact(rep.x) if p.exact is not None else None
    rows = []
    for j, (x, u) in enumerate(zip(rep.x, rep.u)):
        e = None if exact is None else exact[j]
        rows.append([x, u, e, None if e is None else abs(u - e)])
    write_csv(args.out, ["x", "u", "u_exact", "abs_err"], rows)
    report = rep.to_dict()
    report["problem"] = p.id
    if args.report:
        write_json(args.report, report)
    else:
        print(json.dumps(report, sort_keys=True), file=sys.stderr)


def cmd_kdv(args):
    make = evolve.kdv3_config if args.order == 3 else evolve.kdv5_config
    overrides = {k: getattr(args, k) for k in ("N", "L", "tau", "x0", "kappa", "gamma", "nu", "mu", "eta0")
                 if getattr(args, k) is not None}
    try:
        cfg = make(**overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    every = args.every if args.every else args.t_end
    marks = np.arange(0.0, args.t_end + 0.5 * every, every) if every > 0 else (0.0,)
    run = evolve.kdv_run(cfg, args.t_end, record_at=tuple(marks))
    write_csv(args.errors, ["t", "max_error"], zip(run.times, run.errors))
    if args.snapshots:
        header = ["t"] + [f"x{j}" for j in range(run.xi.size)]
        write_csv(args.snapshots, header, ([t, *row] for t, row in zip(run.times, run.snapshots)))


def cmd_poisson2d(args):
    p = get_problem(args.problem)
    if p.kind != "poisson2d":
        raise UsageError(f"{p.id} is not a two-dimensional problem")
    if args.gamma < 0:
        raise UsageError("gamma must be non-negative")
    ns = _nodes("lgl", args.n)
    f = colloc.poisson2d_forcing(p, args.gamma)
    res = colloc.solve_poisson2d(args.gamma, f, ns)
    X = ns.nodes
    err = float(np.abs(res.U - p.exact(X[:, None], X[None, :])).max())
    report = {"schema": 1, "problem": p.id, "N": args.n, "gamma": args.gamma, "max_error": err}
    if args.verify:
        dense = colloc.solve_poisson2d_dense(args.gamma, f, ns)
        report["oracle_diff"] = float(np.abs(dense.U - res.U).max())
    if args.out:
        rows = ((X[i], X[j], res.U[i, j]) for i in range(X.size) for j in range(X.size))
        write_csv(args.out, ["x", "y", "u"], rows)
    write_json(args.report, report)


def build_parser():
    ap = argparse.ArgumentParser(prog="psimcol", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("nodes", help="dump quadrature nodes and weights")
    s.add_argument("--family", choices=LOBATTO + RADAU, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_nodes)

    s = sub.add_parser("matrix", help="dump a differentiation or integration matrix")
    s.add_argument("--what", choices=("d", "d2", "dtilde1", "dtilde2", "b", "b1"), required=True)
    s.add_argument("--family", choices=LOBATTO + RADAU, required=True)
    s.add_argument("--bc", choices=("dirichlet", "mixed", "neumann", "radau", "odd3", "odd5"),
                   default="dirichlet")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--verify", action="store_true", help="print the inverse-identity residual")
    s.add_argument("--out")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("table", help="regenerate a condition-number table")
    s.add_argument("which", type=int, choices=(1, 2, 3, 4))
    s.add_argument("--quick", action="store_true", help="skip N = 1024")
    s.add_argument("--out")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("solve", help="solve a registry problem")
    s.add_argument("problem", help=f"one of: {', '.join(sorted(REGISTRY))}")
    s.add_argument("--scheme", choices=colloc.SCHEMES, default="bcol")
    s.add_argument("--family", choices=("legendre", "chebyshev") + LOBATTO + RADAU, default="legendre")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--no-cond", action="store_true", help="skip the SVD condition number")
    s.add_argument("--out")
    s.add_argument("--report", help="JSON report path (default: stderr)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("kdv", help="soliton run for the third- or fifth-order KdV equation")
    s.add_argument("--order", type=int, choices=(3, 5), default=3)
    s.add_argument("--t-end", type=float, default=1.0)
    s.add_argument("--every", type=float, default=0.0, help="snapshot spacing in time")
    for name, typ in (("N", int), ("L", float), ("tau", float), ("x0", float), ("kappa", float),
                      ("gamma", float), ("nu", float), ("mu", float), ("eta0", float)):
        s.add_argument(f"--{name.lower() if name != 'N' else 'n'}", dest=name, type=typ)
    s.add_argument("--errors", help="error series CSV (default: stdout)")
    s.add_argument("--snapshots", help="snapshot CSV")
    s.set_defaults(func=cmd_kdv)

    s = sub.add_parser("poisson2d", help="2D Dirichlet problem by partial diagonalization")
    s.add_argument("--problem", default="poisson2d-sin4pi")
    s.add_argument("--n", type=int, default=48)
    s.add_argument("--gamma", type=float, default=0.0)
    s.add_argument("--verify", action="store_true", help="compare with the dense Kronecker solve")
    s.add_argument("--out", help="grid CSV")
    s.add_argument("--report", help="JSON report path (default: stdout)")
    s.set_defaults(func=cmd_poisson2d)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        args.func(args)
    except UsageError as exc:
        print(f"psimcol: error: {exc}", file=sys.stderr)
        return 2
    except (np.linalg.LinAlgError, ConvergenceError, evolve.BlowupError, lacore.ComplexSpectrumError) as exc:
        print(f"psimcol: numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"psimcol: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 1
    if args.cmd == "table":
        print(f"done in {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 0
