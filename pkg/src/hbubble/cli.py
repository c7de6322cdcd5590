"""Command-line front end: verification suites, energies and reduced solves.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from . import energy, harmonic, kernels, quadrature, reduced_solver
from .bubbles import BubbleParams
from .errors import HBubbleError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# ---------------------------------------------------------------- serialization


def _num(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def to_json(obj, indent=0):
    """JSON with sorted keys and floats at 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(to_json(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in seq) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _num(obj)


def to_csv(rows):
    if not rows:
        return ""
    cols = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_cell(x) for x in v)
    return _num(v)


def emit(payload, rows, fmt, out):
    """Write ``rows`` as CSV or the whole ``payload`` as JSON."""
    text = to_csv(rows) if fmt == "csv" else to_json(payload) + "\n"
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        click.echo(f"cannot write {out}: {exc}", err=True)
        sys.exit(EXIT_USAGE)


def _threads():
    raw = os.environ.get("HBUBBLE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise click.UsageError("HBUBBLE_THREADS must be an integer") from None
    if n < 1:
        raise click.UsageError("HBUBBLE_THREADS must be at least 1")
    return n


def _floats(text, n=None):
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise click.BadParameter(f"expected {n} numbers, got {len(vals)}")
    return vals


def common(fn):
    fn = click.option("--seed", type=int, default=0, show_default=True, help="RNG seed.")(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                      show_default=True)(fn)
    return fn


def _fail_record(exc):
    return {"ok": False, "error": type(exc).__name__, "message": str(exc)}


# ---------------------------------------------------------------- commands


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file with per-command defaults; flags override it.")
@click.pass_context
def main(ctx, config):
    """Numerics for degree-2 H-bubbles on the unit disk."""
    if config:
        try:
            with open(config) as fh:
                ctx.default_map = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"bad config file: {exc}") from None


@main.command("verify-identities")
@click.option("--rel-tol", type=float, default=1e-7, show_default=True)
@click.option("--abs-tol", type=float, default=1e-10, show_default=True)
@click.option("--n-radial", type=int, default=200, show_default=True)
@click.option("--n-angular", type=int, default=256, show_default=True)
@common
def verify_identities(rel_tol, abs_tol, n_radial, n_angular, fmt, out, seed):
    """Plane integral identities against their exact values."""
    recs = quadrature.identity_suite(n_radial, n_angular)
    rows = [{"id": r.id, "exact": r.exact, "computed": r.computed, "abs_err": r.abs_err,
             "rel_err": r.rel_err, "nodes_used": r.nodes_used, "err_estimate": r.err_estimate,
             "ok": r.ok(rel_tol, abs_tol)} for r in recs]
    ok = all(r["ok"] for r in rows)
    emit({"ok": ok, "rows": rows}, rows, fmt, out)
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


def robin_rows(xis, threads=1):
    """Closed Robin table against spectral numerics at each xi."""
    keys = sorted(harmonic.robin_entries())
    jobs = [(i, key, xi) for i, xi in enumerate(xis) for key in keys]

    def run(job):
        i, (tag, comp, beta), xi = job
        closed = harmonic.robin_closed(tag, comp, beta, xi)
        num = harmonic.robin_numeric(tag, comp, beta, xi)
        order = sum(beta)
        tol = 1e-6 if order <= 2 else 1e-3
        rel = abs(num - closed) / max(abs(closed), 1.0)
        return {"sample": i, "tag": tag, "component": comp, "beta": f"{beta[0]},{beta[1]}",
                "order": order, "xi_x": xi[0], "xi_y": xi[1], "closed": closed, "numeric": num,
                "rel_err": rel, "tol": tol, "ok": rel <= tol}

    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(run, jobs))
    rows.sort(key=lambda r: (r["sample"], r["tag"], r["component"], r["beta"]))
    return rows


def random_xis(n, radius, seed):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    t = rng.uniform(0, 2 * np.pi, n)
    return [(float(a), float(b)) for a, b in zip(r * np.cos(t), r * np.sin(t))]


@main.command("verify-robin")
@click.option("--xi-samples", type=int, default=20, show_default=True)
@click.option("--radius", type=float, default=0.8, show_default=True)
@common
def verify_robin(xi_samples, radius, fmt, out, seed):
    """Closed-form Robin table against spectral extensions at random xi."""
    if not 0 < radius < 0.99:
        raise click.BadParameter("radius must lie in (0, 0.99)")
    rows = robin_rows(random_xis(xi_samples, radius, seed), _threads())
    ok = all(r["ok"] for r in rows)
    emit({"ok": ok, "rows": rows}, rows, fmt, out)
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


def kernel_rows(grid=30, extent=2.0, tol=1e-4):
    g = np.linspace(-extent, extent, grid)
    X, Y = np.meshgrid(g, g)
    rows = []
    for kid in kernels.KERNEL_IDS:
        res = kernels.linearized_apply(lambda x, y, kid=kid: kernels.kernel_eval(kid, x, y), X, Y)
        m = float(np.abs(res).max())
        rows.append({"kernel": f"Z{kid[0]},{kid[1]}", "max_residual": m, "tol": tol, "ok": m <= tol})
    for idx in (1, 2, 3):
        res = kernels.linearized_apply(lambda x, y, i=idx: kernels.extra_kernel_eval(i, x, y), X, Y)
        m = float(np.abs(res).max())
        rows.append({"kernel": f"extra{idx}", "max_residual": m, "tol": tol, "ok": m <= tol})
    return rows


def catalog_rows(n_points=100, seed=0, tol=1e-10, extent=2.0):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-extent, extent, n_points)
    y = rng.uniform(-extent, extent, n_points)
    rows = []
    for name in kernels.catalog_names():
        a = kernels.wedge_closed_form(name, x, y)
        b = kernels.wedge_reconstruct(name, x, y)
        err = float(np.abs(a - b).max())
        rows.append({"identity": name, "max_abs_err": err, "tol": tol, "ok": err <= tol})
    return rows


@main.command("verify-kernels")
@click.option("--grid", type=int, default=30, show_default=True)
@click.option("--tol", type=float, default=1e-4, show_default=True)
@click.option("--points", type=int, default=100, show_default=True)
@common
def verify_kernels(grid, tol, points, fmt, out, seed):
    """Kernel annihilation by the linearized operator and the wedge catalog."""
    krows = kernel_rows(grid, tol=tol)
    crows = catalog_rows(points, seed)
    ok = all(r["ok"] for r in krows + crows)
    emit({"ok": ok, "kernels": krows, "catalog": crows}, krows + crows, fmt, out)
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@main.command("energy")
@click.option("--mu", type=float, required=True)
@click.option("--xi", "xi_text", default="0,0", show_default=True, help="Center as x,y.")
@click.option("--eps", type=float, default=0.0, show_default=True)
@click.option("--omega", "omega_text", default=None, help="Datum center x,y (default xi).")
@common
def energy_cmd(mu, xi_text, eps, omega_text, fmt, out, seed):
    """Energy of the projected bubble, with the reduced energy when eps > 0."""
    xi = _floats(xi_text, 2)
    omega = _floats(omega_text, 2) if omega_text else xi
    try:
        prm = BubbleParams(mu, xi)
        br = energy.single_bubble_energy(prm, eps, omega)
        payload = {"ok": True, "breakdown": br.to_dict(), "mu": mu, "xi": list(xi), "eps": eps}
        if eps > 0:
            inp = energy.ReducedEnergyInputs(prm, omega, eps)
            payload["reduced"] = {"F": energy.reduced_energy_F(inp),
                                  "grad": energy.reduced_energy_grad(inp).tolist()}
    except HBubbleError as exc:
        rec = _fail_record(exc)
        emit(rec, [rec], fmt, out)
        sys.exit(EXIT_FAIL)
    emit(payload, [{**br.to_dict(), "mu": mu, "xi1": xi[0], "xi2": xi[1], "eps": eps}], fmt, out)
    sys.exit(EXIT_OK)


def solve_report(eps, rho, k, lam, tol, tilt=np.pi / 4, third=None):
    """Solve one reduced system; returns (ok, payload)."""
    state = reduced_solver.init_state(eps, rho, k, lam)
    box = reduced_solver.t_lambda_box(state)
    if k == 1:
        obj = reduced_solver.ReducedObjective.single(rho, eps, third=bool(third))
    else:
        cfg = reduced_solver.build_configuration(reduced_solver.ring_spheres(k, tilt))
        obj = reduced_solver.ReducedObjective.spheres(cfg, rho, eps, third=third is not False)
    payload = {"eps": eps, "rho": rho, "k": k, "lambda": lam, "tol": tol}
    A = energy.hessian_A(rho, eps)
    payload["A_eigenvalues"] = np.linalg.eigvalsh(A).tolist()
    try:
        rep = reduced_solver.newton_solve(obj, state, box, tol)
    except HBubbleError as exc:
        payload.update(_fail_record(exc))
        payload["converged"] = False
        return False, payload
    payload.update(rep.to_dict())
    payload["F"] = rep.value
    payload["grad"] = obj.grad(rep.state.flat).tolist()
    payload["inside_box"] = box.contains(rep.state.flat)
    payload["ok"] = rep.converged and payload["inside_box"]
    return payload["ok"], payload


@main.command("solve")
@click.option("--eps", type=float, default=1e-4, show_default=True)
@click.option("--rho", type=float, default=0.95, show_default=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--lambda", "lam", type=float, default=10.0, show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--tilt", type=float, default=np.pi / 4, show_default=True,
              help="Polar angle of the sphere centers from the south pole (k > 1).")
@click.option("--datum-third/--no-datum-third", default=None,
              help="Keep the -2 eps/|z-omega|^4 datum component (default: off for k = 1, on otherwise).")
@common
def solve_cmd(eps, rho, k, lam, tol, tilt, datum_third, fmt, out, seed):
    """Critical point of the reduced energy inside T_lambda."""
    try:
        ok, payload = solve_report(eps, rho, k, lam, tol, tilt, datum_third)
    except HBubbleError as exc:
        raise click.BadParameter(str(exc)) from None
    row = {key: payload.get(key) for key in ("converged", "iterations", "grad_norm", "F",
                                              "eps", "rho", "k", "lambda", "error")}
    emit(payload, [row], fmt, out)
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@main.command("asymptotics")
@click.option("--eps", type=float, default=1e-4, show_default=True)
@click.option("--rhos", "rhos_text", default="0.9,0.93,0.95", show_default=True)
@click.option("--lambda", "lam", type=float, default=10.0, show_default=True)
@common
def asymptotics_cmd(eps, rhos_text, lam, fmt, out, seed):
    """Deviation of the solved parameters from their main orders as rho -> 1."""
    rhos = _floats(rhos_text)
    try:
        rep = reduced_solver.asymptotics_run(eps, rhos, lam)
    except HBubbleError as exc:
        rec = _fail_record(exc)
        emit(rec, [rec], fmt, out)
        sys.exit(EXIT_FAIL)
    rows = [{**r, "mu_exponent": rep["mu_exponent"], "xi_exponent": rep["xi_exponent"]}
            for r in rep["rows"]]
    emit({"ok": True, **rep}, rows, fmt, out)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
