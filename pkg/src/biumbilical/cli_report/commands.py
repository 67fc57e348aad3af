"""The verification and solver commands; each returns a Report."""
from __future__ import annotations

import math
from functools import partial

import numpy as np

from .. import closed_forms as cf
from .. import curvature as cv
from .. import envelope as ev
from .. import jets, pde
from ..geom_kernel import first_form, jet2_of
from ..grid import GridField
from .config import ConfigError, Scenario
from .mesh import build_mesh, validate_obj
from .report import Record, Report, dumps

MU_SAMPLES = (-1.0, 0.0, 1.0, 2.0, 0.5)


def params_of(sc: Scenario):
    try:
        return cf.SolutionParams(sc.a, sc.b, *sc.c)
    except ValueError as exc:
        raise ConfigError(f"invalid solution parameters: {exc}") from None


def _tol(sc, default):
    return default if sc.tol is None else sc.tol


def hypersurface_fn(params):
    """X(x, y, w): the compact closed form when b != 0, the envelope construction otherwise."""
    if params.b != 0.0:
        return partial(cf.hypersurface_X_compact, params)
    return partial(ev.envelope_map, partial(cf.sphere_l, params), partial(cf.r_general, params))


def _tampered_r(params, x, y):
    # one term off by a factor 1.01 in its argument: no longer a solution
    p = params
    return p.c0 + (p.c1 * jets.cos(1.01 * y) + p.c2 * jets.sin(y) + p.c3 * jets.sinh(x)) / jets.cosh(x)


def _sample(rng, sc, n):
    x = rng.uniform(*sc.x_range, n)
    y = rng.uniform(*sc.y_range, n)
    w = rng.uniform(*sc.w_range, n)
    return x, y, w


def _nmax(values):
    values = np.asarray(values, dtype=float)
    return float(np.max(values)) if values.size else math.nan


# -- pointwise shape checks ----------------------------------------------------


def shape_records(params, x, y, w, tol_eig=1e-8, tol_semi=1e-9, tol_angle=1e-6):
    """Type number, bi-umbilicity, semi-symmetry and nullity at regular sample points."""
    if params.b != 0.0:
        X_fn = hypersurface_fn(params)
        jet_at = lambda p: ev.hypersurface_jet(X_fn, *p)  # noqa: E731
    else:
        l_fn, r_fn = partial(cf.sphere_l, params), partial(cf.r_general, params)
        jet_at = lambda p: ev.envelope_hypersurface_jet(l_fn, r_fn, *p)  # noqa: E731
    zero, split, semi, angle, dims = [], [], [], [], []
    degenerate = 0
    for p in zip(x, y, w):
        jet = jet_at(p)
        try:
            s = ev.shape_data(jet)
        except ev.DegeneratePointError:
            degenerate += 1
            continue
        nu = np.abs(s.eigenvalues)
        zero.append(nu[2] / nu[0])
        split.append(abs(s.eigenvalues[0] - s.eigenvalues[1]) / nu[0])
        c = cv.AlgebraicCurvature.from_shape_data(s)
        semi.append(cv.semisymmetry_residual(c))
        nd = cv.nullity(c)
        dims.append(abs(nd.nullity_dim - 1))
        if nd.nullity_dim == 1:
            t = jet.d1.T @ nd.nullity_basis[0]
            ruling = jet.d1[2]
            t = t / np.linalg.norm(t)
            ruling = ruling / np.linalg.norm(ruling)
            angle.append(math.atan2(np.linalg.norm(t - (t @ ruling) * ruling), abs(t @ ruling)))
        else:
            angle.append(math.pi / 2)
    n = len(zero)
    records = [
        Record.below("type number two: |nu3| / |nu1|", "type-number", _nmax(zero), tol_eig, n),
        Record.below("bi-umbilical: |nu1 - nu2| / |nu1|", "bi-umbilical", _nmax(split), tol_eig, n),
        Record.below("semi-symmetry: |R(X,Y).R| / |R|^2", "semi-symmetry", _nmax(semi), tol_semi, n),
        Record.below("nullity dimension - 1", "nullity", _nmax(dims), 0.0, n),
        Record.below("nullity angle to w-ruling (rad)", "nullity", _nmax(angle), tol_angle, n),
    ]
    return records, degenerate


def cylinder_control():
    """The round cylinder S^1 x R^2 has type number one and must be rejected."""
    rep = ev.classify_point(ev.round_cylinder, 0.3, 0.7, 0.2)
    flagged = 0.0 if (rep.is_type_two or rep.is_biumbilical) else 1.0
    return Record.above("control: cylinder rejected", "type-number", flagged, 0.5, 1)


def generic_rank3_control(rng):
    """Distinct nonzero principal curvatures violate semi-symmetry by O(1)."""
    nu = rng.uniform(0.5, 1.5, 3) * np.array([1.0, -2.0, 3.0])
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    c = cv.AlgebraicCurvature(np.eye(3), Q @ np.diag(nu) @ Q.T)
    return Record.above("control: generic rank-3 semi-symmetry", "semi-symmetry", cv.semisymmetry_residual(c), 1e-2, 1)


# -- verify-closed-form ----------------------------------------------------------


def cmd_verify_closed_form(sc: Scenario) -> Report:
    params = params_of(sc)
    a, b = params.a, params.b
    rng = np.random.default_rng(sc.seed)
    n = sc.samples
    x, y, w = _sample(rng, sc, n)
    tol = _tol(sc, 1e-10)
    rep = Report("verify-closed-form", info={"params": [a, b, *params.coefficients], "seed": sc.seed})

    l_fn = partial(cf.sphere_l, params)
    r_fn = partial(_tampered_r, params) if sc.tamper else partial(cf.r_general, params)
    lj = jet2_of(l_fn, x, y)
    rep.add(Record.below("l-system: both vector equations and constraints", "l-system", pde.residual_l_system(lj).max_abs(), tol, n))
    Ej = pde.metric_from_l(lj)
    first, second = pde.residual_r_system(jet2_of(r_fn, x, y), Ej)
    r_res = max(np.max(np.abs(first)), np.max(np.abs(second)))
    rep.add(Record.below("r-system: both scalar equations", "r-system", r_res, tol, n))

    ff = first_form(lj)
    E_ref = a * a / np.cosh(x) ** 2
    iso = max(np.max(np.abs(ff.E / E_ref - 1)), np.max(np.abs(ff.G / E_ref - 1)), np.max(np.abs(ff.F) / E_ref))
    rep.add(Record.below("isothermal metric E = G = a^2 / cosh^2 x, F = 0", "isothermal-metric", iso, 1e-12, n))
    u = cf.param_change(x)
    fu = first_form(jet2_of(partial(cf.sphere_l_uv, params), u, y))
    G_ref = a * a * np.cos(u) ** 2
    uv = max(np.max(np.abs(fu.E / (a * a) - 1)), np.max(np.abs(fu.G / G_ref - 1)), np.max(np.abs(fu.F) / (a * a)))
    rep.add(Record.below("(u, v) metric E = a^2, G = a^2 cos^2 u, F = 0", "uv-metric", uv, 1e-12, n))

    hh, hform = [], []
    for k in range(n):
        pt = jet2_of(l_fn, x[k], y[k])
        pair = pde.householder_pair(pt)
        other = pt.value
        hh.append(
            max(
                np.max(np.abs(pair.A @ pair.A - np.eye(4))),
                np.max(np.abs(pair.B @ pair.B - np.eye(4))),
                abs(np.linalg.det(pair.A) + 1),
                abs(np.linalg.det(pair.B) + 1),
                np.max(np.abs(pair.A @ pt.d_u + pt.d_u)),
                np.max(np.abs(pair.A @ other - other)),
            )
        )
        hform.append(np.max(np.abs(pde.householder_form(pt))) / ff.E[k])
    rep.add(Record.below("Householder pair: A^2 = I, det A = -1, A l_u = -l_u", "householder", _nmax(hh), 1e-13, n))
    rep.add(Record.below("reflection form A l_uu - B l_vv / E", "householder-form", _nmax(hform), tol, n))

    K_ref = 1.0 + b * b / (a * a)
    K = cv.gauss_curvature_2d(cv.metric_jet(l_fn, x, y))
    rep.add(Record.below("intrinsic Gauss curvature vs 1 + b^2/a^2", "gauss-curvature", np.max(np.abs(K - K_ref)), 1e-8, n))
    rep.add(Record.below("Gauss curvature spread", "gauss-curvature", np.max(K) - np.min(K), 1e-8, n))

    d = cv.verify_derivative_formulas(l_fn, x, y)
    rep.add(Record.below("Gauss formulas for l_uu, l_uv, l_vv", "derivative-formulas", d.formula_residual, tol, n))
    rep.add(Record.below("Weingarten formulas n_u = -(c/E) l_u", "derivative-formulas", d.normal_residual, tol, n))
    rep.add(Record.below("c/E = -b/a", "derivative-formulas", np.max(np.abs(d.c_over_E + b / a)), tol, n))
    rep.add(Record.below("extrinsic K = 1 + (c/E)^2 vs 1 + b^2/a^2", "gauss-curvature", np.max(np.abs(d.extrinsic_K - K_ref)), 1e-8, n))
    if b != 0.0:
        rep.add(Record.below("n1 constant", "c0-nonzero-branch", d.n1_derivative, tol, n))
        rep.add(Record.below("d n2 = -sqrt(1 + c0^2) d l", "c0-nonzero-branch", d.n2_residual, tol, n))
    else:
        rep.add(Record.below("n constant", "c0-zero-branch", d.n_derivative, tol, n))

    pts = np.stack([x, y, w])
    if b != 0.0:
        Xe = cf.hypersurface_X_explicit(params, *pts)
        Xc = cf.hypersurface_X_compact(params, *pts)
        Xv = ev.envelope_map(l_fn, partial(cf.r_general, params), *pts)
        scale = np.maximum(1.0, np.linalg.norm(Xe, axis=0))
        rep.add(Record.below("explicit = compact form", "compact-form", np.max(np.linalg.norm(Xe - Xc, axis=0) / scale), 1e-11, n))
        rep.add(Record.below("explicit = envelope construction", "envelope-form", np.max(np.linalg.norm(Xe - Xv, axis=0) / scale), 1e-11, n))
    else:
        rep.info["explicit_forms"] = "skipped: b = 0, envelope construction only"

    shape, degenerate = shape_records(params, x, y, w)
    rep.extend(shape)
    rep.info["degenerate_points"] = degenerate
    rep.add(cylinder_control())

    fit = pde.verify_sphere_theorem(np.asarray(l_fn(x, y)))
    e4 = np.array([0.0, 0.0, 0.0, 1.0])
    fit_res = max(abs(fit.radius - a), abs(fit.hyperplane_offset - abs(b)), 1 - abs(fit.hyperplane_normal @ e4), fit.max_residual)
    rep.add(Record.below("sphere fit: radius a in hyperplane z4 = b", "sphere-fit", fit_res, 1e-10, n))
    return rep


# -- semi-symmetry and characteristic determinant ------------------------------------------


def cmd_check_semisymmetry(sc: Scenario) -> Report:
    params = params_of(sc)
    rng = np.random.default_rng(sc.seed)
    x, y, w = _sample(rng, sc, sc.samples)
    rep = Report("check-semisymmetry", info={"params": [params.a, params.b, *params.coefficients], "seed": sc.seed})
    shape, degenerate = shape_records(params, x, y, w, tol_semi=_tol(sc, 1e-9))
    rep.extend(r for r in shape if r.tag in ("semi-symmetry", "nullity"))
    rep.info["degenerate_points"] = degenerate
    rep.add(generic_rank3_control(rng))
    return rep


def cmd_char_poly(sc: Scenario) -> Report:
    """Householder identities and the characteristic determinant at random sphere jets."""
    params = params_of(sc)
    rng = np.random.default_rng(sc.seed)
    n = sc.samples
    x, y, _ = _sample(rng, sc, n)
    tol = _tol(sc, 1e-10)
    invol, dets, quartic, derived = [], [], [], []
    for k in range(n):
        pt = jet2_of(partial(cf.sphere_l, params), x[k], y[k])
        pair = pde.householder_pair(pt)
        invol.append(max(np.max(np.abs(pair.A @ pair.A - np.eye(4))), np.max(np.abs(pair.B @ pair.B - np.eye(4)))))
        dets.append(max(abs(np.linalg.det(pair.A) + 1), abs(np.linalg.det(pair.B) + 1)))
        for mu in MU_SAMPLES:
            value = pde.char_poly(pair, mu)
            quartic.append(abs(value - pde.quartic_char_poly(mu)))
            derived.append(abs(value - pde.reflection_char_poly(pt.d_u, pt.d_v, mu)))
    rep = Report("char-poly", info={"mu": list(MU_SAMPLES), "seed": sc.seed})
    rep.add(Record.below("A^2 = I, B^2 = I", "householder", _nmax(invol), 1e-13, n))
    rep.add(Record.below("det A = det B = -1", "householder", _nmax(dets), 1e-13, n))
    rep.add(Record.below("det(mu I + A^-1 B) = (mu + 1)^4", "char-poly-quartic", _nmax(quartic), tol, n))
    rep.add(Record.below("det(mu I + A^-1 B) = (mu + 1)^2 (mu^2 + 2 mu cos 2t + 1)", "char-poly-derived", _nmax(derived), tol, n))
    return rep


# -- solvers -------------------------------------------------------------------


def _write_field(path, field, extra=None):
    data = {"origin": list(field.origin), "hx": field.hx, "hy": field.hy, "shape": list(field.values.shape)}
    data.update(extra or {})
    data["values"] = field.values.ravel().tolist()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(data, indent=0).replace("\n", "") + "\n")


def observed_order(boundary, x_range, y_range, sizes):
    """Family-fit residual of the second-order field on refined grids and the observed orders."""
    res = []
    for m in sizes:
        sol = pde.solve_r_grid(boundary, x_range, y_range, m, m, correct=False)
        res.append(sol.fit_residual)
    orders = [math.log2(res[k] / res[k + 1]) for k in range(len(res) - 1)]
    return res, orders


def cmd_solve_r(sc: Scenario) -> Report:
    params = params_of(sc)
    nx, ny = sc.grid_size(33)
    boundary = partial(cf.r_general, params)
    sol = pde.solve_r_grid(boundary, sc.grid_x, sc.grid_y, nx, ny)
    err = max(abs(p - q) for p, q in zip(sol.coefficients, params.coefficients))
    m = min(nx, ny)
    sizes = ((m - 1) // 2 + 1, m, 2 * (m - 1) + 1)
    res, orders = observed_order(boundary, sc.grid_x, sc.grid_y, sizes)
    rep = Report("solve-r", info={"coefficients": list(sol.coefficients), "fit_residual": sol.fit_residual,
                                  "refinement_sizes": list(sizes), "refinement_residuals": res, "orders": orders})
    rep.add(Record.below("recovered c0..c3", "r-system", err, _tol(sc, 1e-5), nx * ny))
    rep.add(Record.below("|observed order - 2|", "r-system", max(abs(o - 2.0) for o in orders), 0.3, len(sizes)))
    if sc.field_out:
        _write_field(sc.field_out, sol.corrected, {"coefficients": list(sol.coefficients)})
    return rep


def cmd_solve_r_constructive(sc: Scenario) -> Report:
    params = params_of(sc)
    rng = np.random.default_rng(sc.seed)
    c4s = sc.c4_values if sc.c4_values is not None else tuple(rng.uniform(-2.0, 2.0, 5))
    results = [pde.solve_r_constructive(*params.coefficients, c4, sc.grid_x, sc.grid_y, sc.n_steps) for c4 in c4s]
    ref = results[0].field
    spread = max(float(np.max(np.abs(r.field.values - ref.values))) for r in results)
    X, Y = ref.mesh()
    exact = cf.r_general(params, X, Y)
    err = max(float(np.max(np.abs(r.field.values - exact))) for r in results)
    npts = ref.values.size
    rep = Report("solve-r-constructive", info={"c4_values": list(c4s), "step_error": max(r.step_error for r in results),
                                               "coefficients": list(results[0].coefficients)})
    rep.add(Record.below("independence of c4", "separation", spread, 1e-8, npts * len(c4s)))
    rep.add(Record.below("match with the closed-form r", "r-system", err, _tol(sc, 1e-7), npts * len(c4s)))
    if sc.field_out:
        _write_field(sc.field_out, ref, {"c4": results[0].c4})
    return rep


def random_rotation(rng):
    Q, R = np.linalg.qr(rng.normal(size=(4, 4)))
    return Q * np.sign(np.diag(R))


def cmd_solve_l(sc: Scenario) -> Report:
    params = params_of(sc)
    rng = np.random.default_rng(sc.seed)
    nx, ny = sc.grid_size(21)
    Q = random_rotation(rng) if sc.rotate else np.eye(4)

    def sphere(X, Y):
        return np.einsum("ab,b...->a...", Q, cf.sphere_l(params, X, Y))

    exact = GridField.sample(sphere, sc.grid_x, sc.grid_y, nx, ny)
    amp = sc.perturbation
    start = exact.with_values(exact.values + pde.smooth_perturbation(exact, amp, seed=sc.seed)) if amp > 0 else exact
    tol = _tol(sc, 1e-6 if amp > 0 else 1e-9)
    rep = Report("solve-l", info={"params": [params.a, params.b], "perturbation": amp, "rotated": sc.rotate, "seed": sc.seed})
    try:
        sol = pde.solve_l_gauss_newton(exact, start, max_iter=sc.max_iter, tol=tol, order=sc.stencil_order)
        report, field = sol.report, sol.field
    except pde.ConvergenceError as exc:
        report, field = exc.report, None
        rep.info["error"] = str(exc)
    hist = report.residual_history
    rep.info.update(iterations=report.iterations, residual_history=list(hist), step_history=list(report.step_history))
    last_step = report.step_history[-1] if report.step_history else math.inf
    rep.add(Record.below("Gauss-Newton final step", "l-system", last_step, tol, report.iterations))
    rise = max([0.0] + [b - a for a, b in zip(hist, hist[1:])])
    rep.add(Record.below("residual increase between accepted steps", "l-system", rise, 0.0, len(hist)))
    if field is None:
        return rep
    npts = nx * ny
    try:
        fit = pde.verify_sphere_theorem(field)
    except pde.FitAmbiguousError as exc:
        rep.info["fit_error"] = str(exc)
        rep.add(Record.below("sphere fit", "sphere-theorem", math.inf, 1e-4, npts))
        return rep
    rep.info.update(hyperplane_normal=fit.hyperplane_normal, hyperplane_offset=fit.hyperplane_offset,
                    center=fit.center, radius=fit.radius, fitted_curvature=fit.curvature)
    rep.add(Record.below("sphere/hyperplane fit residual", "sphere-theorem", fit.max_residual, 1e-4, npts))
    rep.add(Record.below("fitted radius - a", "sphere-theorem", abs(fit.radius - params.a), 1e-4, npts))
    target = Q[:, 3] * (1.0 if params.b >= 0 else -1.0)
    rep.add(Record.below("fitted normal vs Q e4", "equivariance", np.linalg.norm(fit.hyperplane_normal - target), 1e-6, npts))
    if sc.field_out:
        _write_field(sc.field_out, field, {"iterations": report.iterations})
    return rep


# -- mesh ----------------------------------------------------------------------


def cmd_mesh(sc: Scenario):
    """Returns (Report, OBJ text)."""
    params = params_of(sc)
    nx, ny = sc.grid_size(33)
    mesh = build_mesh(hypersurface_fn(params), sc.grid_x, sc.grid_y, nx, ny, sc.w_values, sc.projection)
    text = mesh.to_obj()
    summary = validate_obj(text)
    rep = Report("mesh", info={"vertices": summary.vertices, "faces": summary.faces, "rulings": summary.lines,
                               "vertices_per_slice": nx * ny, "slices": mesh.n_slices, "degenerate_points": mesh.degenerate})
    rep.add(Record.below("OBJ structure (0 = valid)", "mesh", 0.0 if summary.valid else 1.0, 0.0, summary.vertices))
    rep.add(Record.below("vertex count - slices * nx * ny", "mesh", abs(summary.vertices - mesh.n_slices * nx * ny), 0.0, 1))
    if mesh.n_slices >= 3:
        V = mesh.vertices.reshape(mesh.n_slices, nx * ny, 3)
        d = V[1:] - V[:-1]
        ws = np.diff(np.asarray(sc.w_values, dtype=float))
        slope = d / ws[:, None, None]
        dev = float(np.max(np.abs(slope - slope[0]))) / max(1.0, float(np.max(np.abs(slope))))
        rep.add(Record.below("rulings are straight (slope spread)", "ruling", dev, 1e-9, nx * ny))
    return rep, text
