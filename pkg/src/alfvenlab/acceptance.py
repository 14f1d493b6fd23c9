"""The acceptance suite: one function per criterion, shared by CLI and tests.

Each criterion pins its tolerances here; the functions return a
CriterionResult with a pass flag and a human-readable detail line.  The
heavier sweeps (4-8) reuse a single set of solver runs where the criteria
share a sweep.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    TimeStepperConfig,
    evolve,
    linear_evolve,
    nonlinear_rhs,
)
from .errors import BlowUpError
from .experiments import (
    default_config,
    fit_power_law,
    large_data_config,
    nu_limit_config,
    run_single,
    sweep_interaction_vanishing,
    sweep_nu_limit,
    sweep_uniformity,
    uniformity_config,
)
from .functionals import WeightSpec, compute_report
from .oracle import direct_functional, fd_rhs, quad_q
from .spectral import (
    GridSpec,
    SpectralVectorField,
    dealias,
    l2_norm_sq,
    leray_project,
    scalar_gradient,
    transform_to_physical,
)
from .state import ElsasserState, make_initial_data

__all__ = ["CriterionResult", "run_criterion", "run_all", "CRITERIA"]


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    elapsed_s: float


def _result(index, name, passed, detail, t0) -> CriterionResult:
    return CriterionResult(index, name, bool(passed), detail,
                           time.perf_counter() - t0)


def _random_ball_limited_state(grid: GridSpec, seed: int, epsilon: float,
                               nu: float, scale: float = 0.5) -> ElsasserState:
    rng = np.random.default_rng(seed)
    fields = []
    for _ in range(2):
        phys = rng.standard_normal((grid.ndim,) + grid.dims)
        f = SpectralVectorField(grid, np.fft.fftn(phys, axes=range(1, grid.ndim + 1)))
        idx = (slice(None),) + (0,) * grid.ndim
        f.coeffs[idx] = 0.0
        f = dealias(leray_project(f))
        # normalize to a tame amplitude
        amp = float(np.max(np.abs(transform_to_physical(f))))
        fields.append((scale / amp) * f)
    return ElsasserState(fields[0], fields[1], 0.0, epsilon, nu)


# --------------------------------------------------------------------------
# criteria
# --------------------------------------------------------------------------

def criterion_1_structure_preservation() -> CriterionResult:
    """1000 RK4 steps on 128^2: divergence < 1e-10, norm drift < 1e-6."""
    t0 = time.perf_counter()
    cfg = default_config()
    grid = cfg.grid()
    lp0, lm0 = make_initial_data(cfg.init, grid)
    state = ElsasserState(lp0, lm0, 0.0, 0.2, 0.0)
    norms0 = (l2_norm_sq(lp0), l2_norm_sq(lm0))
    stepper = TimeStepperConfig(dt=0.01, t_end=10.0)
    final = evolve(state, stepper)
    div = final.max_divergence()
    drift_p = abs(l2_norm_sq(final.lambda_plus) - norms0[0]) / norms0[0]
    drift_m = abs(l2_norm_sq(final.lambda_minus) - norms0[1]) / norms0[1]
    passed = div < 1e-10 and drift_p < 1e-6 and drift_m < 1e-6
    detail = (f"max divergence {div:.3e} (tol 1e-10); norm drift "
              f"plus {drift_p:.3e}, minus {drift_m:.3e} (tol 1e-6)")
    return _result(1, "structure preservation over 1000 steps", passed, detail, t0)


def criterion_2_linear_propagator() -> CriterionResult:
    """Exact translation at integer-shift times; propagator group law."""
    t0 = time.perf_counter()
    cfg = default_config()
    grid = cfg.grid()
    lp0, lm0 = make_initial_data(cfg.init, grid)
    dx = grid.dx
    m = 8
    lp_t, lm_t = linear_evolve(lp0, lm0, m * dx, 0.2, 0.0)
    shift_err = 0.0
    for f0, ft, sgn in ((lp0, lp_t, +1), (lm0, lm_t, -1)):
        phys0 = transform_to_physical(f0)
        physt = transform_to_physical(ft)
        # f(x +- e1 t) on the grid is a circular shift by -+ m cells along x1
        shifted = np.roll(phys0, -sgn * m, axis=1)
        shift_err = max(shift_err, float(np.max(np.abs(physt - shifted))))

    t1, t2 = 1.37, 2.41
    a_p, a_m = linear_evolve(lp0, lm0, t1, 0.2, 0.1)
    ab_p, ab_m = linear_evolve(a_p, a_m, t2, 0.2, 0.1)
    c_p, c_m = linear_evolve(lp0, lm0, t1 + t2, 0.2, 0.1)
    group_err = max(float(np.max(np.abs(ab_p.coeffs - c_p.coeffs))),
                    float(np.max(np.abs(ab_m.coeffs - c_m.coeffs))))
    group_err /= max(lp0.max_abs_coeff(), lm0.max_abs_coeff())
    passed = shift_err < 1e-12 and group_err < 1e-13
    detail = (f"circular-shift error {shift_err:.3e} (tol 1e-12); "
              f"group-law error {group_err:.3e} (tol 1e-13)")
    return _result(2, "linear propagator exactness and group law", passed, detail, t0)


def criterion_3_pressure_projection_identity() -> CriterionResult:
    """Tendency minus grad p equals the Leray-projected tendency (10 states)."""
    t0 = time.perf_counter()
    grid = GridSpec((64, 64), 8.0)
    worst = 0.0
    for seed in range(10):
        state = _random_ball_limited_state(grid, seed, epsilon=0.3, nu=0.1)
        rep = nonlinear_rhs(state)
        # rebuild the pre-pressure tendency, then project it
        grad_p = scalar_gradient(grid, rep.pressure)
        tend_p = rep.rhs_plus + grad_p
        tend_m = rep.rhs_minus + grad_p
        proj_p = leray_project(tend_p)
        proj_m = leray_project(tend_m)
        scale = max(tend_p.max_abs_coeff(), tend_m.max_abs_coeff())
        err = max(float(np.max(np.abs(rep.rhs_plus.coeffs - proj_p.coeffs))),
                  float(np.max(np.abs(rep.rhs_minus.coeffs - proj_m.coeffs))))
        worst = max(worst, err / scale)
    passed = worst < 1e-11
    detail = f"max relative identity error over 10 states {worst:.3e} (tol 1e-11)"
    return _result(3, "pressure solve matches Leray projection", passed, detail, t0)


def _shared_default_sweep(cache={}):
    """Run the default epsilon sweep once; criteria 4, 5 and 6 share it."""
    if "records" not in cache:
        cfg = default_config()
        fit, records = sweep_interaction_vanishing(cfg)
        cache["cfg"] = cfg
        cache["fit"] = fit
        cache["records"] = records
    return cache["cfg"], cache["fit"], cache["records"]


def criterion_4_interaction_scaling() -> CriterionResult:
    """Error-functional exponent >= 0.8 with r^2 > 0.98 over the epsilon sweep."""
    t0 = time.perf_counter()
    _, fit, _ = _shared_default_sweep()
    passed = fit.exponent >= 0.8 and fit.r_squared > 0.98
    detail = (f"fitted exponent {fit.exponent:.3f} (need >= 0.8), "
              f"r^2 {fit.r_squared:.4f} (need > 0.98); points {fit.ys}")
    return _result(4, "nonlinear-interaction vanishing scaling", passed, detail, t0)


def criterion_5_ball_decay() -> CriterionResult:
    """Ball-sup exponent >= 0.45 (r^2 > 0.95) and vanishing linear part."""
    t0 = time.perf_counter()
    cfg, _, records = _shared_default_sweep()
    eps_values = [rec.epsilon for rec in records]
    ys = [rec.ball_sup_at(cfg.ball_time) for rec in records]
    fit = fit_power_law(eps_values, ys)
    linear_floor = max(rec.ball_linear_raw_at(cfg.ball_time) for rec in records)
    amp = max(rec.amplitude for rec in records)
    passed = (fit.exponent >= 0.45 and fit.r_squared > 0.95
              and linear_floor < 1e-12 * amp)
    detail = (f"fitted exponent {fit.exponent:.3f} (need >= 0.45), "
              f"r^2 {fit.r_squared:.4f} (need > 0.95); "
              f"linear-part ball sup {linear_floor:.3e} (tol {1e-12 * amp:.1e})")
    return _result(5, "compact-support ball decay scaling", passed, detail, t0)


def criterion_6_weighted_decay() -> CriterionResult:
    """Weighted sup bounded and flat in time for the epsilon = 0.2 run."""
    t0 = time.perf_counter()
    _, _, records = _shared_default_sweep()
    rec = next(r for r in records if abs(r.epsilon - 0.2) < 1e-12)
    sups_p = np.array([r.decay_sup_plus for r in rec.reports])
    sups_m = np.array([r.decay_sup_minus for r in rec.reports])
    ratio_p = float(sups_p.max() / sups_p.min())
    ratio_m = float(sups_m.max() / sups_m.min())
    bound = 10.0 * np.sqrt(rec.initial_energy)
    max_sup = float(max(sups_p.max(), sups_m.max()))
    n_samples = len(rec.reports)
    passed = (n_samples >= 50 and ratio_p <= 5.0 and ratio_m <= 5.0
              and max_sup <= bound)
    detail = (f"{n_samples} samples; max/min ratios plus {ratio_p:.2f}, "
              f"minus {ratio_m:.2f} (tol 5); max sup {max_sup:.3e} "
              f"vs 10*sqrt(E0) = {bound:.3e}")
    return _result(6, "characteristic-weighted pointwise decay", passed, detail, t0)


def criterion_7_nu_limit_scaling() -> CriterionResult:
    """nu-difference exponent 1.0 +- 0.15 with r^2 > 0.98."""
    t0 = time.perf_counter()
    cfg = nu_limit_config()
    fit, _, _, _ = sweep_nu_limit(cfg)
    passed = abs(fit.exponent - 1.0) <= 0.15 and fit.r_squared > 0.98
    detail = (f"fitted exponent {fit.exponent:.3f} (need 1.0 +- 0.15), "
              f"r^2 {fit.r_squared:.4f} (need > 0.98); points {fit.ys}")
    return _result(7, "non-dissipative limit scaling", passed, detail, t0)


def criterion_8_uniformity() -> CriterionResult:
    """Energy ratio bounded within a factor 10 across epsilon; no blow-up."""
    t0 = time.perf_counter()
    cfg = uniformity_config()
    ratios, records = sweep_uniformity(cfg)
    none_diverged = all(not rec.diverged for rec in records)
    spread = max(ratios.values()) / min(ratios.values()) if ratios else np.inf

    large_cfg = large_data_config()
    large_ok = True
    large_detail = []
    for eps in large_cfg.epsilon_list:
        rec = run_single(large_cfg, eps, large_cfg.nu_list[0])
        large_ok = large_ok and not rec.diverged
        large_detail.append(f"eps={eps:g}: A={rec.amplitude:.3g} "
                            + ("ok" if not rec.diverged else "DIVERGED"))
    passed = none_diverged and spread <= 10.0 and large_ok
    detail = (f"ratio spread {spread:.3f} (tol 10); ratios "
              + ", ".join(f"{e:g}: {r:.3f}" for e, r in sorted(ratios.items()))
              + "; large-data " + "; ".join(large_detail))
    return _result(8, "uniform-in-epsilon energy bound", passed, detail, t0)


def criterion_9_oracle_equivalence() -> CriterionResult:
    """Spectral-vs-FD order >= 1.8; functional oracle 1e-10; ghost table 1e-8."""
    t0 = time.perf_counter()

    # (a) FD/spectral right-hand-side convergence under dx halving
    errs = {}
    for n in (16, 32):
        grid = GridSpec((n, n), 8.0)
        x = grid.mesh
        # a smooth band-limited pair, identical continuum fields on both grids
        lp_phys = np.stack([np.sin(np.pi / 8 * x[0]) * np.cos(np.pi / 8 * x[1]),
                            -np.cos(np.pi / 8 * x[0]) * np.sin(np.pi / 8 * x[1])])
        lm_phys = np.stack([np.sin(np.pi / 4 * x[1]),
                            np.sin(np.pi / 4 * x[0])])
        lp = SpectralVectorField(grid, np.fft.fftn(lp_phys, axes=(1, 2)))
        lm = SpectralVectorField(grid, np.fft.fftn(lm_phys, axes=(1, 2)))
        state = ElsasserState(lp, lm, 0.0, 0.3, 0.2)
        rep = nonlinear_rhs(state)
        fd_p, fd_m = fd_rhs(lp_phys, lm_phys, grid, 0.3, 0.2)
        sp_p = transform_to_physical(rep.rhs_plus)
        sp_m = transform_to_physical(rep.rhs_minus)
        errs[n] = max(float(np.max(np.abs(sp_p - fd_p))),
                      float(np.max(np.abs(sp_m - fd_m))))
    order = np.log2(errs[16] / errs[32])

    # (b) functionals against the direct-sum oracle on a 32^2 fixture
    grid = GridSpec((32, 32), 8.0)
    spec = WeightSpec.create(0.6, 4)
    state = _random_ball_limited_state(grid, seed=7, epsilon=0.2, nu=0.3)
    rep = compute_report(state.lambda_plus, state.lambda_minus, 0.7, spec, 0.3)
    e_o, w_o, d_o = direct_functional(state.lambda_plus, state.lambda_minus,
                                      0.7, spec, 0.3, derivative="dft")
    rel = max(abs(rep.energy - e_o) / e_o, abs(rep.weighted - w_o) / w_o,
              abs(rep.dissipation - d_o) / d_o)

    # (c) ghost table against adaptive quadrature on 100 sample points
    ys = np.linspace(-30.0, 30.0, 100)
    q_err = max(abs(spec.ghost_q(float(y)) - quad_q(float(y), spec.s)) for y in ys)

    passed = order >= 1.8 and rel < 1e-10 and q_err < 1e-8
    detail = (f"FD/spectral order {order:.2f} (need >= 1.8); functional "
              f"oracle rel error {rel:.3e} (tol 1e-10); ghost table error "
              f"{q_err:.3e} (tol 1e-8)")
    return _result(9, "oracle equivalence", passed, detail, t0)


def criterion_10_ghost_weight_identity() -> CriterionResult:
    """(d_t -+ d_1) e^{q(sigma)} = -2 e^q <x1 -+ t>^{-2s}, O(h^2) in the FD check."""
    t0 = time.perf_counter()
    spec = WeightSpec.create(0.6, 4)

    def identity_error(h):
        x1 = np.linspace(-8.0, 8.0, 41)
        t = np.linspace(0.5, 8.0, 31)
        X, T = np.meshgrid(x1, t, indexing="ij")
        worst = 0.0
        for sgn in (+1, -1):
            def e_q(xx, tt):
                return np.exp(spec.ghost_q(sgn * xx - tt))

            lhs = ((e_q(X, T + h) - e_q(X, T - h)) / (2 * h)
                   - sgn * (e_q(X + h, T) - e_q(X - h, T)) / (2 * h))
            bracket = np.sqrt(1.0 + (sgn * X - T) ** 2)
            rhs = -2.0 * e_q(X, T) * bracket ** (-2 * spec.s)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    h = 0.02
    e_coarse = identity_error(h)
    e_fine = identity_error(h / 2)
    ratio = e_coarse / e_fine if e_fine > 0 else np.inf
    passed = e_fine < 1e-3 and 3.0 <= ratio <= 5.0
    detail = (f"error at h={h:g}: {e_coarse:.3e}; at h/2: {e_fine:.3e}; "
              f"refinement ratio {ratio:.2f} (expect ~4)")
    return _result(10, "ghost-weight transport identity", passed, detail, t0)


CRITERIA = [
    criterion_1_structure_preservation,
    criterion_2_linear_propagator,
    criterion_3_pressure_projection_identity,
    criterion_4_interaction_scaling,
    criterion_5_ball_decay,
    criterion_6_weighted_decay,
    criterion_7_nu_limit_scaling,
    criterion_8_uniformity,
    criterion_9_oracle_equivalence,
    criterion_10_ghost_weight_identity,
]


def run_criterion(index: int) -> CriterionResult:
    return CRITERIA[index - 1]()


def run_all(printer=None) -> list:
    """Execute every criterion, printing one pass/fail line each."""
    results = []
    for fn in CRITERIA:
        try:
            res = fn()
        except BlowUpError as exc:
            res = CriterionResult(CRITERIA.index(fn) + 1, fn.__name__, False,
                                  f"aborted: {exc}", 0.0)
        results.append(res)
        if printer is not None:
            status = "PASS" if res.passed else "FAIL"
            printer(f"[{status}] criterion {res.index}: {res.name} "
                    f"({res.elapsed_s:.1f}s) - {res.detail}")
    return results
