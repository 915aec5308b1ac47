//! Numerical checks of the kernel theorems and of computed solutions.
//!
//! Scans return a [`VerifyReport`]; `pass` is decided by the tolerance
//! recorded in the report.

use crate::bounds::{
    check_bound_strictness, check_tau_monotonicity, check_two_sided_bound, interior_spot_points,
    STRICT_MARGIN,
};
use crate::error::{Error, Result};
use crate::fraccalc::{
    iterated_conf_diff, iterated_conf_diff_at_one, iterated_conf_diff_at_zero, ScalarFn,
};
use crate::greens::{g3_rightfocal_piece, g4_lidstone, Branch, Family, KernelSpec, TauSide};
use crate::grid::{interior, linspace, uniform_mesh};
use crate::problem::{BcPoint, Bvp};
use crate::report::{Location, VerifyReport, Worst};
use crate::solver::LinearSolution;

/// Residual points stay this far from both endpoints.
pub const INTERIOR_MARGIN: f64 = 0.05;
pub const RESIDUAL_TOL: f64 = 1e-4;
pub const BC_TOL: f64 = 1e-4;
/// Tolerance of closed-form identities (symmetry, seams, textbook kernels).
pub const KERNEL_TOL: f64 = 1e-12;
/// Tolerance of the non-strict one-sided kernel bounds.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// `sup |D^{orders} x - sign h|` over `points`, all inside
/// `[INTERIOR_MARGIN, 1 - INTERIOR_MARGIN]`.
pub fn verify_residual(
    x: impl Fn(f64) -> f64,
    h: impl Fn(f64) -> f64,
    bvp: &Bvp,
    points: &[f64],
    tol: f64,
) -> Result<VerifyReport> {
    if let Some(t) = points
        .iter()
        .find(|&&t| !(INTERIOR_MARGIN..=1.0 - INTERIOR_MARGIN).contains(&t))
    {
        return Err(Error::Configuration(format!(
            "residual point {t} outside [{INTERIOR_MARGIN}, {}]",
            1.0 - INTERIOR_MARGIN
        )));
    }
    let mut worst = Worst::new();
    for &t in points {
        let d = iterated_conf_diff(&x, &bvp.orders, t)?;
        worst.update((d - bvp.sign * h(t)).abs(), Location::At(t));
    }
    Ok(VerifyReport::from_worst("residual", worst, tol))
}

/// Default residual points: 19 equispaced points spanning the interior margin.
pub fn residual_points() -> Vec<f64> {
    linspace(INTERIOR_MARGIN, 1.0 - INTERIOR_MARGIN, 19)
}

fn level_value(x: &impl Fn(f64) -> f64, bvp: &Bvp, level: usize, point: BcPoint) -> Result<f64> {
    if level == 0 {
        return Ok(x(point.position()));
    }
    let orders = bvp.orders_to(level);
    match point {
        BcPoint::Left => iterated_conf_diff_at_zero(x, orders),
        BcPoint::Right => iterated_conf_diff_at_one(x, orders),
        BcPoint::Interior(t) => iterated_conf_diff(x, orders, t),
    }
}

/// Largest absolute value of the boundary functionals of `bvp` at `x`.
pub fn verify_bcs(x: impl Fn(f64) -> f64, bvp: &Bvp, tol: f64) -> Result<VerifyReport> {
    let mut worst = Worst::new();
    for cond in &bvp.conditions {
        let mut value = 0.0;
        for term in &cond.terms {
            value += term.coeff * level_value(&x, bvp, term.level, term.point)?;
        }
        let at = cond.terms.first().map_or(0.0, |t| t.point.position());
        worst.update(value.abs(), Location::At(at));
    }
    Ok(VerifyReport::from_worst("boundary_conditions", worst, tol))
}

fn scan(
    property: &str,
    ts: &[f64],
    ss: &[f64],
    tol: f64,
    mut violation: impl FnMut(f64, f64) -> f64,
) -> VerifyReport {
    let mut worst = Worst::new();
    for &s in ss {
        for &t in ts {
            worst.update(violation(t, s), Location::Grid(t, s));
        }
    }
    VerifyReport::from_worst(property, worst, tol)
}

/// Sign and column-maximum statements of the family's positivity theorem.
///
/// Strict positivity is scanned on the open square (on `(0, 1]^2` for the
/// third-order kernel) and reported with a negative tolerance; the
/// cantilever kernel is only claimed non-negative.
pub fn check_positivity(spec: &KernelSpec, grid: &[f64]) -> Vec<VerifyReport> {
    let open = interior(grid);
    let mut out = Vec::new();
    match spec.family() {
        Family::Cantilever4 => {
            let closed: Vec<f64> = grid.iter().copied().filter(|&t| t > 0.0).collect();
            out.push(scan("positivity", &closed, grid, POSITIVITY_TOL, |t, s| {
                -spec.eval(t, s)
            }));
            out.push(scan(
                "column_max_at_one",
                &closed,
                grid,
                POSITIVITY_TOL,
                |t, s| spec.eval(t, s) - spec.eval(1.0, s),
            ));
        }
        Family::RightFocal3 => {
            let tau = spec.tau().expect("third-order kernel has tau");
            let ts: Vec<f64> = grid.iter().copied().filter(|&t| t > 0.0).collect();
            out.push(scan("positivity", &ts, &ts, -f64::MIN_POSITIVE, |t, s| {
                -spec.eval(t, s)
            }));
            out.push(scan(
                "column_max_at_tau",
                &ts,
                grid,
                POSITIVITY_TOL,
                |t, s| spec.eval(t, s) - spec.eval(tau, s),
            ));
        }
        _ => out.push(scan(
            "positivity",
            &open,
            &open,
            -f64::MIN_POSITIVE,
            |t, s| -spec.eval(t, s),
        )),
    }
    out
}

/// `max |G(t,s) - G(s,t)|` for an arbitrary kernel.
pub fn check_symmetry(kernel: impl Fn(f64, f64) -> f64, grid: &[f64]) -> VerifyReport {
    scan("symmetry", grid, grid, KERNEL_TOL, |t, s| {
        (kernel(t, s) - kernel(s, t)).abs()
    })
}

pub fn check_symmetry_lidstone(alpha: f64, beta: f64, grid: &[f64]) -> VerifyReport {
    check_symmetry(|t, s| g4_lidstone(t, s, alpha, beta), grid)
}

/// Jumps of the kernel across `t = s` and, for the third-order kernel,
/// across `s = tau`.
pub fn check_seam_continuity(spec: &KernelSpec, grid: &[f64]) -> VerifyReport {
    let mut worst = Worst::new();
    for &t in grid {
        let jump = spec.eval_branch(t, t, Branch::Left) - spec.eval_branch(t, t, Branch::Right);
        worst.update(jump.abs(), Location::Grid(t, t));
    }
    if let KernelSpec::RightFocal3 {
        alpha, beta, tau, ..
    } = *spec
    {
        let (a, b) = (alpha.get(), beta.get());
        for &t in grid {
            let branch = Branch::of(t, tau);
            let below = g3_rightfocal_piece(t, tau, a, b, tau, TauSide::Below, branch);
            let above = g3_rightfocal_piece(t, tau, a, b, tau, TauSide::Above, branch);
            worst.update((below - above).abs(), Location::Grid(t, tau));
        }
    }
    VerifyReport::from_worst("seam_continuity", worst, KERNEL_TOL)
}

/// Textbook integer-order kernels.
pub mod classical {
    pub fn conjugate(t: f64, s: f64) -> f64 {
        if t <= s {
            t * (1.0 - s)
        } else {
            s * (1.0 - t)
        }
    }

    pub fn right_focal(t: f64, s: f64) -> f64 {
        t.min(s)
    }

    pub fn cantilever(t: f64, s: f64) -> f64 {
        if t <= s {
            t * t * s / 2.0 - t.powi(3) / 6.0
        } else {
            s * s * t / 2.0 - s.powi(3) / 6.0
        }
    }

    pub fn lidstone(t: f64, s: f64) -> f64 {
        let (t, s) = if t <= s { (t, s) } else { (s, t) };
        t * (1.0 - s) * (2.0 * s - s * s - t * t) / 6.0
    }
}

/// Deviation from the textbook kernel when every order is one.
pub fn check_classical_reduction(spec: &KernelSpec, grid: &[f64]) -> Result<VerifyReport> {
    if !spec.is_classical() {
        return Err(Error::Precondition(format!(
            "classical reduction needs all orders equal to 1, got {:?}",
            spec.orders().iter().map(|o| o.get()).collect::<Vec<_>>()
        )));
    }
    let textbook: fn(f64, f64) -> f64 = match spec.family() {
        Family::Conjugate2 => classical::conjugate,
        Family::RightFocal2 => classical::right_focal,
        Family::Cantilever4 => classical::cantilever,
        Family::Lidstone4 => classical::lidstone,
        other => {
            return Err(Error::UnsupportedFamily(format!(
                "no textbook kernel for {other}"
            )))
        }
    };
    Ok(scan(
        "classical_reduction",
        grid,
        grid,
        KERNEL_TOL,
        |t, s| (spec.eval(t, s) - textbook(t, s)).abs(),
    ))
}

/// Deliberate corruption of the suite's inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Solve with the negated kernel.
    SignFlip,
    /// Scale the computed solution by 1.01.
    PerturbSolution,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub grid_points: usize,
    pub tol: f64,
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            grid_points: 101,
            tol: RESIDUAL_TOL,
            fault: None,
        }
    }
}

/// Every check that applies to `spec`: kernel identities and bounds on a
/// uniform grid, then residual and boundary checks of the solution for `h`.
pub fn run_suite(
    spec: &KernelSpec,
    h: &ScalarFn,
    config: &SuiteConfig,
) -> Result<Vec<VerifyReport>> {
    if config.grid_points < 3 {
        return Err(Error::Configuration(format!(
            "grid of {} points is too coarse",
            config.grid_points
        )));
    }
    let grid = uniform_mesh(config.grid_points);
    let mut reports = Vec::new();
    match spec.family() {
        Family::Cantilever4 | Family::Lidstone4 => {}
        _ => {
            reports.push(check_two_sided_bound(spec, &grid)?);
            reports.push(check_bound_strictness(
                spec,
                &interior_spot_points(),
                STRICT_MARGIN,
            )?);
        }
    }
    if spec.tau().is_some() {
        reports.push(check_tau_monotonicity(spec, &grid)?);
    }
    reports.extend(check_positivity(spec, &grid));
    reports.push(check_seam_continuity(spec, &grid));
    if let KernelSpec::Lidstone { alpha, beta } = *spec {
        reports.push(check_symmetry_lidstone(alpha.get(), beta.get(), &grid));
    }
    if spec.is_classical() && !matches!(spec.family(), Family::Sl2 | Family::RightFocal3) {
        reports.push(check_classical_reduction(spec, &grid)?);
    }

    let bvp = spec.bvp();
    let solution = LinearSolution::new(*spec, h.as_fn());
    let scale = match config.fault {
        Some(Fault::SignFlip) => -1.0,
        Some(Fault::PerturbSolution) => 1.01,
        None => 1.0,
    };
    let x = |t: f64| scale * solution.eval(t);
    reports.push(verify_residual(
        x,
        h.as_fn(),
        &bvp,
        &residual_points(),
        config.tol,
    )?);
    reports.push(verify_bcs(x, &bvp, config.tol)?);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::Order;
    use crate::solver::LinearSolution;
    use approx::assert_abs_diff_eq;

    fn o(v: f64) -> Order {
        Order::new(v).unwrap()
    }

    #[test]
    fn classical_values() {
        assert_abs_diff_eq!(
            classical::cantilever(0.5, 1.0),
            0.125 - 1.0 / 48.0,
            epsilon = 1e-16
        );
        assert_abs_diff_eq!(classical::lidstone(0.5, 0.5), 1.0 / 48.0, epsilon = 1e-16);
        let spec = KernelSpec::conjugate(o(0.5), Order::ONE);
        assert!(matches!(
            check_classical_reduction(&spec, &[0.5]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn residual_of_classical_solution() {
        let spec = KernelSpec::conjugate(Order::ONE, Order::ONE);
        let bvp = spec.bvp();
        let x = LinearSolution::new(spec, |_| 1.0);
        let r = verify_residual(|t| x.eval(t), |_| 1.0, &bvp, &residual_points(), 1e-5).unwrap();
        assert!(r.pass, "{r}");
        let zero = verify_residual(|_| 0.0, |_| 0.0, &bvp, &residual_points(), 1e-5).unwrap();
        assert_eq!(zero.worst_magnitude, 0.0);
        let bent = verify_residual(
            |t| x.eval(t) + 0.01 * t * t,
            |_| 1.0,
            &bvp,
            &residual_points(),
            1e-5,
        )
        .unwrap();
        assert!(!bent.pass);
        assert!(matches!(
            verify_residual(|t| t, |_| 0.0, &bvp, &[0.01], 1e-5),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn boundary_functionals() {
        let a = o(0.6);
        let bvp = KernelSpec::right_focal2(a, o(0.8)).bvp();
        let r = verify_bcs(|t: f64| t.powf(0.6) / 0.6, &bvp, BC_TOL).unwrap();
        assert!(!r.pass);
        assert_abs_diff_eq!(r.worst_magnitude, 1.0, epsilon = 1e-6);
        assert_eq!(r.worst_location, Location::At(1.0));
        let zero = verify_bcs(|_| 0.0, &bvp, BC_TOL).unwrap();
        assert_eq!(zero.worst_magnitude, 0.0);
    }

    #[test]
    fn lidstone_symmetry_and_positivity() {
        let grid = uniform_mesh(101);
        assert!(check_symmetry_lidstone(1.0, 1.0, &grid).pass);
        assert!(check_symmetry_lidstone(0.5, 1.0, &grid).pass);
        let spec = KernelSpec::lidstone(Order::ONE, Order::ONE);
        assert!(check_positivity(&spec, &grid).iter().all(|r| r.pass));
    }

    #[test]
    fn third_order_positivity_threshold() {
        let grid = uniform_mesh(101);
        let good = KernelSpec::right_focal3(o(0.5), o(0.5), o(0.5), 0.5).unwrap();
        assert!(check_positivity(&good, &grid).iter().all(|r| r.pass));
        let bad = KernelSpec::right_focal3(Order::ONE, Order::ONE, Order::ONE, 0.4).unwrap();
        assert!(check_positivity(&bad, &grid).iter().any(|r| !r.pass));
    }
}
