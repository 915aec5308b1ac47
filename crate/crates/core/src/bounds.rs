//! Lower envelopes, the third-order positivity threshold, and grid scans of
//! the two-sided kernel bounds.

use crate::error::{Error, Result};
use crate::fraccalc::pow0;
use crate::greens::{check_tau, BcCoeffs, KernelSpec};
use crate::report::{Location, VerifyReport, Worst};

/// Tolerance for the non-strict bound scans.
pub const BOUND_TOL: f64 = 1e-12;
/// Required gap for the strict inequalities at interior spot points.
pub const STRICT_MARGIN: f64 = 1e-9;

/// Envelope `g(t)` with `g(t) G(s,s) <= G(t,s)` for the separated-condition kernel.
pub fn envelope_g2(t: f64, alpha: f64, bc: &BcCoeffs) -> Result<f64> {
    let left_den = alpha * bc.delta_bc + bc.gamma_bc;
    let right_den = alpha * bc.zeta_bc + bc.eta_bc;
    if left_den <= 0.0 || right_den <= 0.0 {
        return Err(Error::Parameter(format!("degenerate envelope for {bc:?}")));
    }
    let ta = pow0(t, alpha);
    let left = (alpha * bc.delta_bc + bc.gamma_bc * ta) / left_den;
    let right = (alpha * bc.zeta_bc + bc.eta_bc * (1.0 - ta)) / right_den;
    Ok(left.min(right))
}

/// Envelope `g(t)` with `g(t) G(tau,s) <= G(t,s)` for the third-order kernel.
pub fn envelope_g3(t: f64, alpha: f64, beta: f64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let rise = pow0(t, alpha) * ((alpha + beta) * tau.powf(beta) - alpha * pow0(t, beta))
        / (beta * tau.powf(alpha + beta));
    Ok(rise.min((1.0 - t) / (1.0 - tau)))
}

/// `(a / (a + b))^(1/b)`; the third-order kernel is positive on `(0,1]^2`
/// exactly when `tau` exceeds it.
pub fn g3_positivity_threshold(alpha: f64, beta: f64) -> f64 {
    (alpha / (alpha + beta)).powf(1.0 / beta)
}

/// `k(s) = b s^(a+b) - (a+b) s^b + a`, strictly decreasing from `a` to `0`.
pub fn k_lidstone(s: f64, alpha: f64, beta: f64) -> f64 {
    beta * pow0(s, alpha + beta) - (alpha + beta) * pow0(s, beta) + alpha
}

/// The reference column value and lower envelope of a two-sided bound.
enum BoundShape {
    /// `g(t) G(s,s) <= G(t,s) <= G(s,s)`
    Diagonal { alpha: f64, bc: BcCoeffs },
    /// `g(t) G(tau,s) <= G(t,s) <= G(tau,s)` and `G >= 0`
    Tau { alpha: f64, beta: f64, tau: f64 },
}

impl BoundShape {
    fn of(spec: &KernelSpec) -> Result<Self> {
        match *spec {
            KernelSpec::SturmLiouville { alpha, bc, .. } => Ok(BoundShape::Diagonal {
                alpha: alpha.get(),
                bc,
            }),
            KernelSpec::Conjugate { alpha, .. } => Ok(BoundShape::Diagonal {
                alpha: alpha.get(),
                bc: BcCoeffs::CONJUGATE,
            }),
            KernelSpec::RightFocal2 { alpha, .. } => Ok(BoundShape::Diagonal {
                alpha: alpha.get(),
                bc: BcCoeffs::RIGHT_FOCAL,
            }),
            KernelSpec::RightFocal3 {
                alpha, beta, tau, ..
            } => Ok(BoundShape::Tau {
                alpha: alpha.get(),
                beta: beta.get(),
                tau,
            }),
            _ => Err(Error::UnsupportedFamily(format!(
                "{} has no two-sided bound; use check_positivity",
                spec.family()
            ))),
        }
    }

    fn envelope(&self, t: f64) -> Result<f64> {
        match self {
            BoundShape::Diagonal { alpha, bc } => envelope_g2(t, *alpha, bc),
            BoundShape::Tau { alpha, beta, tau } => envelope_g3(t, *alpha, *beta, *tau),
        }
    }

    fn peak(&self, spec: &KernelSpec, s: f64) -> f64 {
        match self {
            BoundShape::Diagonal { .. } => spec.eval(s, s),
            BoundShape::Tau { tau, .. } => spec.eval(*tau, s),
        }
    }
}

/// Scans `mesh x mesh` for the worst violation of the family's two-sided
/// bound (non-strict, tolerance [`BOUND_TOL`]). For the third-order kernel
/// the scan also asserts `G >= 0`, the content of the positivity theorem.
pub fn check_two_sided_bound(spec: &KernelSpec, mesh: &[f64]) -> Result<VerifyReport> {
    let shape = BoundShape::of(spec)?;
    let mut worst = Worst::new();
    for &s in mesh {
        let peak = shape.peak(spec, s);
        for &t in mesh {
            let g = spec.eval(t, s);
            let lower = shape.envelope(t)? * peak;
            let loc = Location::Grid(t, s);
            worst.update(lower - g, loc);
            worst.update(g - peak, loc);
            if let BoundShape::Tau { .. } = shape {
                worst.update(-g, loc);
            }
        }
    }
    Ok(VerifyReport::from_worst(
        "two_sided_bound",
        worst,
        BOUND_TOL,
    ))
}

/// 5 x 5 interior points used for the strict-inequality spot checks.
pub fn interior_spot_points() -> Vec<(f64, f64)> {
    let pts = [0.1, 0.3, 0.5, 0.7, 0.9];
    pts.iter()
        .flat_map(|&t| pts.iter().map(move |&s| (t, s)))
        .collect()
}

/// Strict parts of the bounds at the given points: `G(t,s) - g(t) G(s,s)`
/// for the second-order kernels and `G(t,s)` for the third-order kernel must
/// exceed `margin`.
pub fn check_bound_strictness(
    spec: &KernelSpec,
    points: &[(f64, f64)],
    margin: f64,
) -> Result<VerifyReport> {
    let shape = BoundShape::of(spec)?;
    let mut worst = Worst::new();
    for &(t, s) in points {
        let g = spec.eval(t, s);
        let gap = match shape {
            BoundShape::Diagonal { .. } => g - shape.envelope(t)? * shape.peak(spec, s),
            BoundShape::Tau { .. } => g,
        };
        worst.update(-gap, Location::Grid(t, s));
    }
    Ok(VerifyReport::from_worst("bound_strictness", worst, -margin))
}

/// Third-order kernel columns rise on `[0, tau]` and fall on `[tau, 1]`.
pub fn check_tau_monotonicity(spec: &KernelSpec, mesh: &[f64]) -> Result<VerifyReport> {
    let tau = spec
        .tau()
        .ok_or_else(|| Error::UnsupportedFamily(format!("{} has no tau", spec.family())))?;
    let mut ts: Vec<f64> = mesh.iter().copied().chain(std::iter::once(tau)).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut worst = Worst::new();
    for &s in mesh {
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let step = spec.eval(t1, s) - spec.eval(t0, s);
            if t1 <= tau {
                worst.update(-step, Location::Grid(t1, s));
            } else if t0 >= tau {
                worst.update(step, Location::Grid(t1, s));
            }
        }
    }
    Ok(VerifyReport::from_worst(
        "tau_monotonicity",
        worst,
        BOUND_TOL,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::Order;
    use crate::grid::uniform_mesh;
    use approx::assert_abs_diff_eq;

    fn o(v: f64) -> Order {
        Order::new(v).unwrap()
    }

    #[test]
    fn envelope_examples() {
        assert_abs_diff_eq!(
            envelope_g2(0.25, 1.0, &BcCoeffs::CONJUGATE).unwrap(),
            0.25,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            envelope_g2(0.49, 0.5, &BcCoeffs::RIGHT_FOCAL).unwrap(),
            0.7,
            epsilon = 1e-15
        );
        // t^a = 1: first ratio is 1, envelope is the second ratio
        let bc = BcCoeffs::new(1.0, 0.5, 2.0, 0.3).unwrap();
        let a = 0.6;
        let second = (a * 0.3) / (a * 0.3 + 2.0);
        assert_abs_diff_eq!(envelope_g2(1.0, a, &bc).unwrap(), second, epsilon = 1e-15);
        let degenerate = BcCoeffs::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(envelope_g2(0.5, 0.5, &degenerate).is_err());

        assert_abs_diff_eq!(
            envelope_g3(0.4, 0.7, 0.5, 0.4).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_eq!(envelope_g3(1.0, 0.7, 0.5, 0.8).unwrap(), 0.0);
        assert_abs_diff_eq!(
            envelope_g3(0.5, 1.0, 1.0, 0.75).unwrap(),
            0.5 / 0.5625,
            epsilon = 1e-15
        );
        assert!(envelope_g3(0.5, 1.0, 1.0, 1.2).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert_abs_diff_eq!(g3_positivity_threshold(1.0, 1.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g3_positivity_threshold(0.5, 0.5), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(
            g3_positivity_threshold(0.9, 0.1),
            0.3486784401,
            epsilon = 1e-12
        );
    }

    #[test]
    fn k_examples() {
        assert_eq!(k_lidstone(0.0, 0.4, 0.7), 0.4);
        assert_abs_diff_eq!(k_lidstone(1.0, 0.4, 0.7), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k_lidstone(0.5, 1.0, 1.0), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn two_sided_scans() {
        let mesh = uniform_mesh(101);
        let conj = KernelSpec::conjugate(Order::ONE, Order::ONE);
        let r = check_two_sided_bound(&conj, &mesh).unwrap();
        assert!(r.pass, "{r}");
        assert!(r.worst_magnitude <= 0.0);

        let rf3 = KernelSpec::right_focal3(Order::ONE, Order::ONE, Order::ONE, 0.75).unwrap();
        assert!(check_two_sided_bound(&rf3, &mesh).unwrap().pass);
        assert!(check_tau_monotonicity(&rf3, &mesh).unwrap().pass);

        let low = KernelSpec::right_focal3(Order::ONE, Order::ONE, Order::ONE, 0.4).unwrap();
        let r = check_two_sided_bound(&low, &mesh).unwrap();
        assert!(!r.pass);
        // u3(1, 0.4) = (0.8 - 1) / 2
        assert!(r.worst_magnitude >= 0.1 - 1e-12, "{r}");

        let cant = KernelSpec::cantilever(o(0.5), o(0.5), o(0.5), o(0.5));
        assert!(matches!(
            check_two_sided_bound(&cant, &mesh),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn strictness_spot_points() {
        let spec =
            KernelSpec::sl2(o(0.6), o(0.8), BcCoeffs::new(1.0, 0.5, 0.7, 0.2).unwrap()).unwrap();
        let r = check_bound_strictness(&spec, &interior_spot_points(), STRICT_MARGIN).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(interior_spot_points().len(), 25);
    }
}
