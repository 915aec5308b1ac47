//! Solutions through the kernel integral operator, the explicit three-point
//! formula, Picard iteration for nonlinear forcing, and a kernel-free oracle.

mod oracle;

pub use oracle::{oracle_direct, DirectOracle};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fraccalc::{conf_integral, pow0, Order, ScalarFn};
use crate::greens::KernelSpec;
use crate::grid::GridFunction;
use crate::problem::{BcPoint, BoundaryCondition, Bvp};
use crate::quadrature::QuadratureRule;

/// Mesh size used when the caller does not choose one.
pub const DEFAULT_MESH: usize = 257;
/// Picard iterates beyond this sup-norm count as divergent.
pub const DIVERGENCE_BOUND: f64 = 1e6;

/// `x(t) = int_0^1 G(t,s) h(s) s^(w-1) ds`, evaluable at any `t` in `[0, 1]`.
///
/// The `s`-integral is split at the kernel seams and at `extra_breaks`, and
/// each piece is integrated in `u = s^w`.
#[derive(Clone)]
pub struct LinearSolution<H> {
    spec: KernelSpec,
    h: H,
    rule: QuadratureRule,
    extra_breaks: Vec<f64>,
}

impl<H: Fn(f64) -> f64> LinearSolution<H> {
    pub fn new(spec: KernelSpec, h: H) -> Self {
        Self {
            spec,
            h,
            rule: QuadratureRule::default(),
            extra_breaks: Vec::new(),
        }
    }

    /// Additional `s`-breakpoints where `h` is only piecewise smooth.
    pub fn with_breaks(mut self, breaks: &[f64]) -> Self {
        self.extra_breaks = breaks.to_vec();
        self
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn eval(&self, t: f64) -> f64 {
        let w = self.spec.weight_order().get();
        let inv = 1.0 / w;
        let breaks: Vec<f64> = self
            .spec
            .seams(t)
            .into_iter()
            .chain(self.extra_breaks.iter().copied())
            .map(|s| pow0(s, w))
            .collect();
        let integrand = |u: f64| {
            let s = pow0(u, inv);
            self.spec.eval(t, s) * (self.h)(s)
        };
        self.rule
            .integrate_with_breaks(integrand, 0.0, 1.0, &breaks)
            * inv
    }

    pub fn sample(&self, mesh: &[f64]) -> Result<GridFunction> {
        let values = mesh.iter().map(|&t| self.eval(t)).collect::<Vec<_>>();
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite solution at t = {}",
                mesh[k]
            )));
        }
        GridFunction::new(mesh.to_vec(), values)
    }
}

fn check_mesh(mesh: &[f64]) -> Result<()> {
    if let Some(t) = mesh.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::Domain(format!("mesh point {t} outside [0, 1]")));
    }
    Ok(())
}

/// Samples the kernel representation of the solution on `mesh`.
pub fn solve_linear(spec: &KernelSpec, h: &ScalarFn, mesh: &[f64]) -> Result<GridFunction> {
    check_mesh(mesh)?;
    LinearSolution::new(*spec, h.as_fn()).sample(mesh)
}

/// `delta x(eta) = x(1)` together with `x(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePointParams {
    pub delta_3p: f64,
    pub eta_3p: f64,
}

impl ThreePointParams {
    /// Requires `eta` in `(0, 1)` and `0 <= delta eta^alpha < 1`.
    pub fn new(delta_3p: f64, eta_3p: f64, alpha: Order) -> Result<Self> {
        if !(eta_3p > 0.0 && eta_3p < 1.0) {
            return Err(Error::Parameter(format!("eta = {eta_3p} outside (0, 1)")));
        }
        let q = delta_3p * eta_3p.powf(alpha.get());
        if !(0.0..1.0).contains(&q) {
            return Err(Error::Parameter(format!(
                "delta eta^alpha = {q} outside [0, 1)"
            )));
        }
        Ok(Self { delta_3p, eta_3p })
    }

    /// The problem `-D^b D^a x = h` with these conditions.
    pub fn bvp(&self, alpha: Order, beta: Order) -> Bvp {
        let conditions = vec![
            BoundaryCondition::point("x(0)", 0, BcPoint::Left),
            BoundaryCondition::new("delta x(eta) - x(1)")
                .term(self.delta_3p, 0, BcPoint::Interior(self.eta_3p))
                .term(-1.0, 0, BcPoint::Right),
        ];
        Bvp::new(vec![alpha, beta], -1.0, conditions)
            .expect("three-point conditions are well formed")
    }
}

/// Explicit solution of `-D^b D^a x = h`, `x(0) = 0`, `delta x(eta) = x(1)`,
/// evaluable at any `t` in `[0, 1]`.
pub struct ThreePointSolution<H> {
    h: H,
    alpha: f64,
    beta: Order,
    params: ThreePointParams,
    /// Coefficient of `t^a / a` collected from the two global integrals.
    slope: f64,
    rule: QuadratureRule,
}

impl<H: Fn(f64) -> f64> ThreePointSolution<H> {
    pub fn new(h: H, alpha: Order, beta: Order, params: ThreePointParams) -> Result<Self> {
        let params = ThreePointParams::new(params.delta_3p, params.eta_3p, alpha)?;
        let a = alpha.get();
        let rule = QuadratureRule::default();
        let eta = params.eta_3p;
        let eta_a = eta.powf(a);
        let to_eta = conf_integral(|s| (eta_a - pow0(s, a)) * h(s), beta, 0.0, eta, &rule)?;
        let to_one = conf_integral(|s| (1.0 - pow0(s, a)) * h(s), beta, 0.0, 1.0, &rule)?;
        let slope = (to_one - params.delta_3p * to_eta) / (1.0 - params.delta_3p * eta_a);
        Ok(Self {
            h,
            alpha: a,
            beta,
            params,
            slope,
            rule,
        })
    }

    pub fn params(&self) -> ThreePointParams {
        self.params
    }

    pub fn eval(&self, t: f64) -> f64 {
        let a = self.alpha;
        let ta = pow0(t, a);
        let local = conf_integral(
            |s| (ta - pow0(s, a)) * (self.h)(s),
            self.beta,
            0.0,
            t,
            &self.rule,
        )
        .unwrap_or(f64::NAN);
        (ta * self.slope - local) / a
    }
}

pub fn solve_threepoint(
    h: &ScalarFn,
    alpha: Order,
    beta: Order,
    params: ThreePointParams,
    mesh: &[f64],
) -> Result<GridFunction> {
    check_mesh(mesh)?;
    let sol = ThreePointSolution::new(h.as_fn(), alpha, beta, params)?;
    GridFunction::sample(mesh, |t| sol.eval(t))
}

type Rhs2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Weight = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Nonlinear forcing `lambda a(t) f(t, x)`.
#[derive(Clone)]
pub struct RhsFn {
    eval: Rhs2,
    pub lambda_scale: f64,
    weight_fn: Option<Weight>,
}

impl RhsFn {
    pub fn new(
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lambda_scale: f64,
    ) -> Result<Self> {
        if !(lambda_scale >= 0.0 && lambda_scale.is_finite()) {
            return Err(Error::Parameter(format!(
                "lambda = {lambda_scale} must be finite and >= 0"
            )));
        }
        Ok(Self {
            eval: Arc::new(f),
            lambda_scale,
            weight_fn: None,
        })
    }

    pub fn with_weight(mut self, a: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.weight_fn = Some(Arc::new(a));
        self
    }

    /// Forcing that ignores `x`.
    pub fn forcing(h: ScalarFn) -> Self {
        Self {
            eval: Arc::new(move |t, _| h.eval(t)),
            lambda_scale: 1.0,
            weight_fn: None,
        }
    }

    /// `lambda a(t) f(t, x)`.
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        let a = self.weight_fn.as_ref().map_or(1.0, |a| a(t));
        self.lambda_scale * a * (self.eval)(t, x)
    }
}

impl fmt::Debug for RhsFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RhsFn")
            .field("lambda_scale", &self.lambda_scale)
            .field("weighted", &self.weight_fn.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: GridFunction,
    /// The iterate the final solution was computed from.
    pub previous: GridFunction,
    pub iterations: usize,
    /// Sup-norm change of the final step.
    pub residual_sup: f64,
    pub converged: bool,
}

/// One application of the integral operator: `x -> int G(t,s) F(s, x(s)) s^(w-1) ds`
/// with `x` interpolated linearly between mesh points.
pub fn picard_image<'a>(
    spec: &KernelSpec,
    rhs: &'a RhsFn,
    iterate: &'a GridFunction,
) -> LinearSolution<impl Fn(f64) -> f64 + 'a> {
    LinearSolution::new(*spec, move |s| rhs.eval(s, iterate.eval(s))).with_breaks(&iterate.mesh)
}

/// Undamped Picard iteration from `x_0 = 0`, stopping once the sup-norm
/// change is at most `tol`.
pub fn solve_nonlinear_picard(
    spec: &KernelSpec,
    rhs: &RhsFn,
    tol: f64,
    max_iter: usize,
    mesh: &[f64],
) -> Result<SolveReport> {
    if !(tol > 0.0) {
        return Err(Error::Argument(format!("tolerance {tol} must be positive")));
    }
    if mesh.len() < 2 {
        return Err(Error::Argument(
            "Picard iteration needs at least two mesh points".into(),
        ));
    }
    check_mesh(mesh)?;
    let mut current = GridFunction::new(mesh.to_vec(), vec![0.0; mesh.len()])?;
    let mut change = f64::INFINITY;
    for k in 1..=max_iter {
        let next = picard_image(spec, rhs, &current).sample(mesh);
        let next = match next {
            Ok(g) => g,
            Err(_) => {
                return Err(Error::Divergence {
                    iterations: k,
                    sup_norm: f64::INFINITY,
                })
            }
        };
        let norm = next.sup_norm();
        if !(norm <= DIVERGENCE_BOUND) {
            return Err(Error::Divergence {
                iterations: k,
                sup_norm: norm,
            });
        }
        change = next.sup_distance(&current);
        let previous = std::mem::replace(&mut current, next);
        if change <= tol {
            return Ok(SolveReport {
                solution: current,
                previous,
                iterations: k,
                residual_sup: change,
                converged: true,
            });
        }
        if k == max_iter {
            return Ok(SolveReport {
                solution: current,
                previous,
                iterations: k,
                residual_sup: change,
                converged: false,
            });
        }
    }
    Ok(SolveReport {
        previous: current.clone(),
        solution: current,
        iterations: 0,
        residual_sup: change,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_mesh;
    use approx::assert_abs_diff_eq;

    fn o(v: f64) -> Order {
        Order::new(v).unwrap()
    }

    #[test]
    fn classical_conjugate_parabola() {
        let spec = KernelSpec::conjugate(Order::ONE, Order::ONE);
        let x = solve_linear(&spec, &ScalarFn::constant(1.0), &uniform_mesh(11)).unwrap();
        for (t, v) in x.rows() {
            assert_abs_diff_eq!(v, t * (1.0 - t) / 2.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(x.eval(0.5), 0.125, epsilon = 1e-14);
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let mesh = uniform_mesh(9);
        let spec = KernelSpec::cantilever(o(0.5), o(0.7), o(0.9), o(0.4));
        let x = solve_linear(&spec, &ScalarFn::zero(), &mesh).unwrap();
        assert_eq!(x.sup_norm(), 0.0);
        let p = ThreePointParams::new(0.5, 0.5, o(0.6)).unwrap();
        let x = solve_threepoint(&ScalarFn::zero(), o(0.6), o(0.8), p, &mesh).unwrap();
        assert_eq!(x.sup_norm(), 0.0);
    }

    #[test]
    fn mesh_outside_unit_interval() {
        let spec = KernelSpec::conjugate(Order::ONE, Order::ONE);
        assert!(matches!(
            solve_linear(&spec, &ScalarFn::constant(1.0), &[0.5, 1.5]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn threepoint_without_delta_is_conjugate() {
        let p = ThreePointParams::new(0.0, 0.5, Order::ONE).unwrap();
        let x =
            solve_threepoint(&ScalarFn::constant(1.0), Order::ONE, Order::ONE, p, &[0.5]).unwrap();
        assert_abs_diff_eq!(x.values[0], 0.125, epsilon = 1e-14);
    }

    #[test]
    fn threepoint_classical_conditions() {
        // -x'' = 1, x(0) = 0, x(1/2) = x(1)  =>  x = -t^2/2 + 3t/4
        let p = ThreePointParams::new(1.0, 0.5, Order::ONE).unwrap();
        let sol = ThreePointSolution::new(|_| 1.0, Order::ONE, Order::ONE, p).unwrap();
        for t in [0.0, 0.2, 0.5, 0.8, 1.0] {
            assert_abs_diff_eq!(sol.eval(t), -t * t / 2.0 + 0.75 * t, epsilon = 1e-14);
        }
        assert!(ThreePointParams::new(2.5, 0.5, Order::ONE).is_err());
        assert!(ThreePointParams::new(0.5, 1.0, Order::ONE).is_err());
    }

    #[test]
    fn picard_on_forcing_stops_after_confirmation() {
        let spec = KernelSpec::conjugate(o(0.7), o(0.6));
        let h = ScalarFn::polynomial(vec![1.0, -0.5, 0.25]);
        let mesh = uniform_mesh(33);
        let linear = solve_linear(&spec, &h, &mesh).unwrap();
        let report = solve_nonlinear_picard(&spec, &RhsFn::forcing(h), 1e-12, 10, &mesh).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterations, 2);
        assert!(report.solution.sup_distance(&linear) <= 1e-12);
    }

    #[test]
    fn picard_contraction_and_blow_up() {
        let spec = KernelSpec::conjugate(Order::ONE, Order::ONE);
        let mesh = uniform_mesh(65);
        let small = RhsFn::new(|_, x| x, 0.01).unwrap();
        let r = solve_nonlinear_picard(&spec, &small, 1e-10, 50, &mesh).unwrap();
        assert!(r.converged);
        assert!(r.solution.sup_norm() <= 1e-10);

        let big = RhsFn::new(|_, x| 1.0 + x * x, 1e3).unwrap();
        assert!(matches!(
            solve_nonlinear_picard(&spec, &big, 1e-8, 50, &mesh),
            Err(Error::Divergence { .. })
        ));
    }
}
