//! Conformable fractional derivative and integral.
//!
//! For differentiable `f` the conformable derivative of order `alpha` is
//! `D^alpha f(t) = t^(1-alpha) f'(t)`, with the value at `t = 0` taken as
//! the right limit. The matching integral carries the weight `s^(alpha-1)`.
//!
//! Nested differences are taken in `l = ln t`. Writing `F(l) = f(e^l)`,
//! `D^alpha f(t) = t^(-alpha) F'(l)`, which is the limit quotient
//! `(f(t e^(eps t^-alpha)) - f(t)) / eps` read on a logarithmic lattice.
//! Powers of `t` are entire functions of `l`, so stencils on that lattice do
//! not feel the algebraic singularity at the origin, and stencils of every
//! nesting level share lattice points.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;

/// `t^a` with an exact zero at `t = 0` for `a > 0`.
#[inline]
pub fn pow0(t: f64, a: f64) -> f64 {
    if t == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        t.powf(a)
    }
}

/// A derivative order in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub const ONE: Order = Order(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Order(value))
        } else {
            Err(Error::Parameter(format!("order {value} not in (0, 1]")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Order::new(value)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function on `[0, 1]`, optionally with a known classical derivative.
#[derive(Clone)]
pub struct ScalarFn {
    f: RealFn,
    df: Option<RealFn>,
}

impl ScalarFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            df: None,
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c).with_derivative(|_| 0.0)
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// `c[0] + c[1] t + c[2] t^2 + ...`
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let c = Arc::new(coeffs);
        let dc = c.clone();
        Self::new(move |t| c.iter().rev().fold(0.0, |acc, &a| acc * t + a)).with_derivative(
            move |t| {
                dc.iter()
                    .enumerate()
                    .skip(1)
                    .rev()
                    .fold(0.0, |acc, (k, &a)| acc * t + k as f64 * a)
            },
        )
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn derivative(&self, t: f64) -> Option<f64> {
        self.df.as_ref().map(|df| df(t))
    }

    pub fn has_derivative(&self) -> bool {
        self.df.is_some()
    }

    pub fn as_fn(&self) -> impl Fn(f64) -> f64 + '_ {
        move |t| self.eval(t)
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFn")
            .field("has_derivative", &self.df.is_some())
            .finish()
    }
}

/// Stand-in for the `t -> 0+` limit in [`conf_diff_closed`].
pub const T_MIN: f64 = 1e-8;

/// Base relative step of the single-level finite-difference fallback.
pub const FD_STEP: f64 = 1e-5;

/// Fourth-order central difference for `f'(t)`.
fn central_derivative(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
}

/// `D^alpha f(t) = t^(1-alpha) f'(t)`.
///
/// Uses the known derivative when `f` carries one, otherwise a fourth-order
/// central difference with step `1e-5 max(1, t)` (shrunk to `1e-3 t` near
/// the origin so the stencil stays on the positive axis). At `t = 0` the
/// right limit is reported as the value at [`T_MIN`].
pub fn conf_diff_closed(f: &ScalarFn, alpha: Order, t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::Domain(format!(
            "conformable derivative at t = {t} < 0"
        )));
    }
    let t = if t == 0.0 { T_MIN } else { t };
    let slope = match f.derivative(t) {
        Some(d) => d,
        None => {
            let h = (FD_STEP * t.max(1.0)).min(1e-3 * t);
            central_derivative(|x| f.eval(x), t, h)
        }
    };
    let value = t.powf(1.0 - alpha.get()) * slope;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!(
            "non-finite derivative near t = {t}"
        )))
    }
}

/// Symmetric form of the limit quotient
/// `(f(t e^(eps t^-alpha)) - f(t e^(-eps t^-alpha))) / (2 eps)`.
pub fn conf_diff_limit(f: impl Fn(f64) -> f64, alpha: Order, t: f64, eps: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "limit quotient undefined at t = {t}"
        )));
    }
    if eps == 0.0 || !eps.is_finite() {
        return Err(Error::Argument(format!(
            "step eps = {eps} must be finite and nonzero"
        )));
    }
    let stretch = eps * t.powf(-alpha.get());
    let value = (f(t * stretch.exp()) - f(t * (-stretch).exp())) / (2.0 * eps);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!("non-finite quotient near t = {t}")))
    }
}

/// `int_a^b h(s) s^(alpha-1) ds`, computed in `u = s^alpha`:
/// `(1/alpha) int_{a^alpha}^{b^alpha} h(u^(1/alpha)) du`.
pub fn conf_integral(
    h: impl Fn(f64) -> f64,
    alpha: Order,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    if rule.order() == 0 {
        return Err(Error::Argument("quadrature rule has no nodes".into()));
    }
    if a > b {
        return Err(Error::Argument(format!("interval [{a}, {b}] is reversed")));
    }
    if a < 0.0 {
        return Err(Error::Domain(format!("lower limit {a} < 0")));
    }
    let al = alpha.get();
    let inv = 1.0 / al;
    let value = rule.integrate(|u| h(pow0(u, inv)), pow0(a, al), pow0(b, al)) * inv;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric("non-finite conformable integral".into()))
    }
}

/// Placement of the nested difference stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// Fourth-order central, lattice points on both sides of `t`.
    Central,
    /// Fourth-order one-sided, lattice points at and below `t`.
    Backward,
}

impl Stencil {
    fn taps(self) -> (&'static [i32], &'static [f64]) {
        match self {
            Stencil::Central => (&[-2, -1, 1, 2], &[1.0, -8.0, 8.0, -1.0]),
            Stencil::Backward => (&[0, -1, -2, -3, -4], &[25.0, -48.0, 36.0, -16.0, 3.0]),
        }
    }

    fn reach(self) -> (i32, i32) {
        match self {
            Stencil::Central => (-2, 2),
            Stencil::Backward => (-4, 0),
        }
    }
}

/// Default log-lattice step by nesting depth (index = number of levels).
/// Balances rounding noise, which grows like `eps / step^depth`, against the
/// fourth-order truncation error.
const CENTRAL_STEP: [f64; 5] = [0.0, 2e-3, 2e-3, 4e-3, 8e-3];
const BACKWARD_STEP: [f64; 5] = [0.0, 1e-3, 2e-3, 4e-3, 6e-3];
/// Below this the rounding noise of a four-level stencil dominates.
const MIN_STEP: f64 = 1e-3;

/// Nested conformable differences on the lattice `t e^(k step)`.
///
/// `orders[0]` is applied first. No range checks: the caller guarantees
/// `f` can be evaluated on every lattice point.
pub fn nested_log_difference(
    f: impl Fn(f64) -> f64,
    orders: &[Order],
    t: f64,
    step: f64,
    stencil: Stencil,
) -> f64 {
    let n = orders.len() as i32;
    let (offsets, weights) = stencil.taps();
    let (lo, hi) = stencil.reach();
    // level j lives on offsets [lo*(n-j), hi*(n-j)]
    let mut first = lo * n;
    let mut values: Vec<f64> = (lo * n..=hi * n)
        .map(|k| f(t * (k as f64 * step).exp()))
        .collect();
    for (j, order) in orders.iter().enumerate() {
        let remaining = n - j as i32 - 1;
        let next_first = lo * remaining;
        let next: Vec<f64> = (next_first..=hi * remaining)
            .map(|k| {
                let tk = t * (k as f64 * step).exp();
                let sum: f64 = offsets
                    .iter()
                    .zip(weights)
                    .map(|(&o, &w)| w * values[(k + o - first) as usize])
                    .sum();
                tk.powf(-order.get()) * sum / (12.0 * step)
            })
            .collect();
        values = next;
        first = next_first;
    }
    values[0]
}

fn check_orders(orders: &[Order]) -> Result<()> {
    if orders.is_empty() || orders.len() > 4 {
        return Err(Error::Argument(format!(
            "nested derivative needs 1 to 4 orders, got {}",
            orders.len()
        )));
    }
    Ok(())
}

/// `D^{orders[n-1]} ... D^{orders[0]} f(t)` at an interior point.
///
/// Lattice steps come from a per-depth table and shrink near `t = 1` so the
/// stencil never leaves `(0, 1]`; a point so close to 1 that the step would
/// drop below the noise floor is a stencil error.
pub fn iterated_conf_diff(f: impl Fn(f64) -> f64, orders: &[Order], t: f64) -> Result<f64> {
    check_orders(orders)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!(
            "nested derivative needs t in (0, 1), got {t}"
        )));
    }
    let n = orders.len();
    let room = (1.0 / t).ln() / (2.0 * n as f64);
    let step = CENTRAL_STEP[n].min(room);
    if step < MIN_STEP {
        return Err(Error::Stencil {
            t,
            required_margin: 1.0 - (-2.0 * n as f64 * MIN_STEP).exp(),
        });
    }
    let value = nested_log_difference(f, orders, t, step, Stencil::Central);
    finite(value, t)
}

/// Nested derivative at the right endpoint `t = 1`, one-sided stencils.
pub fn iterated_conf_diff_at_one(f: impl Fn(f64) -> f64, orders: &[Order]) -> Result<f64> {
    check_orders(orders)?;
    let step = BACKWARD_STEP[orders.len()];
    let value = nested_log_difference(f, orders, 1.0, step, Stencil::Backward);
    finite(value, 1.0)
}

/// Points of the geometric sequence used for the `t -> 0+` limit.
const LIMIT_START: f64 = 1e-2;
const LIMIT_RATIO: f64 = 0.1;
const LIMIT_POINTS: usize = 6;

/// Right limit `lim_{t -> 0+} D^{orders} f(t)`.
///
/// Near the origin the nested derivative of a solution behaves like
/// `L + sum c_i t^(p_i)` with positive, unknown exponents. Sampled on a
/// geometric sequence every term is geometric in the index, which Wynn's
/// epsilon algorithm removes two at a time.
pub fn iterated_conf_diff_at_zero(f: impl Fn(f64) -> f64, orders: &[Order]) -> Result<f64> {
    check_orders(orders)?;
    let n = orders.len();
    let samples: Vec<f64> = (0..LIMIT_POINTS)
        .map(|k| {
            let t = LIMIT_START * LIMIT_RATIO.powi(k as i32);
            nested_log_difference(&f, orders, t, CENTRAL_STEP[n], Stencil::Central)
        })
        .collect();
    finite(wynn_limit(&samples), 0.0)
}

/// Wynn epsilon extrapolation; returns the deepest even-column entry that
/// uses the tail of the sequence.
pub fn wynn_limit(seq: &[f64]) -> f64 {
    let m = seq.len();
    if m < 3 {
        return *seq.last().unwrap_or(&f64::NAN);
    }
    let mut prev: Vec<f64> = vec![0.0; m + 1];
    let mut cur: Vec<f64> = seq.to_vec();
    let mut best = seq[m - 1];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for k in 0..cur.len() - 1 {
            let diff = cur[k + 1] - cur[k];
            if diff == 0.0 {
                // converged column; later columns add nothing
                return if col % 2 == 0 { cur[k + 1] } else { best };
            }
            next.push(prev[k + 1] + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col % 2 == 0 {
            best = *cur.last().unwrap();
        }
    }
    best
}

fn finite(value: f64, t: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!(
            "non-finite nested derivative near t = {t}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn o(v: f64) -> Order {
        Order::new(v).unwrap()
    }

    #[test]
    fn order_bounds() {
        assert!(Order::new(0.0).is_err());
        assert!(Order::new(1.0001).is_err());
        assert!(Order::new(f64::NAN).is_err());
        assert_eq!(Order::new(1.0).unwrap(), Order::ONE);
    }

    #[test]
    fn pow0_at_origin() {
        assert_eq!(pow0(0.0, 0.3), 0.0);
        assert_eq!(pow0(0.0, 0.0), 1.0);
        assert_eq!(pow0(0.25, 0.5), 0.5);
    }

    #[test]
    fn closed_form_examples() {
        for a in [0.3, 0.5, 0.9] {
            let f = ScalarFn::new(move |t: f64| t.powf(a));
            assert_abs_diff_eq!(conf_diff_closed(&f, o(a), 0.5).unwrap(), a, epsilon = 1e-9);
        }
        let c = ScalarFn::new(|_| 3.0);
        assert_abs_diff_eq!(
            conf_diff_closed(&c, o(0.5), 0.3).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        let sq = ScalarFn::new(|t| t * t);
        assert_abs_diff_eq!(
            conf_diff_closed(&sq, Order::ONE, 0.4).unwrap(),
            0.8,
            epsilon = 1e-10
        );
        let sq = ScalarFn::polynomial(vec![0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(
            conf_diff_closed(&sq, Order::ONE, 0.4).unwrap(),
            0.8,
            epsilon = 1e-15
        );
    }

    #[test]
    fn closed_form_at_origin_uses_right_limit() {
        let f = ScalarFn::new(|t: f64| t.powf(0.5));
        assert_abs_diff_eq!(
            conf_diff_closed(&f, o(0.5), 0.0).unwrap(),
            0.5,
            epsilon = 1e-8
        );
        assert!(matches!(
            conf_diff_closed(&f, o(0.5), -0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn limit_quotient_examples() {
        let id = |t: f64| t;
        assert_abs_diff_eq!(
            conf_diff_limit(id, Order::ONE, 0.5, 1e-6).unwrap(),
            1.0,
            epsilon = 1e-5
        );
        let p = |t: f64| t.sqrt();
        assert_abs_diff_eq!(
            conf_diff_limit(p, o(0.5), 0.25, 1e-6).unwrap(),
            0.5,
            epsilon = 1e-4
        );
        let s = |t: f64| t.sin();
        let want = 0.6f64.powf(0.3) * 0.6f64.cos();
        assert_abs_diff_eq!(
            conf_diff_limit(s, o(0.7), 0.6, 1e-6).unwrap(),
            want,
            epsilon = 1e-4
        );
        assert!(matches!(
            conf_diff_limit(s, o(0.7), 0.0, 1e-6),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn integral_examples() {
        let rule = QuadratureRule::default();
        let one = |_| 1.0;
        assert_abs_diff_eq!(
            conf_integral(one, o(0.5), 0.0, 1.0, &rule).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            conf_integral(one, Order::ONE, 0.0, 1.0, &rule).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let id = |s| s;
        assert_abs_diff_eq!(
            conf_integral(id, o(0.5), 0.0, 1.0, &rule).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-14
        );
        assert!(matches!(
            conf_integral(one, o(0.5), 0.6, 0.2, &rule),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn iterated_examples() {
        // classical x'' of t^2
        let v = iterated_conf_diff(|t| t * t, &[Order::ONE, Order::ONE], 0.5).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-8);
        let a = 0.4;
        let v = iterated_conf_diff(move |t: f64| t.powf(a) / a, &[o(a)], 0.5).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
        for t in [0.05, 0.3, 0.9] {
            let v = iterated_conf_diff(move |t: f64| t.powf(a), &[o(a), o(0.7)], t).unwrap();
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn iterated_matches_exact_power_chain() {
        // D^b D^a t^p = p (p - a) t^(p - a - b)
        let (a, b, p) = (0.6, 0.35, 2.3);
        let t = 0.37;
        let v = iterated_conf_diff(move |t: f64| t.powf(p), &[o(a), o(b)], t).unwrap();
        assert_abs_diff_eq!(v, p * (p - a) * t.powf(p - a - b), epsilon = 1e-8);
        let at_one = iterated_conf_diff_at_one(move |t: f64| t.powf(p), &[o(a), o(b)]).unwrap();
        assert_abs_diff_eq!(at_one, p * (p - a), epsilon = 1e-7);
    }

    #[test]
    fn stencil_error_near_one() {
        let r = iterated_conf_diff(|t| t, &[Order::ONE; 4], 0.9999);
        assert!(matches!(r, Err(Error::Stencil { .. })));
        assert!(matches!(
            iterated_conf_diff(|t| t, &[], 0.5),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn limit_at_zero_removes_power_terms() {
        // D^a f for f = 1 + t^a/a*2 + t^(a+b) has limit 2 with a t^b tail
        let (a, b) = (0.9, 0.3);
        let f = move |t: f64| 1.0 + 2.0 * t.powf(a) / a + t.powf(a + b);
        let v = iterated_conf_diff_at_zero(f, &[o(a)]).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-7);
    }

    #[test]
    fn wynn_on_geometric_tail() {
        let seq: Vec<f64> = (0..7)
            .map(|k| 3.0 + 0.5f64.powi(k) + 0.1 * 0.2f64.powi(k))
            .collect();
        assert_abs_diff_eq!(wynn_limit(&seq), 3.0, epsilon = 1e-12);
    }
}
