//! Composite Gauss–Legendre quadrature with panels graded geometrically
//! toward the origin.
//!
//! Every integral in this crate lives on a subinterval of `[0, 1]` and its
//! integrand is analytic except for algebraic behaviour `s^p` at `s = 0`.
//! Panels of the form `[r·x, x]` keep the origin at a fixed relative
//! distance, so a fixed-order rule converges geometrically on each of them.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Graded composite Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    ratio: f64,
    max_width: f64,
    floor: f64,
}

impl QuadratureRule {
    pub const DEFAULT_ORDER: usize = 16;
    pub const DEFAULT_RATIO: f64 = 0.3;
    pub const DEFAULT_MAX_WIDTH: f64 = 0.125;

    /// `order` nodes per panel, consecutive panels toward the origin shrink
    /// by `ratio`, and no panel is wider than `max_width`.
    pub fn new(order: usize, ratio: f64, max_width: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Argument(
                "quadrature rule needs at least one node".into(),
            ));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Argument(format!(
                "grading ratio {ratio} not in (0, 1)"
            )));
        }
        if !(max_width > 0.0) {
            return Err(Error::Argument(format!(
                "max panel width {max_width} must be positive"
            )));
        }
        let (nodes, weights) = gauss_legendre(order);
        Ok(Self {
            nodes,
            weights,
            ratio,
            max_width,
            floor: 1e-24,
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Plain Gauss–Legendre on a single panel.
    pub fn panel(&self, f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Integrates `f` over `[a, b]` with `0 <= a <= b`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        self.integrate_mut(&mut f, a, b)
    }

    fn integrate_mut(&self, f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        let mut comp = 0.0;
        let mut hi = b;
        loop {
            let next = hi * self.ratio;
            if next <= a || hi <= b * self.floor {
                self.add_uniform(f, a, hi, &mut total, &mut comp);
                break;
            }
            self.add_uniform(f, next, hi, &mut total, &mut comp);
            hi = next;
        }
        total + comp
    }

    fn add_uniform(
        &self,
        f: &mut impl FnMut(f64) -> f64,
        a: f64,
        b: f64,
        total: &mut f64,
        comp: &mut f64,
    ) {
        let pieces = ((b - a) / self.max_width).ceil().max(1.0) as usize;
        let width = (b - a) / pieces as f64;
        for k in 0..pieces {
            let lo = a + k as f64 * width;
            let hi = if k + 1 == pieces { b } else { lo + width };
            neumaier_add(total, comp, self.panel(f, lo, hi));
        }
    }

    /// Integrates over `[a, b]` with extra breakpoints where the integrand is
    /// only piecewise smooth. Breakpoints outside `(a, b)` are ignored.
    pub fn integrate_with_breaks(
        &self,
        mut f: impl FnMut(f64) -> f64,
        a: f64,
        b: f64,
        breaks: &[f64],
    ) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        let mut comp = 0.0;
        let mut lo = a;
        for &c in cuts.iter().chain(std::iter::once(&b)) {
            neumaier_add(&mut total, &mut comp, self.integrate_mut(&mut f, lo, c));
            lo = c;
        }
        total + comp
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(
            Self::DEFAULT_ORDER,
            Self::DEFAULT_RATIO,
            Self::DEFAULT_MAX_WIDTH,
        )
        .expect("default rule is valid")
    }
}

fn neumaier_add(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        for p in 0..16 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let want = if p % 2 == 0 {
                2.0 / (p as f64 + 1.0)
            } else {
                0.0
            };
            assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn graded_rule_handles_endpoint_power() {
        let rule = QuadratureRule::default();
        for p in [0.1, 0.3, 0.7, 1.4] {
            let got = rule.integrate(|u: f64| u.powf(p), 0.0, 1.0);
            assert_abs_diff_eq!(got, 1.0 / (p + 1.0), epsilon = 1e-14);
        }
        // integrable singularity, not just a kink
        let got = rule.integrate(|u: f64| u.powf(-0.5), 0.0, 1.0);
        assert_abs_diff_eq!(got, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn breaks_and_offsets() {
        let rule = QuadratureRule::default();
        let f = |u: f64| (u - 0.4).abs();
        let got = rule.integrate_with_breaks(f, 0.0, 1.0, &[0.4, 2.0]);
        assert_abs_diff_eq!(got, 0.08 + 0.18, epsilon = 1e-15);
        let got = rule.integrate(|u: f64| u.sqrt(), 0.25, 1.0);
        assert_abs_diff_eq!(got, (1.0 - 0.125) * 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(matches!(
            QuadratureRule::new(0, 0.3, 0.1),
            Err(Error::Argument(_))
        ));
    }
}
