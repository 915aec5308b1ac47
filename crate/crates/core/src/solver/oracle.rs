//! Solutions computed without any Green's kernel.
//!
//! The problem `D^{a_n} ... D^{a_1} x = sign h` is unrolled into the cascade
//! `y_{k-1}(t) = y_{k-1}(0) + int_0^t y_k(s) s^(a_k - 1) ds` with
//! `y_n = sign h` and `y_0 = x`. Each level is held as piecewise Chebyshev
//! series on panels graded geometrically toward the origin. The unknown
//! initial values are fixed by the boundary functionals.

#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fraccalc::ScalarFn;
use crate::problem::{BcPoint, Bvp};

const NODES: usize = 24;
const MAX_WIDTH: f64 = 0.125;
const GRADING: f64 = 0.5;
/// Left end of the first Chebyshev panel; `[0, EPS]` is integrated as a
/// constant times the weight.
const EPS: f64 = 1e-60;

struct Panels {
    edges: Vec<f64>,
    /// First-kind Chebyshev points on `[-1, 1]`.
    nodes: Vec<f64>,
}

impl Panels {
    fn new() -> Self {
        let mut edges = vec![EPS];
        let mut graded = Vec::new();
        let mut q = MAX_WIDTH;
        while q > EPS {
            graded.push(q);
            q *= GRADING;
        }
        edges.extend(graded.into_iter().rev());
        let uniform = (1.0 / MAX_WIDTH).round() as usize;
        edges.extend((2..=uniform).map(|k| k as f64 * MAX_WIDTH));
        let nodes = (0..NODES)
            .map(|j| (PI * (j as f64 + 0.5) / NODES as f64).cos())
            .collect();
        Self { edges, nodes }
    }

    fn count(&self) -> usize {
        self.edges.len() - 1
    }

    fn point(&self, panel: usize, j: usize) -> f64 {
        let (a, b) = (self.edges[panel], self.edges[panel + 1]);
        0.5 * (a + b) + 0.5 * (b - a) * self.nodes[j]
    }

    fn locate(&self, t: f64) -> Option<usize> {
        if t < self.edges[0] {
            return None;
        }
        let k = self.edges.partition_point(|&e| e <= t);
        Some(k.saturating_sub(1).min(self.count() - 1))
    }
}

/// Chebyshev coefficients from values at first-kind points; `c[0]` already halved.
fn coefficients(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|k| {
            let sum: f64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                .sum();
            let c = 2.0 * sum / n as f64;
            if k == 0 {
                0.5 * c
            } else {
                c
            }
        })
        .collect()
}

/// Antiderivative series on `[a, b]` vanishing at `a`.
fn antiderivative(c: &[f64], a: f64, b: f64) -> Vec<f64> {
    let n = c.len();
    let at = |k: usize| if k < n { c[k] } else { 0.0 };
    let scale = 0.5 * (b - a);
    let mut out = vec![0.0; n + 1];
    out[1] = scale * (at(0) - 0.5 * at(2));
    for k in 2..=n {
        out[k] = scale * (at(k - 1) - at(k + 1)) / (2.0 * k as f64);
    }
    out[0] = -(1..=n)
        .map(|k| if k % 2 == 0 { out[k] } else { -out[k] })
        .sum::<f64>();
    out
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}

/// One cascade level: its initial value and per-panel series.
struct Level {
    start: f64,
    series: Vec<Vec<f64>>,
}

impl Level {
    fn eval(&self, panels: &Panels, t: f64) -> f64 {
        match panels.locate(t) {
            None => self.start,
            Some(p) => {
                let (a, b) = (panels.edges[p], panels.edges[p + 1]);
                let x = ((2.0 * t - a - b) / (b - a)).clamp(-1.0, 1.0);
                clenshaw(&self.series[p], x)
            }
        }
    }
}

/// All levels `y_0 .. y_{n-1}` for given forcing and initial values.
fn cascade(panels: &Panels, bvp: &Bvp, top: &dyn Fn(f64) -> f64, starts: &[f64]) -> Vec<Level> {
    let n = bvp.degree();
    let m = panels.count();
    // values of y_k at every node, panel-major
    let mut upper: Vec<Vec<f64>> = (0..m)
        .map(|p| (0..NODES).map(|j| top(panels.point(p, j))).collect())
        .collect();
    let mut upper_start = top(0.0);
    let mut levels: Vec<Level> = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let a = bvp.orders[k].get();
        let start = starts[k];
        let mut running = start + upper_start * EPS.powf(a) / a;
        let mut values = Vec::with_capacity(m);
        let mut series = Vec::with_capacity(m);
        for p in 0..m {
            let (lo, hi) = (panels.edges[p], panels.edges[p + 1]);
            let weighted: Vec<f64> = (0..NODES)
                .map(|j| upper[p][j] * panels.point(p, j).powf(a - 1.0))
                .collect();
            let mut anti = antiderivative(&coefficients(&weighted), lo, hi);
            anti[0] += running;
            running = anti.iter().sum();
            values.push(
                panels
                    .nodes
                    .iter()
                    .map(|&x| clenshaw(&anti, x))
                    .collect::<Vec<_>>(),
            );
            series.push(anti);
        }
        upper = values;
        upper_start = start;
        levels.push(Level { start, series });
    }
    levels.reverse();
    levels
}

fn functional_value(panels: &Panels, levels: &[Level], terms: &[crate::problem::BcTerm]) -> f64 {
    terms
        .iter()
        .map(|term| {
            let level = &levels[term.level];
            let y = match term.point {
                BcPoint::Left => level.start,
                BcPoint::Right => level.eval(panels, 1.0),
                BcPoint::Interior(t) => level.eval(panels, t),
            };
            term.coeff * y
        })
        .sum()
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Solution of a [`Bvp`] by direct nested integration.
pub struct DirectOracle {
    panels: Panels,
    solution: Level,
}

impl DirectOracle {
    pub fn new(bvp: &Bvp, h: impl Fn(f64) -> f64) -> Result<Self> {
        let panels = Panels::new();
        let n = bvp.degree();
        let sign = bvp.sign;
        let forced = |t: f64| sign * h(t);
        let zeros = vec![0.0; n];
        let particular = cascade(&panels, bvp, &forced, &zeros);
        let basis: Vec<Vec<Level>> = (0..n)
            .map(|j| {
                let mut starts = zeros.clone();
                starts[j] = 1.0;
                cascade(&panels, bvp, &|_| 0.0, &starts)
            })
            .collect();
        let matrix: Vec<Vec<f64>> = bvp
            .conditions
            .iter()
            .map(|c| {
                basis
                    .iter()
                    .map(|levels| functional_value(&panels, levels, &c.terms))
                    .collect()
            })
            .collect();
        let rhs: Vec<f64> = bvp
            .conditions
            .iter()
            .map(|c| -functional_value(&panels, &particular, &c.terms))
            .collect();
        let coeffs = solve_dense(matrix, rhs).ok_or_else(|| {
            Error::Parameter("boundary conditions determine no unique solution".into())
        })?;

        let mut solution = Level {
            start: particular[0].start,
            series: particular[0].series.clone(),
        };
        for (c, levels) in coeffs.iter().zip(&basis) {
            solution.start += c * levels[0].start;
            for (acc, s) in solution.series.iter_mut().zip(&levels[0].series) {
                for (x, y) in acc.iter_mut().zip(s) {
                    *x += c * y;
                }
            }
        }
        Ok(Self { panels, solution })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.solution.eval(&self.panels, t)
    }
}

/// `x(t)` of `bvp` with forcing `h`, computed without the kernel.
pub fn oracle_direct(bvp: &Bvp, h: &ScalarFn, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    Ok(DirectOracle::new(bvp, h.as_fn())?.eval(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::Order;
    use crate::greens::KernelSpec;
    use crate::problem::BoundaryCondition;
    use approx::assert_abs_diff_eq;

    #[test]
    fn classical_examples() {
        let one = ScalarFn::constant(1.0);
        let conj = KernelSpec::conjugate(Order::ONE, Order::ONE).bvp();
        assert_abs_diff_eq!(
            oracle_direct(&conj, &one, 0.5).unwrap(),
            0.125,
            epsilon = 1e-13
        );
        let rf = KernelSpec::right_focal2(Order::ONE, Order::ONE).bvp();
        assert_abs_diff_eq!(oracle_direct(&rf, &one, 1.0).unwrap(), 0.5, epsilon = 1e-13);
    }

    #[test]
    fn fractional_power_cascade() {
        // D^b D^a x = 1 with x(0) = D^a x(0) = 0 gives x = t^(a+b) / (b (a+b))
        let (a, b) = (0.4, 0.7);
        let bvp = Bvp::new(
            vec![Order::new(a).unwrap(), Order::new(b).unwrap()],
            1.0,
            vec![
                BoundaryCondition::point("x(0)", 0, BcPoint::Left),
                BoundaryCondition::point("Dx(0)", 1, BcPoint::Left),
            ],
        )
        .unwrap();
        let oracle = DirectOracle::new(&bvp, |_| 1.0).unwrap();
        for t in [1e-6_f64, 0.01, 0.3, 0.77, 1.0] {
            let exact = t.powf(a + b) / (b * (a + b));
            assert_abs_diff_eq!(oracle.eval(t), exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn singular_conditions() {
        let bvp = Bvp::new(
            vec![Order::ONE, Order::ONE],
            -1.0,
            vec![
                BoundaryCondition::point("x(0)", 0, BcPoint::Left),
                BoundaryCondition::point("x(0) again", 0, BcPoint::Left),
            ],
        )
        .unwrap();
        assert!(matches!(
            DirectOracle::new(&bvp, |_| 1.0),
            Err(Error::Parameter(_))
        ));
    }
}
