//! Linear boundary value problems `D^{a_n} ... D^{a_1} x = sign * h` with
//! homogeneous conditions, described independently of any Green's kernel.

use crate::error::{Error, Result};
use crate::fraccalc::Order;

/// Where a boundary functional samples the solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcPoint {
    /// `t = 0`, read as the right limit for derivative levels.
    Left,
    /// `t = 1`.
    Right,
    Interior(f64),
}

impl BcPoint {
    pub fn position(self) -> f64 {
        match self {
            BcPoint::Left => 0.0,
            BcPoint::Right => 1.0,
            BcPoint::Interior(t) => t,
        }
    }
}

/// `coeff * y_level(point)` where `y_0 = x` and `y_k = D^{a_k} y_{k-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcTerm {
    pub coeff: f64,
    pub level: usize,
    pub point: BcPoint,
}

/// A linear functional `sum coeff * y_level(point) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub label: String,
    pub terms: Vec<BcTerm>,
}

impl BoundaryCondition {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            terms: Vec::new(),
        }
    }

    /// Single-term condition `y_level(point) = 0`.
    pub fn point(label: impl Into<String>, level: usize, point: BcPoint) -> Self {
        Self::new(label).term(1.0, level, point)
    }

    pub fn term(mut self, coeff: f64, level: usize, point: BcPoint) -> Self {
        self.terms.push(BcTerm {
            coeff,
            level,
            point,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bvp {
    /// Innermost (first applied) order first.
    pub orders: Vec<Order>,
    /// The equation reads `D^{orders} x = sign * h`.
    pub sign: f64,
    pub conditions: Vec<BoundaryCondition>,
}

impl Bvp {
    pub fn new(orders: Vec<Order>, sign: f64, conditions: Vec<BoundaryCondition>) -> Result<Self> {
        let n = orders.len();
        if n == 0 || n > 4 {
            return Err(Error::Parameter(format!(
                "operator with {n} orders is not supported"
            )));
        }
        if conditions.len() != n {
            return Err(Error::Parameter(format!(
                "{} conditions for an operator of order {n}",
                conditions.len()
            )));
        }
        for c in &conditions {
            for term in &c.terms {
                if term.level >= n {
                    return Err(Error::Parameter(format!(
                        "condition {} uses level {} >= {n}",
                        c.label, term.level
                    )));
                }
                if let BcPoint::Interior(p) = term.point {
                    if !(p > 0.0 && p < 1.0) {
                        return Err(Error::Parameter(format!(
                            "condition {} samples t = {p} outside (0, 1)",
                            c.label
                        )));
                    }
                }
            }
        }
        Ok(Self {
            orders,
            sign,
            conditions,
        })
    }

    pub fn degree(&self) -> usize {
        self.orders.len()
    }

    pub fn weight_order(&self) -> Order {
        *self.orders.last().expect("validated nonempty")
    }

    /// Orders applied to reach level `k` (`k = 0` is `x` itself).
    pub fn orders_to(&self, level: usize) -> &[Order] {
        &self.orders[..level]
    }
}
