//! Closed-form Green's functions for the conformable boundary value problems
//! and the Cauchy functions they are built from.
//!
//! All kernels live on `[0, 1]^2`. At the seam `t = s` the `t <= s` branch is
//! used.

use std::fmt;

use crate::error::{Error, Result};
use crate::fraccalc::{pow0, Order};
use crate::problem::{BcPoint, BoundaryCondition, Bvp};

/// Coefficients of the separated two-point conditions
/// `gamma x(0) - delta D^a x(0) = 0 = eta x(1) + zeta D^a x(1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcCoeffs {
    pub gamma_bc: f64,
    pub delta_bc: f64,
    pub eta_bc: f64,
    pub zeta_bc: f64,
}

impl BcCoeffs {
    /// `x(0) = x(1) = 0`
    pub const CONJUGATE: BcCoeffs = BcCoeffs {
        gamma_bc: 1.0,
        delta_bc: 0.0,
        eta_bc: 1.0,
        zeta_bc: 0.0,
    };
    /// `x(0) = D^a x(1) = 0`
    pub const RIGHT_FOCAL: BcCoeffs = BcCoeffs {
        gamma_bc: 1.0,
        delta_bc: 0.0,
        eta_bc: 0.0,
        zeta_bc: 1.0,
    };

    pub fn new(gamma_bc: f64, delta_bc: f64, eta_bc: f64, zeta_bc: f64) -> Result<Self> {
        let c = BcCoeffs {
            gamma_bc,
            delta_bc,
            eta_bc,
            zeta_bc,
        };
        if [gamma_bc, delta_bc, eta_bc, zeta_bc]
            .iter()
            .all(|v| v.is_finite() && *v >= 0.0)
        {
            Ok(c)
        } else {
            Err(Error::Parameter(format!(
                "boundary coefficients must be >= 0: {c:?}"
            )))
        }
    }

    /// `d = eta delta + gamma zeta + gamma eta / alpha`
    pub fn d(&self, alpha: f64) -> f64 {
        self.eta_bc * self.delta_bc
            + self.gamma_bc * self.zeta_bc
            + self.gamma_bc * self.eta_bc / alpha
    }

    pub fn check(&self, alpha: f64) -> Result<f64> {
        let d = self.d(alpha);
        if d > 0.0 {
            Ok(d)
        } else {
            Err(Error::Parameter(format!(
                "d = {d} must be positive for {self:?}"
            )))
        }
    }
}

/// Which side of the seam `t = s` a formula belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `t <= s`
    Left,
    /// `s <= t`
    Right,
}

impl Branch {
    #[inline]
    pub fn of(t: f64, s: f64) -> Branch {
        if t <= s {
            Branch::Left
        } else {
            Branch::Right
        }
    }
}

// Second order ------------------------------------------------------------

pub fn g2_sl_branch(t: f64, s: f64, alpha: f64, bc: &BcCoeffs, branch: Branch) -> Result<f64> {
    let d = bc.check(alpha)?;
    let left = |x: f64| bc.delta_bc + bc.gamma_bc / alpha * pow0(x, alpha);
    let right = |x: f64| bc.zeta_bc + bc.eta_bc / alpha * (1.0 - pow0(x, alpha));
    Ok(match branch {
        Branch::Left => left(t) * right(s) / d,
        Branch::Right => left(s) * right(t) / d,
    })
}

/// Kernel of `-D^b D^a x = h` under the separated conditions `bc`.
pub fn g2_sl(t: f64, s: f64, alpha: f64, bc: &BcCoeffs) -> Result<f64> {
    g2_sl_branch(t, s, alpha, bc, Branch::of(t, s))
}

pub fn g2_conjugate_branch(t: f64, s: f64, alpha: f64, branch: Branch) -> f64 {
    let (lo, hi) = match branch {
        Branch::Left => (t, s),
        Branch::Right => (s, t),
    };
    pow0(lo, alpha) * (1.0 - pow0(hi, alpha)) / alpha
}

/// `x(0) = x(1) = 0`
pub fn g2_conjugate(t: f64, s: f64, alpha: f64) -> f64 {
    g2_conjugate_branch(t, s, alpha, Branch::of(t, s))
}

pub fn g2_rightfocal_branch(t: f64, s: f64, alpha: f64, branch: Branch) -> f64 {
    match branch {
        Branch::Left => pow0(t, alpha) / alpha,
        Branch::Right => pow0(s, alpha) / alpha,
    }
}

/// `x(0) = D^a x(1) = 0`
pub fn g2_rightfocal(t: f64, s: f64, alpha: f64) -> f64 {
    g2_rightfocal_branch(t, s, alpha, Branch::of(t, s))
}

// Third order -------------------------------------------------------------

/// `[(a+b) t^a s^b - a t^(a+b)] / [a b (a+b)]`
pub fn u3(t: f64, s: f64, alpha: f64, beta: f64) -> f64 {
    let ab = alpha + beta;
    (ab * pow0(t, alpha) * pow0(s, beta) - alpha * pow0(t, ab)) / (alpha * beta * ab)
}

/// Cauchy function of `D^b D^a`.
pub fn cauchy3(t: f64, s: f64, alpha: f64, beta: f64) -> f64 {
    let (ta, tb) = (pow0(t, alpha), pow0(t, beta));
    let (sa, sb) = (pow0(s, alpha), pow0(s, beta));
    (alpha * ta * (tb - sb) + beta * sb * (sa - ta)) / (alpha * beta * (alpha + beta))
}

/// Which half of the `s` range a third-order kernel formula belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauSide {
    /// `s in [0, tau]`
    Below,
    /// `s in [tau, 1]`
    Above,
}

pub fn g3_rightfocal_piece(
    t: f64,
    s: f64,
    alpha: f64,
    beta: f64,
    tau: f64,
    side: TauSide,
    branch: Branch,
) -> f64 {
    match (side, branch) {
        (TauSide::Below, Branch::Left) => u3(t, s, alpha, beta),
        (TauSide::Below, Branch::Right) => cauchy3(0.0, s, alpha, beta),
        (TauSide::Above, Branch::Left) => u3(t, tau, alpha, beta),
        (TauSide::Above, Branch::Right) => u3(t, tau, alpha, beta) + cauchy3(t, s, alpha, beta),
    }
}

pub fn check_tau(tau: f64) -> Result<f64> {
    if tau > 0.0 && tau < 1.0 {
        Ok(tau)
    } else {
        Err(Error::Parameter(format!("tau = {tau} not in (0, 1)")))
    }
}

/// Kernel of `D^g D^b D^a x = h`, `x(0) = D^a x(tau) = D^b D^a x(1) = 0`.
/// Independent of `g`, which only enters the weight.
pub fn g3_rightfocal(t: f64, s: f64, alpha: f64, beta: f64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(g3_unchecked(t, s, alpha, beta, tau))
}

#[inline]
fn g3_unchecked(t: f64, s: f64, alpha: f64, beta: f64, tau: f64) -> f64 {
    let side = if s <= tau {
        TauSide::Below
    } else {
        TauSide::Above
    };
    g3_rightfocal_piece(t, s, alpha, beta, tau, side, Branch::of(t, s))
}

// Fourth order ------------------------------------------------------------

pub fn g4_cantilever_branch(
    t: f64,
    s: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    branch: Branch,
) -> f64 {
    let ab = alpha + beta;
    let bg = beta + gamma;
    let abg = ab + gamma;
    match branch {
        Branch::Left => {
            pow0(t, ab) / gamma * (pow0(s, gamma) / (beta * ab) - pow0(t, gamma) / (bg * abg))
        }
        Branch::Right => {
            pow0(s, bg) / alpha * (pow0(t, alpha) / (beta * bg) - pow0(s, alpha) / (ab * abg))
        }
    }
}

/// Cantilever kernel: `x(0) = D^a x(0) = D^b D^a x(1) = D^g D^b D^a x(1) = 0`.
pub fn g4_cantilever(t: f64, s: f64, alpha: f64, beta: f64, gamma: f64) -> f64 {
    g4_cantilever_branch(t, s, alpha, beta, gamma, Branch::of(t, s))
}

pub fn g4_cantilever_dt_branch(
    t: f64,
    s: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    branch: Branch,
) -> f64 {
    let bg = beta + gamma;
    match branch {
        Branch::Left => {
            let sg = pow0(s, gamma);
            pow0(t, alpha + beta - 1.0) / (beta * gamma * bg)
                * (gamma * sg + beta * (sg - pow0(t, gamma)))
        }
        Branch::Right => pow0(s, bg) * pow0(t, alpha - 1.0) / (beta * bg),
    }
}

/// Classical `d/dt` of the cantilever kernel.
pub fn g4_cantilever_dt(t: f64, s: f64, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t = {t} < 0")));
    }
    if t == 0.0 && alpha < 1.0 {
        return Err(Error::SingularPoint(format!(
            "t^(alpha-1) is unbounded at t = 0 for alpha = {alpha}"
        )));
    }
    Ok(g4_cantilever_dt_branch(
        t,
        s,
        alpha,
        beta,
        gamma,
        Branch::of(t, s),
    ))
}

/// Cauchy function of `D^g D^b D^a`:
/// `(1/g) int_s^t int_s^r (xi^g - s^g) xi^(b-1) r^(a-1) dxi dr`, integrated
/// in closed form.
pub fn cauchy4(t: f64, s: f64, alpha: f64, beta: f64, gamma: f64) -> f64 {
    let ab = alpha + beta;
    let bg = beta + gamma;
    let abg = ab + gamma;
    let sg = pow0(s, gamma);
    let top = (pow0(t, abg) - pow0(s, abg)) / (bg * abg);
    let mid = sg * (pow0(t, ab) - pow0(s, ab)) / (beta * ab);
    let low = gamma * pow0(s, bg) * (pow0(t, alpha) - pow0(s, alpha)) / (alpha * beta * bg);
    (top - mid + low) / gamma
}

/// `(b(s), d(s))` with `u(t, s) = b(s) t^a + d(s) t^(a+b+g)` the
/// homogeneous part of the Lidstone kernel.
pub fn lidstone_coeffs(s: f64, alpha: f64, beta: f64, gamma: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let bg = beta + gamma;
    let abg = ab + gamma;
    let d = (pow0(s, gamma) - 1.0) / (gamma * bg * abg);
    let b = pow0(s, abg) / (alpha * ab * abg) - pow0(s, bg) / (alpha * beta * bg)
        + pow0(s, gamma) / gamma * (1.0 / (beta * ab) - 1.0 / (bg * abg));
    (b, d)
}

/// Lidstone kernel assembled from [`lidstone_coeffs`] and [`cauchy4`] for a
/// general third order `gamma`. Symmetric only when `gamma == alpha`.
pub fn g4_lidstone_general(t: f64, s: f64, alpha: f64, beta: f64, gamma: f64) -> f64 {
    let (b, d) = lidstone_coeffs(s, alpha, beta, gamma);
    let u = b * pow0(t, alpha) + d * pow0(t, alpha + beta + gamma);
    match Branch::of(t, s) {
        Branch::Left => u,
        Branch::Right => u + cauchy4(t, s, alpha, beta, gamma),
    }
}

/// `u(t, s)` of the symmetric Lidstone kernel (`gamma = alpha`).
pub fn lidstone_u(t: f64, s: f64, alpha: f64, beta: f64) -> f64 {
    let ab = alpha + beta;
    let sa = pow0(s, alpha);
    let scale = pow0(t, alpha) / (alpha * beta * ab * (2.0 * alpha + beta));
    scale
        * (2.0 * alpha * sa * (1.0 - pow0(s, beta))
            - beta * (1.0 - sa) * (pow0(t, ab) + pow0(s, ab)))
}

/// Kernel of `D^b D^a D^b D^a x = h`, `x = D^b D^a x = 0` at both ends.
pub fn g4_lidstone(t: f64, s: f64, alpha: f64, beta: f64) -> f64 {
    match Branch::of(t, s) {
        Branch::Left => lidstone_u(t, s, alpha, beta),
        Branch::Right => lidstone_u(s, t, alpha, beta),
    }
}

// Kernel families ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sl2,
    Conjugate2,
    RightFocal2,
    RightFocal3,
    Cantilever4,
    Lidstone4,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Sl2,
        Family::Conjugate2,
        Family::RightFocal2,
        Family::RightFocal3,
        Family::Cantilever4,
        Family::Lidstone4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sl2 => "sl2",
            Family::Conjugate2 => "conjugate2",
            Family::RightFocal2 => "rightfocal2",
            Family::RightFocal3 => "rightfocal3",
            Family::Cantilever4 => "cantilever4",
            Family::Lidstone4 => "lidstone4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated Green's kernel together with the orders of its problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `-D^b D^a x = h` with separated conditions.
    SturmLiouville {
        alpha: Order,
        beta: Order,
        bc: BcCoeffs,
    },
    Conjugate {
        alpha: Order,
        beta: Order,
    },
    RightFocal2 {
        alpha: Order,
        beta: Order,
    },
    /// `D^g D^b D^a x = h`, `x(0) = D^a x(tau) = D^b D^a x(1) = 0`.
    RightFocal3 {
        alpha: Order,
        beta: Order,
        gamma: Order,
        tau: f64,
    },
    /// `D^d D^g D^b D^a x = h`, `x(0) = D^a x(0) = D^b D^a x(1) = D^g D^b D^a x(1) = 0`.
    Cantilever {
        alpha: Order,
        beta: Order,
        gamma: Order,
        delta: Order,
    },
    /// `D^b D^a D^b D^a x = h`, `x = D^b D^a x = 0` at both ends.
    Lidstone {
        alpha: Order,
        beta: Order,
    },
}

impl KernelSpec {
    pub fn sl2(alpha: Order, beta: Order, bc: BcCoeffs) -> Result<Self> {
        bc.check(alpha.get())?;
        Ok(KernelSpec::SturmLiouville { alpha, beta, bc })
    }

    pub fn conjugate(alpha: Order, beta: Order) -> Self {
        KernelSpec::Conjugate { alpha, beta }
    }

    pub fn right_focal2(alpha: Order, beta: Order) -> Self {
        KernelSpec::RightFocal2 { alpha, beta }
    }

    pub fn right_focal3(alpha: Order, beta: Order, gamma: Order, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(KernelSpec::RightFocal3 {
            alpha,
            beta,
            gamma,
            tau,
        })
    }

    pub fn cantilever(alpha: Order, beta: Order, gamma: Order, delta: Order) -> Self {
        KernelSpec::Cantilever {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn lidstone(alpha: Order, beta: Order) -> Self {
        KernelSpec::Lidstone { alpha, beta }
    }

    pub fn family(&self) -> Family {
        match self {
            KernelSpec::SturmLiouville { .. } => Family::Sl2,
            KernelSpec::Conjugate { .. } => Family::Conjugate2,
            KernelSpec::RightFocal2 { .. } => Family::RightFocal2,
            KernelSpec::RightFocal3 { .. } => Family::RightFocal3,
            KernelSpec::Cantilever { .. } => Family::Cantilever4,
            KernelSpec::Lidstone { .. } => Family::Lidstone4,
        }
    }

    /// Orders of the differential operator, innermost (first applied) first.
    pub fn orders(&self) -> Vec<Order> {
        match *self {
            KernelSpec::SturmLiouville { alpha, beta, .. }
            | KernelSpec::Conjugate { alpha, beta }
            | KernelSpec::RightFocal2 { alpha, beta } => vec![alpha, beta],
            KernelSpec::RightFocal3 {
                alpha, beta, gamma, ..
            } => vec![alpha, beta, gamma],
            KernelSpec::Cantilever {
                alpha,
                beta,
                gamma,
                delta,
            } => vec![alpha, beta, gamma, delta],
            KernelSpec::Lidstone { alpha, beta } => vec![alpha, beta, alpha, beta],
        }
    }

    /// Order whose weight `s^(w-1)` enters the solution integral; the
    /// outermost derivative of the operator.
    pub fn weight_order(&self) -> Order {
        *self
            .orders()
            .last()
            .expect("operators have at least two orders")
    }

    /// `-1` for the second-order families (`-D^b D^a x = h`), `+1` otherwise.
    pub fn sign(&self) -> f64 {
        match self {
            KernelSpec::SturmLiouville { .. }
            | KernelSpec::Conjugate { .. }
            | KernelSpec::RightFocal2 { .. } => -1.0,
            _ => 1.0,
        }
    }

    pub fn tau(&self) -> Option<f64> {
        match self {
            KernelSpec::RightFocal3 { tau, .. } => Some(*tau),
            _ => None,
        }
    }

    /// True when every order of the problem equals one.
    pub fn is_classical(&self) -> bool {
        self.orders().iter().all(|o| o.get() == 1.0)
    }

    /// `s`-values where the kernel switches formula for a fixed `t`.
    pub fn seams(&self, t: f64) -> Vec<f64> {
        match self.tau() {
            Some(tau) => vec![t, tau],
            None => vec![t],
        }
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        self.eval_branch(t, s, Branch::of(t, s))
    }

    /// Evaluates one branch formula regardless of the ordering of `t, s`.
    pub fn eval_branch(&self, t: f64, s: f64, branch: Branch) -> f64 {
        match *self {
            KernelSpec::SturmLiouville { alpha, bc, .. } => {
                g2_sl_branch(t, s, alpha.get(), &bc, branch).expect("validated at construction")
            }
            KernelSpec::Conjugate { alpha, .. } => g2_conjugate_branch(t, s, alpha.get(), branch),
            KernelSpec::RightFocal2 { alpha, .. } => {
                g2_rightfocal_branch(t, s, alpha.get(), branch)
            }
            KernelSpec::RightFocal3 {
                alpha, beta, tau, ..
            } => {
                let side = if s <= tau {
                    TauSide::Below
                } else {
                    TauSide::Above
                };
                g3_rightfocal_piece(t, s, alpha.get(), beta.get(), tau, side, branch)
            }
            KernelSpec::Cantilever {
                alpha, beta, gamma, ..
            } => g4_cantilever_branch(t, s, alpha.get(), beta.get(), gamma.get(), branch),
            KernelSpec::Lidstone { alpha, beta } => match branch {
                Branch::Left => lidstone_u(t, s, alpha.get(), beta.get()),
                Branch::Right => lidstone_u(s, t, alpha.get(), beta.get()),
            },
        }
    }

    /// Differential operator and homogeneous boundary conditions solved by
    /// this kernel.
    pub fn bvp(&self) -> Bvp {
        use BcPoint::{Interior, Left, Right};
        let conditions = match *self {
            KernelSpec::SturmLiouville { bc, .. } => vec![
                BoundaryCondition::new("bc_left")
                    .term(bc.gamma_bc, 0, Left)
                    .term(-bc.delta_bc, 1, Left),
                BoundaryCondition::new("bc_right")
                    .term(bc.eta_bc, 0, Right)
                    .term(bc.zeta_bc, 1, Right),
            ],
            KernelSpec::Conjugate { .. } => vec![
                BoundaryCondition::point("x(0)", 0, Left),
                BoundaryCondition::point("x(1)", 0, Right),
            ],
            KernelSpec::RightFocal2 { .. } => vec![
                BoundaryCondition::point("x(0)", 0, Left),
                BoundaryCondition::point("Dx(1)", 1, Right),
            ],
            KernelSpec::RightFocal3 { tau, .. } => vec![
                BoundaryCondition::point("x(0)", 0, Left),
                BoundaryCondition::point("Dx(tau)", 1, Interior(tau)),
                BoundaryCondition::point("DDx(1)", 2, Right),
            ],
            KernelSpec::Cantilever { .. } => vec![
                BoundaryCondition::point("x(0)", 0, Left),
                BoundaryCondition::point("Dx(0)", 1, Left),
                BoundaryCondition::point("DDx(1)", 2, Right),
                BoundaryCondition::point("DDDx(1)", 3, Right),
            ],
            KernelSpec::Lidstone { .. } => vec![
                BoundaryCondition::point("x(0)", 0, Left),
                BoundaryCondition::point("DDx(0)", 2, Left),
                BoundaryCondition::point("x(1)", 0, Right),
                BoundaryCondition::point("DDx(1)", 2, Right),
            ],
        };
        Bvp::new(self.orders(), self.sign(), conditions).expect("family conditions are well formed")
    }
}
