//! Scalar Gaussian broadcast channel with two additive states:
//! `Y_k = X + S_k + Z_k`, `E[X²] <= P`, `S_k ~ N(0, Q_k)`, `Z_k ~ N(0, N_k)`.
//!
//! The region is traced by the power split `γ` and the state correlations
//! `ρ1, ρ2` of the input. Formulas assume receiver 1 is the stronger one
//! (`N1 < N2`); other labelings are handled by swapping users internally.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Tolerance on `ρ1² + ρ2² <= 1`.
pub const RHO_TOL: f64 = 1e-12;
const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub p: f64,
    pub n1: f64,
    pub n2: f64,
    pub q1: f64,
    pub q2: f64,
    /// Share of the uncorrelated power `P′` given to user 1.
    pub gamma: f64,
    pub rho1: f64,
    pub rho2: f64,
}

impl GaussianParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(p: f64, n1: f64, n2: f64, q1: f64, q2: f64, gamma: f64, rho1: f64, rho2: f64) -> Result<Self> {
        let gp = GaussianParams { p, n1, n2, q1, q2, gamma, rho1, rho2 };
        gp.validate()?;
        Ok(gp)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.p, self.n1, self.n2, self.q1, self.q2, self.gamma, self.rho1, self.rho2];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite Gaussian parameter in {self:?}")));
        }
        if self.p <= 0.0 {
            return Err(Error::Validation(format!("power P must be > 0, got {}", self.p)));
        }
        if self.n1 <= 0.0 || self.n2 <= 0.0 {
            return Err(Error::Validation("noise variances must be > 0".into()));
        }
        if self.q1 < 0.0 || self.q2 < 0.0 {
            return Err(Error::Validation("state variances must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Validation(format!("gamma must lie in [0, 1], got {}", self.gamma)));
        }
        if self.rho1 * self.rho1 + self.rho2 * self.rho2 > 1.0 + RHO_TOL {
            return Err(Error::Validation(format!("rho1² + rho2² > 1 for ({}, {})", self.rho1, self.rho2)));
        }
        for (k, q, rho) in [(1, self.q1, self.rho1), (2, self.q2, self.rho2)] {
            if q == 0.0 && rho != 0.0 {
                return Err(Error::Validation(format!("rho{k} = {rho} is undefined with Q{k} = 0")));
            }
        }
        Ok(())
    }

    /// `P′ = (1 − ρ1² − ρ2²)·P`, clamped at zero.
    pub fn p_prime(&self) -> f64 {
        ((1.0 - self.rho1 * self.rho1 - self.rho2 * self.rho2) * self.p).max(0.0)
    }

    /// Labels with `N1 <= N2`; `swapped` records whether users were exchanged.
    pub fn canonical(&self) -> (GaussianParams, bool) {
        if self.n2 < self.n1 {
            let swapped = GaussianParams {
                p: self.p,
                n1: self.n2,
                n2: self.n1,
                q1: self.q2,
                q2: self.q1,
                gamma: 1.0 - self.gamma,
                rho1: self.rho2,
                rho2: self.rho1,
            };
            (swapped, true)
        } else {
            (*self, false)
        }
    }
}

/// `(R1, R2, E1, E2)` in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianQuadruple {
    pub r1: f64,
    pub r2: f64,
    pub e1: f64,
    pub e2: f64,
}

impl GaussianQuadruple {
    pub fn as_array(&self) -> [f64; 4] {
        [self.r1, self.r2, self.e1, self.e2]
    }

    fn swapped(self) -> Self {
        GaussianQuadruple { r1: self.r2, r2: self.r1, e1: self.e2, e2: self.e1 }
    }

    /// Rates `>= b − tol`, leakages `<= b + tol`.
    pub fn covers(&self, other: &GaussianQuadruple, tol: f64) -> bool {
        self.r1 >= other.r1 - tol && self.r2 >= other.r2 - tol && self.e1 <= other.e1 + tol && self.e2 <= other.e2 + tol
    }

    pub fn dominates(&self, other: &GaussianQuadruple) -> bool {
        self.covers(other, 0.0) && self != other
    }
}

/// Coefficients of the dirty-paper style auxiliaries
/// `U = X′1 + α10·X′2 + α11·S1 + α12·S2`, `V = X′2 + α21·S1 + α22·S2`,
/// and of the input `X = X′1 + X′2 + β1·S1 + β2·S2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCoefficients {
    pub beta1: f64,
    pub beta2: f64,
    pub alpha10: f64,
    pub alpha11: f64,
    pub alpha12: f64,
    pub alpha21: f64,
    pub alpha22: f64,
}

fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

fn snap(v: f64) -> f64 {
    if v.abs() <= SNAP {
        0.0
    } else {
        v
    }
}

/// Closed-form region point for canonically labelled parameters.
fn canonical_region(gp: &GaussianParams) -> GaussianQuadruple {
    let pp = gp.p_prime();
    let g = gp.gamma;
    let r1 = half_log2(1.0 + g * pp / gp.n1);
    let r2 = half_log2(1.0 + (1.0 - g) * pp / (g * pp + gp.n2));
    let leak = |q: f64, rho: f64, n: f64| {
        half_log2((gp.p + 2.0 * rho * (gp.p * q).sqrt() + q + n) / (pp + n))
    };
    GaussianQuadruple {
        r1: snap(r1),
        r2: snap(r2),
        e1: snap(leak(gp.q1, gp.rho1, gp.n1)),
        e2: snap(leak(gp.q2, gp.rho2, gp.n2)),
    }
}

/// The region point for one `(γ, ρ1, ρ2)`, in the caller's user labels.
pub fn gaussian_rate_region(gp: &GaussianParams) -> Result<GaussianQuadruple> {
    gp.validate()?;
    let (canon, swapped) = gp.canonical();
    let q = canonical_region(&canon);
    Ok(if swapped { q.swapped() } else { q })
}

/// Auxiliary coefficients for the given parameters, which must already be
/// in canonical labels (`N1 <= N2`); see [`GaussianParams::canonical`].
pub fn gaussian_coefficients(gp: &GaussianParams) -> Result<GaussianCoefficients> {
    gp.validate()?;
    if gp.n2 < gp.n1 {
        return Err(Error::Validation("coefficients need canonical labels (N1 <= N2)".into()));
    }
    // Q_k = 0 forces ρ_k = 0 by validation; take β_k = 0 then.
    let beta = |rho: f64, q: f64| if q == 0.0 { 0.0 } else { rho * (gp.p / q).sqrt() };
    let beta1 = beta(gp.rho1, gp.q1);
    let beta2 = beta(gp.rho2, gp.q2);
    let pp = gp.p_prime();
    let g = gp.gamma;
    let d1 = g * pp + gp.n1;
    let d2 = pp + gp.n2;
    Ok(GaussianCoefficients {
        beta1,
        beta2,
        alpha10: g * pp / d1,
        alpha11: (1.0 + beta1) * g * pp / d1,
        alpha12: beta2 * g * pp / d1,
        alpha21: beta1 * (1.0 - g) * pp / d2,
        alpha22: (1.0 + beta2) * (1.0 - g) * pp / d2,
    })
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPoint {
    pub gamma: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub value: GaussianQuadruple,
}

/// Grid resolutions of a sweep. A resolution of 1 keeps the base value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepGrid {
    pub gamma_steps: usize,
    pub rho_steps: usize,
}

fn grid(steps: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
}

/// Evaluates `γ ∈ [0,1]` and `(ρ1, ρ2)` on the square grid over `[−1,1]²`
/// restricted to the closed unit disk, skipping points that are invalid
/// (outside the disk, or `ρ_k ≠ 0` with `Q_k = 0`). Returns the
/// non-dominated points, sorted by `(r1, r2, e1, e2)` then grid order.
pub fn sweep_region(base: &GaussianParams, g: SweepGrid) -> Result<Vec<GaussianPoint>> {
    base.validate()?;
    if g.gamma_steps == 0 || g.rho_steps == 0 {
        return Err(Error::Validation("sweep grid sizes must be >= 1".into()));
    }
    let gammas = if g.gamma_steps == 1 { vec![base.gamma] } else { grid(g.gamma_steps, 0.0, 1.0) };
    let rhos: Vec<(f64, f64)> = if g.rho_steps == 1 {
        vec![(base.rho1, base.rho2)]
    } else {
        let axis = grid(g.rho_steps, -1.0, 1.0);
        axis.iter().flat_map(|&a| axis.iter().map(move |&b| (a, b))).collect()
    };
    let points: Vec<GaussianPoint> = gammas
        .par_iter()
        .map(|&gamma| {
            rhos.iter()
                .filter_map(|&(rho1, rho2)| {
                    let gp = GaussianParams { gamma, rho1, rho2, ..*base };
                    gaussian_rate_region(&gp).ok().map(|value| GaussianPoint { gamma, rho1, rho2, value })
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(pareto_points(points))
}

/// Pareto filter for Gaussian points with the same tie rules as the
/// discrete frontier: within 1e-12, the first point in sorted order wins.
pub fn pareto_points(mut points: Vec<GaussianPoint>) -> Vec<GaussianPoint> {
    const TOL: f64 = 1e-12;
    let lex = |a: &[f64], b: &[f64]| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    };
    points.sort_by(|a, b| {
        lex(&a.value.as_array(), &b.value.as_array()).then(lex(&[a.gamma, a.rho1, a.rho2], &[b.gamma, b.rho1, b.rho2]))
    });
    // likely dominators first, so most checks exit early
    let mut probe: Vec<usize> = (0..points.len()).collect();
    let score = |q: &GaussianQuadruple| q.r1 + q.r2 - q.e1 - q.e2;
    probe.sort_by(|&a, &b| score(&points[b].value).total_cmp(&score(&points[a].value)).then(a.cmp(&b)));
    let keep: Vec<bool> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let qi = &points[i].value;
            !probe.iter().any(|&j| {
                let qj = &points[j].value;
                j != i && qj.covers(qi, TOL) && (!qi.covers(qj, TOL) || j < i)
            })
        })
        .collect();
    points.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}
