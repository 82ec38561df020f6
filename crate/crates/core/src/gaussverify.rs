//! Exact Gaussian mutual information by log-determinants, used to check the
//! closed-form Gaussian region and the masking identities of its scheme.

use nalgebra::{Cholesky, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{gaussian_coefficients, gaussian_rate_region, GaussianCoefficients, GaussianParams, GaussianQuadruple};
use crate::prob::InfoValue;

/// Coordinates with variance at or below this are constants and dropped.
const ZERO_VAR: f64 = 1e-12;
const JITTER: f64 = 1e-12;
/// Residual bound for a PASS.
pub const VERIFY_TOL: f64 = 1e-9;

/// Variables of the covariance model, in matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GVar {
    Xp1 = 0,
    Xp2,
    S1,
    S2,
    Z1,
    Z2,
    X,
    U,
    V,
    Y1,
    Y2,
}

pub const PRIMITIVES: usize = 6;
pub const MODEL_VARS: usize = 11;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceModel {
    /// Variances of `(X′1, X′2, S1, S2, Z1, Z2)`, mutually independent.
    pub primitive_var: [f64; PRIMITIVES],
    /// Rows for `X, U, V, Y1, Y2` over the primitives.
    pub lin_maps: [[f64; PRIMITIVES]; 5],
    /// Covariance of all eleven variables.
    pub full_cov: DMatrix<f64>,
}

impl CovarianceModel {
    pub fn cov(&self, a: GVar, b: GVar) -> f64 {
        self.full_cov[(a as usize, b as usize)]
    }

    pub fn var(&self, a: GVar) -> f64 {
        self.cov(a, a)
    }
}

/// Propagates the diagonal primitive covariance through the linear maps.
pub fn build_covariance(gp: &GaussianParams, co: &GaussianCoefficients) -> Result<CovarianceModel> {
    gp.validate()?;
    let pp_raw = (1.0 - gp.rho1 * gp.rho1 - gp.rho2 * gp.rho2) * gp.p;
    if pp_raw < -1e-12 {
        return Err(Error::Validation(format!("P′ = {pp_raw} is negative")));
    }
    let pp = gp.p_prime();
    let primitive_var = [gp.gamma * pp, (1.0 - gp.gamma) * pp, gp.q1, gp.q2, gp.n1, gp.n2];
    if primitive_var.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::Validation(format!("negative primitive variance in {primitive_var:?}")));
    }
    let x = [1.0, 1.0, co.beta1, co.beta2, 0.0, 0.0];
    let u = [1.0, co.alpha10, co.alpha11, co.alpha12, 0.0, 0.0];
    let v = [0.0, 1.0, co.alpha21, co.alpha22, 0.0, 0.0];
    let mut y1 = x;
    y1[2] += 1.0;
    y1[4] += 1.0;
    let mut y2 = x;
    y2[3] += 1.0;
    y2[5] += 1.0;
    let lin_maps = [x, u, v, y1, y2];

    let mut l = DMatrix::<f64>::zeros(MODEL_VARS, PRIMITIVES);
    for k in 0..PRIMITIVES {
        l[(k, k)] = 1.0;
    }
    for (r, row) in lin_maps.iter().enumerate() {
        for (c, a) in row.iter().enumerate() {
            l[(PRIMITIVES + r, c)] = *a;
        }
    }
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&primitive_var));
    let full = &l * d * l.transpose();
    let full_cov = (&full + full.transpose()) * 0.5;
    Ok(CovarianceModel { primitive_var, lin_maps, full_cov })
}

/// `I(A;B|C)` over index sets of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussMiQuery {
    pub set_a: Vec<GVar>,
    pub set_b: Vec<GVar>,
    pub set_c: Vec<GVar>,
}

impl GaussMiQuery {
    pub fn new(a: &[GVar], b: &[GVar], c: &[GVar]) -> Self {
        GaussMiQuery { set_a: a.to_vec(), set_b: b.to_vec(), set_c: c.to_vec() }
    }
}

/// Natural-log determinant of the covariance of `vars`, after dropping
/// constant coordinates.
fn ln_det(cov: &DMatrix<f64>, vars: &[usize]) -> Result<f64> {
    let live: Vec<usize> = vars.iter().copied().filter(|&i| cov[(i, i)] > ZERO_VAR).collect();
    if live.is_empty() {
        return Ok(0.0);
    }
    let sub = DMatrix::from_fn(live.len(), live.len(), |r, c| cov[(live[r], live[c])]);
    let chol = Cholesky::new(sub.clone()).or_else(|| {
        let n = sub.nrows();
        Cholesky::new(sub + DMatrix::identity(n, n) * JITTER)
    });
    let chol = chol.ok_or_else(|| Error::Numerical(format!("covariance block over {vars:?} is not positive definite")))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}

pub fn gaussian_mi(cm: &CovarianceModel, q: &GaussMiQuery) -> Result<InfoValue> {
    let idx = |s: &[GVar]| s.iter().map(|v| *v as usize).collect::<Vec<_>>();
    let (a, b, c) = (idx(&q.set_a), idx(&q.set_b), idx(&q.set_c));
    if a.iter().chain(&b).any(|i| c.contains(i)) || a.iter().any(|i| b.contains(i)) {
        return Err(Error::Validation(format!("MI query sets overlap: {q:?}")));
    }
    let join = |x: &[usize], y: &[usize]| [x, y].concat();
    let nats = 0.5
        * (ln_det(&cm.full_cov, &join(&a, &c))? + ln_det(&cm.full_cov, &join(&b, &c))?
            - ln_det(&cm.full_cov, &c)?
            - ln_det(&cm.full_cov, &[a.as_slice(), &b, &c].concat())?);
    let bits = nats / std::f64::consts::LN_2;
    Ok(InfoValue::from_bits(crate::prob::clamp_info(bits)?))
}

/// Differential entropy `h(vars)` in bits; constants are dropped.
pub fn gaussian_entropy(cm: &CovarianceModel, vars: &[GVar]) -> Result<f64> {
    let idx: Vec<usize> = vars.iter().map(|v| *v as usize).collect();
    let n = idx.iter().filter(|&&i| cm.full_cov[(i, i)] > ZERO_VAR).count() as f64;
    let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    Ok(0.5 * (n * two_pi_e.ln() + ln_det(&cm.full_cov, &idx)?) / std::f64::consts::LN_2)
}

/// Residuals of one parameter set, in the caller's user labels.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub params: GaussianParams,
    pub closed_form: GaussianQuadruple,
    /// `|I(U;Y1) − I(U;V,S) − r1|` (user 1), and the `V` analogue.
    pub residual_r1: f64,
    pub residual_r2: f64,
    /// `|I(S1,S2;Y_k) − e_k|`.
    pub residual_e1: f64,
    pub residual_e2: f64,
    /// `I(S1,S2;U|Y1)` and `I(S1,S2;V|Y2)`, which should vanish.
    pub masking1: f64,
    pub masking2: f64,
    /// `|Var(X) − P|`.
    pub power_residual: f64,
    /// `|h(S1,S2) − ½log2((2πe)²Q1Q2)|`, when both state variances are positive.
    pub state_entropy_residual: Option<f64>,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.residual_r1,
            self.residual_r2,
            self.residual_e1,
            self.residual_e2,
            self.masking1,
            self.masking2,
            self.power_residual,
            self.state_entropy_residual.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= VERIFY_TOL
    }
}

pub fn verify_gaussian_point(gp: &GaussianParams) -> Result<VerificationReport> {
    use GVar::*;
    let closed_form = gaussian_rate_region(gp)?;
    let (canon, swapped) = gp.canonical();
    let canon_closed = gaussian_rate_region(&canon)?;
    let co = gaussian_coefficients(&canon)?;
    let cm = build_covariance(&canon, &co)?;
    let mi = |a: &[GVar], b: &[GVar], c: &[GVar]| gaussian_mi(&cm, &GaussMiQuery::new(a, b, c)).map(InfoValue::bits);

    let r1 = mi(&[U], &[Y1], &[])? - mi(&[U], &[V, S1, S2], &[])?;
    let r2 = mi(&[V], &[Y2], &[])? - mi(&[V], &[S1, S2], &[])?;
    let e1 = mi(&[S1, S2], &[Y1], &[])?;
    let e2 = mi(&[S1, S2], &[Y2], &[])?;
    let mut res = [
        (r1 - canon_closed.r1).abs(),
        (r2 - canon_closed.r2).abs(),
        (e1 - canon_closed.e1).abs(),
        (e2 - canon_closed.e2).abs(),
        mi(&[S1, S2], &[U], &[Y1])?,
        mi(&[S1, S2], &[V], &[Y2])?,
    ];
    if swapped {
        res.swap(0, 1);
        res.swap(2, 3);
        res.swap(4, 5);
    }
    let state_entropy_residual = if canon.q1 > 0.0 && canon.q2 > 0.0 {
        let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
        let closed = 0.5 * (two_pi_e * two_pi_e * canon.q1 * canon.q2).log2();
        Some((gaussian_entropy(&cm, &[S1, S2])? - closed).abs())
    } else {
        None
    };
    Ok(VerificationReport {
        params: *gp,
        closed_form,
        residual_r1: res[0],
        residual_r2: res[1],
        residual_e1: res[2],
        residual_e2: res[3],
        masking1: res[4],
        masking2: res[5],
        power_residual: (cm.var(X) - gp.p).abs(),
        state_entropy_residual,
    })
}

/// Ranges for random parameter draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRanges {
    pub p: (f64, f64),
    pub n: (f64, f64),
    pub q: (f64, f64),
}

impl Default for SampleRanges {
    fn default() -> Self {
        SampleRanges { p: (0.1, 10.0), n: (0.1, 5.0), q: (0.0, 5.0) }
    }
}

/// Seeded parameter draw: `N1 < N2`, `γ` uniform, `ρ` uniform in the disk.
pub fn sample_params(seed: u64, index: u64, ranges: &SampleRanges) -> GaussianParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut uni = |(lo, hi): (f64, f64)| lo + (hi - lo) * rng.random::<f64>();
    let p = uni(ranges.p);
    let (mut n1, mut n2) = (uni(ranges.n), uni(ranges.n));
    if n1 > n2 {
        std::mem::swap(&mut n1, &mut n2);
    }
    let q1 = uni(ranges.q);
    let q2 = uni(ranges.q);
    let gamma = uni((0.0, 1.0));
    let (rho1, rho2) = loop {
        let (a, b) = (uni((-1.0, 1.0)), uni((-1.0, 1.0)));
        if a * a + b * b <= 1.0 {
            break (a, b);
        }
    };
    GaussianParams { p, n1, n2, q1, q2, gamma, rho1, rho2 }
}

/// Verifies `samples` seeded parameter sets in parallel; reports come back
/// in sample order.
pub fn verify_batch(seed: u64, samples: usize, ranges: &SampleRanges) -> Result<Vec<VerificationReport>> {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| verify_gaussian_point(&sample_params(seed, i, ranges)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use GVar::*;

    fn model(gp: &GaussianParams) -> CovarianceModel {
        build_covariance(gp, &gaussian_coefficients(gp).unwrap()).unwrap()
    }

    #[test]
    fn correlated_pair() {
        let cm = CovarianceModel {
            primitive_var: [0.0; 6],
            lin_maps: [[0.0; 6]; 5],
            full_cov: DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]),
        };
        // indices 0 and 1 stand in for the pair
        let v = gaussian_mi(&cm, &GaussMiQuery::new(&[Xp1], &[Xp2], &[])).unwrap().bits();
        assert!((v + 0.5 * 0.75f64.log2()).abs() < 1e-12);
        assert!((v - 0.207519).abs() < 1e-6);
    }

    #[test]
    fn independent_primitives() {
        let gp = GaussianParams::new(1.0, 1.0, 2.0, 1.0, 1.0, 0.5, 0.0, 0.0).unwrap();
        let cm = model(&gp);
        assert_eq!(gaussian_mi(&cm, &GaussMiQuery::new(&[S1], &[Z1, Xp1], &[])).unwrap().bits(), 0.0);
        assert!(gaussian_mi(&cm, &GaussMiQuery::new(&[S1], &[S1], &[])).is_err());
    }

    #[test]
    fn covariance_entries() {
        let gp = GaussianParams::new(2.0, 0.5, 1.5, 3.0, 0.7, 0.4, 0.3, -0.5).unwrap();
        let cm = model(&gp);
        let cross = 0.3 * (2.0f64 * 3.0).sqrt();
        assert!((cm.var(X) - 2.0).abs() < 1e-12);
        assert!((cm.cov(X, S1) - cross).abs() < 1e-12);
        assert!((cm.var(Y1) - (2.0 + 2.0 * cross + 3.0 + 0.5)).abs() < 1e-12);
        let eig = cm.full_cov.clone().symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|&e| e >= -1e-9));
    }

    #[test]
    fn single_branch_reduction() {
        let gp = GaussianParams::new(1.7, 1.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let cm = model(&gp);
        assert!((cm.var(U) - 1.7).abs() < 1e-12);
        let rep = verify_gaussian_point(&gp).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!((rep.closed_form.r1 - 0.5 * (1.0f64 + 1.7).log2()).abs() < 1e-15);
    }

    #[test]
    fn boundary_points_pass() {
        for gamma in [0.0, 1.0] {
            for (r1, r2) in [(0.0, 0.0), (0.6, 0.8), (-1.0, 0.0)] {
                let gp = GaussianParams::new(1.0, 1.0, 2.0, 1.0, 1.0, gamma, r1, r2).unwrap();
                let rep = verify_gaussian_point(&gp).unwrap();
                assert!(rep.passed(), "{rep:?}");
            }
        }
    }

    #[test]
    fn swapped_labels_pass() {
        let gp = GaussianParams::new(3.0, 2.0, 0.5, 1.0, 4.0, 0.3, 0.2, 0.5).unwrap();
        assert!(verify_gaussian_point(&gp).unwrap().passed());
    }

    #[test]
    fn seeded_batch_passes() {
        let reps = verify_batch(11, 40, &SampleRanges::default()).unwrap();
        let worst = reps.iter().map(VerificationReport::max_residual).fold(0.0, f64::max);
        assert!(worst <= VERIFY_TOL, "worst residual {worst}");
    }
}
