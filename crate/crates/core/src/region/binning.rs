//! The achievable `(R0, R1, R2)` polytope of the superposition/binning
//! scheme, obtained by eliminating the four auxiliary binning rates from
//! the covering and packing constraints.

use crate::error::Result;
use crate::prob::AuxiliaryJoint;

use super::bounds::{InnerBoundValues, InnerTerms};
use super::fm::{eliminate_all, Inequality};

const FEAS_TOL: f64 = 1e-10;

// Column layout of the lifted system.
const R0: usize = 0;
const R1: usize = 1;
const R2: usize = 2;
const RT0: usize = 3;
const RT2: usize = 4;
const RT1S: usize = 5;
const RT12: usize = 6;
const LIFTED: usize = 7;

/// A bounded polytope in `(R0, R1, R2)` described by inequalities, with its
/// vertices enumerated.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePolytope {
    constraints: Vec<Inequality>,
    vertices: Vec<[f64; 3]>,
}

impl RatePolytope {
    /// Builds the polytope `{r >= 0, a·r <= b}`.
    pub fn from_constraints(mut constraints: Vec<Inequality>) -> Self {
        for k in 0..3 {
            let mut row = vec![0.0; 3];
            row[k] = -1.0;
            if !constraints.iter().any(|c| c.coeffs == row) {
                constraints.push(Inequality::new(row, 0.0));
            }
        }
        let vertices = enumerate_vertices(&constraints);
        RatePolytope { constraints, vertices }
    }

    pub fn constraints(&self) -> &[Inequality] {
        &self.constraints
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `max dir·r` over the polytope, `None` when it is empty.
    pub fn support(&self, dir: [f64; 3]) -> Option<f64> {
        self.vertices
            .iter()
            .map(|v| dir[0] * v[0] + dir[1] * v[1] + dir[2] * v[2])
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
    }

    /// Right-hand side of the constraint row pointing exactly along `dir`
    /// (after scaling to unit max-coefficient), if the elimination produced one.
    pub fn raw_bound(&self, dir: [f64; 3]) -> Option<f64> {
        let scale = dir.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let unit: Vec<f64> = dir.iter().map(|c| c / scale).collect();
        self.constraints
            .iter()
            .filter(|c| c.coeffs.iter().zip(&unit).all(|(a, b)| (a - b).abs() <= 1e-12))
            .map(|c| c.rhs * scale)
            .reduce(f64::min)
    }

    pub fn contains(&self, r: [f64; 3], tol: f64) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(&r, tol))
    }
}

fn enumerate_vertices(constraints: &[Inequality]) -> Vec<[f64; 3]> {
    if constraints.iter().any(|c| c.is_trivial() && c.rhs < -FEAS_TOL) {
        return Vec::new();
    }
    let rows: Vec<&Inequality> = constraints.iter().filter(|c| !c.is_trivial()).collect();
    let mut vertices: Vec<[f64; 3]> = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for k in j + 1..rows.len() {
                let Some(point) = solve3(rows[i], rows[j], rows[k]) else { continue };
                if !rows.iter().all(|c| c.satisfied_by(&point, FEAS_TOL)) {
                    continue;
                }
                let point = point.map(|x| if x.abs() < 1e-13 { 0.0 } else { x });
                if !vertices.iter().any(|v| v.iter().zip(&point).all(|(a, b)| (a - b).abs() <= 1e-10)) {
                    vertices.push(point);
                }
            }
        }
    }
    vertices.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    vertices
}

/// Intersection of three planes by Cramer's rule.
fn solve3(a: &Inequality, b: &Inequality, c: &Inequality) -> Option<[f64; 3]> {
    let m = [&a.coeffs, &b.coeffs, &c.coeffs];
    let rhs = [a.rhs, b.rhs, c.rhs];
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let base = [[m[0][0], m[0][1], m[0][2]], [m[1][0], m[1][1], m[1][2]], [m[2][0], m[2][1], m[2][2]]];
    let d = det3(base);
    if d.abs() < 1e-12 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mm = base;
        for row in 0..3 {
            mm[row][col] = rhs[row];
        }
        *slot = det3(mm) / d;
    }
    Some(out)
}

/// The rate polytope of the binning scheme for one joint.
///
/// Lifted system over `(R0,R1,R2, R~0,R~2,R~1s,R~12)`:
/// covering `R~0 >= I(W;S)`, `R~2 >= I(V;S|W)`, `R~1s >= I(U;S|W)`,
/// `R~12 >= I(U;V|S,W)`; packing `R1+R~1s+R~12 <= I(U;Y1|W)`,
/// `R0+R~0+R1+R~1s+R~12 <= I(W,U;Y1)`, `R2+R~2 <= I(V;Y2|W)`,
/// `R0+R~0+R2+R~2 <= I(W,V;Y2)`; common-message decoding
/// `R0+R~0 <= I(W;Y_k)`; and non-negativity of every rate.
pub fn binning_polytope(joint: &AuxiliaryJoint) -> Result<RatePolytope> {
    Ok(polytope_from_terms(&InnerTerms::compute(joint)?))
}

pub(crate) fn polytope_from_terms(t: &InnerTerms) -> RatePolytope {
    let row = |entries: &[(usize, f64)], rhs: f64| {
        let mut coeffs = vec![0.0; LIFTED];
        for &(k, a) in entries {
            coeffs[k] = a;
        }
        Inequality::new(coeffs, rhs)
    };
    let mut system = vec![
        row(&[(RT0, -1.0)], -t.i_w_s),
        row(&[(RT2, -1.0)], -t.i_v_s_given_w),
        row(&[(RT1S, -1.0)], -t.i_u_s_given_w),
        row(&[(RT12, -1.0)], -t.i_u_v_given_ws),
        row(&[(R1, 1.0), (RT1S, 1.0), (RT12, 1.0)], t.i_u_y1_given_w),
        row(&[(R0, 1.0), (RT0, 1.0), (R1, 1.0), (RT1S, 1.0), (RT12, 1.0)], t.i_wu_y1),
        row(&[(R2, 1.0), (RT2, 1.0)], t.i_v_y2_given_w),
        row(&[(R0, 1.0), (RT0, 1.0), (R2, 1.0), (RT2, 1.0)], t.i_wv_y2),
        row(&[(R0, 1.0), (RT0, 1.0)], t.i_w_y1),
        row(&[(R0, 1.0), (RT0, 1.0)], t.i_w_y2),
    ];
    for k in 0..LIFTED {
        system.push(row(&[(k, -1.0)], 0.0));
    }
    let projected = eliminate_all(&system, &[RT0, RT2, RT1S, RT12])
        .into_iter()
        .map(|c| Inequality::new(c.coeffs[..3].to_vec(), c.rhs))
        .collect();
    RatePolytope::from_constraints(projected)
}

/// Binning-region evaluation: the polytope plus its support values.
#[derive(Debug, Clone, PartialEq)]
pub struct BinningRegion {
    pub polytope: RatePolytope,
    /// `b_*` are the polytope maxima of `R0`, `R0+R1`, `R0+R2` and
    /// `R0+R1+R2`; all zero when the polytope is empty.
    pub values: InnerBoundValues,
}

impl BinningRegion {
    pub fn is_feasible(&self) -> bool {
        !self.polytope.is_empty()
    }
}

pub fn binning_region(joint: &AuxiliaryJoint) -> Result<BinningRegion> {
    let t = InnerTerms::compute(joint)?;
    let polytope = polytope_from_terms(&t);
    let sup = |d| polytope.support(d).unwrap_or(0.0);
    let sum = sup([1.0, 1.0, 1.0]);
    let values = InnerBoundValues {
        b_r0: sup([1.0, 0.0, 0.0]),
        b_r01: sup([1.0, 1.0, 0.0]),
        b_r02: sup([1.0, 0.0, 1.0]),
        b_rsum: sum,
        l1: t.leak1,
        l2: t.leak2,
        appendix_sum: sum,
    };
    Ok(BinningRegion { polytope, values })
}
