use std::cmp::Ordering;

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::prob::AuxConditional;

/// Values within this distance of zero are stored as exact zeros.
const SNAP: f64 = 1e-12;
/// Componentwise tolerance of the Pareto filter.
pub const DOMINANCE_TOL: f64 = 1e-12;

/// `(R0, R1, R2, E1, E2)` in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateQuintuple {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub e1: f64,
    pub e2: f64,
}

impl RateQuintuple {
    pub fn new(r0: f64, r1: f64, r2: f64, e1: f64, e2: f64) -> Result<Self> {
        let q = RateQuintuple { r0, r1, r2, e1, e2 };
        if q.as_array().iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Validation(format!("quintuple components must be finite and >= 0: {q:?}")));
        }
        Ok(q)
    }

    /// Builds from computed values, snapping round-off near zero.
    pub(crate) fn from_computed(r: [f64; 3], e: [f64; 2]) -> Self {
        let snap = |v: f64| if v.abs() <= SNAP { 0.0 } else { v };
        RateQuintuple { r0: snap(r[0]), r1: snap(r[1]), r2: snap(r[2]), e1: snap(e[0]), e2: snap(e[1]) }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.r0, self.r1, self.r2, self.e1, self.e2]
    }

    pub fn rates(&self) -> [f64; 3] {
        [self.r0, self.r1, self.r2]
    }

    pub fn leakages(&self) -> [f64; 2] {
        [self.e1, self.e2]
    }

    /// Rates all `>=`, leakages all `<=`, at least one strict.
    pub fn dominates(&self, other: &RateQuintuple) -> bool {
        self.covers(other, 0.0) && self != other
    }

    /// Weak dominance up to `tol` in every component.
    pub fn covers(&self, other: &RateQuintuple, tol: f64) -> bool {
        self.rates().iter().zip(other.rates()).all(|(a, b)| *a >= b - tol)
            && self.leakages().iter().zip(other.leakages()).all(|(a, b)| *a <= b + tol)
    }

    pub fn lex_cmp(&self, other: &RateQuintuple) -> Ordering {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| a.total_cmp(&b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// Where a frontier point came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// Row number in the emitted frontier.
    pub id: usize,
    /// The auxiliary conditional that produced the point, when known.
    pub conditional: Option<AuxConditional>,
}

/// Non-dominated quintuples, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionFrontier {
    pub points: Vec<RateQuintuple>,
    pub provenance: Vec<Provenance>,
    /// Indices of points spanning the lower-left convex hull in `(E1, E2)`,
    /// when computed.
    pub hull: Option<Vec<usize>>,
}

impl RegionFrontier {
    /// Pareto-filters the candidates and assigns row ids in sorted order.
    pub fn from_candidates(candidates: Vec<(RateQuintuple, Option<AuxConditional>)>) -> Self {
        let kept = pareto_filter(candidates, |(q, _)| *q);
        let mut frontier = RegionFrontier::default();
        for (id, (q, cond)) in kept.into_iter().enumerate() {
            frontier.points.push(q);
            frontier.provenance.push(Provenance { id, conditional: cond });
        }
        frontier
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Keeps the items whose quintuples are not dominated (within
/// [`DOMINANCE_TOL`]); among near-equal points the lexicographically first
/// survives. Output is sorted lexicographically.
pub fn pareto_filter<T>(mut items: Vec<T>, key: impl Fn(&T) -> RateQuintuple) -> Vec<T> {
    items.sort_by(|a, b| key(a).lex_cmp(&key(b)));
    let keys: Vec<RateQuintuple> = items.iter().map(&key).collect();
    let keep: Vec<bool> = (0..keys.len())
        .map(|i| {
            !keys.iter().enumerate().any(|(j, other)| {
                if i == j || !other.covers(&keys[i], DOMINANCE_TOL) {
                    return false;
                }
                // mutual cover: near-equal, first in order wins
                !keys[i].covers(other, DOMINANCE_TOL) || j < i
            })
        })
        .collect();
    items.into_iter().zip(keep).filter_map(|(item, k)| k.then_some(item)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Dominated by the listed time-sharing combination `(point index, weight)`.
    Inside { weights: Vec<(usize, f64)> },
    /// Not dominated by anything found; not a proof of infeasibility.
    OutsideOfFound,
}

impl Verdict {
    pub fn is_inside(&self) -> bool {
        matches!(self, Verdict::Inside { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Inside { .. } => "INSIDE",
            Verdict::OutsideOfFound => "OUTSIDE-OF-FOUND",
        }
    }
}

/// Tests whether `q` lies in the up/down closure of the convex hull of the
/// frontier: rates at most, leakages at least, some convex combination.
pub fn check_point(frontier: &RegionFrontier, q: &RateQuintuple) -> Result<Verdict> {
    if frontier.is_empty() {
        return Err(Error::Validation("cannot check a point against an empty frontier".into()));
    }
    if let Some(i) = frontier.points.iter().position(|p| p.covers(q, DOMINANCE_TOL)) {
        return Ok(Verdict::Inside { weights: vec![(i, 1.0)] });
    }
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let lambdas: Vec<_> = frontier.points.iter().map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let simplex: Vec<_> = lambdas.iter().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(simplex.as_slice(), ComparisonOp::Eq, 1.0);
    for (k, target) in q.as_array().into_iter().enumerate() {
        let row: Vec<_> = lambdas.iter().zip(&frontier.points).map(|(&v, p)| (v, p.as_array()[k])).collect();
        if k < 3 {
            lp.add_constraint(row.as_slice(), ComparisonOp::Ge, target - DOMINANCE_TOL);
        } else {
            lp.add_constraint(row.as_slice(), ComparisonOp::Le, target + DOMINANCE_TOL);
        }
    }
    match lp.solve() {
        Ok(solution) => {
            let weights = lambdas
                .iter()
                .enumerate()
                .map(|(i, &v)| (i, solution[v]))
                .filter(|(_, w)| *w > 1e-12)
                .collect();
            Ok(Verdict::Inside { weights })
        }
        Err(minilp::Error::Infeasible) => Ok(Verdict::OutsideOfFound),
        Err(e) => Err(Error::Numerical(format!("time-sharing LP failed: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: [f64; 5]) -> RateQuintuple {
        RateQuintuple::new(v[0], v[1], v[2], v[3], v[4]).unwrap()
    }

    #[test]
    fn dominance_rules() {
        let a = q([1.0, 1.0, 0.0, 0.2, 0.2]);
        let b = q([1.0, 0.5, 0.0, 0.2, 0.3]);
        assert!(a.dominates(&b));
        assert!(!b.dominates(&a));
        assert!(!a.dominates(&a));
        assert!(RateQuintuple::new(-1.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn pareto_filter_keeps_incomparable_and_sorts() {
        let pts = vec![
            q([0.0, 1.0, 0.0, 0.5, 0.5]),
            q([1.0, 0.0, 0.0, 0.5, 0.5]),
            q([0.5, 0.0, 0.0, 0.6, 0.5]),
            q([1.0, 0.0, 0.0, 0.5, 0.5 + 1e-14]),
        ];
        let kept = pareto_filter(pts, |p| *p);
        assert_eq!(kept, vec![q([0.0, 1.0, 0.0, 0.5, 0.5]), q([1.0, 0.0, 0.0, 0.5, 0.5])]);
    }

    #[test]
    fn check_point_examples() {
        let frontier = RegionFrontier::from_candidates(vec![
            (q([1.0, 0.0, 0.0, 0.4, 0.1]), None),
            (q([0.0, 1.0, 0.0, 0.1, 0.4]), None),
        ]);
        let corner = q([0.0, 0.0, 0.0, 0.4, 0.4]);
        assert!(check_point(&frontier, &corner).unwrap().is_inside());

        let too_fast = q([2.0, 0.0, 0.0, 1.0, 1.0]);
        assert_eq!(check_point(&frontier, &too_fast).unwrap(), Verdict::OutsideOfFound);

        // midpoint is dominated only by the 50/50 mixture
        let mid = q([0.5, 0.5, 0.0, 0.25, 0.25]);
        match check_point(&frontier, &mid).unwrap() {
            Verdict::Inside { weights } => {
                assert_eq!(weights.len(), 2);
                for (_, w) in weights {
                    assert!((w - 0.5).abs() < 1e-9);
                }
            }
            other => panic!("expected INSIDE, got {other:?}"),
        }
        let beyond_mid = q([0.5, 0.5, 0.0, 0.2, 0.25]);
        assert_eq!(check_point(&frontier, &beyond_mid).unwrap(), Verdict::OutsideOfFound);
        assert!(check_point(&RegionFrontier::default(), &mid).is_err());
    }
}
