//! Zero-rate masking region: with all auxiliaries constant the encoder
//! only draws `X ~ p(x|s)`, and the leakage pair is `(I(S;Y1), I(S;Y2))`.

use crate::error::{Error, Result};
use crate::prob::{AuxConditional, ChannelSpec, JointTable};

use super::frontier::{pareto_filter, Provenance, RateQuintuple, RegionFrontier};

/// All vectors of `parts` non-negative integers summing to `total`, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// `(I(S;Y1), I(S;Y2))` in bits for the input law `p(x|s)`.
pub fn state_leakage(ch: &ChannelSpec, x_given_s: &[Vec<f64>]) -> Result<(f64, f64)> {
    let (ns, ny1, ny2) = (ch.card_s(), ch.card_y1(), ch.card_y2());
    if x_given_s.len() != ns || x_given_s.iter().any(|r| r.len() != ch.card_x()) {
        return Err(Error::Dimension("p(x|s) table does not match the channel".into()));
    }
    let mut sy1 = vec![0.0; ns * ny1];
    let mut sy2 = vec![0.0; ns * ny2];
    for (s, px) in x_given_s.iter().enumerate() {
        let ps = ch.state_pmf().probs()[s];
        for (x, &p) in px.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let row = ch.row(x, s);
            for y1 in 0..ny1 {
                for y2 in 0..ny2 {
                    let mass = ps * p * row[y1 * ny2 + y2];
                    sy1[s * ny1 + y1] += mass;
                    sy2[s * ny2 + y2] += mass;
                }
            }
        }
    }
    let t1 = JointTable::from_parts(vec![ns, ny1], sy1)?;
    let t2 = JointTable::from_parts(vec![ns, ny2], sy2)?;
    Ok((t1.mutual_information(&[0], &[1], &[])?.bits(), t2.mutual_information(&[0], &[1], &[])?.bits()))
}

/// Enumerates `p(x|s)` on the grid with step `1/steps` in every simplex,
/// keeps the cost-feasible ones, and returns the lower-left Pareto frontier
/// of `(E1, E2)` together with its convex hull.
pub fn zero_rate_region(ch: &ChannelSpec, steps: usize) -> Result<RegionFrontier> {
    if steps == 0 {
        return Err(Error::Validation("grid needs at least 2 points per simplex dimension".into()));
    }
    ch.check_cost_feasible()?;
    let simplex = compositions(steps, ch.card_x());
    let ns = ch.card_s();
    let total = simplex
        .len()
        .checked_pow(ns as u32)
        .ok_or_else(|| Error::Validation("zero-rate grid too large".into()))?;
    let scale = steps as f64;
    let mut candidates: Vec<(RateQuintuple, usize)> = Vec::new();
    let mut odometer = vec![0usize; ns];
    for flat in 0..total {
        let rows: Vec<Vec<f64>> = odometer.iter().map(|&i| simplex[i].iter().map(|&c| c as f64 / scale).collect()).collect();
        let cost: f64 = rows
            .iter()
            .zip(ch.state_pmf().probs())
            .map(|(px, ps)| ps * px.iter().zip(ch.cost()).map(|(p, c)| p * c).sum::<f64>())
            .sum();
        if cost <= ch.cost_budget() + 1e-12 {
            let (e1, e2) = state_leakage(ch, &rows)?;
            candidates.push((RateQuintuple::from_computed([0.0; 3], [e1, e2]), flat));
        }
        for digit in odometer.iter_mut().rev() {
            *digit += 1;
            if *digit < simplex.len() {
                break;
            }
            *digit = 0;
        }
    }
    let kept = pareto_filter(candidates, |(q, _)| *q);
    let mut frontier = RegionFrontier::default();
    for (id, (q, flat)) in kept.into_iter().enumerate() {
        let mut rows = Vec::with_capacity(ns);
        let mut rem = flat;
        for _ in 0..ns {
            rows.push(simplex[rem % simplex.len()].iter().map(|&c| c as f64 / scale).collect::<Vec<_>>());
            rem /= simplex.len();
        }
        rows.reverse();
        frontier.points.push(q);
        frontier.provenance.push(Provenance { id, conditional: Some(AuxConditional::from_input_conditional(&rows)?) });
    }
    frontier.hull = Some(lower_left_hull(&frontier.points));
    Ok(frontier)
}

/// Indices of the vertices of the lower-left convex hull of `(e1, e2)`.
/// Expects points sorted by `e1` ascending, as a Pareto frontier is.
pub fn lower_left_hull(points: &[RateQuintuple]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].e1.total_cmp(&points[b].e1).then(points[a].e2.total_cmp(&points[b].e2)));
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (&points[o], &points[a], &points[b]);
        (a.e1 - o.e1) * (b.e2 - o.e2) - (a.e2 - o.e2) * (b.e1 - o.e1)
    };
    let mut hull: Vec<usize> = Vec::new();
    for i in order {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    hull
}
