use crate::error::Result;
use crate::prob::{AuxiliaryJoint, Var};

use super::binning::polytope_from_terms;

use Var::{S, U, V, W, X, Y1, Y2};

/// Right-hand sides of the inner bound as printed, with leakage guarantees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerBoundValues {
    /// Bound on `R0`.
    pub b_r0: f64,
    /// Bound on `R0 + R1`.
    pub b_r01: f64,
    /// Bound on `R0 + R2`.
    pub b_r02: f64,
    /// Bound on `R0 + R1 + R2`.
    pub b_rsum: f64,
    /// Leakage guarantee `I(S; W,U,Y1)`.
    pub l1: f64,
    /// Leakage guarantee `I(S; W,V,Y2)`.
    pub l2: f64,
    /// Sum-rate bound of the binning region obtained by eliminating the
    /// auxiliary binning rates; kept next to `b_rsum` for cross-checking.
    pub appendix_sum: f64,
}

impl InnerBoundValues {
    /// Bounds tightened by what the other rows imply once every rate is
    /// non-negative: `[R0, R0+R1, R0+R2, R0+R1+R2]`.
    pub fn effective(&self) -> [f64; 4] {
        let sum = self.b_rsum;
        let r01 = self.b_r01.min(sum);
        let r02 = self.b_r02.min(sum);
        [self.b_r0.min(r01).min(r02), r01, r02, sum]
    }

    /// Printed sum bound minus the eliminated one.
    pub fn sum_discrepancy(&self) -> f64 {
        self.b_rsum - self.appendix_sum
    }
}

/// Right-hand sides of the outer bound and the leakage lower bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterBoundValues {
    pub c_r0: f64,
    pub c_r01: f64,
    pub c_r02: f64,
    /// First sum-rate bound, through `I(X;Y2|W,U,S)`.
    pub c_sum1: f64,
    /// Second sum-rate bound, through `I(X;Y1|W,V,S)`.
    pub c_sum2: f64,
    /// `I(S;Y1)`.
    pub m1: f64,
    /// `I(S;Y2)`.
    pub m2: f64,
}

impl OuterBoundValues {
    pub fn sum_bound(&self) -> f64 {
        self.c_sum1.min(self.c_sum2)
    }
}

/// Minimal auxiliary binning rates that make encoding succeed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinningBudget {
    /// Covering rate for `W`: `I(W;S)`.
    pub rt0: f64,
    /// Covering rate for `V`: `I(V;S|W)`.
    pub rt2: f64,
    /// State-covering rate for `U`: `I(U;S|W)`.
    pub rt1s: f64,
    /// Cross-binning rate for `U` against `V`: `I(U;V|S,W)`.
    pub rt12: f64,
}

/// Every mutual-information term used by the discrete bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct InnerTerms {
    pub i_w_y1: f64,
    pub i_w_y2: f64,
    pub i_w_s: f64,
    pub i_wu_y1: f64,
    pub i_wu_s: f64,
    pub i_wv_y2: f64,
    pub i_wv_s: f64,
    pub i_u_v_given_ws: f64,
    pub i_u_y1_given_w: f64,
    pub i_u_s_given_w: f64,
    pub i_v_y2_given_w: f64,
    pub i_v_s_given_w: f64,
    pub leak1: f64,
    pub leak2: f64,
}

impl InnerTerms {
    pub fn compute(joint: &AuxiliaryJoint) -> Result<Self> {
        Ok(InnerTerms {
            i_w_y1: joint.mi(&[W], &[Y1], &[])?,
            i_w_y2: joint.mi(&[W], &[Y2], &[])?,
            i_w_s: joint.mi(&[W], &[S], &[])?,
            i_wu_y1: joint.mi(&[W, U], &[Y1], &[])?,
            i_wu_s: joint.mi(&[W, U], &[S], &[])?,
            i_wv_y2: joint.mi(&[W, V], &[Y2], &[])?,
            i_wv_s: joint.mi(&[W, V], &[S], &[])?,
            i_u_v_given_ws: joint.mi(&[U], &[V], &[W, S])?,
            i_u_y1_given_w: joint.mi(&[U], &[Y1], &[W])?,
            i_u_s_given_w: joint.mi(&[U], &[S], &[W])?,
            i_v_y2_given_w: joint.mi(&[V], &[Y2], &[W])?,
            i_v_s_given_w: joint.mi(&[V], &[S], &[W])?,
            leak1: joint.mi(&[S], &[W, U, Y1], &[])?,
            leak2: joint.mi(&[S], &[W, V, Y2], &[])?,
        })
    }

    /// Total amount by which the packing rows are violated at zero message
    /// rates with every binning rate at its covering minimum. The binning
    /// polytope is non-empty exactly when this is zero, since message rates
    /// only enter packing rows with positive coefficients.
    pub fn packing_deficit(&self) -> f64 {
        let rt0 = self.i_w_s;
        let rt2 = self.i_v_s_given_w;
        let rt1 = self.i_u_s_given_w + self.i_u_v_given_ws;
        [
            rt1 - self.i_u_y1_given_w,
            rt0 + rt1 - self.i_wu_y1,
            rt2 - self.i_v_y2_given_w,
            rt0 + rt2 - self.i_wv_y2,
            rt0 - self.i_w_y1,
            rt0 - self.i_w_y2,
        ]
        .into_iter()
        .map(|d| d.max(0.0))
        .sum()
    }

    pub fn printed_r0(&self) -> f64 {
        self.i_w_y1.min(self.i_w_y2) - self.i_w_s
    }

    pub fn printed_r01(&self) -> f64 {
        self.i_wu_y1 - self.i_wu_s
    }

    pub fn printed_r02(&self) -> f64 {
        self.i_wv_y2 - self.i_wv_s
    }

    /// Sum bound with the `-min{..} - I(W;S)` pattern exactly as printed.
    pub fn printed_sum(&self) -> f64 {
        self.printed_r01() + self.printed_r02() - self.i_w_y1.min(self.i_w_y2) - self.i_w_s - self.i_u_v_given_ws
    }
}

/// Inner-bound right-hand sides as printed (clamped at zero) and the
/// leakage guarantees `I(S;W,U,Y1)`, `I(S;W,V,Y2)`.
///
/// A quintuple is counted as achievable with this joint when its rates are
/// below the bounds and `E_k >= l_k`.
pub fn inner_bounds(joint: &AuxiliaryJoint) -> Result<InnerBoundValues> {
    let t = InnerTerms::compute(joint)?;
    let region = polytope_from_terms(&t);
    Ok(InnerBoundValues {
        b_r0: t.printed_r0().max(0.0),
        b_r01: t.printed_r01().max(0.0),
        b_r02: t.printed_r02().max(0.0),
        b_rsum: t.printed_sum().max(0.0),
        l1: t.leak1,
        l2: t.leak2,
        appendix_sum: region.support([1.0, 1.0, 1.0]).unwrap_or(0.0),
    })
}

/// Outer-bound right-hand sides (all rate terms conditioned on `S`) and the
/// leakage lower bounds `I(S;Y_k)`.
pub fn outer_bounds(joint: &AuxiliaryJoint) -> Result<OuterBoundValues> {
    let common = joint.mi(&[W], &[Y1], &[S])?.min(joint.mi(&[W], &[Y2], &[S])?);
    let u_y1 = joint.mi(&[U], &[Y1], &[W, S])?;
    let v_y2 = joint.mi(&[V], &[Y2], &[W, S])?;
    let x_y2 = joint.mi(&[X], &[Y2], &[W, U, S])?;
    let x_y1 = joint.mi(&[X], &[Y1], &[W, V, S])?;
    Ok(OuterBoundValues {
        c_r0: common,
        c_r01: common + u_y1,
        c_r02: common + v_y2,
        c_sum1: common + u_y1 + x_y2,
        c_sum2: common + x_y1 + v_y2,
        m1: joint.mi(&[S], &[Y1], &[])?,
        m2: joint.mi(&[S], &[Y2], &[])?,
    })
}

/// Binning rates at the covering thresholds, with the slack terms at zero.
pub fn binning_budget(joint: &AuxiliaryJoint) -> Result<BinningBudget> {
    Ok(BinningBudget {
        rt0: joint.mi(&[W], &[S], &[])?,
        rt2: joint.mi(&[V], &[S], &[W])?,
        rt1s: joint.mi(&[U], &[S], &[W])?,
        rt12: joint.mi(&[U], &[V], &[S, W])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{assemble_joint, AuxCards, AuxConditional, ChannelSpec, Pmf};

    fn clean_blind() -> ChannelSpec {
        ChannelSpec::deterministic(Pmf::uniform(2).unwrap(), 2, 2, 2, |x, _| x, |x, _| x).unwrap()
    }

    /// W = U = V = X uniform, independent of S.
    fn copies(ch: &ChannelSpec) -> AuxiliaryJoint {
        let cards = AuxCards::new(2, 2, 2);
        let mut table = Vec::new();
        for _s in 0..ch.card_s() {
            for w in 0..2 {
                for u in 0..2 {
                    for v in 0..2 {
                        for x in 0..2 {
                            table.push(if w == u && u == v && v == x { 0.5 } else { 0.0 });
                        }
                    }
                }
            }
        }
        assemble_joint(ch, &AuxConditional::new(ch.card_s(), 2, cards, table).unwrap()).unwrap()
    }

    #[test]
    fn state_blind_copies() {
        let j = copies(&clean_blind());
        let inner = inner_bounds(&j).unwrap();
        assert!((inner.b_r0 - 1.0).abs() < 1e-12);
        assert_eq!((inner.l1, inner.l2), (0.0, 0.0));
        let outer = outer_bounds(&j).unwrap();
        assert!(outer.m1.abs() < 1e-12 && outer.m2.abs() < 1e-12);
        assert!((outer.c_r0 - 1.0).abs() < 1e-12);
        let budget = binning_budget(&j).unwrap();
        assert_eq!(budget.rt0, 0.0);
    }

    #[test]
    fn trivial_auxiliaries() {
        let ch = ChannelSpec::deterministic(Pmf::uniform(2).unwrap(), 2, 2, 2, |x, s| x ^ s, |x, _| x).unwrap();
        let cond = AuxConditional::from_input_conditional(&[vec![0.3, 0.7], vec![0.6, 0.4]]).unwrap();
        let j = assemble_joint(&ch, &cond).unwrap();
        let inner = inner_bounds(&j).unwrap();
        assert_eq!([inner.b_r0, inner.b_r01, inner.b_r02, inner.b_rsum], [0.0; 4]);
        assert!((inner.l1 - j.mi(&[S], &[Y1], &[]).unwrap()).abs() < 1e-12);
        assert!((inner.l2 - j.mi(&[S], &[Y2], &[]).unwrap()).abs() < 1e-12);
        let budget = binning_budget(&j).unwrap();
        assert_eq!(budget.rt12, 0.0);
    }

    #[test]
    fn effective_bounds_are_ordered() {
        let v = InnerBoundValues { b_r0: 0.9, b_r01: 0.5, b_r02: 0.7, b_rsum: 0.6, l1: 0.0, l2: 0.0, appendix_sum: 0.4 };
        assert_eq!(v.effective(), [0.5, 0.5, 0.6, 0.6]);
        assert!((v.sum_discrepancy() - 0.2).abs() < 1e-15);
    }
}
