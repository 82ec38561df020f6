use super::{check_distribution, ChannelSpec, JointTable, ASSEMBLY_TOL, INPUT_TOL};
use crate::error::{Error, Result};

/// Axes of the assembled seven-variable joint, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    S = 0,
    W = 1,
    U = 2,
    V = 3,
    X = 4,
    Y1 = 5,
    Y2 = 6,
}

/// Cardinalities of the auxiliaries `(W, U, V)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuxCards {
    pub w: usize,
    pub u: usize,
    pub v: usize,
}

impl AuxCards {
    pub fn new(w: usize, u: usize, v: usize) -> Self {
        AuxCards { w, u, v }
    }

    /// All auxiliaries constant.
    pub fn trivial() -> Self {
        AuxCards { w: 1, u: 1, v: 1 }
    }

    /// Default `|X|·|S|` for every auxiliary. This is a heuristic, not a
    /// proven cardinality bound.
    pub fn default_for(ch: &ChannelSpec) -> Self {
        let n = ch.card_x() * ch.card_s();
        AuxCards { w: n, u: n, v: n }
    }

    pub fn validate(&self) -> Result<()> {
        if self.w == 0 || self.u == 0 || self.v == 0 {
            return Err(Error::Validation(format!("auxiliary cardinalities must be >= 1, got {self:?}")));
        }
        Ok(())
    }
}

/// Conditional pmf `P(w,u,v,x|s)`, one slice per state, `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxConditional {
    card_s: usize,
    card_x: usize,
    cards: AuxCards,
    table: Vec<f64>,
}

impl AuxConditional {
    pub fn new(card_s: usize, card_x: usize, cards: AuxCards, table: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(card_s, card_x, cards, table, INPUT_TOL)
    }

    pub fn with_tolerance(card_s: usize, card_x: usize, cards: AuxCards, table: Vec<f64>, tol: f64) -> Result<Self> {
        cards.validate()?;
        if card_s == 0 || card_x == 0 {
            return Err(Error::Validation("card_s and card_x must be positive".into()));
        }
        let slice = cards.w * cards.u * cards.v * card_x;
        if table.len() != card_s * slice {
            return Err(Error::Dimension(format!(
                "conditional has {} entries, expected {card_s} slices of {slice}",
                table.len()
            )));
        }
        for (s, chunk) in table.chunks(slice).enumerate() {
            check_distribution(chunk, tol)
                .map_err(|m| Error::Validation(format!("conditional slice s={s}: {m}")))?;
        }
        Ok(AuxConditional { card_s, card_x, cards, table })
    }

    /// Trivial auxiliaries with the given `P(x|s)` rows.
    pub fn from_input_conditional(x_given_s: &[Vec<f64>]) -> Result<Self> {
        let card_s = x_given_s.len();
        let card_x = x_given_s.first().map_or(0, Vec::len);
        if x_given_s.iter().any(|r| r.len() != card_x) {
            return Err(Error::Dimension("ragged P(x|s) rows".into()));
        }
        Self::new(card_s, card_x, AuxCards::trivial(), x_given_s.concat())
    }

    pub fn card_s(&self) -> usize {
        self.card_s
    }
    pub fn card_x(&self) -> usize {
        self.card_x
    }
    pub fn cards(&self) -> AuxCards {
        self.cards
    }
    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Number of entries in each per-state slice.
    pub fn slice_len(&self) -> usize {
        self.cards.w * self.cards.u * self.cards.v * self.card_x
    }

    pub fn slice(&self, s: usize) -> &[f64] {
        let len = self.slice_len();
        &self.table[s * len..(s + 1) * len]
    }

    pub(crate) fn slice_mut(&mut self, s: usize) -> &mut [f64] {
        let len = self.slice_len();
        &mut self.table[s * len..(s + 1) * len]
    }

    pub fn get(&self, s: usize, w: usize, u: usize, v: usize, x: usize) -> f64 {
        let c = self.cards;
        self.table[(((s * c.w + w) * c.u + u) * c.v + v) * self.card_x + x]
    }

    /// The same conditional over larger auxiliary alphabets; the extra
    /// symbols get zero mass.
    pub fn embed(&self, cards: AuxCards) -> Result<Self> {
        let c = self.cards;
        if cards.w < c.w || cards.u < c.u || cards.v < c.v {
            return Err(Error::Dimension(format!("cannot embed {c:?} into {cards:?}")));
        }
        let nx = self.card_x;
        let mut table = vec![0.0; self.card_s * cards.w * cards.u * cards.v * nx];
        for s in 0..self.card_s {
            for w in 0..c.w {
                for u in 0..c.u {
                    for v in 0..c.v {
                        for x in 0..nx {
                            table[(((s * cards.w + w) * cards.u + u) * cards.v + v) * nx + x] = self.get(s, w, u, v, x);
                        }
                    }
                }
            }
        }
        Ok(AuxConditional { card_s: self.card_s, card_x: nx, cards, table })
    }

    /// `P(x|s)` after summing out the auxiliaries.
    pub fn input_given_state(&self, s: usize) -> Vec<f64> {
        let mut px = vec![0.0; self.card_x];
        for (i, p) in self.slice(s).iter().enumerate() {
            px[i % self.card_x] += p;
        }
        px
    }
}

/// The joint `P_S · P_{WUVX|S} · P_{Y1Y2|XS}` over `S,W,U,V,X,Y1,Y2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryJoint {
    cond: AuxConditional,
    full: JointTable,
}

impl AuxiliaryJoint {
    pub fn conditional(&self) -> &AuxConditional {
        &self.cond
    }

    pub fn cards(&self) -> AuxCards {
        self.cond.cards
    }

    pub fn full_joint(&self) -> &JointTable {
        &self.full
    }

    /// `I(A;B|C)` in bits, clamped at zero.
    pub fn mi(&self, a: &[Var], b: &[Var], c: &[Var]) -> Result<f64> {
        let axes = |vs: &[Var]| vs.iter().map(|&v| v as usize).collect::<Vec<_>>();
        Ok(self.full.mutual_information(&axes(a), &axes(b), &axes(c))?.bits())
    }

    /// Joint entropy in bits.
    pub fn entropy(&self, vars: &[Var]) -> f64 {
        let mut axes: Vec<usize> = vars.iter().map(|&v| v as usize).collect();
        axes.sort_unstable();
        self.full.entropy_of(&axes)
    }

    pub fn marginal(&self, vars: &[Var]) -> JointTable {
        let axes: Vec<usize> = vars.iter().map(|&v| v as usize).collect();
        self.full.marginal(&axes)
    }
}

/// Assembles the full joint from a channel and an auxiliary conditional.
pub fn assemble_joint(ch: &ChannelSpec, cond: &AuxConditional) -> Result<AuxiliaryJoint> {
    if cond.card_s != ch.card_s() || cond.card_x != ch.card_x() {
        return Err(Error::Dimension(format!(
            "conditional is over |S|={}, |X|={} but channel has |S|={}, |X|={}",
            cond.card_s,
            cond.card_x,
            ch.card_s(),
            ch.card_x()
        )));
    }
    let c = cond.cards;
    let (ny1, ny2) = (ch.card_y1(), ch.card_y2());
    let row_len = ny1 * ny2;
    let dims = vec![ch.card_s(), c.w, c.u, c.v, ch.card_x(), ny1, ny2];
    let mut data = Vec::with_capacity(dims.iter().product());
    for s in 0..ch.card_s() {
        let ps = ch.state_pmf().probs()[s];
        for (i, &q) in cond.slice(s).iter().enumerate() {
            let x = i % ch.card_x();
            let weight = ps * q;
            data.extend(ch.row(x, s).iter().map(|&k| weight * k));
        }
    }
    debug_assert_eq!(data.len() % row_len, 0);
    let full = JointTable::from_parts(dims, data)?;
    let total = full.total();
    if (total - 1.0).abs() > INPUT_TOL {
        return Err(Error::Numerical(format!("assembled joint sums to {total}")));
    }
    let state = full.marginal(&[Var::S as usize]);
    for (s, (a, b)) in state.data().iter().zip(ch.state_pmf().probs()).enumerate() {
        if (a - b).abs() > ASSEMBLY_TOL {
            return Err(Error::Numerical(format!("state marginal drift at s={s}: {a} vs {b}")));
        }
    }
    Ok(AuxiliaryJoint { cond: cond.clone(), full })
}

/// `E[φ(X)]` under the joint's input marginal.
pub fn expected_cost(ch: &ChannelSpec, joint: &AuxiliaryJoint) -> Result<f64> {
    if joint.cond.card_x != ch.card_x() {
        return Err(Error::Dimension("joint and channel disagree on |X|".into()));
    }
    let px = joint.marginal(&[Var::X]);
    Ok(px.data().iter().zip(ch.cost()).map(|(p, c)| p * c).sum())
}

/// Expected cost straight from the conditional, without assembling.
pub(crate) fn conditional_cost(ch: &ChannelSpec, cond: &AuxConditional) -> f64 {
    let ps = ch.state_pmf().probs();
    (0..cond.card_s)
        .map(|s| {
            let px = cond.input_given_state(s);
            ps[s] * px.iter().zip(ch.cost()).map(|(p, c)| p * c).sum::<f64>()
        })
        .sum()
}
