use super::{check_distribution, Pmf, INPUT_TOL};
use crate::error::{Error, Result};

/// Finite-alphabet state-dependent broadcast channel `P(y1,y2|x,s)` with an
/// i.i.d. state and an additive input cost.
///
/// Kernel rows are keyed by `(x, s)` in the order `x * card_s + s`; each row
/// is a pmf over `Y1 x Y2` with `y2` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    card_s: usize,
    card_x: usize,
    card_y1: usize,
    card_y2: usize,
    state_pmf: Pmf,
    kernel: Vec<f64>,
    cost: Vec<f64>,
    cost_budget: f64,
}

impl ChannelSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        card_s: usize,
        card_x: usize,
        card_y1: usize,
        card_y2: usize,
        state_pmf: Pmf,
        kernel: Vec<f64>,
        cost: Vec<f64>,
        cost_budget: f64,
    ) -> Result<Self> {
        Self::with_tolerance(card_s, card_x, card_y1, card_y2, state_pmf, kernel, cost, cost_budget, INPUT_TOL)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_tolerance(
        card_s: usize,
        card_x: usize,
        card_y1: usize,
        card_y2: usize,
        state_pmf: Pmf,
        kernel: Vec<f64>,
        cost: Vec<f64>,
        cost_budget: f64,
        tol: f64,
    ) -> Result<Self> {
        for (name, v) in [("card_s", card_s), ("card_x", card_x), ("card_y1", card_y1), ("card_y2", card_y2)] {
            if v == 0 {
                return Err(Error::Validation(format!("{name} must be positive")));
            }
        }
        if state_pmf.alphabet_size() != card_s {
            return Err(Error::Dimension(format!(
                "state pmf has {} entries, card_s is {card_s}",
                state_pmf.alphabet_size()
            )));
        }
        let row_len = card_y1 * card_y2;
        if kernel.len() != card_x * card_s * row_len {
            return Err(Error::Dimension(format!(
                "kernel has {} entries, expected {} rows of {row_len}",
                kernel.len(),
                card_x * card_s
            )));
        }
        for (r, row) in kernel.chunks(row_len).enumerate() {
            check_distribution(row, tol).map_err(|m| {
                Error::Validation(format!("kernel row (x={}, s={}): {m}", r / card_s, r % card_s))
            })?;
        }
        if cost.len() != card_x {
            return Err(Error::Dimension(format!("cost table has {} entries, card_x is {card_x}", cost.len())));
        }
        if let Some((x, c)) = cost.iter().enumerate().find(|(_, c)| !c.is_finite() || **c < 0.0) {
            return Err(Error::Validation(format!("cost[{x}] = {c} must be finite and non-negative")));
        }
        if !cost_budget.is_finite() || cost_budget < 0.0 {
            return Err(Error::Validation(format!("cost budget {cost_budget} must be finite and non-negative")));
        }
        Ok(ChannelSpec { card_s, card_x, card_y1, card_y2, state_pmf, kernel, cost, cost_budget })
    }

    /// Builds a zero-cost channel from per-component deterministic maps
    /// `y1 = f1(x, s)`, `y2 = f2(x, s)`.
    pub fn deterministic(
        state_pmf: Pmf,
        card_x: usize,
        card_y1: usize,
        card_y2: usize,
        f1: impl Fn(usize, usize) -> usize,
        f2: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let card_s = state_pmf.alphabet_size();
        let mut kernel = vec![0.0; card_x * card_s * card_y1 * card_y2];
        for x in 0..card_x {
            for s in 0..card_s {
                let (y1, y2) = (f1(x, s), f2(x, s));
                if y1 >= card_y1 || y2 >= card_y2 {
                    return Err(Error::Dimension(format!("output ({y1},{y2}) out of range at x={x}, s={s}")));
                }
                kernel[((x * card_s + s) * card_y1 + y1) * card_y2 + y2] = 1.0;
            }
        }
        Self::new(card_s, card_x, card_y1, card_y2, state_pmf, kernel, vec![0.0; card_x], 0.0)
    }

    pub fn card_s(&self) -> usize {
        self.card_s
    }
    pub fn card_x(&self) -> usize {
        self.card_x
    }
    pub fn card_y1(&self) -> usize {
        self.card_y1
    }
    pub fn card_y2(&self) -> usize {
        self.card_y2
    }
    pub fn state_pmf(&self) -> &Pmf {
        &self.state_pmf
    }
    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }
    pub fn cost(&self) -> &[f64] {
        &self.cost
    }
    pub fn cost_budget(&self) -> f64 {
        self.cost_budget
    }

    /// Same channel with a different input cost.
    pub fn with_cost(mut self, cost: Vec<f64>, cost_budget: f64) -> Result<Self> {
        if cost.len() != self.card_x {
            return Err(Error::Dimension(format!("cost table has {} entries, card_x is {}", cost.len(), self.card_x)));
        }
        self.cost = cost;
        self.cost_budget = cost_budget;
        Self::new(
            self.card_s,
            self.card_x,
            self.card_y1,
            self.card_y2,
            self.state_pmf,
            self.kernel,
            self.cost,
            self.cost_budget,
        )
    }

    /// Kernel row `P(., . | x, s)` over `Y1 x Y2`.
    pub fn row(&self, x: usize, s: usize) -> &[f64] {
        let len = self.card_y1 * self.card_y2;
        let start = (x * self.card_s + s) * len;
        &self.kernel[start..start + len]
    }

    pub fn min_cost(&self) -> f64 {
        self.cost.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Index of a cheapest input symbol (lowest index on ties).
    pub fn cheapest_input(&self) -> usize {
        let min = self.min_cost();
        self.cost.iter().position(|&c| c == min).unwrap_or(0)
    }

    /// Fails when no input distribution meets the cost budget.
    pub fn check_cost_feasible(&self) -> Result<()> {
        if self.min_cost() > self.cost_budget {
            return Err(Error::Infeasible(format!(
                "cheapest input costs {} but the budget is {}",
                self.min_cost(),
                self.cost_budget
            )));
        }
        Ok(())
    }

    /// `true` when `P(y1,y2|x,s)` does not depend on `s`.
    pub fn ignores_state(&self) -> bool {
        (0..self.card_x).all(|x| {
            let first = self.row(x, 0);
            (1..self.card_s).all(|s| self.row(x, s).iter().zip(first).all(|(a, b)| (a - b).abs() <= 1e-15))
        })
    }
}
