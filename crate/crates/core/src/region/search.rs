//! Randomized frontier search over auxiliary conditionals.
//!
//! Each restart draws a Dirichlet(1) conditional per state, repairs it into
//! the cost budget, then climbs a scalarized objective by coordinate moves
//! with a halving step, entry removals and slice copies across states. Restarts run in parallel; the merge is ordered, so
//! the frontier depends only on the seed and the config.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prob::conditional_cost;
use crate::prob::{assemble_joint, AuxCards, AuxConditional, ChannelSpec};

use super::binning::polytope_from_terms;
use super::bounds::InnerTerms;
use super::frontier::{RateQuintuple, RegionFrontier};

const IMPROVE_TOL: f64 = 1e-12;
const COST_TOL: f64 = 1e-12;
/// Score offset for conditionals whose rate polytope is empty; any
/// feasible conditional beats any infeasible one.
const INFEASIBLE_SCORE: f64 = -1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Number of random restarts.
    pub samples: usize,
    /// Cap on local-search sweeps per restart.
    pub local_iters: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Conditionals evaluated as-is before the random restarts (embedded
    /// into the search cardinalities when smaller).
    pub warm_starts: Vec<AuxConditional>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 0, samples: 16, local_iters: 20, initial_step: 0.1, min_step: 1e-4, warm_starts: Vec::new() }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig { seed, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.initial_step > 0.0 && self.initial_step <= 1.0 && self.min_step > 0.0) {
            return Err(Error::Validation("search steps must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Linear scalarization: `w_r·R - w_e·E`, maximized over the rate polytope.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Objective {
    rate: [f64; 3],
    leak: [f64; 2],
}

impl Objective {
    /// The first five restarts chase a single coordinate each; the rest
    /// draw random weights.
    fn for_restart(restart: usize, rng: &mut ChaCha8Rng) -> Self {
        let unit = |k: usize| {
            let mut w = [0.0; 5];
            w[k] = 1.0;
            w
        };
        let w = if restart < 5 { unit(restart) } else { dirichlet(rng, 5).try_into().unwrap() };
        Objective { rate: [w[0], w[1], w[2]], leak: [w[3], w[4]] }
    }
}

struct Evaluation {
    score: f64,
    points: Vec<RateQuintuple>,
}

fn dirichlet(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|p| *p /= total);
    v
}

/// All quintuples achievable with one conditional: the polytope vertices
/// paired with its leakage guarantees.
pub fn achievable_points(ch: &ChannelSpec, cond: &AuxConditional) -> Result<Vec<RateQuintuple>> {
    Ok(evaluate(ch, cond, None)?.points)
}

fn evaluate(ch: &ChannelSpec, cond: &AuxConditional, obj: Option<&Objective>) -> Result<Evaluation> {
    let joint = assemble_joint(ch, cond)?;
    let terms = InnerTerms::compute(&joint)?;
    let polytope = polytope_from_terms(&terms);
    let leak = [terms.leak1, terms.leak2];
    let points: Vec<RateQuintuple> =
        polytope.vertices().iter().map(|v| RateQuintuple::from_computed(*v, leak)).collect();
    let score = match obj {
        Some(o) => points
            .iter()
            .map(|p| {
                let r = p.rates();
                o.rate.iter().zip(r).map(|(w, x)| w * x).sum::<f64>() - o.leak[0] * p.e1 - o.leak[1] * p.e2
            })
            .fold(INFEASIBLE_SCORE - terms.packing_deficit(), f64::max),
        None => f64::NEG_INFINITY,
    };
    Ok(Evaluation { score, points })
}

/// Mixes every slice towards the same auxiliary symbols with the cheapest
/// input, just enough to meet the budget.
fn repair_cost(ch: &ChannelSpec, cond: &mut AuxConditional) {
    let cost = conditional_cost(ch, cond);
    let budget = ch.cost_budget();
    if cost <= budget {
        return;
    }
    let cheapest = ch.cheapest_input();
    let min_cost = ch.min_cost();
    let t = ((cost - budget) / (cost - min_cost)).clamp(0.0, 1.0);
    let nx = cond.card_x();
    for s in 0..cond.card_s() {
        let slice = cond.slice_mut(s);
        for block in slice.chunks_mut(nx) {
            let mass: f64 = block.iter().sum();
            for (x, p) in block.iter_mut().enumerate() {
                *p *= 1.0 - t;
                if x == cheapest {
                    *p += t * mass;
                }
            }
        }
    }
}

fn random_conditional(ch: &ChannelSpec, cards: AuxCards, rng: &mut ChaCha8Rng) -> Result<AuxConditional> {
    let len = cards.w * cards.u * cards.v * ch.card_x();
    let table: Vec<f64> = (0..ch.card_s()).flat_map(|_| dirichlet(rng, len)).collect();
    let mut cond = AuxConditional::new(ch.card_s(), ch.card_x(), cards, table)?;
    repair_cost(ch, &mut cond);
    Ok(cond)
}

/// Candidate coordinate move on slice `s`: towards the vertex `e_i` by
/// `step` (`toward = true`), or dropping entry `i` altogether.
fn moved(cond: &AuxConditional, s: usize, i: usize, step: f64, toward: bool) -> Option<AuxConditional> {
    let mut next = cond.clone();
    let slice = next.slice_mut(s);
    if toward {
        if slice[i] >= 1.0 {
            return None;
        }
        slice.iter_mut().for_each(|p| *p *= 1.0 - step);
        slice[i] += step;
    } else {
        let rest = 1.0 - slice[i];
        if slice[i] <= 0.0 || rest <= 0.0 {
            return None;
        }
        slice[i] = 0.0;
    }
    // renormalize against the actual sum so round-off cannot accumulate
    let total: f64 = slice.iter().sum();
    slice.iter_mut().for_each(|p| *p /= total);
    Some(next)
}

fn local_search(
    ch: &ChannelSpec,
    mut cond: AuxConditional,
    obj: &Objective,
    cfg: &SearchConfig,
) -> Result<(AuxConditional, Evaluation)> {
    let mut best = evaluate(ch, &cond, Some(obj))?;
    let mut step = cfg.initial_step;
    let mut sweeps = 0;
    while step >= cfg.min_step && sweeps < cfg.local_iters {
        sweeps += 1;
        let mut improved = false;
        for s in 0..cond.card_s() {
            for i in 0..cond.slice_len() {
                for toward in [true, false] {
                    let Some(candidate) = moved(&cond, s, i, step, toward) else { continue };
                    if conditional_cost(ch, &candidate) > ch.cost_budget() + COST_TOL {
                        continue;
                    }
                    let eval = evaluate(ch, &candidate, Some(obj))?;
                    if eval.score > best.score + IMPROVE_TOL {
                        cond = candidate;
                        best = eval;
                        improved = true;
                    }
                }
            }
        }
        // copying one state's slice onto another removes dependence on S
        for s in 0..cond.card_s() {
            for from in 0..cond.card_s() {
                if from == s || cond.slice(from) == cond.slice(s) {
                    continue;
                }
                let mut candidate = cond.clone();
                let src = cond.slice(from).to_vec();
                candidate.slice_mut(s).copy_from_slice(&src);
                if conditional_cost(ch, &candidate) > ch.cost_budget() + COST_TOL {
                    continue;
                }
                let eval = evaluate(ch, &candidate, Some(obj))?;
                if eval.score > best.score + IMPROVE_TOL {
                    cond = candidate;
                    best = eval;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((cond, best))
}

fn run_restart(ch: &ChannelSpec, cards: AuxCards, cfg: &SearchConfig, restart: usize) -> Result<Vec<(RateQuintuple, Option<AuxConditional>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let obj = Objective::for_restart(restart, &mut rng);
    let start = random_conditional(ch, cards, &mut rng)?;
    let initial = evaluate(ch, &start, None)?;
    let (cond, best) = local_search(ch, start.clone(), &obj, cfg)?;
    // the same input law with constant auxiliaries gives zero-rate points
    let rows: Vec<Vec<f64>> = (0..ch.card_s()).map(|s| cond.input_given_state(s)).collect();
    let collapsed = AuxConditional::from_input_conditional(&rows)?.embed(cards)?;
    let mut out: Vec<_> = initial.points.into_iter().map(|q| (q, Some(start.clone()))).collect();
    out.extend(best.points.into_iter().map(|q| (q, Some(cond.clone()))));
    out.extend(achievable_points(ch, &collapsed)?.into_iter().map(|q| (q, Some(collapsed.clone()))));
    Ok(out)
}

/// Searches the inner region with auxiliaries of the given cardinalities.
/// Every evaluated conditional satisfies the expected-cost budget.
pub fn search_inner_region(ch: &ChannelSpec, cards: AuxCards, cfg: &SearchConfig) -> Result<RegionFrontier> {
    cards.validate()?;
    cfg.validate()?;
    ch.check_cost_feasible()?;
    let mut candidates = Vec::new();
    for warm in &cfg.warm_starts {
        let cond = warm.embed(cards)?;
        if conditional_cost(ch, &cond) > ch.cost_budget() + COST_TOL {
            return Err(Error::Validation("warm start exceeds the cost budget".into()));
        }
        candidates.extend(achievable_points(ch, &cond)?.into_iter().map(|q| (q, Some(cond.clone()))));
    }
    let restarts: Vec<_> = (0..cfg.samples).into_par_iter().map(|r| run_restart(ch, cards, cfg, r)).collect::<Result<_>>()?;
    candidates.extend(restarts.into_iter().flatten());
    Ok(RegionFrontier::from_candidates(candidates))
}
