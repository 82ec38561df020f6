//! Independent oracles and seeded generators shared by the integration
//! tests. Nothing here calls the library's information measures.
#![allow(dead_code)]

use leakregion::prob::{AuxCards, AuxConditional, ChannelSpec, Pmf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dirichlet(1) draw via normalized exponentials.
pub fn simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let t: f64 = v.iter().sum();
    v.into_iter().map(|x| x / t).collect()
}

pub fn random_channel(rng: &mut ChaCha8Rng, ns: usize, nx: usize, ny1: usize, ny2: usize) -> ChannelSpec {
    let state = Pmf::new(simplex(rng, ns)).unwrap();
    let kernel: Vec<f64> = (0..nx * ns).flat_map(|_| simplex(rng, ny1 * ny2)).collect();
    ChannelSpec::new(ns, nx, ny1, ny2, state, kernel, vec![0.0; nx], 0.0).unwrap()
}

pub fn random_conditional(rng: &mut ChaCha8Rng, ch: &ChannelSpec, cards: AuxCards) -> AuxConditional {
    let len = cards.w * cards.u * cards.v * ch.card_x();
    let table: Vec<f64> = (0..ch.card_s()).flat_map(|_| simplex(rng, len)).collect();
    AuxConditional::new(ch.card_s(), ch.card_x(), cards, table).unwrap()
}

/// Dense joint over axes with the given dims (row-major), brute force.
pub struct Dense {
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
}

impl Dense {
    /// Builds `P_S · P(w,u,v,x|s) · P(y1,y2|x,s)` by direct index loops.
    pub fn from_channel(ch: &ChannelSpec, cond: &AuxConditional) -> Self {
        let c = cond.cards();
        let dims = vec![ch.card_s(), c.w, c.u, c.v, ch.card_x(), ch.card_y1(), ch.card_y2()];
        let mut data = Vec::new();
        for s in 0..dims[0] {
            for w in 0..dims[1] {
                for u in 0..dims[2] {
                    for v in 0..dims[3] {
                        for x in 0..dims[4] {
                            for y1 in 0..dims[5] {
                                for y2 in 0..dims[6] {
                                    let k = ch.kernel()[((x * dims[0] + s) * dims[5] + y1) * dims[6] + y2];
                                    data.push(ch.state_pmf().probs()[s] * cond.get(s, w, u, v, x) * k);
                                }
                            }
                        }
                    }
                }
            }
        }
        Dense { dims, data }
    }

    fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (k, d) in self.dims.iter().enumerate().rev() {
            idx[k] = flat % d;
            flat /= d;
        }
        idx
    }

    /// Marginal over `axes` as a map from index tuple to mass.
    pub fn marginal(&self, axes: &[usize]) -> std::collections::HashMap<Vec<usize>, f64> {
        let mut m = std::collections::HashMap::new();
        for (flat, p) in self.data.iter().enumerate() {
            if *p == 0.0 {
                continue;
            }
            let idx = self.decode(flat);
            *m.entry(axes.iter().map(|&a| idx[a]).collect()).or_insert(0.0) += p;
        }
        m
    }

    /// `I(A;B|C)` in bits from the definition
    /// `Σ p(a,b,c) log p(a,b,c) p(c) / (p(a,c) p(b,c))`.
    pub fn cmi(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let abc: Vec<usize> = [a, b, c].concat();
        let ac: Vec<usize> = [a, c].concat();
        let bc: Vec<usize> = [b, c].concat();
        let (pabc, pac, pbc, pc) = (self.marginal(&abc), self.marginal(&ac), self.marginal(&bc), self.marginal(c));
        let (na, nb) = (a.len(), b.len());
        let mut total = 0.0;
        for (key, p) in &pabc {
            if *p <= 0.0 {
                continue;
            }
            let ka = &key[..na];
            let kb = &key[na..na + nb];
            let kc = &key[na + nb..];
            let pac_v = pac[&[ka, kc].concat()];
            let pbc_v = pbc[&[kb, kc].concat()];
            let pc_v = if c.is_empty() { 1.0 } else { pc[kc] };
            total += p * (p * pc_v / (pac_v * pbc_v)).log2();
        }
        total
    }

    pub fn entropy(&self, axes: &[usize]) -> f64 {
        self.marginal(axes).values().filter(|p| **p > 0.0).map(|p| -p * p.log2()).sum()
    }
}

/// Axis numbers of the seven-variable joint.
pub const S: usize = 0;
pub const W: usize = 1;
pub const U: usize = 2;
pub const V: usize = 3;
pub const X: usize = 4;
pub const Y1: usize = 5;
pub const Y2: usize = 6;

/// Binary entropy in bits.
pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// `Y1 = X ⊕ S`, `Y2 = X`, binary, with the given state pmf.
pub fn xor_channel(p_s1: f64) -> ChannelSpec {
    ChannelSpec::deterministic(Pmf::new(vec![1.0 - p_s1, p_s1]).unwrap(), 2, 2, 2, |x, s| x ^ s, |x, _| x).unwrap()
}

/// Exhaustive zero-rate oracle for `Y1 = X ⊕ S`, `Y2 = X` with a binary
/// state: `p(x=1|s)` on the grid `i/n`.
pub fn xor_zero_rate_oracle(p_s1: f64, n: usize) -> Vec<(f64, f64)> {
    let ps = [1.0 - p_s1, p_s1];
    let mut pts = Vec::new();
    for i in 0..=n {
        for k in 0..=n {
            let a = [i as f64 / n as f64, k as f64 / n as f64];
            // I(S;Y) = H(Y) - H(Y|S), H(Y|S) = Σ ps h2(P(y=1|s))
            let y2_1 = ps[0] * a[0] + ps[1] * a[1];
            let e2 = h2(y2_1) - (ps[0] * h2(a[0]) + ps[1] * h2(a[1]));
            let y1_1 = ps[0] * a[0] + ps[1] * (1.0 - a[1]);
            let e1 = h2(y1_1) - (ps[0] * h2(a[0]) + ps[1] * h2(1.0 - a[1]));
            pts.push((e1.max(0.0), e2.max(0.0)));
        }
    }
    let mut front: Vec<(f64, f64)> = pts
        .iter()
        .filter(|p| !pts.iter().any(|q| q.0 <= p.0 + 1e-12 && q.1 <= p.1 + 1e-12 && (q.0 < p.0 - 1e-12 || q.1 < p.1 - 1e-12)))
        .copied()
        .collect();
    front.sort_by(|a, b| a.partial_cmp(b).unwrap());
    front.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-12 && (a.1 - b.1).abs() <= 1e-12);
    front
}
