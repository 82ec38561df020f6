//! Fourier–Motzkin elimination over real linear inequalities `a·x <= b`.

/// Coefficients smaller than this are treated as zero.
const COEF_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Inequality {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl Inequality {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        Inequality { coeffs, rhs }
    }

    /// Scales so the largest coefficient magnitude is one.
    fn normalized(mut self) -> Self {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale > COEF_EPS {
            for c in &mut self.coeffs {
                *c /= scale;
                if c.abs() < COEF_EPS {
                    *c = 0.0;
                }
            }
            self.rhs /= scale;
        }
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.abs() < COEF_EPS)
    }

    pub fn satisfied_by(&self, x: &[f64], tol: f64) -> bool {
        let lhs: f64 = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        lhs <= self.rhs + tol
    }
}

/// Eliminates variable `var`, returning a system over the same columns in
/// which that column is zero.
pub fn eliminate(system: &[Inequality], var: usize) -> Vec<Inequality> {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut out = Vec::new();
    for row in system {
        let a = row.coeffs[var];
        if a > COEF_EPS {
            upper.push(row);
        } else if a < -COEF_EPS {
            lower.push(row);
        } else {
            let mut kept = row.clone();
            kept.coeffs[var] = 0.0;
            out.push(kept);
        }
    }
    for up in &upper {
        for lo in &lower {
            let (a, b) = (up.coeffs[var], -lo.coeffs[var]);
            let coeffs: Vec<f64> = up.coeffs.iter().zip(&lo.coeffs).map(|(u, l)| b * u + a * l).collect();
            let mut combined = Inequality::new(coeffs, b * up.rhs + a * lo.rhs);
            combined.coeffs[var] = 0.0;
            out.push(combined);
        }
    }
    simplify(out)
}

/// Eliminates every variable in `vars`, in order.
pub fn eliminate_all(system: &[Inequality], vars: &[usize]) -> Vec<Inequality> {
    let mut current = simplify(system.to_vec());
    for &v in vars {
        current = eliminate(&current, v);
    }
    current
}

/// Normalizes rows, keeps the tightest right-hand side among parallel rows
/// and drops `0 <= b` rows with `b >= 0`. A trivially violated row is kept so
/// that emptiness stays visible.
pub fn simplify(system: Vec<Inequality>) -> Vec<Inequality> {
    let mut rows: Vec<Inequality> = Vec::with_capacity(system.len());
    for row in system.into_iter().map(Inequality::normalized) {
        if row.is_trivial() {
            if row.rhs < 0.0 {
                rows.push(Inequality::new(vec![0.0; row.coeffs.len()], row.rhs));
            }
            continue;
        }
        match rows.iter_mut().find(|r| same_direction(&r.coeffs, &row.coeffs)) {
            Some(existing) => existing.rhs = existing.rhs.min(row.rhs),
            None => rows.push(row),
        }
    }
    rows
}

fn same_direction(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12)
}
