//! Exact finite-alphabet probability engine.
//!
//! Every table is dense and row-major. Information quantities are computed
//! in bits from entropy differences and clamped at zero inside a `1e-9`
//! window; anything more negative is reported as an error.

mod channel;
mod joint;
mod table;

pub use channel::ChannelSpec;
pub use joint::{assemble_joint, expected_cost, AuxCards, AuxConditional, AuxiliaryJoint, Var};
pub(crate) use joint::conditional_cost;
pub use table::JointTable;

use crate::error::{Error, Result};

/// Tolerance on the normalization of user-supplied distributions.
pub const INPUT_TOL: f64 = 1e-9;
/// Tolerance on tables assembled internally.
pub const ASSEMBLY_TOL: f64 = 1e-12;
/// Mutual informations in `[-MI_CLAMP, 0)` are reported as zero.
pub const MI_CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Unit {
    #[default]
    Bits,
    Nats,
}

impl std::str::FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bits" | "bit" => Ok(Unit::Bits),
            "nats" | "nat" => Ok(Unit::Nats),
            other => Err(Error::Validation(format!("unknown unit '{other}' (expected bits or nats)"))),
        }
    }
}

impl Unit {
    /// Converts a value in bits to this unit.
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            Unit::Bits => bits,
            Unit::Nats => bits * std::f64::consts::LN_2,
        }
    }
}

/// An information quantity, stored in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InfoValue(f64);

impl InfoValue {
    pub fn from_bits(bits: f64) -> Self {
        InfoValue(bits)
    }

    pub fn bits(self) -> f64 {
        self.0
    }

    pub fn nats(self) -> f64 {
        Unit::Nats.from_bits(self.0)
    }

    pub fn in_unit(self, unit: Unit) -> f64 {
        unit.from_bits(self.0)
    }
}

/// A validated probability mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, INPUT_TOL)
    }

    pub fn with_tolerance(probs: Vec<f64>, tol: f64) -> Result<Self> {
        check_distribution(&probs, tol).map_err(Error::Validation)?;
        Ok(Pmf { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("alphabet size must be positive".into()));
        }
        Ok(Pmf { probs: vec![1.0 / n as f64; n] })
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::Validation(format!("point mass index {at} outside alphabet of size {n}")));
        }
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Ok(Pmf { probs })
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Checks non-negativity and normalization; the message names the failure.
pub(crate) fn check_distribution(probs: &[f64], tol: f64) -> std::result::Result<(), String> {
    if probs.is_empty() {
        return Err("empty distribution".into());
    }
    if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
        return Err(format!("entry {i} is {p}, expected a finite non-negative probability"));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(format!("entries sum to {total:.15}, expected 1 within {tol:e}"));
    }
    Ok(())
}

/// `-p log2 p` with the `0 log 0 = 0` convention.
#[inline]
pub(crate) fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

pub(crate) fn clamp_info(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -MI_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeInformation(value))
    }
}

pub fn entropy(p: &Pmf) -> InfoValue {
    InfoValue(p.probs.iter().map(|&q| plogp(q)).sum())
}

/// `I(A;B)` for a joint table over `A x B`.
pub fn mutual_information(joint: &JointTable) -> Result<InfoValue> {
    if joint.rank() != 2 {
        return Err(Error::Dimension(format!("expected a 2-D joint, got rank {}", joint.rank())));
    }
    joint.mutual_information(&[0], &[1], &[])
}

/// `I(A;B|C)` for a joint table over `A x B x C`.
pub fn conditional_mi(joint: &JointTable) -> Result<InfoValue> {
    if joint.rank() != 3 {
        return Err(Error::Dimension(format!("expected a 3-D joint, got rank {}", joint.rank())));
    }
    joint.mutual_information(&[0], &[1], &[2])
}
