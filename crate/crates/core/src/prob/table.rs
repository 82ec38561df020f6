use super::{check_distribution, clamp_info, plogp, InfoValue, INPUT_TOL};
use crate::error::{Error, Result};

/// Dense joint pmf over a product of finite alphabets, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl JointTable {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(dims, data, INPUT_TOL)
    }

    pub fn with_tolerance(dims: Vec<usize>, data: Vec<f64>, tol: f64) -> Result<Self> {
        let table = Self::from_parts(dims, data)?;
        check_distribution(&table.data, tol).map_err(|m| Error::Validation(format!("joint table: {m}")))?;
        Ok(table)
    }

    /// Shape check only; the caller vouches for normalization.
    pub(crate) fn from_parts(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!("invalid table shape {dims:?}")));
        }
        let size: usize = dims.iter().product();
        if size != data.len() {
            return Err(Error::Dimension(format!(
                "shape {dims:?} needs {size} entries, got {}",
                data.len()
            )));
        }
        Ok(JointTable { dims, data })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Entry at a multi-index.
    pub fn get(&self, index: &[usize]) -> f64 {
        let strides = self.strides();
        let flat: usize = index.iter().zip(&strides).map(|(i, s)| i * s).sum();
        self.data[flat]
    }

    /// Marginal over `axes`, with output axes in the order given.
    pub fn marginal(&self, axes: &[usize]) -> JointTable {
        let rank = self.dims.len();
        debug_assert!(axes.iter().all(|&a| a < rank));
        let out_dims: Vec<usize> = if axes.is_empty() { vec![1] } else { axes.iter().map(|&a| self.dims[a]).collect() };
        let mut out_stride_of_axis = vec![0usize; rank];
        let mut stride = 1;
        for (pos, &axis) in axes.iter().enumerate().rev() {
            out_stride_of_axis[axis] += stride;
            stride *= out_dims[pos];
        }
        let mut out = vec![0.0; stride.max(1)];
        let mut index = vec![0usize; rank];
        let mut out_idx = 0usize;
        for &p in &self.data {
            out[out_idx] += p;
            // odometer increment, last axis fastest
            for k in (0..rank).rev() {
                index[k] += 1;
                out_idx += out_stride_of_axis[k];
                if index[k] < self.dims[k] {
                    break;
                }
                out_idx -= out_stride_of_axis[k] * index[k];
                index[k] = 0;
            }
        }
        JointTable { dims: out_dims, data: out }
    }

    /// Joint entropy (bits) of the variables on `axes`.
    pub fn entropy_of(&self, axes: &[usize]) -> f64 {
        if axes.is_empty() {
            return 0.0;
        }
        if is_identity(axes, self.rank()) {
            return self.data.iter().map(|&p| plogp(p)).sum();
        }
        self.marginal(axes).data.iter().map(|&p| plogp(p)).sum()
    }

    /// `I(A;B|C)` for disjoint axis sets, via
    /// `H(A,C) + H(B,C) - H(C) - H(A,B,C)`.
    pub fn mutual_information(&self, a: &[usize], b: &[usize], c: &[usize]) -> Result<InfoValue> {
        self.check_sets(a, b, c)?;
        if a.is_empty() || b.is_empty() {
            return Ok(InfoValue::from_bits(0.0));
        }
        let union = |sets: &[&[usize]]| -> Vec<usize> {
            let mut v: Vec<usize> = sets.iter().flat_map(|s| s.iter().copied()).collect();
            v.sort_unstable();
            v
        };
        let h_ac = self.entropy_of(&union(&[a, c]));
        let h_bc = self.entropy_of(&union(&[b, c]));
        let h_c = self.entropy_of(&union(&[c]));
        let h_abc = self.entropy_of(&union(&[a, b, c]));
        clamp_info(h_ac + h_bc - h_c - h_abc).map(InfoValue::from_bits)
    }

    fn check_sets(&self, a: &[usize], b: &[usize], c: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.rank()];
        for &axis in a.iter().chain(b).chain(c) {
            if axis >= self.rank() {
                return Err(Error::Dimension(format!("axis {axis} out of range for rank {}", self.rank())));
            }
            if seen[axis] {
                return Err(Error::Dimension(format!("axis {axis} appears in more than one set")));
            }
            seen[axis] = true;
        }
        Ok(())
    }
}

fn is_identity(axes: &[usize], rank: usize) -> bool {
    axes.len() == rank && axes.iter().enumerate().all(|(i, &a)| i == a)
}
