use std::fmt;

use serde::Serialize;

use super::{ExactError, Matrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Upper,
    Lower,
}

impl Variance {
    pub fn flipped(self) -> Variance {
        match self {
            Variance::Upper => Variance::Lower,
            Variance::Lower => Variance::Upper,
        }
    }
}

/// Dense tensor over an `n`-dimensional frame. Components are stored
/// row-major in slot order, so the slot order is part of the tensor's
/// identity: `T^k_{ij}` with variance `[Upper, Lower, Lower]` has its first
/// index running over `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    variance: Vec<Variance>,
    dim: usize,
    components: Vec<Rational>,
}

impl Tensor {
    pub fn zeros(variance: &[Variance], dim: usize) -> Self {
        Tensor {
            variance: variance.to_vec(),
            dim,
            components: vec![Rational::zero(); dim.pow(variance.len() as u32)],
        }
    }

    pub fn from_fn(variance: &[Variance], dim: usize, mut f: impl FnMut(&[usize]) -> Rational) -> Self {
        let rank = variance.len();
        let count = dim.pow(rank as u32);
        let mut components = Vec::with_capacity(count);
        let mut idx = vec![0; rank];
        for flat in 0..count {
            unflatten(flat, dim, &mut idx);
            components.push(f(&idx));
        }
        Tensor {
            variance: variance.to_vec(),
            dim,
            components,
        }
    }

    pub fn from_components(
        variance: &[Variance],
        dim: usize,
        components: Vec<Rational>,
    ) -> Result<Self, ExactError> {
        let expected = dim.pow(variance.len() as u32);
        if components.len() != expected {
            return Err(ExactError::DimensionMismatch(format!(
                "{} components for {} expected",
                components.len(),
                expected
            )));
        }
        Ok(Tensor {
            variance: variance.to_vec(),
            dim,
            components,
        })
    }

    pub fn scalar(value: Rational) -> Self {
        Tensor {
            variance: Vec::new(),
            dim: 0,
            components: vec![value],
        }
    }

    pub fn vector(components: &[Rational]) -> Self {
        Tensor {
            variance: vec![Variance::Upper],
            dim: components.len(),
            components: components.to_vec(),
        }
    }

    pub fn covector(components: &[Rational]) -> Self {
        Tensor {
            variance: vec![Variance::Lower],
            dim: components.len(),
            components: components.to_vec(),
        }
    }

    /// The `(1,1)` tensor `A^i_j`.
    pub fn mixed(m: &Matrix) -> Self {
        Tensor::from_fn(&[Variance::Upper, Variance::Lower], m.rows(), |ix| m[(ix[0], ix[1])].clone())
    }

    /// The `(0,2)` tensor `A_{ij}`.
    pub fn covariant2(m: &Matrix) -> Self {
        Tensor::from_fn(&[Variance::Lower, Variance::Lower], m.rows(), |ix| m[(ix[0], ix[1])].clone())
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    pub fn get(&self, index: &[usize]) -> &Rational {
        &self.components[self.flat(index)]
    }

    pub fn set(&mut self, index: &[usize], value: Rational) {
        let flat = self.flat(index);
        self.components[flat] = value;
    }

    /// Scalar value of a rank-0 tensor.
    pub fn value(&self) -> &Rational {
        assert!(self.variance.is_empty(), "value() on a tensor of rank {}", self.rank());
        &self.components[0]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Rational::is_zero)
    }

    /// Iterate `(multi-index, component)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> + '_ {
        let rank = self.rank();
        let dim = self.dim;
        self.components.iter().enumerate().map(move |(flat, v)| {
            let mut idx = vec![0; rank];
            unflatten(flat, dim, &mut idx);
            (idx, v)
        })
    }

    /// 2-tensors as matrices.
    pub fn to_matrix(&self) -> Matrix {
        assert_eq!(self.rank(), 2);
        Matrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j]).clone())
    }

    pub fn same_shape(&self, other: &Tensor) -> bool {
        self.variance == other.variance && self.dim == other.dim
    }

    fn check_shape(&self, other: &Tensor) -> Result<(), ExactError> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(ExactError::VarianceMismatch(format!(
                "{:?} (dim {}) vs {:?} (dim {})",
                self.variance, self.dim, other.variance, other.dim
            )))
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor, ExactError> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor, ExactError> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, s: &Rational) -> Tensor {
        Tensor {
            variance: self.variance.clone(),
            dim: self.dim,
            components: self.components.iter().map(|x| x * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: &Rational, other: &Tensor) -> Result<Tensor, ExactError> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + s * b))
    }

    fn zip_with(&self, other: &Tensor, f: impl Fn(&Rational, &Rational) -> Rational) -> Tensor {
        Tensor {
            variance: self.variance.clone(),
            dim: self.dim,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn outer(&self, other: &Tensor) -> Result<Tensor, ExactError> {
        if self.rank() > 0 && other.rank() > 0 && self.dim != other.dim {
            return Err(ExactError::DimensionMismatch(format!("dim {} vs {}", self.dim, other.dim)));
        }
        let dim = if self.rank() > 0 { self.dim } else { other.dim };
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&other.variance);
        let split = self.rank();
        Ok(Tensor::from_fn(&variance, dim, |ix| {
            self.get(&ix[..split]) * other.get(&ix[split..])
        }))
    }

    /// Sum over a paired upper and lower slot. The remaining slots keep their
    /// relative order.
    pub fn contract(&self, upper_slot: usize, lower_slot: usize) -> Result<Tensor, ExactError> {
        let rank = self.rank();
        if upper_slot >= rank || lower_slot >= rank || upper_slot == lower_slot {
            return Err(ExactError::SlotOutOfRange { rank, slot: upper_slot.max(lower_slot) });
        }
        if self.variance[upper_slot] != Variance::Upper || self.variance[lower_slot] != Variance::Lower {
            return Err(ExactError::VarianceMismatch(format!(
                "contraction needs an upper and a lower slot, got {:?} and {:?}",
                self.variance[upper_slot], self.variance[lower_slot]
            )));
        }
        let kept: Vec<usize> = (0..rank).filter(|&s| s != upper_slot && s != lower_slot).collect();
        let variance: Vec<Variance> = kept.iter().map(|&s| self.variance[s]).collect();
        let mut full = vec![0; rank];
        Ok(Tensor::from_fn(&variance, self.dim, |ix| {
            for (pos, &s) in kept.iter().enumerate() {
                full[s] = ix[pos];
            }
            (0..self.dim)
                .map(|m| {
                    full[upper_slot] = m;
                    full[lower_slot] = m;
                    self.get(&full).clone()
                })
                .sum()
        }))
    }

    /// Flip the variance of `slot`: lowering uses `metric`, raising uses
    /// `inverse_metric`. Both must be symmetric and mutually inverse.
    pub fn raise_lower(
        &self,
        slot: usize,
        metric: &Matrix,
        inverse_metric: &Matrix,
    ) -> Result<Tensor, ExactError> {
        let rank = self.rank();
        if slot >= rank {
            return Err(ExactError::SlotOutOfRange { rank, slot });
        }
        if metric.rows() != self.dim || inverse_metric.rows() != self.dim {
            return Err(ExactError::DimensionMismatch("metric dimension".into()));
        }
        if !metric.is_symmetric() {
            return Err(ExactError::NotSymmetric);
        }
        if metric.mul(inverse_metric)? != Matrix::identity(self.dim) {
            return Err(ExactError::Singular {
                rank: metric.rank(),
                dim: self.dim,
            });
        }
        let (map, new_variance) = match self.variance[slot] {
            Variance::Upper => (metric, Variance::Lower),
            Variance::Lower => (inverse_metric, Variance::Upper),
        };
        let mut variance = self.variance.clone();
        variance[slot] = new_variance;
        let mut src = vec![0; rank];
        Ok(Tensor::from_fn(&variance, self.dim, |ix| {
            src.copy_from_slice(ix);
            (0..self.dim)
                .map(|m| {
                    src[slot] = m;
                    &map[(ix[slot], m)] * self.get(&src)
                })
                .sum()
        }))
    }

    /// Reorder slots: slot `s` of the result is slot `order[s]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Tensor {
        assert_eq!(order.len(), self.rank());
        let variance: Vec<Variance> = order.iter().map(|&s| self.variance[s]).collect();
        let mut src = vec![0; self.rank()];
        Tensor::from_fn(&variance, self.dim, |ix| {
            for (pos, &s) in order.iter().enumerate() {
                src[s] = ix[pos];
            }
            self.get(&src).clone()
        })
    }

    /// Indices at which two same-shaped tensors differ, with both values.
    pub fn differences<'a>(&'a self, other: &'a Tensor) -> Vec<(Vec<usize>, &'a Rational, &'a Rational)> {
        self.entries()
            .zip(other.components.iter())
            .filter(|((_, a), b)| a != b)
            .map(|((ix, a), b)| (ix, a, b))
            .collect()
    }

    fn flat(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.rank());
        index.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }
}

fn unflatten(mut flat: usize, dim: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor{:?}[dim {}]{{", self.variance, self.dim)?;
        let mut first = true;
        for (ix, v) in self.entries().filter(|(_, v)| !v.is_zero()) {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{ix:?}: {v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qf};
    use Variance::{Lower, Upper};

    #[test]
    fn trace_of_identity() {
        let id = Tensor::mixed(&Matrix::identity(4));
        assert_eq!(id.contract(0, 1).unwrap().value(), &q(4));
    }

    #[test]
    fn kronecker_absorbs_vector() {
        let v = [q(1), qf(-2, 3), q(5)];
        let delta = Tensor::mixed(&Matrix::identity(3));
        let t = delta.outer(&Tensor::vector(&v)).unwrap();
        // delta^i_j v^k, contract j with k
        let out = t.contract(2, 1).unwrap();
        assert_eq!(out, Tensor::vector(&v));
    }

    #[test]
    fn contraction_errors() {
        let t = Tensor::zeros(&[Lower, Lower], 3);
        assert!(matches!(t.contract(0, 1), Err(ExactError::VarianceMismatch(_))));
        assert!(matches!(t.contract(0, 2), Err(ExactError::SlotOutOfRange { .. })));
    }

    #[test]
    fn lower_with_lorentz_metric() {
        let g = Matrix::diagonal(&[q(1), q(1), q(1), q(-1)]);
        let gi = g.inverse().unwrap();
        let e4 = Tensor::vector(&[q(0), q(0), q(0), q(1)]);
        let eta = e4.raise_lower(0, &g, &gi).unwrap();
        assert_eq!(eta, Tensor::covector(&[q(0), q(0), q(0), q(-1)]));
        let e1 = Tensor::vector(&[q(1), q(0), q(0), q(0)]);
        assert_eq!(e1.raise_lower(0, &g, &gi).unwrap().components(), &[q(1), q(0), q(0), q(0)]);
    }

    #[test]
    fn singular_metric_rejected() {
        let g = Matrix::diagonal(&[q(1), q(0)]);
        let t = Tensor::vector(&[q(1), q(1)]);
        assert!(matches!(
            t.raise_lower(0, &g, &Matrix::identity(2)),
            Err(ExactError::Singular { .. })
        ));
    }

    #[test]
    fn permute_swaps_slots() {
        let t = Tensor::from_fn(&[Upper, Lower], 2, |ix| q((ix[0] * 2 + ix[1]) as i64));
        let p = t.permute(&[1, 0]);
        assert_eq!(p.variance(), &[Lower, Upper]);
        assert_eq!(p.get(&[0, 1]), t.get(&[1, 0]));
    }
}
