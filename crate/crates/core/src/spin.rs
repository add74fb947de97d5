//! Spin vectors: the per-traverser complex amplitude over traversal branches.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, ZERO};
use crate::error::{Error, Result};

/// Complex amplitude vector with one component per traversal branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinVector(Vec<Complex>);

impl SpinVector {
    /// Builds a spin vector; `components` must be non-empty.
    pub fn new(components: Vec<Complex>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Config("spin vector must have at least one component".into()));
        }
        if components.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Config("spin vector components must be finite".into()));
        }
        Ok(SpinVector(components))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        SpinVector::new(values.iter().map(|&re| Complex { re, im: 0.0 }).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "spin dimension must be positive");
        SpinVector(vec![ZERO; dim])
    }

    /// One-hot basis spin with a 1 at `index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = SpinVector::zeros(dim);
        v.0[index] = Complex::real(1.0);
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn components(&self) -> &[Complex] {
        &self.0
    }

    pub fn into_components(self) -> Vec<Complex> {
        self.0
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other,
            });
        }
        Ok(())
    }

    /// Pairwise vector addition of two co-located spins.
    pub fn merge(&self, other: &SpinVector) -> Result<SpinVector> {
        self.check_dim(other.dim())?;
        Ok(SpinVector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect(),
        ))
    }

    /// In-place form of [`SpinVector::merge`].
    pub fn merge_into(&mut self, other: &SpinVector) -> Result<()> {
        self.check_dim(other.dim())?;
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
        Ok(())
    }

    /// Componentwise product with a 0/1 mask.
    pub fn project(&self, mask: &[u8]) -> Result<SpinVector> {
        self.check_dim(mask.len())?;
        if let Some(bad) = mask.iter().find(|&&m| m > 1) {
            return Err(Error::Config(format!("projection mask entry {bad} is not 0 or 1")));
        }
        Ok(SpinVector(
            self.0
                .iter()
                .zip(mask)
                .map(|(&c, &m)| if m == 1 { c } else { ZERO })
                .collect(),
        ))
    }

    /// Projection onto the single basis component `index`.
    pub fn project_onto(&self, index: usize) -> Result<SpinVector> {
        if index >= self.dim() {
            return Err(Error::Config(format!(
                "projection index {index} out of range for dim {}",
                self.dim()
            )));
        }
        let mut out = SpinVector::zeros(self.dim());
        out.0[index] = self.0[index];
        Ok(out)
    }

    /// Swaps the component pair named by `axis`.
    pub fn reflect(&self, axis: SwapAxis) -> Result<SpinVector> {
        axis.validate(self.dim())?;
        let mut out = self.clone();
        out.0.swap(axis.a, axis.b);
        Ok(out)
    }

    /// `Σ |cᵢ|²`, summed in ascending order so the result is independent of
    /// component order.
    pub fn norm_sq(&self) -> f64 {
        let mut buf = [0.0f64; 8];
        let mut heap;
        let squares: &mut [f64] = if self.dim() <= buf.len() {
            &mut buf[..self.dim()]
        } else {
            heap = vec![0.0; self.dim()];
            &mut heap
        };
        for (s, c) in squares.iter_mut().zip(&self.0) {
            *s = c.norm_sqr();
        }
        squares.sort_unstable_by(f64::total_cmp);
        squares.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

impl Index<usize> for SpinVector {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.0[i]
    }
}

impl fmt::Display for SpinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A pairwise component swap used for boundary reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwapAxis {
    pub a: usize,
    pub b: usize,
}

impl SwapAxis {
    /// Left/right swap on a line or lattice spin.
    pub const LEFT_RIGHT: SwapAxis = SwapAxis { a: 0, b: 1 };
    /// Up/down swap on a lattice spin.
    pub const UP_DOWN: SwapAxis = SwapAxis { a: 2, b: 3 };

    pub const fn new(a: usize, b: usize) -> Self {
        SwapAxis { a, b }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.a >= dim || self.b >= dim {
            return Err(Error::Config(format!(
                "reflection axis ({}, {}) out of range for dim {dim}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// Image of component `index` under the swap.
    #[inline]
    pub fn map_index(&self, index: usize) -> usize {
        if index == self.a {
            self.b
        } else if index == self.b {
            self.a
        } else {
            index
        }
    }
}
