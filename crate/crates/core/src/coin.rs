//! Dense square complex operators: walk coins and the oracle's full-system
//! matrices.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::complex::{Complex, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::spin::SpinVector;

/// Tolerance used to accept a coin as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOperator {
    dim: usize,
    entries: Vec<Complex>,
}

impl CoinOperator {
    /// Builds an operator from row-major entries; `entries.len()` must be `dim²`.
    pub fn from_rows(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("operator dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(CoinOperator { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        CoinOperator {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CoinOperator::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    /// `H = (1/√2)[[1, 1], [1, −1]]`.
    pub fn hadamard() -> Self {
        let h = Complex::real(FRAC_1_SQRT_2);
        CoinOperator {
            dim: 2,
            entries: vec![h, h, h, -h],
        }
    }

    /// `Y = (1/√2)[[1, i], [i, 1]]`.
    pub fn balanced_y() -> Self {
        let one = Complex::real(FRAC_1_SQRT_2);
        let i = I.scale(FRAC_1_SQRT_2);
        CoinOperator {
            dim: 2,
            entries: vec![one, i, i, one],
        }
    }

    /// Four-direction Grover coin: `−1/2` on the diagonal, `1/2` elsewhere.
    pub fn grover4() -> Self {
        let mut m = CoinOperator::zeros(4);
        for r in 0..4 {
            for c in 0..4 {
                m.set(r, c, Complex::real(if r == c { -0.5 } else { 0.5 }));
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[Complex] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// Matrix–vector product `C·a`.
    pub fn apply(&self, spin: &SpinVector) -> Result<SpinVector> {
        if spin.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: spin.dim(),
            });
        }
        let out = self.apply_slice(spin.components());
        SpinVector::new(out)
    }

    /// Matrix–vector product on a raw amplitude slice of length `dim`.
    pub fn apply_slice(&self, v: &[Complex]) -> Vec<Complex> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                let mut acc = ZERO;
                for (&m, &x) in self.row(r).iter().zip(v) {
                    if !m.is_zero() {
                        acc += m * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CoinOperator {
        let mut out = CoinOperator::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Matrix product `self · rhs`. Zero entries of `self` are skipped, which
    /// keeps products with permutation-like factors cheap.
    pub fn matmul(&self, rhs: &CoinOperator) -> Result<CoinOperator> {
        if rhs.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = CoinOperator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let dst = &mut out.entries[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(rhs.row(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal `I_n ⊗ self`.
    pub fn tensor_identity(&self, copies: usize) -> CoinOperator {
        let d = self.dim;
        let mut out = CoinOperator::zeros(copies * d);
        for b in 0..copies {
            for r in 0..d {
                for c in 0..d {
                    out.set(b * d + r, b * d + c, self.get(r, c));
                }
            }
        }
        out
    }

    /// Largest absolute entry of `C†C − I`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        // Gram matrix G = C†C accumulated row by row: G[i][j] += conj(C[k][i])·C[k][j].
        let mut gram = vec![ZERO; n * n];
        let mut nonzero: Vec<(usize, Complex)> = Vec::with_capacity(n);
        for k in 0..n {
            nonzero.clear();
            nonzero.extend(
                self.row(k)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, &v)| (i, v)),
            );
            for &(i, a) in &nonzero {
                let ac = a.conj();
                for &(j, b) in &nonzero {
                    gram[i * n + j] += ac * b;
                }
            }
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((gram[i * n + j] - target).abs());
            }
        }
        worst
    }

    /// True iff `max |C†C − I| ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        assert!(tol > 0.0, "tolerance must be positive");
        self.unitarity_defect() <= tol
    }

    /// Largest absolute entry-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &CoinOperator) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn hadamard_entries() {
        let h = CoinOperator::hadamard();
        let s = FRAC_1_SQRT_2;
        assert_eq!(h.entries(), &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
    }

    #[test]
    fn grover_entries() {
        let r = CoinOperator::grover4();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { -0.5 } else { 0.5 };
                assert_eq!(r.get(i, j), c(want, 0.0));
            }
        }
    }

    #[test]
    fn builtin_coins_are_unitary() {
        for coin in [CoinOperator::hadamard(), CoinOperator::balanced_y(), CoinOperator::grover4()] {
            assert!(coin.is_unitary(UNITARY_TOLERANCE), "{coin:?}");
        }
        assert!(CoinOperator::identity(3).is_unitary(UNITARY_TOLERANCE));
    }

    #[test]
    fn shear_is_not_unitary() {
        let m = CoinOperator::from_rows(2, vec![c(1.0, 0.0), c(1.0, 0.0), ZERO, c(1.0, 0.0)]).unwrap();
        assert!(!m.is_unitary(UNITARY_TOLERANCE));
    }

    #[test]
    fn hadamard_on_left_basis() {
        let out = CoinOperator::hadamard().apply(&SpinVector::basis(2, 0)).unwrap();
        assert_eq!(out.components(), &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]);
    }

    #[test]
    fn identity_apply_is_noop() {
        let x = SpinVector::new(vec![c(0.2, -0.1), c(0.0, 0.7)]).unwrap();
        assert_eq!(CoinOperator::identity(2).apply(&x).unwrap(), x);
    }

    #[test]
    fn balanced_coin_on_imaginary_right_spin() {
        // Y·[0, i/√2] = (1/√2)[i·i/√2, i/√2] = [−1/2, i/2]
        let x = SpinVector::new(vec![ZERO, c(0.0, FRAC_1_SQRT_2)]).unwrap();
        let y = CoinOperator::balanced_y().apply(&x).unwrap();
        assert!((y[0] - c(-0.5, 0.0)).abs() < 1e-15);
        assert!((y[1] - c(0.0, 0.5)).abs() < 1e-15);
    }

    #[test]
    fn apply_dimension_mismatch() {
        assert!(CoinOperator::hadamard().apply(&SpinVector::zeros(3)).is_err());
        assert!(CoinOperator::from_rows(2, vec![ZERO; 3]).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let h = CoinOperator::hadamard();
        assert_eq!(h.adjoint(), h);
        let y = CoinOperator::balanced_y();
        let yy = y.adjoint().matmul(&y).unwrap();
        assert!(yy.max_abs_diff(&CoinOperator::identity(2)) <= 1e-12);
        let d = CoinOperator::from_rows(2, vec![c(0.0, 1.0), ZERO, ZERO, c(1.0, 0.0)]).unwrap();
        let want = CoinOperator::from_rows(2, vec![c(0.0, -1.0), ZERO, ZERO, c(1.0, 0.0)]).unwrap();
        assert_eq!(d.adjoint(), want);
    }

    #[test]
    fn tensor_identity_is_block_diagonal() {
        let big = CoinOperator::hadamard().tensor_identity(3);
        assert_eq!(big.dim(), 6);
        assert_eq!(big.get(2, 3), CoinOperator::hadamard().get(0, 1));
        assert_eq!(big.get(1, 2), ZERO);
        assert!(big.is_unitary(1e-12));
    }

    fn operator(dim: usize) -> impl Strategy<Value = CoinOperator> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
            CoinOperator::from_rows(dim, v.into_iter().map(|(r, i)| c(r, i)).collect()).unwrap()
        })
    }

    fn unit_spin(dim: usize) -> impl Strategy<Value = SpinVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
            .prop_filter("non-zero", |v| v.iter().any(|&(r, i)| r != 0.0 || i != 0.0))
            .prop_map(|v| {
                let s = SpinVector::new(v.into_iter().map(|(r, i)| c(r, i)).collect()).unwrap();
                let n = s.norm_sq().sqrt();
                SpinVector::new(s.components().iter().map(|z| z.scale(1.0 / n)).collect()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn adjoint_is_involution(m in (1usize..5).prop_flat_map(operator)) {
            prop_assert_eq!(m.adjoint().adjoint(), m);
        }

        #[test]
        fn builtin_coins_are_isometries(x2 in unit_spin(2), x4 in unit_spin(4)) {
            for coin in [CoinOperator::hadamard(), CoinOperator::balanced_y()] {
                let y = coin.apply(&x2).unwrap();
                prop_assert!((y.norm_sq() - x2.norm_sq()).abs() <= 1e-12);
            }
            let y = CoinOperator::grover4().apply(&x4).unwrap();
            prop_assert!((y.norm_sq() - x4.norm_sq()).abs() <= 1e-12);
        }
    }
}
