//! Dense complex linear algebra used by the propagators.

use nalgebra::{Complex, SymmetricEigen, SVD};

use crate::scalar::{cabs, expi, lit, CMatrix, Real};

/// Eigen-decomposition H = V diag(λ) V† of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// Only the lower triangle is trusted; pass a Hermitian matrix.
    pub fn new(m: &CMatrix<T>) -> Self {
        let sym = (m + m.adjoint()).map(|z| z * lit::<T>(0.5));
        let eig = SymmetricEigen::new(sym);
        Self { values: eig.eigenvalues.iter().copied().collect(), vectors: eig.eigenvectors }
    }

    /// V diag(f(λ)) V†
    pub fn apply_fn(&self, f: impl Fn(T) -> Complex<T>) -> CMatrix<T> {
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            let w = f(self.values[k]);
            col.iter_mut().for_each(|z| *z *= w);
        }
        scaled * self.vectors.adjoint()
    }

    /// e^{−iHt}
    pub fn unitary(&self, t: T) -> CMatrix<T> {
        self.apply_fn(|lambda| expi(-lambda * t))
    }

    pub fn sorted_values(&self) -> Vec<T> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        v
    }
}

/// Maximum absolute column sum.
pub fn norm_one<T: Real>(m: &CMatrix<T>) -> T {
    m.column_iter()
        .map(|c| c.iter().fold(T::zero(), |s, z| s + cabs(*z)))
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

/// Matrix exponential of a general complex matrix by scaling and squaring
/// with a truncated Taylor series.
pub fn expm<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = norm_one(a);
    let half: T = lit(0.5);
    let mut squarings = 0u32;
    let mut scale = T::one();
    while norm * scale > half {
        scale *= half;
        squarings += 1;
    }
    let scaled = a.map(|z| z * scale);
    let eps = T::default_epsilon();
    let mut result = CMatrix::<T>::identity(n, n);
    let mut term = CMatrix::<T>::identity(n, n);
    for k in 1..40 {
        term = (&term * &scaled).map(|z| z / lit::<T>(k as f64));
        result += &term;
        if norm_one(&term) <= eps * norm_one(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Singular values of a complex matrix.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    SVD::new(m.clone(), false, false).singular_values.iter().copied().collect()
}
