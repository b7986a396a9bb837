//! Symmetric banded and small dense linear algebra used by the modal solver.

mod band;
mod dense;

pub use band::{BandCholesky, SymBand};
pub use dense::{dense_cholesky, symmetric_eigen, DenseMatrix};

use crate::real::Real;

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
