use crate::error::{Error, Result};
use crate::real::Real;

/// Symmetric matrix stored as its lower band: row `i` holds columns
/// `i - bw ..= i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand<T> {
    n: usize,
    bw: usize,
    data: Vec<T>,
}

impl<T: Real> SymBand<T> {
    pub fn zeros(n: usize, half_bandwidth: usize) -> Self {
        Self {
            n,
            bw: half_bandwidth,
            data: vec![T::zero(); n * (half_bandwidth + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            T::zero()
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to entries `(i, j)` and `(j, i)`.
    ///
    /// Panics when the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside half bandwidth {}", self.bw);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![T::zero(); self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let row = &self.data[i * (self.bw + 1)..(i + 1) * (self.bw + 1)];
            let mut acc = T::zero();
            for j in lo..i {
                let a = row[j + self.bw - i];
                acc += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += acc + row[self.bw] * x[i];
        }
        y
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        super::dot(x, &self.matvec(y))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    /// Principal submatrix on the sorted index list `keep`.
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        let m = keep.len();
        let mut bw = 0;
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep[..a].iter().enumerate().rev() {
                if i - j > self.bw {
                    break;
                }
                if self.get(i, j) != T::zero() {
                    bw = bw.max(a - b);
                }
            }
        }
        let mut out = Self::zeros(m, bw);
        for a in 0..m {
            for b in a.saturating_sub(bw)..=a {
                let v = self.get(keep[a], keep[b]);
                if v != T::zero() {
                    let k = out.idx(a, b);
                    out.data[k] = v;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> super::DenseMatrix<T> {
        let mut d = super::DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let v = self.get(i, j);
                d.set(i, j, v);
                d.set(j, i, v);
            }
        }
        d
    }

    /// Banded Cholesky `A = L Lᵀ`; fails if `A` is not positive definite.
    pub fn cholesky(&self) -> Result<BandCholesky<T>> {
        let n = self.n;
        let bw = self.bw;
        let mut l = self.clone();
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                let lo = lo_i.max(j.saturating_sub(bw));
                let mut s = l.data[l.idx(i, j)];
                for k in lo..j {
                    s -= l.data[l.idx(i, k)] * l.data[l.idx(j, k)];
                }
                if i == j {
                    if !(s > T::zero()) || !s.is_finite() {
                        return Err(Error::InvalidSystem(format!(
                            "matrix not positive definite at pivot {i} (value {s})"
                        )));
                    }
                    let k = l.idx(i, i);
                    l.data[k] = s.sqrt();
                } else {
                    let k = l.idx(i, j);
                    l.data[k] = s / l.data[l.idx(j, j)];
                }
            }
        }
        Ok(BandCholesky { l })
    }
}

/// Lower-triangular banded Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandCholesky<T> {
    l: SymBand<T>,
}

impl<T: Real> BandCholesky<T> {
    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.l.n;
        let bw = self.l.bw;
        let l = &self.l;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= l.data[l.idx(i, k)] * y[k];
            }
            y[i] = s / l.data[l.idx(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= l.data[l.idx(k, i)] * y[k];
            }
            y[i] = s / l.data[l.idx(i, i)];
        }
        y
    }
}
