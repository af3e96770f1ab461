use num_complex::Complex64;

use crate::error::{DplError, Result};

/// Square complex matrix with equal lower and upper half-bandwidth,
/// stored row by row: entry `(i, j)` lives at `i * (2p + 1) + (j + p - i)`.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    p: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, p: usize) -> Self {
        Self {
            n,
            p,
            data: vec![Complex64::new(0.0, 0.0); n * (2 * p + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.p
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i.abs_diff(j) <= self.p);
        i * (2 * self.p + 1) + (j + self.p - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i.abs_diff(j) > self.p {
            Complex64::new(0.0, 0.0)
        } else {
            self.data[self.idx(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let w = 2 * self.p + 1;
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.p);
                let hi = (i + self.p).min(self.n - 1);
                let row = &self.data[i * w..(i + 1) * w];
                (lo..=hi).map(|j| row[j + self.p - i] * x[j]).sum()
            })
            .collect()
    }

    /// In-place LU factorization without pivoting.
    ///
    /// Safe when the Hermitian part of the matrix is positive definite.
    /// Fails when a pivot falls below `rel_tol` times its row scale.
    pub fn factor(mut self, rel_tol: f64) -> Result<BandLu> {
        let (n, p) = (self.n, self.p);
        let w = 2 * p + 1;
        let mut min_ratio = f64::INFINITY;
        for k in 0..n {
            let row_k = k * w;
            let scale = self.data[row_k..row_k + w]
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            let piv = self.data[row_k + p];
            let ratio = if scale > 0.0 { piv.norm() / scale } else { 0.0 };
            min_ratio = min_ratio.min(ratio);
            if ratio.is_nan() || ratio <= rel_tol {
                return Err(DplError::Solver(format!(
                    "near-singular pivot at row {k}: |pivot|/row scale = {ratio:e} \
                     (frequency may be at or above the critical value)"
                )));
            }
            let inv = piv.inv();
            let last = (k + p).min(n - 1);
            let (head, tail) = self.data.split_at_mut((k + 1) * w);
            let pivot_row = &head[row_k + p + 1..row_k + w];
            for i in k + 1..=last {
                let off = (i - k - 1) * w;
                let row_i = &mut tail[off..off + w];
                // column k sits at offset k + p - i in row i
                let c = k + p - i;
                let l = row_i[c] * inv;
                row_i[c] = l;
                for (dst, src) in row_i[c + 1..c + 1 + (last - k)]
                    .iter_mut()
                    .zip(&pivot_row[..last - k])
                {
                    *dst -= l * src;
                }
            }
        }
        Ok(BandLu {
            m: self,
            min_pivot_ratio: min_ratio,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    pub min_pivot_ratio: f64,
}

impl BandLu {
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let (n, p) = (self.m.n, self.m.p);
        let w = 2 * p + 1;
        let d = &self.m.data;
        let mut x = b.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(p);
            let row = &d[i * w..];
            let mut s = x[i];
            for j in lo..i {
                s -= row[j + p - i] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + p).min(n - 1);
            let row = &d[i * w..];
            let mut s = x[i];
            for j in i + 1..=hi {
                s -= row[j + p - i] * x[j];
            }
            x[i] = s / row[p];
        }
        x
    }
}
