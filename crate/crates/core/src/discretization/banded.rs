//! Complex band matrices and a direct band LU solver with partial pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square band matrix with `kl` sub-diagonals and `ku` super-diagonals.
///
/// Storage is row-major: row `i` holds columns `i - kl ..= i + ku`, so entry
/// `(i, j)` lives at `data[i * (kl + ku + 1) + (j + kl - i)]`. Slots that fall
/// outside the matrix are kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<Complex64>,
}

impl BandedOperator {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![Complex64::new(0.0, 0.0); n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize, kl: usize, ku: usize) -> Self {
        let mut op = Self::zeros(n, kl, ku);
        for i in 0..n {
            op.set(i, i, Complex64::new(1.0, 0.0));
        }
        op
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower_bands(&self) -> usize {
        self.kl
    }

    pub fn upper_bands(&self) -> usize {
        self.ku
    }

    /// Total stencil width `kl + ku + 1`.
    pub fn bandwidth(&self) -> usize {
        self.kl + self.ku + 1
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        i * self.bandwidth() + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if self.in_band(i, j) {
            self.data[self.index(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Sets entry `(i, j)`.
    ///
    /// Panics if `(i, j)` lies outside the band; writing there would silently
    /// drop the value.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let k = self.index(i, j);
        self.data[k] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let k = self.index(i, j);
        self.data[k] += value;
    }

    /// Column range `(first, last_exclusive)` of row `i` within the band.
    pub fn row_columns(&self, i: usize) -> (usize, usize) {
        (i.saturating_sub(self.kl), (i + self.ku + 1).min(self.n))
    }

    /// Replaces row `i` by the corresponding row of the identity.
    pub fn set_identity_row(&mut self, i: usize) {
        let (lo, hi) = self.row_columns(i);
        for j in lo..hi {
            self.set(i, j, Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
        }
    }

    /// `alpha * self + beta * I`.
    pub fn scaled_plus_identity(&self, alpha: Complex64, beta: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= alpha;
        }
        for i in 0..self.n {
            out.add(i, i, beta);
        }
        out
    }

    /// Adds `diag[i]` to each diagonal entry.
    pub fn add_diagonal(&mut self, diag: &[Complex64]) {
        for (i, &d) in diag.iter().enumerate().take(self.n) {
            self.add(i, i, d);
        }
    }

    /// Band matrix-vector product.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = self.row_columns(i);
            let row = &self.data[i * self.bandwidth()..(i + 1) * self.bandwidth()];
            let mut acc = Complex64::new(0.0, 0.0);
            for j in lo..hi {
                acc += row[j + self.kl - i] * x[j];
            }
            *yi = acc;
        }
        Ok(y)
    }

    /// Product with a real vector.
    pub fn apply_real(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.apply(&xc)
    }

    /// Row-major dense copy; intended for tests and diagnostics on small systems.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Largest modulus in row `i`.
    pub fn row_scale(&self, i: usize) -> f64 {
        let (lo, hi) = self.row_columns(i);
        (lo..hi).map(|j| self.get(i, j).norm()).fold(0.0, f64::max)
    }
}

/// LU factorization `P A = L U` of a band matrix, with row interchanges
/// restricted to the `kl` rows below the diagonal. `U` gains `kl` extra
/// super-diagonals of fill.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    /// Column-major band storage; element `(i, j)` at `j * ldab + (kv + i - j)`
    /// with `kv = kl + ku` and `ldab = 2 kl + ku + 1`.
    ab: Vec<Complex64>,
    pivots: Vec<usize>,
}

/// Relative pivot threshold below which the factorization is declared singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

impl BandLu {
    fn ldab(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        j * self.ldab() + (self.kl + self.ku + i - j)
    }

    pub fn factor(op: &BandedOperator) -> Result<Self> {
        let n = op.size();
        let (kl, ku) = (op.lower_bands(), op.upper_bands());
        let scales: Vec<f64> = (0..n).map(|i| op.row_scale(i)).collect();
        let mut lu = BandLu {
            n,
            kl,
            ku,
            ab: vec![Complex64::new(0.0, 0.0); n * (2 * kl + ku + 1)],
            pivots: vec![0; n],
        };
        for i in 0..n {
            let (lo, hi) = op.row_columns(i);
            for j in lo..hi {
                let k = lu.at(i, j);
                lu.ab[k] = op.get(i, j);
            }
        }
        // Row scale travels with its row through the interchanges.
        let mut row_scale = scales;
        let kv = kl + ku;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut p = j;
            let mut best = lu.ab[lu.at(j, j)].norm();
            for i in j + 1..=j + km {
                let v = lu.ab[lu.at(i, j)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.pivots[j] = p;
            let scale = row_scale[p].max(f64::MIN_POSITIVE);
            if !(best > PIVOT_TOLERANCE * scale) {
                return Err(Error::SingularPivot {
                    row: j,
                    pivot: best,
                    scale,
                });
            }
            let last_col = (j + kv).min(n - 1);
            if p != j {
                for c in j..=last_col {
                    let (a, b) = (lu.at(j, c), lu.at(p, c));
                    lu.ab.swap(a, b);
                }
                row_scale.swap(j, p);
            }
            let inv = lu.ab[lu.at(j, j)].inv();
            for i in j + 1..=j + km {
                let k = lu.at(i, j);
                lu.ab[k] *= inv;
            }
            for c in j + 1..=last_col {
                let ujc = lu.ab[lu.at(j, c)];
                if ujc == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i in j + 1..=j + km {
                    let lij = lu.ab[lu.at(i, j)];
                    let k = lu.at(i, c);
                    lu.ab[k] -= lij * ujc;
                }
            }
        }
        Ok(lu)
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        for j in 0..n {
            let p = self.pivots[j];
            if p != j {
                x.swap(j, p);
            }
            let km = self.kl.min(n - 1 - j);
            let xj = x[j];
            for i in j + 1..=j + km {
                x[i] -= self.ab[self.at(i, j)] * xj;
            }
        }
        let kv = self.kl + self.ku;
        for j in (0..n).rev() {
            x[j] /= self.ab[self.at(j, j)];
            let xj = x[j];
            for i in j.saturating_sub(kv)..j {
                x[i] -= self.ab[self.at(i, j)] * xj;
            }
        }
        Ok(x)
    }
}

/// Solves `op · x = rhs` by band LU with partial pivoting.
pub fn solve_banded(op: &BandedOperator, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    if rhs.len() != op.size() {
        return Err(Error::LengthMismatch {
            expected: op.size(),
            actual: rhs.len(),
        });
    }
    BandLu::factor(op)?.solve(rhs)
}
