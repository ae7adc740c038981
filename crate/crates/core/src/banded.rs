//! Direct solvers for the constant-coefficient band systems of the
//! dispersive step: a band LU without pivoting, and its cyclic extension
//! through a low-rank Woodbury correction for periodic meshes.

/// Square band matrix with `p` sub- and super-diagonals, stored row-wise:
/// `data[i * (2p+1) + (j - i + p)]` holds entry `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    p: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, p: usize) -> Self {
        Self {
            n,
            p,
            data: vec![0.0; n * (2 * p + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.p
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i.abs_diff(j) <= self.p);
        i * (2 * self.p + 1) + j + self.p - i
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i.abs_diff(j) > self.p {
            0.0
        } else {
            self.data[self.slot(i, j)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.slot(i, j);
        self.data[k] = value;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let k = self.slot(i, j);
        self.data[k] += value;
    }

    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let lo = i.saturating_sub(self.p);
            let hi = (i + self.p).min(self.n - 1);
            *o = (lo..=hi).map(|j| self.get(i, j) * x[j]).sum();
        }
    }

    /// In-place LU factorization without pivoting. Returns `None` on a zero
    /// pivot; intended for positive definite or diagonally dominant bands.
    pub fn factorize(mut self) -> Option<BandLu> {
        let (n, p) = (self.n, self.p);
        for k in 0..n {
            let pivot = self.get(k, k);
            if pivot == 0.0 || !pivot.is_finite() {
                return None;
            }
            for i in k + 1..(k + p + 1).min(n) {
                let l = self.get(i, k) / pivot;
                self.set(i, k, l);
                for j in k + 1..(k + p + 1).min(n) {
                    let u = self.get(k, j);
                    self.add(i, j, -l * u);
                }
            }
        }
        Some(BandLu { lu: self })
    }
}

/// Packed `L U` factors of a band matrix (unit lower triangle implied).
#[derive(Debug, Clone, PartialEq)]
pub struct BandLu {
    lu: BandMatrix,
}

impl BandLu {
    pub fn size(&self) -> usize {
        self.lu.n
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, p) = (self.lu.n, self.lu.p);
        for i in 0..n {
            let lo = i.saturating_sub(p);
            let mut s = x[i];
            for (j, xj) in x.iter().enumerate().take(i).skip(lo) {
                s -= self.lu.get(i, j) * xj;
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + p).min(n - 1);
            let mut s = x[i];
            for (j, xj) in x.iter().enumerate().take(hi + 1).skip(i + 1) {
                s -= self.lu.get(i, j) * xj;
            }
            x[i] = s / self.lu.get(i, i);
        }
    }
}

/// Small dense LU with partial pivoting, used for the capacitance matrix.
#[derive(Debug, Clone, PartialEq)]
struct DenseLu {
    n: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    fn factorize(n: usize, mut a: Vec<f64>) -> Option<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let piv = (k..n).max_by(|&x, &y| a[x * n + k].abs().total_cmp(&a[y * n + k].abs()))?;
            if a[piv * n + k] == 0.0 {
                return None;
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            for i in k + 1..n {
                let l = a[i * n + k] / a[k * n + k];
                a[i * n + k] = l;
                for j in k + 1..n {
                    a[i * n + j] -= l * a[k * n + j];
                }
            }
        }
        Some(Self { n, a, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.a[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.a[i * n + j] * x[j];
            }
            x[i] /= self.a[i * n + i];
        }
        x
    }
}

/// Factorized cyclic band matrix `A = B + E`, where `B` is the band part and
/// `E` holds the wrap-around corners. Solves use
/// `A^{-1} b = y - Y S^{-1} E_R y` with `y = B^{-1} b`, `Y = B^{-1} U`,
/// `S = I + E_R Y`, and `U` selecting the corner rows `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicLu {
    band: BandLu,
    rows: Vec<usize>,
    /// Corner entries `(row slot, column, value)`.
    corners: Vec<(usize, usize, f64)>,
    /// `Y`, stored column-major: column `r` has length `n`.
    y: Vec<Vec<f64>>,
    capacitance: DenseLu,
}

impl CyclicLu {
    /// `stencil[k]` is the coefficient at offset `k - p`, applied
    /// cyclically on every row. Requires `n >= 2p + 2`.
    pub fn from_stencil(n: usize, stencil: &[f64]) -> Option<Self> {
        let p = stencil.len() / 2;
        if stencil.len() != 2 * p + 1 || n < 2 * p + 2 {
            return None;
        }
        let mut band = BandMatrix::zeros(n, p);
        let mut corners_full = Vec::new();
        for i in 0..n {
            for (k, &c) in stencil.iter().enumerate() {
                let j = i as isize + k as isize - p as isize;
                if (0..n as isize).contains(&j) {
                    band.add(i, j as usize, c);
                } else {
                    corners_full.push((i, j.rem_euclid(n as isize) as usize, c));
                }
            }
        }
        let rows: Vec<usize> = (0..p).chain(n - p..n).collect();
        let corners = corners_full
            .into_iter()
            .map(|(i, j, c)| (rows.iter().position(|&r| r == i).unwrap(), j, c))
            .collect::<Vec<_>>();
        let band = band.factorize()?;
        let m = rows.len();
        let y: Vec<Vec<f64>> = rows
            .iter()
            .map(|&r| {
                let mut e = vec![0.0; n];
                e[r] = 1.0;
                band.solve_in_place(&mut e);
                e
            })
            .collect();
        let mut s = vec![0.0; m * m];
        for a in 0..m {
            s[a * m + a] = 1.0;
        }
        for &(slot, j, c) in &corners {
            for (col, ycol) in y.iter().enumerate() {
                s[slot * m + col] += c * ycol[j];
            }
        }
        let capacitance = DenseLu::factorize(m, s)?;
        Some(Self {
            band,
            rows,
            corners,
            y,
            capacitance,
        })
    }

    pub fn size(&self) -> usize {
        self.band.size()
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        self.band.solve_in_place(x);
        let mut ey = vec![0.0; self.rows.len()];
        for &(slot, j, c) in &self.corners {
            ey[slot] += c * x[j];
        }
        if ey.iter().all(|&e| e == 0.0) {
            return;
        }
        let z = self.capacitance.solve(&ey);
        for (col, zc) in self.y.iter().zip(z) {
            for (xi, yi) in x.iter_mut().zip(col) {
                *xi -= zc * yi;
            }
        }
    }
}
