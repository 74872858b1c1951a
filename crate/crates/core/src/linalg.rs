//! Dense vectors and matrices over truncated Euclidean numbers.
//!
//! Provides the products, the partially pivoted LU factorization and the
//! Euclidean norms the interior point loop needs. Everything is dense and
//! desk-scale; inputs are immutable and operations are pure.

use std::error::Error;
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::ban::{Ban, BanError};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    DimensionMismatch { expected: String, got: String },
    /// No usable pivot at the given elimination step.
    Singular { step: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            LinalgError::Singular { step } => {
                write!(f, "matrix is singular at elimination step {step}")
            }
        }
    }
}

impl Error for LinalgError {}

/// Dense column vector of [`Ban`] scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct BanVector<R: Real = f64> {
    entries: Vec<Ban<R>>,
}

impl<R: Real> BanVector<R> {
    pub fn new(entries: Vec<Ban<R>>) -> Self {
        assert!(!entries.is_empty(), "vector needs at least one entry");
        let len = entries[0].len();
        assert!(entries.iter().all(|e| e.len() == len), "entries must share L");
        BanVector { entries }
    }

    pub fn zeros(n: usize, len: usize) -> Self {
        Self::new(vec![Ban::zero(len); n])
    }

    pub fn ones(n: usize, len: usize) -> Self {
        Self::new(vec![Ban::real(R::one(), len); n])
    }

    pub fn from_reals(values: &[R], len: usize) -> Self {
        Self::new(values.iter().map(|v| Ban::real(*v, len)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Monosemium slots per entry.
    pub fn ban_len(&self) -> usize {
        self.entries[0].len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Ban<R>> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &[Ban<R>] {
        &self.entries
    }

    pub fn push(&mut self, v: Ban<R>) {
        assert_eq!(v.len(), self.ban_len());
        self.entries.push(v);
    }

    pub fn map(&self, f: impl Fn(&Ban<R>) -> Ban<R>) -> Self {
        Self::new(self.entries.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(self.iter().zip(other.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(self.iter().zip(other.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(self.iter().zip(other.iter()).map(|(a, b)| a * b).collect())
    }

    /// Adds `step · dir` to every entry.
    pub fn axpy(&self, step: &Ban<R>, dir: &Self) -> Self {
        assert_eq!(self.dim(), dir.dim());
        Self::new(self.iter().zip(dir.iter()).map(|(v, d)| v + step * d).collect())
    }

    pub fn scale(&self, s: &Ban<R>) -> Self {
        self.map(|e| e * s)
    }

    pub fn dot(&self, other: &Self) -> Ban<R> {
        assert_eq!(self.dim(), other.dim());
        let mut acc = Ban::zero(self.ban_len());
        for (a, b) in self.iter().zip(other.iter()) {
            acc = acc + a * b;
        }
        acc
    }

    pub fn sum(&self) -> Ban<R> {
        let mut acc = Ban::zero(self.ban_len());
        for e in self.iter() {
            acc = acc + e;
        }
        acc
    }

    pub fn min(&self) -> Ban<R> {
        let mut m = self.entries[0].clone();
        for e in self.iter().skip(1) {
            if *e < m {
                m = e.clone();
            }
        }
        m
    }

    /// `√(Σ vᵢ²)`; zero for the zero vector.
    pub fn euclidean_norm(&self) -> Ban<R> {
        let mut acc = Ban::zero(self.ban_len());
        for e in self.iter() {
            acc = acc + e * e;
        }
        acc.sqrt_even().expect("sum of squares is nonnegative with even power")
    }

    /// Vector order of magnitude: `max O(vᵢ)` over nonzero entries.
    pub fn magnitude(&self) -> Result<Ban<R>, BanError> {
        let mut best: Option<Ban<R>> = None;
        for e in self.iter() {
            if e.is_zero() {
                continue;
            }
            let m = e.magnitude()?;
            best = Some(match best {
                Some(b) if b >= m => b,
                _ => m,
            });
        }
        best.ok_or(BanError::MagnitudeOfZero)
    }

    /// Vector smallest order: `min o(vᵢ)` over nonzero entries.
    pub fn smallest_order(&self) -> Result<Ban<R>, BanError> {
        let mut best: Option<Ban<R>> = None;
        for e in self.iter() {
            if e.is_zero() {
                continue;
            }
            let m = e.smallest_order()?;
            best = Some(match best {
                Some(b) if b <= m => b,
                _ => m,
            });
        }
        best.ok_or(BanError::MagnitudeOfZero)
    }

    pub fn lead_mon(&self) -> Self {
        self.map(|e| e.lead_mon())
    }

    pub fn dominant_mon(&self) -> Self {
        self.map(|e| e.dominant_mon())
    }

    pub fn denoised(&self) -> Self {
        self.map(|e| e.denoised())
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.iter().all(|e| e.is_positive())
    }

    /// Concatenates `self` with `tail`.
    pub fn concat(&self, tail: &[Ban<R>]) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(tail.iter().cloned());
        Self::new(entries)
    }
}

impl<R: Real> Index<usize> for BanVector<R> {
    type Output = Ban<R>;
    fn index(&self, i: usize) -> &Ban<R> {
        &self.entries[i]
    }
}

impl<R: Real> IndexMut<usize> for BanVector<R> {
    fn index_mut(&mut self, i: usize) -> &mut Ban<R> {
        &mut self.entries[i]
    }
}

impl<R: Real> fmt::Display for BanVector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Dense row-major matrix of [`Ban`] scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct BanMatrix<R: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<Ban<R>>,
}

impl<R: Real> BanMatrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<Ban<R>>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix needs positive dimensions");
        assert_eq!(rows * cols, data.len(), "data length must equal rows·cols");
        let len = data[0].len();
        assert!(data.iter().all(|e| e.len() == len), "entries must share L");
        BanMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, len: usize) -> Self {
        Self::new(rows, cols, vec![Ban::zero(len); rows * cols])
    }

    pub fn identity(n: usize, len: usize) -> Self {
        let mut m = Self::zeros(n, n, len);
        for i in 0..n {
            m[(i, i)] = Ban::real(R::one(), len);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Ban<R>>>) -> Self {
        let r = rows.len();
        assert!(r > 0);
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_reals(rows: &[Vec<R>], len: usize) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|v| Ban::real(*v, len)).collect())
                .collect(),
        )
    }

    pub fn diag(v: &BanVector<R>) -> Self {
        let n = v.dim();
        let mut m = Self::zeros(n, n, v.ban_len());
        for i in 0..n {
            m[(i, i)] = v[i].clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ban_len(&self) -> usize {
        self.data[0].len()
    }

    pub fn row(&self, i: usize) -> BanVector<R> {
        BanVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> BanVector<R> {
        BanVector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.ban_len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mat_mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "inner dimensions must agree for a matrix product"
        );
        let len = self.ban_len();
        let mut out = Self::zeros(self.rows, other.cols, len);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Ban::zero(len);
                for k in 0..self.cols {
                    acc = acc + &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &BanVector<R>) -> BanVector<R> {
        assert_eq!(self.cols, v.dim(), "inner dimensions must agree");
        let len = self.ban_len();
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Ban::zero(len);
            for k in 0..self.cols {
                acc = acc + &self[(i, k)] * &v[k];
            }
            out.push(acc);
        }
        BanVector::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.data.iter().zip(other.data.iter()).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|e| -e).collect())
    }

    pub fn scale(&self, s: &Ban<R>) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|e| e * s).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix smallest order: `min o(entry)` over nonzero entries.
    pub fn smallest_order(&self) -> Result<Ban<R>, BanError> {
        let mut best: Option<Ban<R>> = None;
        for e in &self.data {
            if e.is_zero() {
                continue;
            }
            let m = e.smallest_order()?;
            best = Some(match best {
                Some(b) if b <= m => b,
                _ => m,
            });
        }
        best.ok_or(BanError::MagnitudeOfZero)
    }

    /// Solves `M·x = d` by Gaussian elimination with partial pivoting; the
    /// pivot is the candidate of maximal Ban absolute value.
    pub fn lu_solve(&self, d: &BanVector<R>) -> Result<BanVector<R>, LinalgError> {
        let sols = self.lu_solve_mat(&Self::new(d.dim(), 1, d.entries().to_vec()))?;
        Ok(sols.col(0))
    }

    /// Multiple right-hand side variant of [`BanMatrix::lu_solve`].
    pub fn lu_solve_mat(&self, d: &Self) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        if d.rows != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{} right-hand side rows", self.rows),
                got: format!("{}", d.rows),
            });
        }
        let n = self.rows;
        let len = self.ban_len();
        let mut a = self.clone();
        let mut rhs = d.clone();

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = a[(k, k)].abs();
            for i in (k + 1)..n {
                let mag = a[(i, k)].abs();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag.is_zero() {
                return Err(LinalgError::Singular { step: k });
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = a[(k, j)].clone();
                    a[(k, j)] = a[(pivot_row, j)].clone();
                    a[(pivot_row, j)] = tmp;
                }
                for j in 0..rhs.cols {
                    let tmp = rhs[(k, j)].clone();
                    rhs[(k, j)] = rhs[(pivot_row, j)].clone();
                    rhs[(pivot_row, j)] = tmp;
                }
            }
            let pivot = a[(k, k)].clone();
            let inv = pivot.reciprocal().expect("pivot checked nonzero");
            for i in (k + 1)..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let factor = &a[(i, k)] * &inv;
                a[(i, k)] = Ban::zero(len);
                for j in (k + 1)..n {
                    a[(i, j)] = &a[(i, j)] - &factor * &a[(k, j)];
                }
                for j in 0..rhs.cols {
                    rhs[(i, j)] = &rhs[(i, j)] - &factor * &rhs[(k, j)];
                }
            }
        }

        // back substitution
        let mut x = Self::zeros(n, rhs.cols, len);
        for j in 0..rhs.cols {
            for i in (0..n).rev() {
                let mut acc = rhs[(i, j)].clone();
                for k in (i + 1)..n {
                    acc = acc - &a[(i, k)] * &x[(k, j)];
                }
                x[(i, j)] = acc.checked_div(&a[(i, i)]).expect("pivot checked nonzero");
            }
        }
        Ok(x)
    }

    /// Matrix inverse via solves against the identity.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        self.lu_solve_mat(&Self::identity(self.rows, self.ban_len()))
    }
}

impl<R: Real> Index<(usize, usize)> for BanMatrix<R> {
    type Output = Ban<R>;
    fn index(&self, (i, j): (usize, usize)) -> &Ban<R> {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<R: Real> IndexMut<(usize, usize)> for BanMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Ban<R> {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Real> fmt::Display for BanMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: usize = 5;

    fn b(text: &str) -> Ban {
        Ban::parse(text, L).unwrap()
    }

    fn bl(text: &str, len: usize) -> Ban {
        Ban::parse(text, len).unwrap()
    }

    #[test]
    fn mat_vec_examples() {
        let a = BanMatrix::from_reals(&[vec![-2.0, 1.0, 1.0, 0.0], vec![1.0, -2.0, 0.0, 1.0]], L);
        let x = BanVector::from_reals(&[0.0, 0.0, 2.0, 1.0], L);
        assert_eq!(a.mat_vec(&x), BanVector::from_reals(&[2.0, 1.0], L));

        let id = BanMatrix::identity(4, L);
        assert_eq!(id.mat_vec(&x), x);

        // finite system whose product is finite despite infinite x
        let m = BanMatrix::from_rows(vec![vec![b("n^2-1"), b("1")], vec![b("1"), b("n^2-1")]]);
        let xs = BanVector::new(vec![b("a^2"), b("a^2")]);
        assert_eq!(m.mat_vec(&xs), BanVector::from_reals(&[1.0, 1.0], L));
    }

    #[test]
    fn lu_solves_the_infinite_solution_system() {
        // finite data, infinite solution x = [α², α²]; exact once the window
        // is long enough to carry the η⁴ term through the elimination
        let m5 = BanMatrix::from_rows(vec![vec![b("n^2-1"), b("1")], vec![b("1"), b("n^2-1")]]);
        let d5 = BanVector::from_reals(&[1.0, 1.0], L);
        let x5 = m5.lu_solve(&d5).unwrap();
        assert_eq!(x5[0], b("a^2"), "got {}", x5[0]);
        assert_eq!(x5[1], b("a^2"));

        // at L = 3 the leading monosemium is still α² and the truncation
        // error sits L−1 powers below it
        let m3 = BanMatrix::from_rows(vec![
            vec![bl("n^2-1", 3), bl("1", 3)],
            vec![bl("1", 3), bl("n^2-1", 3)],
        ]);
        let x3 = m3.lu_solve(&BanVector::from_reals(&[1.0, 1.0], 3)).unwrap();
        for x in x3.iter() {
            assert_eq!(x.lead_mon(), bl("a^2", 3), "got {x}");
            let err = x - bl("a^2", 3);
            assert!(err.is_zero() || err.power() <= 0, "error {err} too large");
        }
    }

    #[test]
    fn lu_identity_and_singularity() {
        let id = BanMatrix::identity(3, L);
        let d = BanVector::from_reals(&[4.0, -1.0, 0.5], L);
        assert_eq!(id.lu_solve(&d).unwrap(), d);

        let sing = BanMatrix::from_reals(&[vec![1.0, 2.0], vec![2.0, 4.0]], L);
        assert_eq!(
            sing.lu_solve(&BanVector::from_reals(&[1.0, 1.0], L)),
            Err(LinalgError::Singular { step: 1 })
        );
    }

    #[test]
    fn inversion_accuracy_grows_with_length() {
        // A = [[α, −α, 2η], [2α, η, −α], [η, 2α, −α]]
        for (len, residual_power) in [(3usize, -2i64), (5, -4)] {
            let a = BanMatrix::from_rows(vec![
                vec![bl("a", len), bl("-1a", len), bl("2n", len)],
                vec![bl("2a", len), bl("n", len), bl("-1a", len)],
                vec![bl("n", len), bl("2a", len), bl("-1a", len)],
            ]);
            let inv = a.inverse().unwrap();
            assert!((inv[(0, 0)].coeff_at_power(1) - 0.25).abs() < 1e-9);
            assert!((inv[(0, 0)].coeff_at_power(-1) + 0.125).abs() < 1e-9);
            assert!((inv[(0, 1)].coeff_at_power(1) + 0.125).abs() < 1e-2);
            assert!((inv[(0, 1)].coeff_at_power(-1) - 0.5).abs() < 1e-9);
            if len == 5 {
                assert!((inv[(0, 0)].coeff_at_power(-3) - 0.0625).abs() < 1e-9);
            }
            let product = a.mat_mul(&inv);
            let mut worst: Option<Ban> = None;
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { bl("1", len) } else { Ban::zero(len) };
                    let diff = (&product[(i, j)] - &want).abs();
                    worst = Some(match worst {
                        Some(w) if w >= diff => w,
                        _ => diff,
                    });
                }
            }
            let worst = worst.unwrap();
            assert_eq!(
                worst.magnitude().unwrap().power(),
                residual_power,
                "len={len}: worst residual {worst}"
            );
        }
    }

    #[test]
    fn norms_match_examples() {
        assert_eq!(BanVector::from_reals(&[3.0, 4.0], L).euclidean_norm(), b("5"));
        let v = BanVector::new(vec![Ban::<f64>::alpha(L), Ban::zero(L)]);
        assert_eq!(v.euclidean_norm(), Ban::alpha(L));

        // ‖[1, η]‖ = √(1 + η²) = 1 + η²/2 − η⁴/8
        let v = BanVector::new(vec![b("1"), Ban::eta(L)]);
        let n = v.euclidean_norm();
        assert_eq!(n.power(), 0);
        assert!((n.coeff_at_power(0) - 1.0).abs() < 1e-15);
        assert!((n.coeff_at_power(-2) - 0.5).abs() < 1e-15);
        assert!((n.coeff_at_power(-4) + 0.125).abs() < 1e-15);

        assert!(BanVector::<f64>::zeros(3, L).euclidean_norm().is_zero());
    }

    #[test]
    fn vector_and_matrix_orders() {
        let m = BanMatrix::from_rows(vec![
            vec![b("a"), b("-1a"), b("2n")],
            vec![b("2a"), b("n"), b("-1a")],
            vec![b("n"), b("2a"), b("-1a")],
        ]);
        assert_eq!(m.smallest_order().unwrap(), Ban::eta(L));

        let v = BanVector::new(vec![b("2a"), b("3"), Ban::zero(L)]);
        assert_eq!(v.magnitude().unwrap(), Ban::alpha(L));
        assert_eq!(v.smallest_order().unwrap(), b("1"));
    }

    #[test]
    fn finite_lu_agrees_with_float_oracle() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let mut rows = Vec::new();
            for i in 0..n {
                let mut row: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                row[i] += 4.0; // keep it comfortably nonsingular
                rows.push(row);
            }
            let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();

            let x = BanMatrix::from_reals(&rows, L)
                .lu_solve(&BanVector::from_reals(&d, L))
                .unwrap();
            let y = float_lu_solve(&rows, &d);
            for i in 0..n {
                let scale = y[i].abs().max(1.0);
                assert!((x[i].leading_coeff() - y[i]).abs() <= 1e-8 * scale);
            }
        }
    }

    // small independent f64 elimination used only as a test oracle
    fn float_lu_solve(a: &[Vec<f64>], d: &[f64]) -> Vec<f64> {
        let n = d.len();
        let mut m: Vec<Vec<f64>> = a.to_vec();
        let mut b = d.to_vec();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
            m.swap(k, p);
            b.swap(k, p);
            for i in (k + 1)..n {
                let f = m[i][k] / m[k][k];
                for j in k..n {
                    m[i][j] -= f * m[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in (i + 1)..n {
                acc -= m[i][j] * x[j];
            }
            x[i] = acc / m[i][i];
        }
        x
    }

    #[test]
    fn lu_residual_magnitude_bound() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        let mut tested = 0;
        while tested < 30 {
            let n = rng.gen_range(2..=4);
            let mut rows = Vec::new();
            for _ in 0..n {
                let row: Vec<Ban> = (0..n)
                    .map(|_| {
                        let c: f64 = rng.gen_range(0.5..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        Ban::monosemium(c, rng.gen_range(-1..=1), L)
                    })
                    .collect();
                rows.push(row);
            }
            let m = BanMatrix::from_rows(rows);
            let d = BanVector::new(
                (0..n)
                    .map(|_| Ban::monosemium(rng.gen_range(-2.0..2.0f64), rng.gen_range(-1..=1), L))
                    .collect(),
            );
            let Ok(x) = m.lu_solve(&d) else { continue };
            tested += 1;
            let r = m.mat_vec(&x).sub(&d).euclidean_norm();
            if r.is_zero() {
                continue;
            }
            let m_mag = BanVector::new(m.clone().data).magnitude().unwrap();
            let d_mag = match d.magnitude() {
                Ok(m) => m,
                Err(_) => Ban::real(1.0, L),
            };
            let bound = m_mag * d_mag * Ban::monosemium(1.0, -(L as i64) + 1, L);
            // everything above the truncation bound must be IEEE rounding
            // noise, tiny relative to the data scale
            let bound_power = bound.power();
            for p in (bound_power + 1)..=r.power() {
                assert!(
                    r.coeff_at_power(p).abs() <= 1e-10,
                    "residual {r} has real content above the magnitude bound {bound}"
                );
            }
        }
    }

    #[test]
    fn mat_mul_associativity() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let (p, q, r, s) = (2, 3, 2, 2);
            let mut make = |rows: usize, cols: usize| {
                BanMatrix::from_rows(
                    (0..rows)
                        .map(|_| {
                            (0..cols)
                                .map(|_| {
                                    Ban::<f64>::new(
                                        rng.gen_range(-1..=1),
                                        vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0, 0.0, 0.0],
                                    )
                                })
                                .collect()
                        })
                        .collect(),
                )
            };
            let a = make(p, q);
            let b = make(q, r);
            let c = make(r, s);
            let lhs = a.mat_mul(&b).mat_mul(&c);
            let rhs = a.mat_mul(&b.mat_mul(&c));
            for i in 0..p {
                for j in 0..s {
                    let d = (&lhs[(i, j)] - &rhs[(i, j)]).abs();
                    if !d.is_zero() {
                        let scale = lhs[(i, j)].abs().leading_coeff().max(1.0f64);
                        assert!(
                            d.leading_coeff() <= 1e-10 * scale
                                || d.power() < lhs[(i, j)].power() - 3,
                            "associativity violated: {} vs {}",
                            lhs[(i, j)],
                            rhs[(i, j)]
                        );
                    }
                }
            }
        }
    }
}
