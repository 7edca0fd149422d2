//! Dense symmetric matrix kernel: storage plus the three inversion routines
//! used by the pseudo-inverse (fraction-free Bareiss elimination for exact
//! arithmetic, LU with partial pivoting for float backends, and an LDLᵀ
//! solve for the positive-definite shift variant).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::scalar::Scalar;

/// Row-major square matrix over a scalar backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix rows must be square");
            data.extend(row);
        }
        Matrix { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        for i in 0..self.n {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Matrix::from_fn(self.n, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j).clone()
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Matrix::from_fn(self.n, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j).clone()
        })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let rows = par::map_indices(n, par::parallel_enabled(), |i| {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = S::zero();
                for k in 0..n {
                    acc = acc + self.get(i, k).clone() * rhs.get(k, j).clone();
                }
                row.push(acc);
            }
            row
        });
        Matrix::from_rows(rows)
    }

    /// Matrix-vector product, used for residual checks.
    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.n {
                    acc = acc + self.get(i, j).clone() * x[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|s| s.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }
}

/// Invert with the backend-appropriate algorithm: Bareiss when arithmetic
/// is exact, LU with partial pivoting otherwise.
pub fn invert<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    if S::EXACT {
        bareiss_inverse(m)
    } else {
        lu_inverse_with(m, par::parallel_enabled())
    }
}

/// Fraction-free Gauss-Jordan elimination (Bareiss). Denominators are
/// cleared once up front; every intermediate entry is an integer minor and
/// every division is exact, which keeps rational growth under control.
pub fn bareiss_inverse<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let n = m.n;
    if n == 0 {
        return Ok(Matrix::zeros(0));
    }
    let rats: Vec<BigRational> = m
        .data
        .iter()
        .map(|s| s.as_rational().expect("exact backend provides rationals"))
        .collect();
    let mut scale = BigInt::one();
    for r in &rats {
        scale = scale.lcm(r.denom());
    }

    // Augmented integer working matrix [scale*M | I].
    let w = 2 * n;
    let mut a = vec![BigInt::zero(); n * w];
    for i in 0..n {
        for j in 0..n {
            let r = &rats[i * n + j];
            a[i * w + j] = r.numer() * (&scale / r.denom());
        }
        a[i * w + n + i] = BigInt::one();
    }

    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k * w + k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i * w + k].is_zero());
            match swap {
                Some(i) => {
                    for j in 0..w {
                        a.swap(k * w + j, i * w + j);
                    }
                }
                None => return Err(Error::SingularMatrix),
            }
        }
        let pivot = a[k * w + k].clone();
        let pivot_row: Vec<BigInt> = a[k * w..k * w + w].to_vec();
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = a[i * w + k].clone();
            for j in 0..w {
                let t = &pivot * &a[i * w + j] - &factor * &pivot_row[j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[i * w + j] = q;
            }
        }
        prev = pivot;
    }

    // The left block is now prev * I; the right block is prev * (scale*M)^-1.
    for i in 0..n {
        for j in 0..n {
            let expected_diag = i == j;
            let entry = &a[i * w + j];
            if (expected_diag && *entry != prev) || (!expected_diag && !entry.is_zero()) {
                return Err(Error::SingularMatrix);
            }
        }
    }
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let value = BigRational::new(a[i * w + n + j].clone() * &scale, prev.clone());
            out.set(i, j, S::from_rational(&value, 0));
        }
    }
    Ok(out)
}

/// LU factorization with partial pivoting followed by one solve per unit
/// column. The trailing update is row-parallel and each column solve keeps
/// its accumulation order, so parallel and sequential runs agree bitwise.
pub fn lu_inverse_with<S: Scalar>(m: &Matrix<S>, parallel: bool) -> Result<Matrix<S>> {
    let n = m.n;
    if n == 0 {
        return Ok(Matrix::zeros(0));
    }
    let mut a = m.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if a[i * n + k].abs_cmp(&a[p * n + k]) == Ordering::Greater {
                p = i;
            }
        }
        if a[p * n + k].is_zero() {
            return Err(Error::SingularMatrix);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let pivot_row = &head[k * n..(k + 1) * n];
        let pivot = pivot_row[k].clone();
        par::for_each_row(tail, n, parallel, |row| {
            let f = row[k].clone() / pivot.clone();
            for j in k + 1..n {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
            row[k] = f;
        });
    }

    let cols = par::map_indices(n, parallel, |c| lu_solve_unit(&a, n, &perm, c));
    let mut out = Matrix::zeros(n);
    for (c, col) in cols.into_iter().enumerate() {
        for i in 0..n {
            out.set(i, c, col[i].clone());
        }
    }
    Ok(out)
}

fn lu_solve_unit<S: Scalar>(a: &[S], n: usize, perm: &[usize], c: usize) -> Vec<S> {
    let mut x = vec![S::zero(); n];
    for i in 0..n {
        let mut acc = if perm[i] == c { S::one() } else { S::zero() };
        for j in 0..i {
            acc = acc - a[i * n + j].clone() * x[j].clone();
        }
        x[i] = acc;
    }
    for i in (0..n).rev() {
        let mut acc = x[i].clone();
        for j in i + 1..n {
            acc = acc - a[i * n + j].clone() * x[j].clone();
        }
        x[i] = acc / a[i * n + i].clone();
    }
    x
}

/// Inverse of a symmetric positive-definite matrix via LDLᵀ (no square
/// roots, so it also runs under exact arithmetic).
pub fn ldlt_inverse<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let n = m.n;
    if n == 0 {
        return Ok(Matrix::zeros(0));
    }
    let mut l: Matrix<S> = Matrix::identity(n);
    let mut d = vec![S::zero(); n];
    for j in 0..n {
        let mut dj = m.get(j, j).clone();
        for k in 0..j {
            dj = dj - l.get(j, k).clone() * l.get(j, k).clone() * d[k].clone();
        }
        if dj.is_zero() {
            return Err(Error::SingularMatrix);
        }
        for i in j + 1..n {
            let mut acc = m.get(i, j).clone();
            for k in 0..j {
                acc = acc - l.get(i, k).clone() * l.get(j, k).clone() * d[k].clone();
            }
            l.set(i, j, acc / dj.clone());
        }
        d[j] = dj;
    }

    let cols = par::map_indices(n, par::parallel_enabled(), |c| {
        let mut x = vec![S::zero(); n];
        for i in 0..n {
            let mut acc = if i == c { S::one() } else { S::zero() };
            for j in 0..i {
                acc = acc - l.get(i, j).clone() * x[j].clone();
            }
            x[i] = acc;
        }
        for i in 0..n {
            x[i] = x[i].clone() / d[i].clone();
        }
        for i in (0..n).rev() {
            let mut acc = x[i].clone();
            for j in i + 1..n {
                acc = acc - l.get(j, i).clone() * x[j].clone();
            }
            x[i] = acc;
        }
        x
    });
    let mut out = Matrix::zeros(n);
    for (c, col) in cols.into_iter().enumerate() {
        for i in 0..n {
            out.set(i, c, col[i].clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;

    fn rational_matrix(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    #[test]
    fn bareiss_matches_known_inverse() {
        let m = rational_matrix(&[&[2, 1], &[1, 1]]);
        let inv = bareiss_inverse(&m).unwrap();
        assert_eq!(inv, rational_matrix(&[&[1, -1], &[-1, 2]]));

        let m = rational_matrix(&[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]]);
        let inv = bareiss_inverse(&m).unwrap();
        assert_eq!(
            inv,
            rational_matrix(&[&[-24, 18, 5], &[20, -15, -4], &[-5, 4, 1]])
        );
    }

    #[test]
    fn bareiss_handles_rational_entries_and_pivoting() {
        let m = Matrix::from_rows(vec![
            vec![rat("0"), rat("1/2")],
            vec![rat("1/3"), rat("1/5")],
        ]);
        let inv = bareiss_inverse(&m).unwrap();
        let prod = m.mul(&inv);
        assert_eq!(prod, Matrix::identity(2));
    }

    #[test]
    fn bareiss_rejects_singular() {
        let m = rational_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(bareiss_inverse(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn lu_inverse_matches_exact() {
        let m = rational_matrix(&[&[4, 1, 0], &[1, 3, 1], &[0, 1, 5]]);
        let exact = bareiss_inverse(&m).unwrap();
        let f = Matrix::from_fn(3, |i, j| m.get(i, j).to_f64());
        let inv = lu_inverse_with(&f, false).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((inv.get(i, j) - exact.get(i, j).to_f64()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lu_parallel_is_bit_identical() {
        let m = Matrix::from_fn(17, |i, j| {
            if i == j {
                (i + 3) as f64
            } else {
                1.0 / (1.0 + (i + 2 * j) as f64)
            }
        });
        let seq = lu_inverse_with(&m, false).unwrap();
        let par = lu_inverse_with(&m, true).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn ldlt_matches_lu_on_spd() {
        let m = rational_matrix(&[&[4, 1, 2], &[1, 3, 0], &[2, 0, 5]]);
        let a = bareiss_inverse(&m).unwrap();
        let b = ldlt_inverse(&m).unwrap();
        assert_eq!(a, b);
    }
}
