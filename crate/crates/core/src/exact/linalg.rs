//! Exact rank, determinant and linear solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use super::rational::RationalVector;
use crate::error::{Error, Result};

/// Rank by fraction-free elimination.
pub fn rank(m: &IntegerMatrix) -> usize {
    let mut basis = EchelonBasis::new(m.cols());
    for i in 0..m.rows() {
        basis.insert(m.row(i).to_vec());
    }
    basis.rank()
}

/// Indices of the first maximal linearly independent set of rows, scanning
/// top to bottom.
pub fn row_basis(m: &IntegerMatrix) -> Vec<usize> {
    let mut basis = EchelonBasis::new(m.cols());
    (0..m.rows())
        .filter(|&i| basis.insert(m.row(i).to_vec()))
        .collect()
}

/// Determinant of a square matrix. A checked `i128` Bareiss pass is tried
/// first; any overflow falls back to the `BigInt` pass.
pub fn det(m: &IntegerMatrix) -> Result<BigInt> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    if let Some(rows) = to_i128_rows(m) {
        if let Some(d) = bareiss_det_i128(rows) {
            return Ok(BigInt::from(d));
        }
    }
    Ok(bareiss_det_big(m))
}

fn to_i128_rows(m: &IntegerMatrix) -> Option<Vec<Vec<i128>>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToPrimitive::to_i128).collect())
        .collect()
}

/// `None` on overflow.
pub(crate) fn bareiss_det_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(s) => a.swap(k, s),
                None => return Some(0),
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

fn bareiss_det_big(m: &IntegerMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.row_vecs();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(s) => {
                    a.swap(k, s);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solves `M x = b` for square nonsingular `M`.
pub fn solve_rational(m: &IntegerMatrix, b: &[BigInt]) -> Result<RationalVector> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.cols(),
        });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            m.row(i)
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .chain(std::iter::once(BigRational::from_integer(b[i].clone())))
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .ok_or(Error::Singular)?;
        a.swap(k, p);
        let inv = a[k][k].recip();
        for j in k..=n {
            a[k][j] = &a[k][j] * &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Ok(RationalVector::new(
        a.into_iter().map(|r| r[n].clone()).collect(),
    ))
}

/// Inverse of a square matrix whose determinant is `±1`, as an integer
/// matrix. Returns `None` when the determinant is not a unit.
pub fn unimodular_inverse(m: &IntegerMatrix) -> Result<Option<IntegerMatrix>> {
    let n = m.rows();
    let d = det(m)?;
    if d.abs() != BigInt::one() {
        return Ok(None);
    }
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::one();
        let x = solve_rational(m, &e)?;
        let ints: Option<Vec<BigInt>> = x
            .coords()
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect();
        cols.push(
            ints.ok_or_else(|| Error::Invariant("unit determinant but fractional inverse".into()))?,
        );
    }
    let mut inv = IntegerMatrix::zeros(n, n);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    Ok(Some(inv))
}

/// Incrementally maintained row echelon basis over the integers. Each stored
/// row is primitive and the stored pivots are distinct.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    // (pivot column, row), sorted by pivot
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let a = row[*p].clone();
            let b = v[*p].clone();
            let g = a.gcd(&b);
            let (fa, fb) = (&a / &g, &b / &g);
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x * &fa - r * &fb;
            }
            make_primitive(&mut v);
        }
        v
    }

    /// True if `v` lies in the rational span of the stored rows.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Inserts `v`; returns whether the rank increased.
    pub fn insert(&mut self, v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let at = self.rows.partition_point(|(q, _)| *q < p);
                self.rows.insert(at, (p, r));
                true
            }
        }
    }
}

pub(crate) fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Returns the rational solution of a consistent (possibly overdetermined)
/// system whose matrix has full column rank, or `None` when inconsistent.
pub fn solve_full_column_rank(m: &IntegerMatrix, b: &[BigInt]) -> Result<Option<RationalVector>> {
    let rows = row_basis(m);
    if rows.len() != m.cols() {
        return Err(Error::Singular);
    }
    let sq = m.select_rows(&rows);
    let rhs: Vec<BigInt> = rows.iter().map(|&i| b[i].clone()).collect();
    let x = solve_rational(&sq, &rhs)?;
    // remaining equations must hold
    for i in 0..m.rows() {
        let lhs = x.dot_int(m.row(i))?;
        if lhs != BigRational::from_integer(b[i].clone()) {
            return Ok(None);
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_det_and_rank() {
        assert_eq!(det(&IntegerMatrix::identity(5)).unwrap(), BigInt::one());
        assert_eq!(rank(&IntegerMatrix::identity(5)), 5);
        assert_eq!(det(&IntegerMatrix::zeros(0, 0)).unwrap(), BigInt::one());
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = IntegerMatrix::from_rows(&[[2, -1, 0], [1, 3, 4], [0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) = 2*(-26) + (-2) = -54
        assert_eq!(det(&m).unwrap(), BigInt::from(-54));
        let singular = IntegerMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(det(&singular).unwrap(), BigInt::zero());
    }

    #[test]
    fn det_overflow_falls_back_to_bigint() {
        let big = 1i64 << 62;
        let m = IntegerMatrix::from_rows(&[[big, 1, 0], [1, big, 1], [0, 1, big]]);
        let b = BigInt::from(big);
        let expected = &b * (&b * &b - 1) - &b;
        assert_eq!(det(&m).unwrap(), expected);
    }

    #[test]
    fn scalar_solve() {
        let x = solve_rational(&IntegerMatrix::from_rows(&[[2]]), &[BigInt::from(1)]).unwrap();
        assert_eq!(x, RationalVector::from_fractions(&[(1, 2)]));
        assert_eq!(
            solve_rational(&IntegerMatrix::from_rows(&[[0]]), &[BigInt::from(1)]),
            Err(Error::Singular)
        );
    }

    #[test]
    fn solve_checks_every_equation() {
        let m = IntegerMatrix::from_rows(&[[1, 0], [0, 1], [1, 1]]);
        let ok = [1, 2, 3].map(BigInt::from);
        let bad = [1, 2, 4].map(BigInt::from);
        assert_eq!(
            solve_full_column_rank(&m, &ok).unwrap(),
            Some(RationalVector::from_ints(&[1, 2]))
        );
        assert_eq!(solve_full_column_rank(&m, &bad).unwrap(), None);
    }

    #[test]
    fn row_basis_skips_dependent_rows() {
        let m = IntegerMatrix::from_rows(&[[1, 1, 0], [2, 2, 0], [0, 1, 1], [1, 2, 1]]);
        assert_eq!(row_basis(&m), vec![0, 2]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = IntegerMatrix::from_rows(&[[2, 1], [1, 1]]);
        let inv = unimodular_inverse(&m).unwrap().unwrap();
        assert_eq!(inv, IntegerMatrix::from_rows(&[[1, -1], [-1, 2]]));
        assert!(
            unimodular_inverse(&IntegerMatrix::from_rows(&[[2, 0], [0, 1]]))
                .unwrap()
                .is_none()
        );
    }
}
