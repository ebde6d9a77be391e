use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::order::TermOrder;
use crate::error::{Error, Result};
use crate::exact::{lp_feasible, IntegerMatrix, LinearConstraint, LpOutcome};

/// `x^{v+} - x^{v-}` stored as `v`, oriented so `x^{v+}` is the leading
/// term. The two terms never share a variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Binomial {
    vector: Vec<i64>,
}

impl Binomial {
    pub fn oriented(mut vector: Vec<i64>, order: &TermOrder) -> Result<Self> {
        if vector.len() != order.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: order.n_vars(),
                found: vector.len(),
            });
        }
        if vector.iter().all(|&x| x == 0) {
            return Err(Error::InvalidArgument("zero binomial".into()));
        }
        let (p, m) = split(&vector);
        if order.cmp(&p, &m) == Ordering::Less {
            for x in vector.iter_mut() {
                *x = x
                    .checked_neg()
                    .ok_or(Error::Overflow("binomial exponent"))?;
            }
        }
        Ok(Self { vector })
    }

    /// Orients `x^a - x^b` after cancelling common factors; `None` if the
    /// monomials agree.
    pub fn from_terms(a: &[i64], b: &[i64], order: &TermOrder) -> Result<Option<Self>> {
        let v = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| x.checked_sub(y).ok_or(Error::Overflow("binomial exponent")))
            .collect::<Result<Vec<i64>>>()?;
        if v.iter().all(|&x| x == 0) {
            return Ok(None);
        }
        Self::oriented(v, order).map(Some)
    }

    pub fn vector(&self) -> &[i64] {
        &self.vector
    }

    pub fn n_vars(&self) -> usize {
        self.vector.len()
    }

    pub fn lead(&self) -> Vec<i64> {
        self.vector.iter().map(|&x| x.max(0)).collect()
    }

    pub fn trail(&self) -> Vec<i64> {
        self.vector.iter().map(|&x| (-x).max(0)).collect()
    }

    pub fn is_square_free_lead(&self) -> bool {
        self.vector.iter().all(|&x| x <= 1)
    }

    pub fn lead_support(&self) -> Vec<usize> {
        (0..self.vector.len())
            .filter(|&i| self.vector[i] > 0)
            .collect()
    }

    /// Whether `x^{lead}` divides `x^u`.
    pub(crate) fn lead_divides(&self, u: &[i64]) -> bool {
        self.vector.iter().zip(u).all(|(&v, &x)| v <= x)
    }
}

fn split(v: &[i64]) -> (Vec<i64>, Vec<i64>) {
    (
        v.iter().map(|&x| x.max(0)).collect(),
        v.iter().map(|&x| (-x).max(0)).collect(),
    )
}

fn rows_as_i64(l: &IntegerMatrix) -> Result<Vec<Vec<i64>>> {
    l.to_i64_rows()
        .ok_or(Error::Overflow("lattice basis entries"))
}

/// `x^{r+} - x^{r-}` for every row `r`, without any check that they
/// generate the lattice ideal.
pub fn binomials_from_rows(l: &IntegerMatrix, order: &TermOrder) -> Result<Vec<Binomial>> {
    rows_as_i64(l)?
        .into_iter()
        .map(|r| Binomial::oriented(r, order))
        .collect()
}

/// Integer coefficients `y` with `y L` strictly positive, if any exist.
pub fn positive_row_combination(l: &IntegerMatrix) -> Result<Option<Vec<BigInt>>> {
    if l.rows() == 0 {
        return Ok(if l.cols() == 0 {
            Some(Vec::new())
        } else {
            None
        });
    }
    let lt = l.transpose();
    // a zero column can never be made positive
    if (0..lt.rows()).any(|j| lt.row(j).iter().all(Zero::is_zero)) {
        return Ok(None);
    }
    let cs = (0..lt.rows())
        .map(|j| LinearConstraint::ge(lt.row(j).to_vec(), 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(match lp_feasible(&cs)? {
        LpOutcome::Infeasible => None,
        LpOutcome::Feasible(y) => {
            let den = y.common_denominator();
            Some(
                y.coords()
                    .iter()
                    .map(|q| q.numer() * (&den / q.denom()))
                    .collect(),
            )
        }
    })
}

/// A positive vector of the row lattice of `L`, as machine integers.
pub(crate) fn positive_lattice_vector(l: &IntegerMatrix) -> Result<Option<Vec<i64>>> {
    let Some(y) = positive_row_combination(l)? else {
        return Ok(None);
    };
    let mut w = vec![BigInt::zero(); l.cols()];
    for (i, yi) in y.iter().enumerate() {
        for (j, wj) in w.iter_mut().enumerate() {
            *wj += yi * l.get(i, j);
        }
    }
    w.iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow("positive lattice vector")))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// One binomial per row, refusing when the row space of `L` contains no
/// strictly positive vector. A positive vector alone does not guarantee
/// that the binomials generate the lattice ideal (the basis `(1,-1,2)`,
/// `(0,2,-3)` of the kernel of `(-1 3 2)` does not); `lattice_ideal_gb`
/// checks that separately.
pub fn generators_from_lattice_basis(
    l: &IntegerMatrix,
    order: &TermOrder,
) -> Result<Vec<Binomial>> {
    if positive_row_combination(l)?.is_none() {
        return Err(Error::NoPositiveVector);
    }
    binomials_from_rows(l, order)
}

/// Reduces `x^u` by rewriting `x^{lead} -> x^{trail}` until no leading
/// term divides it.
pub fn normal_form_monomial(u: &[i64], basis: &[Binomial]) -> Result<Vec<i64>> {
    let mut cur = u.to_vec();
    'outer: loop {
        for g in basis {
            if g.lead_divides(&cur) {
                for (x, &v) in cur.iter_mut().zip(&g.vector) {
                    *x = x.checked_sub(v).ok_or(Error::Overflow("normal form"))?;
                }
                continue 'outer;
            }
        }
        return Ok(cur);
    }
}

/// Normal form of a binomial: the terms reduced separately; `None` when
/// it reduces to zero.
pub fn normal_form(
    b: &Binomial,
    basis: &[Binomial],
    order: &TermOrder,
) -> Result<Option<Binomial>> {
    let a = normal_form_monomial(&b.lead(), basis)?;
    let c = normal_form_monomial(&b.trail(), basis)?;
    Binomial::from_terms(&a, &c, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_follows_order() {
        let o = TermOrder::deglex(3);
        let b = Binomial::oriented(vec![-1, -1, 1], &o).unwrap();
        assert_eq!(b.vector(), &[1, 1, -1]);
        assert_eq!(b.lead(), vec![1, 1, 0]);
        assert_eq!(b.trail(), vec![0, 0, 1]);
        assert!(Binomial::oriented(vec![0, 0, 0], &o).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let o = TermOrder::deglex(2);
        let xy = Binomial::oriented(vec![1, -1], &o).unwrap();
        assert_eq!(
            normal_form(&xy, std::slice::from_ref(&xy), &o).unwrap(),
            None
        );
        assert_eq!(normal_form_monomial(&[1, 0], &[xy]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn lattice_basis_guard() {
        let o = TermOrder::deglex(3);
        let l = IntegerMatrix::from_rows(&[[1, 1, -1]]);
        assert_eq!(
            generators_from_lattice_basis(&l, &o),
            Err(Error::NoPositiveVector)
        );
        let unguarded = binomials_from_rows(&l, &o).unwrap();
        assert_eq!(unguarded[0].vector(), &[1, 1, -1]);
        let o2 = TermOrder::deglex(2);
        let l2 = IntegerMatrix::from_rows(&[[1, -1]]);
        assert_eq!(
            generators_from_lattice_basis(&l2, &o2),
            Err(Error::NoPositiveVector)
        );
        let l3 = IntegerMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]]);
        assert_eq!(generators_from_lattice_basis(&l3, &o).unwrap().len(), 2);
    }

    #[test]
    fn positive_combination_is_integral() {
        let l = IntegerMatrix::from_rows(&[[2, 1, 0], [0, 1, 3]]);
        let w = positive_lattice_vector(&l).unwrap().unwrap();
        assert!(w.iter().all(|&x| x > 0));
    }
}
