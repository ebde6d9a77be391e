//! Exact LP feasibility.
//!
//! A system `{a_i . x >= b_i, e_j . x = f_j}` over free `x in Q^d` is decided
//! through the auxiliary problem `min t  s.t.  a_i . x + t >= b_i,
//! e_j . x = f_j, t >= 0`, whose optimum is zero exactly when the system is
//! feasible. That problem is not solved directly: its LP dual
//!
//! ```text
//! max  b.y + f.z   s.t.  A^T y + E^T z = 0,  1.y + s = 1,  y, s >= 0
//! ```
//!
//! has only `d + 1` rows however many constraints there are, and the optimal
//! simplex multipliers of the dual are an optimal `(x, t)`. An unbounded dual
//! certifies an inconsistent equality block. Both phases pivot by Bland's
//! rule, so the method terminates on degenerate systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::RationalVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `normal . x >= offset`
    Ge,
    /// `normal . x = offset`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearConstraint {
    normal: Vec<BigInt>,
    relation: Relation,
    offset: BigInt,
}

impl LinearConstraint {
    pub fn new(normal: Vec<BigInt>, relation: Relation, offset: BigInt) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::ZeroNormal);
        }
        Ok(Self {
            normal,
            relation,
            offset,
        })
    }

    pub fn ge(normal: Vec<BigInt>, offset: i64) -> Result<Self> {
        Self::new(normal, Relation::Ge, offset.into())
    }

    pub fn eq(normal: Vec<BigInt>, offset: i64) -> Result<Self> {
        Self::new(normal, Relation::Eq, offset.into())
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn is_satisfied_by(&self, x: &RationalVector) -> Result<bool> {
        let lhs = x.dot_int(&self.normal)?;
        let rhs = BigRational::from_integer(self.offset.clone());
        Ok(match self.relation {
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(RationalVector),
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }

    pub fn witness(&self) -> Option<&RationalVector> {
        match self {
            LpOutcome::Feasible(w) => Some(w),
            LpOutcome::Infeasible => None,
        }
    }
}

/// Decides feasibility of the constraint system exactly. A returned witness
/// has already been checked against every constraint by substitution.
pub fn lp_feasible(constraints: &[LinearConstraint]) -> Result<LpOutcome> {
    let Some(first) = constraints.first() else {
        return Ok(LpOutcome::Feasible(RationalVector::zeros(0)));
    };
    let d = first.dim();
    if let Some(bad) = constraints.iter().find(|c| c.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }

    // Dual columns: one per >= row, two per = row (z split into z+ - z-),
    // and the slack s of 1.y <= 1.
    let rows = d + 1;
    let mut columns: Vec<Vec<BigRational>> = Vec::new();
    let mut cost: Vec<BigRational> = Vec::new();
    let rat = |x: &BigInt| BigRational::from_integer(x.clone());
    for c in constraints {
        match c.relation {
            Relation::Ge => {
                let mut col: Vec<BigRational> = c.normal.iter().map(rat).collect();
                col.push(BigRational::one());
                columns.push(col);
                cost.push(rat(&c.offset));
            }
            Relation::Eq => {
                let mut plus: Vec<BigRational> = c.normal.iter().map(rat).collect();
                plus.push(BigRational::zero());
                let minus: Vec<BigRational> = plus.iter().map(|x| -x).collect();
                columns.push(plus);
                cost.push(rat(&c.offset));
                columns.push(minus);
                cost.push(-rat(&c.offset));
            }
        }
    }
    let mut slack = vec![BigRational::zero(); rows];
    slack[d] = BigRational::one();
    columns.push(slack);
    cost.push(BigRational::zero());

    let mut rhs = vec![BigRational::zero(); rows];
    rhs[d] = BigRational::one();

    let solution = match maximize_standard_form(&columns, &rhs, &cost)? {
        StandardOutcome::Unbounded => return Ok(LpOutcome::Infeasible),
        StandardOutcome::Infeasible => {
            return Err(Error::Invariant("dual LP has y = 0 feasible".into()))
        }
        StandardOutcome::Optimal { value, duals } => (value, duals),
    };
    let (value, duals) = solution;
    if value.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    let witness = RationalVector::new(duals[..d].to_vec());
    for c in constraints {
        if !c.is_satisfied_by(&witness)? {
            return Err(Error::Invariant(format!(
                "LP witness {witness} violates a constraint"
            )));
        }
    }
    Ok(LpOutcome::Feasible(witness))
}

#[derive(Debug)]
pub(crate) enum StandardOutcome {
    Optimal {
        value: BigRational,
        /// simplex multipliers `c_B B^{-1}`, one per row
        duals: Vec<BigRational>,
    },
    Unbounded,
    Infeasible,
}

/// `max c.w  s.t.  M w = r, w >= 0` with `r >= 0`, by two-phase tableau
/// simplex under Bland's rule. `columns[j]` is column `j` of `M`.
pub(crate) fn maximize_standard_form(
    columns: &[Vec<BigRational>],
    rhs: &[BigRational],
    cost: &[BigRational],
) -> Result<StandardOutcome> {
    let m = rhs.len();
    let n = columns.len();
    debug_assert!(rhs.iter().all(|r| !r.is_negative()));
    // Tableau columns: structural 0..n, artificial n..n+m, then rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            row.extend(columns.iter().map(|c| c[i].clone()));
            row.extend((0..m).map(|k| {
                if k == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: maximize -sum(artificials).
    let mut phase1_cost = vec![BigRational::zero(); n + m];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = -BigRational::one();
    }
    run_simplex(&mut t, &mut basis, &phase1_cost, n + m)?;
    let infeasibility: BigRational = basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(i, _)| t[i][width - 1].clone())
        .sum();
    if infeasibility.is_positive() {
        return Ok(StandardOutcome::Infeasible);
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // where no structural entry is nonzero are redundant and keep theirs.
    for i in 0..m {
        if basis[i] < n {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
            pivot(&mut t, &mut basis, i, j);
        }
    }

    // Phase 2 on structural columns only.
    let mut phase2_cost = cost.to_vec();
    phase2_cost.extend((0..m).map(|_| BigRational::zero()));
    if !run_simplex(&mut t, &mut basis, &phase2_cost, n)? {
        return Ok(StandardOutcome::Unbounded);
    }
    let value: BigRational = basis
        .iter()
        .enumerate()
        .map(|(i, &b)| &phase2_cost[b] * &t[i][width - 1])
        .sum();
    // The artificial block started as the identity, so it now holds B^{-1}.
    let duals: Vec<BigRational> = (0..m)
        .map(|k| {
            basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| !phase2_cost[b].is_zero())
                .map(|(i, &b)| &phase2_cost[b] * &t[i][n + k])
                .sum()
        })
        .collect();
    Ok(StandardOutcome::Optimal { value, duals })
}

/// Returns `false` on unboundedness. Only columns `< enter_limit` may enter.
fn run_simplex(
    t: &mut [Vec<BigRational>],
    basis: &mut [usize],
    cost: &[BigRational],
    enter_limit: usize,
) -> Result<bool> {
    let m = t.len();
    let rhs_col = t.first().map_or(0, |r| r.len() - 1);
    loop {
        // reduced cost of column j: c_j - sum_i c_{B_i} t[i][j]
        let entering = (0..enter_limit).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut r = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !cost[b].is_zero() && !t[i][j].is_zero() {
                    r -= &cost[b] * &t[i][j];
                }
            }
            r.is_positive()
        });
        let Some(j) = entering else {
            return Ok(true);
        };
        // ratio test; ties broken by smallest basic variable index
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !t[i][j].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs_col] / &t[i][j];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((i, _)) = leave else {
            return Ok(false);
        };
        pivot(t, basis, i, j);
    }
}

fn pivot(t: &mut [Vec<BigRational>], basis: &mut [usize], row: usize, col: usize) {
    let inv = t[row][col].recip();
    for x in t[row].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    let pivot_row = t[row].clone();
    let nz: Vec<usize> = (0..pivot_row.len())
        .filter(|&k| !pivot_row[k].is_zero())
        .collect();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for &k in &nz {
            let d = &f * &pivot_row[k];
            r[k] -= d;
        }
    }
    basis[row] = col;
}
