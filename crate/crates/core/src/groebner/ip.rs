//! Integer programs `min c.x, A x = b, x >= 0` solved by reduction with a
//! Gröbner basis of the kernel lattice of `A`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::binomial::Binomial;
use super::buchberger::GroebnerBasis;
use super::order::TermOrder;
use crate::error::{Error, Result};
use crate::exact::{det, row_basis, IntegerMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPInstance {
    matrix: IntegerMatrix,
    rhs: Vec<BigInt>,
    cost: Vec<i64>,
    start: Vec<i64>,
}

impl IPInstance {
    /// Right-hand side taken from the start point.
    pub fn new(matrix: IntegerMatrix, cost: Vec<i64>, start: Vec<i64>) -> Result<Self> {
        let rhs = matrix.mul_vec_i64(&start)?;
        Self::with_rhs(matrix, rhs, cost, start)
    }

    pub fn with_rhs(
        matrix: IntegerMatrix,
        rhs: Vec<BigInt>,
        cost: Vec<i64>,
        start: Vec<i64>,
    ) -> Result<Self> {
        let n = matrix.cols();
        for len in [cost.len(), start.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        if rhs.len() != matrix.rows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: rhs.len(),
            });
        }
        if let Some(j) = start.iter().position(|&x| x < 0) {
            return Err(Error::InfeasibleStart(format!(
                "coordinate {j} is negative"
            )));
        }
        if matrix.mul_vec_i64(&start)? != rhs {
            return Err(Error::InfeasibleStart("A * start differs from b".into()));
        }
        Ok(Self {
            matrix,
            rhs,
            cost,
            start,
        })
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[BigInt] {
        &self.rhs
    }

    pub fn cost(&self) -> &[i64] {
        &self.cost
    }

    pub fn start(&self) -> &[i64] {
        &self.start
    }

    pub fn cost_of(&self, x: &[i64]) -> i128 {
        x.iter()
            .zip(&self.cost)
            .map(|(&a, &c)| a as i128 * c as i128)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpSolution {
    pub point: Vec<i64>,
    pub cost: i128,
    /// cost after each rewrite, starting with the cost of the start point
    pub path_costs: Vec<i128>,
}

impl IpSolution {
    pub fn steps(&self) -> usize {
        self.path_costs.len() - 1
    }
}

/// Whether `weight = lambda * cost` for some `lambda > 0`.
fn refines_cost(order: &TermOrder, cost: &[i64]) -> bool {
    let w = order.weight();
    if w.len() != cost.len() || cost.iter().all(|&c| c == 0) {
        return false;
    }
    let j = cost.iter().position(|&c| c != 0).expect("nonzero");
    let (wj, cj) = (w[j] as i128, cost[j] as i128);
    if wj == 0 || (wj > 0) != (cj > 0) {
        return false;
    }
    w.iter()
        .zip(cost)
        .all(|(&wi, &ci)| wi as i128 * cj == ci as i128 * wj)
}

/// Rewrites the start point with `x^{v+} -> x^{v-}` until no leading term
/// divides it. The terminal point is the unique minimum of the fiber in the
/// basis order, hence a `c`-optimum when the order refines `c`.
pub fn ip_solve(inst: &IPInstance, gb: &GroebnerBasis) -> Result<IpSolution> {
    let n = inst.matrix.cols();
    if gb.order().n_vars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: gb.order().n_vars(),
        });
    }
    if !refines_cost(gb.order(), &inst.cost) {
        return Err(Error::OrderMismatch);
    }
    for g in gb.elements() {
        if !inst
            .matrix
            .mul_vec_i64(g.vector())?
            .iter()
            .all(Zero::is_zero)
        {
            return Err(Error::InvalidArgument(
                "basis element outside the kernel lattice of the instance".into(),
            ));
        }
    }
    let mut x = inst.start.clone();
    let mut path_costs = vec![inst.cost_of(&x)];
    'outer: loop {
        for g in gb.elements() {
            if g.lead_divides(&x) {
                let next: Vec<i64> = x.iter().zip(g.vector()).map(|(&a, &v)| a - v).collect();
                if gb.order().cmp(&next, &x) != Ordering::Less {
                    return Err(Error::Invariant(
                        "rewrite did not decrease the term order".into(),
                    ));
                }
                x = next;
                path_costs.push(inst.cost_of(&x));
                continue 'outer;
            }
        }
        break;
    }
    Ok(IpSolution {
        cost: inst.cost_of(&x),
        point: x,
        path_costs,
    })
}

/// Exhaustive fiber search without any Gröbner basis: over cost levels
/// `L = 0, 1, ...` enumerate the non-basic coordinates with cost at most
/// `L` and solve for the basic ones. Requires strictly positive costs so
/// each level is finite; returns the order-minimal point of least cost.
pub fn ip_brute_force(inst: &IPInstance, order: &TermOrder) -> Result<Vec<i64>> {
    if inst.cost.iter().any(|&c| c <= 0) {
        return Err(Error::InvalidArgument(
            "brute force needs positive costs".into(),
        ));
    }
    let a = &inst.matrix;
    let rows = row_basis(a);
    let reduced = a.select_rows(&rows);
    let rhs: Vec<BigInt> = rows.iter().map(|&i| inst.rhs[i].clone()).collect();
    let basic = row_basis(&reduced.transpose());
    let free: Vec<usize> = (0..a.cols()).filter(|j| !basic.contains(j)).collect();
    let sq = reduced.select_columns(&basic);
    let d = det(&sq)?;
    let adj = adjugate(&sq, &d)?;
    let free_cols: Vec<Vec<i128>> = free
        .iter()
        .map(|&j| to_i128(&reduced.column(j)))
        .collect::<Result<_>>()?;
    let rhs = to_i128(&rhs)?;
    let d = d.to_i128().ok_or(Error::Overflow("determinant"))?;
    let search = FiberSearch {
        cost: &inst.cost,
        basic: &basic,
        free: &free,
        free_cols: &free_cols,
        adj: &adj,
        det: d,
        rhs: &rhs,
        n: a.cols(),
    };
    let upper = inst.cost_of(&inst.start);
    for level in 0..=upper {
        let mut found: Vec<Vec<i64>> = Vec::new();
        let mut assign = vec![0i64; free.len()];
        search.descend(0, level, &mut assign, &mut found)?;
        found.retain(|x| inst.cost_of(x) == level);
        if let Some(best) = found.into_iter().min_by(|x, y| order.cmp(x, y)) {
            return Ok(best);
        }
    }
    Err(Error::Invariant(
        "start point not reached by the fiber search".into(),
    ))
}

struct FiberSearch<'a> {
    cost: &'a [i64],
    basic: &'a [usize],
    free: &'a [usize],
    free_cols: &'a [Vec<i128>],
    adj: &'a [Vec<i128>],
    det: i128,
    rhs: &'a [i128],
    n: usize,
}

impl FiberSearch<'_> {
    fn descend(
        &self,
        k: usize,
        budget: i128,
        assign: &mut [i64],
        found: &mut Vec<Vec<i64>>,
    ) -> Result<()> {
        if k == self.free.len() {
            if let Some(x) = self.complete(assign)? {
                found.push(x);
            }
            return Ok(());
        }
        let c = self.cost[self.free[k]] as i128;
        let mut v = 0i64;
        while (v as i128) * c <= budget {
            assign[k] = v;
            self.descend(k + 1, budget - (v as i128) * c, assign, found)?;
            v += 1;
        }
        assign[k] = 0;
        Ok(())
    }

    fn complete(&self, assign: &[i64]) -> Result<Option<Vec<i64>>> {
        let mut r: Vec<i128> = self.rhs.to_vec();
        for (col, &v) in self.free_cols.iter().zip(assign) {
            if v != 0 {
                for (ri, &ci) in r.iter_mut().zip(col) {
                    *ri -= ci * v as i128;
                }
            }
        }
        let mut x = vec![0i64; self.n];
        for (&j, &v) in self.free.iter().zip(assign) {
            x[j] = v;
        }
        for (i, &j) in self.basic.iter().enumerate() {
            let num: i128 = self.adj[i].iter().zip(&r).map(|(a, b)| a * b).sum();
            if num % self.det != 0 {
                return Ok(None);
            }
            let val = num / self.det;
            if val < 0 {
                return Ok(None);
            }
            x[j] = val.to_i64().ok_or(Error::Overflow("fiber point"))?;
        }
        Ok(Some(x))
    }
}

fn to_i128(v: &[BigInt]) -> Result<Vec<i128>> {
    v.iter()
        .map(|x| x.to_i128().ok_or(Error::Overflow("fiber search")))
        .collect()
}

/// `adj(M) = det(M) * M^{-1}`, via rational solves.
fn adjugate(m: &IntegerMatrix, d: &BigInt) -> Result<Vec<Vec<i128>>> {
    let n = m.rows();
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let mut adj = vec![vec![0i128; n]; n];
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::from(1);
        let col = crate::exact::solve_rational(m, &e)?;
        for i in 0..n {
            let q = &col.coords()[i] * num_rational::BigRational::from_integer(d.clone());
            if !q.is_integer() {
                return Err(Error::Invariant("adjugate entry not integral".into()));
            }
            adj[i][j] = q
                .to_integer()
                .to_i128()
                .ok_or(Error::Overflow("adjugate"))?;
        }
    }
    Ok(adj)
}

/// Applies one binomial move `x -> x - v` if it keeps `x >= 0`.
pub fn apply_move(x: &[i64], b: &Binomial) -> Option<Vec<i64>> {
    b.lead_divides(x)
        .then(|| x.iter().zip(b.vector()).map(|(&a, &v)| a - v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::buchberger::buchberger;

    fn line_instance(start: Vec<i64>, cost: Vec<i64>) -> IPInstance {
        // x0 + x1 + x2 fixed: all moves e_i - e_j
        IPInstance::new(IntegerMatrix::from_rows(&[[1, 1, 1]]), cost, start).unwrap()
    }

    #[test]
    fn zero_instance() {
        let o = TermOrder::deglex(3);
        let gb = buchberger(&[Binomial::oriented(vec![1, -1, 0], &o).unwrap()], &o).unwrap();
        let inst = IPInstance::new(
            IntegerMatrix::from_rows(&[[1, 1, 0]]),
            vec![1, 1, 1],
            vec![0, 0, 0],
        )
        .unwrap();
        let s = ip_solve(&inst, &gb).unwrap();
        assert_eq!(s.point, vec![0, 0, 0]);
        assert_eq!(s.steps(), 0);
    }

    #[test]
    fn weighted_instance_matches_brute_force() {
        let o = TermOrder::weighted(vec![3, 2, 1], None).unwrap();
        let gens: Vec<Binomial> = [[1, -1, 0], [0, 1, -1]]
            .iter()
            .map(|v| Binomial::oriented(v.to_vec(), &o).unwrap())
            .collect();
        let gb = buchberger(&gens, &o).unwrap();
        let inst = line_instance(vec![2, 1, 0], vec![3, 2, 1]);
        let s = ip_solve(&inst, &gb).unwrap();
        assert_eq!(s.point, vec![0, 0, 3]);
        assert_eq!(s.point, ip_brute_force(&inst, &o).unwrap());
        assert!(s.path_costs.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn order_must_refine_cost() {
        let o = TermOrder::deglex(3);
        let gb = buchberger(&[Binomial::oriented(vec![1, -1, 0], &o).unwrap()], &o).unwrap();
        let inst = line_instance(vec![1, 0, 0], vec![3, 2, 1]);
        assert_eq!(ip_solve(&inst, &gb), Err(Error::OrderMismatch));
        let inst2 = line_instance(vec![1, 0, 0], vec![2, 2, 2]);
        assert!(ip_solve(&inst2, &gb).is_ok());
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let m = IntegerMatrix::from_rows(&[[1, 1]]);
        assert!(matches!(
            IPInstance::new(m.clone(), vec![1, 1], vec![-1, 2]),
            Err(Error::InfeasibleStart(_))
        ));
        assert!(matches!(
            IPInstance::with_rhs(m, vec![BigInt::from(3)], vec![1, 1], vec![1, 1]),
            Err(Error::InfeasibleStart(_))
        ));
    }
}
