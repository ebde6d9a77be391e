use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weight order refined lexicographically: compare `weight . u`, then the
/// exponents of `priority[0], priority[1], ...` (larger exponent wins).
/// With `weight = (1, ..., 1)` this is degree-lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermOrder {
    weight: Vec<i64>,
    priority: Vec<usize>,
}

impl TermOrder {
    /// Degree-lexicographic with `x_0 > x_1 > ...`.
    pub fn deglex(n: usize) -> Self {
        Self {
            weight: vec![1; n],
            priority: (0..n).collect(),
        }
    }

    pub fn deglex_with_priority(priority: Vec<usize>) -> Result<Self> {
        check_permutation(&priority)?;
        Ok(Self {
            weight: vec![1; priority.len()],
            priority,
        })
    }

    /// Weights must be nonnegative for `1` to be the smallest monomial.
    pub fn weighted(weight: Vec<i64>, priority: Option<Vec<usize>>) -> Result<Self> {
        if let Some(w) = weight.iter().find(|&&w| w < 0) {
            return Err(Error::InvalidArgument(format!(
                "negative weight {w} in term order"
            )));
        }
        let priority = priority.unwrap_or_else(|| (0..weight.len()).collect());
        if priority.len() != weight.len() {
            return Err(Error::DimensionMismatch {
                expected: weight.len(),
                found: priority.len(),
            });
        }
        check_permutation(&priority)?;
        Ok(Self { weight, priority })
    }

    pub fn n_vars(&self) -> usize {
        self.weight.len()
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn is_deglex(&self) -> bool {
        self.weight.iter().all(|&w| w == 1)
    }

    pub fn name(&self) -> &'static str {
        if self.is_deglex() {
            "deglex"
        } else {
            "weighted-lex"
        }
    }

    pub fn degree(&self, u: &[i64]) -> i128 {
        u.iter()
            .zip(&self.weight)
            .map(|(&x, &w)| x as i128 * w as i128)
            .sum()
    }

    pub fn compare(&self, u: &[i64], w: &[i64]) -> Result<Ordering> {
        for v in [u, w] {
            if v.len() != self.n_vars() {
                return Err(Error::DimensionMismatch {
                    expected: self.n_vars(),
                    found: v.len(),
                });
            }
        }
        Ok(self.cmp(u, w))
    }

    pub(crate) fn cmp(&self, u: &[i64], w: &[i64]) -> Ordering {
        self.degree(u).cmp(&self.degree(w)).then_with(|| {
            self.priority
                .iter()
                .map(|&i| u[i].cmp(&w[i]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

fn check_permutation(p: &[usize]) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(
                "variable priority is not a permutation".into(),
            ));
        }
    }
    Ok(())
}
