//! Buchberger completion for pure binomial ideals of lattices.
//!
//! Binomials are kept as difference vectors, which silently cancels
//! common monomial factors. Every element produced is still
//! `x^u - x^w` with `u - w` in the lattice, so the result is a Gröbner
//! basis of some ideal between the input ideal and the lattice ideal;
//! [`lattice_ideal_gb`] certifies that it is the lattice ideal itself.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::binomial::{
    generators_from_lattice_basis, normal_form_monomial, positive_lattice_vector, Binomial,
};
use super::order::TermOrder;
use crate::error::{Error, Result};
use crate::exact::IntegerMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_elements: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_pairs: 1_000_000,
            max_elements: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    elements: Vec<Binomial>,
    order: TermOrder,
    reduced: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuchbergerStats {
    pub pairs_considered: usize,
    pub pairs_skipped_coprime: usize,
    pub pairs_reduced_to_zero: usize,
    pub peak_elements: usize,
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[Binomial] {
        &self.elements
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn normal_form(&self, u: &[i64]) -> Result<Vec<i64>> {
        if u.len() != self.order.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.order.n_vars(),
                found: u.len(),
            });
        }
        normal_form_monomial(u, &self.elements)
    }

    pub fn to_file(&self) -> GbFile {
        GbFile {
            header: GbHeader {
                order: self.order.name().to_string(),
                variable_priority: self.order.priority().to_vec(),
                n_vars: self.order.n_vars(),
                count: self.elements.len(),
                weight: (!self.order.is_deglex()).then(|| self.order.weight().to_vec()),
            },
            binomials: self.elements.iter().map(|b| b.vector().to_vec()).collect(),
        }
    }

    /// Rebuilds a basis from a file, re-checking orientation and the
    /// reduced-basis conditions.
    pub fn from_file(file: &GbFile) -> Result<Self> {
        let h = &file.header;
        let order = match &h.weight {
            Some(w) => TermOrder::weighted(w.clone(), Some(h.variable_priority.clone()))?,
            None => TermOrder::deglex_with_priority(h.variable_priority.clone())?,
        };
        if order.n_vars() != h.n_vars {
            return Err(Error::DimensionMismatch {
                expected: h.n_vars,
                found: order.n_vars(),
            });
        }
        if file.binomials.len() != h.count {
            return Err(Error::DimensionMismatch {
                expected: h.count,
                found: file.binomials.len(),
            });
        }
        let mut elements = Vec::with_capacity(h.count);
        for v in &file.binomials {
            let b = Binomial::oriented(v.clone(), &order)?;
            if b.vector() != v.as_slice() {
                return Err(Error::InvalidArgument(format!(
                    "binomial {v:?} is not oriented under the stated order"
                )));
            }
            elements.push(b);
        }
        let gb = Self {
            elements,
            order,
            reduced: true,
        };
        check_reduced(&gb)?;
        Ok(gb)
    }
}

/// Serialized reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbFile {
    pub header: GbHeader,
    pub binomials: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbHeader {
    pub order: String,
    pub variable_priority: Vec<usize>,
    pub n_vars: usize,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<i64>>,
}

fn lcm(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

fn coprime(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0)
}

/// `L - lead + trail`, the rewrite of `x^L` by `g`.
fn rewrite(l: &[i64], g: &Binomial) -> Result<Vec<i64>> {
    l.iter()
        .zip(g.vector())
        .map(|(&x, &v)| x.checked_sub(v).ok_or(Error::Overflow("S-pair")))
        .collect()
}

pub fn buchberger(gens: &[Binomial], order: &TermOrder) -> Result<GroebnerBasis> {
    buchberger_with_budget(gens, order, Budget::default()).map(|(gb, _)| gb)
}

/// Completion with normal pair selection (smallest lcm degree first) and
/// the coprime-leading-term criterion, followed by inter-reduction.
pub fn buchberger_with_budget(
    gens: &[Binomial],
    order: &TermOrder,
    budget: Budget,
) -> Result<(GroebnerBasis, BuchbergerStats)> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("no generators".into()));
    }
    for g in gens {
        if g.n_vars() != order.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: order.n_vars(),
                found: g.n_vars(),
            });
        }
    }
    let mut stats = BuchbergerStats::default();
    let mut basis: Vec<Binomial> = Vec::new();
    let mut leads: Vec<Vec<i64>> = Vec::new();
    let mut pairs: BinaryHeap<Reverse<(i128, usize, usize)>> = BinaryHeap::new();

    let push = |b: Binomial,
                basis: &mut Vec<Binomial>,
                leads: &mut Vec<Vec<i64>>,
                pairs: &mut BinaryHeap<Reverse<(i128, usize, usize)>>,
                stats: &mut BuchbergerStats|
     -> Result<()> {
        let j = basis.len();
        let lj = b.lead();
        for (i, li) in leads.iter().enumerate() {
            if coprime(li, &lj) {
                stats.pairs_skipped_coprime += 1;
            } else {
                pairs.push(Reverse((order.degree(&lcm(li, &lj)), j, i)));
            }
        }
        leads.push(lj);
        basis.push(b);
        stats.peak_elements = stats.peak_elements.max(basis.len());
        if basis.len() > budget.max_elements {
            return Err(Error::BudgetExceeded(format!(
                "more than {} basis elements",
                budget.max_elements
            )));
        }
        Ok(())
    };

    for g in gens {
        let a = normal_form_monomial(&g.lead(), &basis)?;
        let b = normal_form_monomial(&g.trail(), &basis)?;
        if let Some(nb) = Binomial::from_terms(&a, &b, order)? {
            push(nb, &mut basis, &mut leads, &mut pairs, &mut stats)?;
        }
    }

    while let Some(Reverse((_, j, i))) = pairs.pop() {
        stats.pairs_considered += 1;
        if stats.pairs_considered > budget.max_pairs {
            return Err(Error::BudgetExceeded(format!(
                "more than {} S-pairs",
                budget.max_pairs
            )));
        }
        let l = lcm(&leads[i], &leads[j]);
        let a = normal_form_monomial(&rewrite(&l, &basis[i])?, &basis)?;
        let b = normal_form_monomial(&rewrite(&l, &basis[j])?, &basis)?;
        match Binomial::from_terms(&a, &b, order)? {
            None => stats.pairs_reduced_to_zero += 1,
            Some(nb) => push(nb, &mut basis, &mut leads, &mut pairs, &mut stats)?,
        }
    }

    let elements = reduce_basis(basis, order)?;
    let gb = GroebnerBasis {
        elements,
        order: order.clone(),
        reduced: true,
    };
    Ok((gb, stats))
}

/// Minimalizes, reduces trailing terms and sorts by leading term.
pub fn reduce_basis(mut basis: Vec<Binomial>, order: &TermOrder) -> Result<Vec<Binomial>> {
    basis.sort_by(|a, b| order.cmp(&a.lead(), &b.lead()).then_with(|| a.cmp(b)));
    let mut minimal: Vec<Binomial> = Vec::new();
    for g in basis {
        let lg = g.lead();
        if !minimal.iter().any(|h| h.lead_divides(&lg)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for g in &minimal {
        let lead = g.lead();
        let tail = normal_form_monomial(&g.trail(), &minimal)?;
        if lead.iter().zip(&tail).any(|(&a, &b)| a > 0 && b > 0) {
            return Err(Error::Invariant(format!(
                "reduced binomial with lead {lead:?} shares a variable with its tail"
            )));
        }
        let v: Vec<i64> = lead.iter().zip(&tail).map(|(a, b)| a - b).collect();
        let b = Binomial::oriented(v, order)?;
        if b.lead() != lead {
            return Err(Error::Invariant(
                "tail reduction changed the leading term".into(),
            ));
        }
        out.push(b);
    }
    out.sort_by(|a, b| order.cmp(&a.lead(), &b.lead()));
    Ok(out)
}

/// Checks the reduced-basis conditions: no leading term divides a term of
/// another element.
pub fn check_reduced(gb: &GroebnerBasis) -> Result<()> {
    for (i, g) in gb.elements.iter().enumerate() {
        for (j, h) in gb.elements.iter().enumerate() {
            if i != j && (h.lead_divides(&g.lead()) || h.lead_divides(&g.trail())) {
                return Err(Error::Invariant(format!(
                    "leading term of element {j} divides a term of element {i}"
                )));
            }
        }
    }
    Ok(())
}

/// The leading exponents, which minimally generate the initial ideal.
pub fn initial_ideal(gb: &GroebnerBasis) -> Vec<Vec<i64>> {
    gb.elements.iter().map(Binomial::lead).collect()
}

pub fn is_square_free(u: &[i64]) -> bool {
    u.iter().all(|&x| x == 0 || x == 1)
}

/// Reduced Gröbner basis of the lattice ideal of the row lattice of `L`.
///
/// Requires a strictly positive lattice vector `w`; after completion,
/// `x^w` reducing to `1` shows every variable is invertible modulo the
/// computed ideal, so it is saturated and equals the lattice ideal.
pub fn lattice_ideal_gb(
    l: &IntegerMatrix,
    order: &TermOrder,
    budget: Budget,
) -> Result<(GroebnerBasis, BuchbergerStats)> {
    let gens = generators_from_lattice_basis(l, order)?;
    let w = positive_lattice_vector(l)?.ok_or(Error::NoPositiveVector)?;
    if gens.is_empty() {
        return Err(Error::InvalidArgument("empty lattice basis".into()));
    }
    let (gb, stats) = buchberger_with_budget(&gens, order, budget)?;
    if gb.normal_form(&w)?.iter().any(|&x| x != 0) {
        return Err(Error::NotSaturated);
    }
    Ok((gb, stats))
}

/// Reduced Gröbner basis of the lattice ideal of any nonzero lattice.
///
/// When the basis binomials do not certifiably generate the lattice ideal
/// (no positive vector, or one exists but the certificate fails), a fresh
/// variable `t` and the generator `(1, ..., 1, 1)` are added. That makes
/// every variable a unit, so the enlarged basis always generates; the
/// `t`-free part under an order eliminating `t` generates the original
/// lattice ideal, and a second completion brings it into `order`.
pub fn lattice_ideal_gb_any(
    l: &IntegerMatrix,
    order: &TermOrder,
    budget: Budget,
) -> Result<(GroebnerBasis, BuchbergerStats)> {
    match lattice_ideal_gb(l, order, budget) {
        Err(Error::NoPositiveVector | Error::NotSaturated) => {}
        other => return other,
    }
    let n = l.cols();
    let mut rows: Vec<Vec<_>> = l.row_vecs();
    for r in rows.iter_mut() {
        r.push(0.into());
    }
    rows.push(vec![1.into(); n + 1]);
    let lifted = IntegerMatrix::from_bigint_rows(rows, n + 1)?;
    let mut weight = vec![0; n + 1];
    weight[n] = 1;
    let mut priority = vec![n];
    priority.extend(0..n);
    let elim = TermOrder::weighted(weight, Some(priority))?;
    let (big, first) = lattice_ideal_gb(&lifted, &elim, budget)?;
    let gens = big
        .elements()
        .iter()
        .filter(|g| g.vector()[n] == 0)
        .map(|g| Binomial::oriented(g.vector()[..n].to_vec(), order))
        .collect::<Result<Vec<_>>>()?;
    let (gb, second) = buchberger_with_budget(&gens, order, budget)?;
    Ok((
        gb,
        BuchbergerStats {
            pairs_considered: first.pairs_considered + second.pairs_considered,
            pairs_skipped_coprime: first.pairs_skipped_coprime + second.pairs_skipped_coprime,
            pairs_reduced_to_zero: first.pairs_reduced_to_zero + second.pairs_reduced_to_zero,
            peak_elements: first.peak_elements.max(second.peak_elements),
        },
    ))
}
