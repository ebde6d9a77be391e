//! Hermite and Smith normal forms and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// Row Hermite normal form with transformation: returns `(H, U)` such that
/// `U * M = H`, `U` is unimodular, pivots of `H` are positive, entries above
/// each pivot lie in `[0, pivot)` and zero rows come last.
pub fn hnf(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.row_vecs();
    let mut u = IntegerMatrix::identity(rows).row_vecs();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c over rows r.. until a single nonzero remains.
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&a, &b| h[a][c].abs().cmp(&h[b][c].abs()).then(a.cmp(&b)));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h[r]);
            negate_row(&mut u[r]);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (
        IntegerMatrix::from_bigint_rows(h, cols).expect("shape preserved"),
        IntegerMatrix::from_bigint_rows(u, rows).expect("shape preserved"),
    )
}

fn sub_row(m: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    let (a, b) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn negate_row(r: &mut [BigInt]) {
    for x in r.iter_mut() {
        *x = -&*x;
    }
}

/// Checks the normal-form conditions that [`hnf`] guarantees.
pub fn is_hermite_normal_form(h: &IntegerMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows() {
        match h.row(i).iter().position(|x| !x.is_zero()) {
            None => seen_zero_row = true,
            Some(p) => {
                if seen_zero_row || last_pivot.is_some_and(|q| p <= q) {
                    return false;
                }
                let piv = h.get(i, p);
                if !piv.is_positive() {
                    return false;
                }
                for k in 0..i {
                    let e = h.get(k, p);
                    if e.is_negative() || e >= piv {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}

/// Nonzero invariant factors `d1 | d2 | ...` of `M`, in ascending order.
pub fn snf_invariants(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut a = m.row_vecs();
    let (rows, cols) = (m.rows(), m.cols());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                sub_row(&mut a, i, t, &q);
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // enforce the divisibility chain
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// A basis (as rows) of the integer kernel `{w in Z^cols : M w = 0}`, in
/// Hermite normal form. The rows span a saturated sublattice.
pub fn kernel_lattice(m: &IntegerMatrix) -> IntegerMatrix {
    let (h, u) = hnf(&m.transpose());
    let kernel_rows: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    let k = IntegerMatrix::from_bigint_rows(kernel_rows, m.cols()).expect("shape");
    if k.rows() == 0 {
        return k;
    }
    hnf(&k).0
}

/// True when every invariant factor is one, i.e. the row lattice is
/// saturated in its rational span.
pub fn is_saturated(m: &IntegerMatrix) -> bool {
    snf_invariants(m).iter().all(One::is_one)
}
