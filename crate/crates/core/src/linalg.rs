//! Dense exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::exactpoly::Rational;

/// Row-reduced echelon form of the given rows. Returns the nonzero
/// reduced rows and their pivot columns (ascending).
pub(crate) fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub(crate) fn rank(rows: Vec<Vec<Rational>>, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{v : M v = 0}` for the matrix with the given rows.
pub(crate) fn nullspace(rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &pc) in red.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Greedily picks vectors from `candidates` that are independent modulo
/// the span of `base`.
pub(crate) fn extend_independent(
    base: &[Vec<Rational>],
    candidates: &[Vec<Rational>],
    ncols: usize,
) -> Vec<Vec<Rational>> {
    let mut span: Vec<Vec<Rational>> = base.to_vec();
    let mut current = rank(span.clone(), ncols);
    let mut picked = Vec::new();
    for v in candidates {
        span.push(v.clone());
        let r = rank(span.clone(), ncols);
        if r > current {
            current = r;
            picked.push(v.clone());
        } else {
            span.pop();
        }
    }
    picked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(a.clone(), 3), 2);
        let ns = nullspace(a.clone(), 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: Rational = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(rank(Vec::new(), 4), 0);
    }

    #[test]
    fn extend_modulo_span() {
        let base = m(&[&[1, 0, 0]]);
        let cands = m(&[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0]]);
        assert_eq!(extend_independent(&base, &cands, 3), m(&[&[1, 1, 0]]));
    }
}
