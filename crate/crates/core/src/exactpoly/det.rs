use super::Poly;

/// Determinant by fraction-free (Bareiss) elimination. The empty matrix
/// has determinant 1.
///
/// Panics if `m` is not square.
pub fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "poly_det needs a square matrix");
    if n == 0 {
        return Poly::one();
    }
    let mut a: Vec<Vec<Poly>> = m.to_vec();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.divide_exact(&prev).expect("Bareiss step divides exactly");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
