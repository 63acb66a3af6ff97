//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn det(m: &Matrix) -> Q {
    let n = m.len();
    if n == 0 {
        return Q::one();
    }
    let mut a = m.clone();
    let mut d = Q::one();
    for i in 0..n {
        let Some(p) = (i..n).find(|&k| !a[k][i].is_zero()) else {
            return Q::zero();
        };
        if p != i {
            a.swap(i, p);
            d = -d;
        }
        let piv = a[i][i].clone();
        d *= &piv;
        for k in i + 1..n {
            if a[k][i].is_zero() {
                continue;
            }
            let f = &a[k][i] / &piv;
            for j in i..n {
                let t = &f * &a[i][j];
                a[k][j] -= t;
            }
        }
    }
    d
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for i in 0..n {
        let p = (i..n).find(|&k| !a[k][i].is_zero()).ok_or(Error::Singular)?;
        a.swap(i, p);
        let piv = a[i][i].recip();
        for v in a[i].iter_mut() {
            *v *= &piv;
        }
        for k in 0..n {
            if k == i || a[k][i].is_zero() {
                continue;
            }
            let f = a[k][i].clone();
            for j in 0..2 * n {
                let t = &f * &a[i][j];
                a[k][j] -= t;
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut c = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                c[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    c
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn inverse_product_is_identity() {
        let m = vec![
            vec![q(2), q(1), q(0)],
            vec![q(1), q(3), q(1)],
            vec![q(0), q(1), q(4)],
        ];
        let inv = inverse(&m).unwrap();
        assert_eq!(matmul(&m, &inv), identity(3));
        assert_eq!(det(&m), q(18));
    }

    #[test]
    fn singular_detected() {
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(det(&m), q(0));
        assert_eq!(inverse(&m), Err(Error::Singular));
    }
}
