//! Pochhammer symbols, complete symmetric functions at geometric points,
//! skew Schur counts and the gap polynomial `E_g`.

mod eg;
pub mod mpoly;
pub mod sympoly;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::det;
use crate::num::{binomial, factorial, pow, q, rising, Q};

pub use eg::{compute_eg, eg_constant};
pub use mpoly::MPoly;
pub use sympoly::{complementary_transform, PowerSumPoly, SymPoly, ZSymPoly};

/// Rising factorial `(k)_n`.
pub fn pochhammer(k: i64, n: i64) -> Q {
    rising(&q(k), n)
}

/// `h_r(1^n)`.
pub fn h_ones(r: i64, n: i64) -> Q {
    if n == 0 {
        return if r == 0 { Q::one() } else { Q::zero() };
    }
    if r < 0 {
        return Q::zero();
    }
    binomial(r + n - 1, n - 1)
}

/// `(a; q)_n`.
pub fn qpoch(a: &Q, qq: &Q, n: i64) -> Q {
    let mut acc = Q::one();
    let mut t = a.clone();
    for _ in 0..n {
        acc *= Q::one() - &t;
        t *= qq;
    }
    acc
}

/// `h_r(q^a, q^(a+1), ..., q^(a+m-1))` for `m` variables; `a` may be negative.
pub fn h_geo(r: i64, a: i64, m: i64, qq: &Q) -> Q {
    if m == 0 {
        return if r == 0 { Q::one() } else { Q::zero() };
    }
    if r < 0 {
        return Q::zero();
    }
    if qq.is_one() {
        return binomial(r + m - 1, m - 1);
    }
    // q^(ra) times the Gaussian binomial [r+m-1, r]
    pow(qq, r * a) * qpoch(qq, qq, r + m - 1) / (qpoch(qq, qq, r) * qpoch(qq, qq, m - 1))
}

/// `h_r(q^d, ..., q^(d+n))`, i.e. `n + 1` geometric points starting at `q^d`.
pub fn h_q(r: i64, d: i64, n: i64, qq: &Q) -> Q {
    h_geo(r, d, n + 1, qq)
}

/// `prod_{i=1}^n (1 - z q^i) / (1 - q^i)`; requires `q != 1`.
pub fn cal_p(n: i64, z: &Q, qq: &Q) -> Q {
    assert!(!qq.is_one(), "cal_p at q = 1 needs the exponent form");
    let mut acc = Q::one();
    let mut qi = qq.clone();
    for _ in 0..n {
        acc *= (Q::one() - z * &qi) / (Q::one() - &qi);
        qi *= qq;
    }
    acc
}

/// `cal_p(n, q^x)` with the `q = 1` limit `(x+1)_n / n!`.
pub fn cal_p_pow(n: i64, x: i64, qq: &Q) -> Q {
    if qq.is_one() {
        rising(&q(x + 1), n) / factorial(n)
    } else {
        cal_p(n, &pow(qq, x), qq)
    }
}

/// `q^(-d y) cal_p(n, z q^(-y))`.
pub fn cal_p_tilde(n: i64, d: i64, y: i64, z: &Q, qq: &Q) -> Q {
    pow(qq, -d * y) * cal_p(n, &(z * pow(qq, -y)), qq)
}

/// `sum_{k=1}^n w^(k-1) prod_{r=n+1}^N (1 - q^(r-k))`.
pub fn phi_q(w: &Q, n: i64, big_n: i64, qq: &Q) -> Q {
    let mut acc = Q::zero();
    let mut wp = Q::one();
    for k in 1..=n {
        let mut c = Q::one();
        for r in n + 1..=big_n {
            c *= Q::one() - pow(qq, r - k);
        }
        acc += &wp * c;
        wp *= w;
    }
    acc
}

/// Checks `mu ⊆ lambda` and pads both to a common length.
fn pad_partitions(lambda: &[i64], mu: &[i64]) -> Result<(Vec<i64>, Vec<i64>)> {
    let n = lambda.len().max(mu.len());
    let mut l = lambda.to_vec();
    let mut m = mu.to_vec();
    l.resize(n, 0);
    m.resize(n, 0);
    if l.iter().zip(&m).any(|(a, b)| b > a) {
        return Err(Error::Domain(format!("{mu:?} is not contained in {lambda:?}")));
    }
    Ok((l, m))
}

/// `s_{lambda/mu}(1^n)` by Jacobi–Trudi.
pub fn skew_schur_ones(lambda: &[i64], mu: &[i64], n: i64) -> Result<Q> {
    let (l, m) = pad_partitions(lambda, mu)?;
    let k = l.len();
    let mat = (0..k)
        .map(|i| (0..k).map(|j| h_ones(l[i] - i as i64 - m[j] + j as i64, n)).collect())
        .collect();
    Ok(det(&mat))
}

/// `s_{lambda/mu}(q^(1-n), ..., q^(-1), q^0)`.
pub fn skew_schur_q(lambda: &[i64], mu: &[i64], n: i64, qq: &Q) -> Result<Q> {
    let (l, m) = pad_partitions(lambda, mu)?;
    let k = l.len();
    let mat = (0..k)
        .map(|i| (0..k).map(|j| h_geo(l[i] - i as i64 - m[j] + j as i64, 1 - n, n, qq)).collect())
        .collect();
    Ok(det(&mat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qf;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3, 2), q(12));
        assert_eq!(pochhammer(-7, 0), q(1));
        assert_eq!(pochhammer(-2, 5), q(0));
    }

    #[test]
    fn h_ones_matches_series() {
        // coefficients of (1-z)^(-3): 1, 3, 6, 10
        assert_eq!(h_ones(2, 3), q(6));
        assert_eq!(h_ones(3, 3), q(10));
        assert_eq!(h_ones(-1, 4), q(0));
        assert_eq!(h_ones(0, 4), q(1));
    }

    #[test]
    fn h_q_basics() {
        let qq = qf(1, 2);
        assert_eq!(h_q(-1, 2, 3, &qq), q(0));
        assert_eq!(h_q(0, 2, 3, &qq), q(1));
        assert_eq!(h_q(4, 1, 2, &q(1)), h_ones(4, 3));
        // h_1(q^2, q^3) = q^2 + q^3
        assert_eq!(h_q(1, 2, 1, &qq), qf(1, 4) + qf(1, 8));
    }

    #[test]
    fn cal_p_vanishing_and_empty() {
        let qq = qf(2, 3);
        assert_eq!(cal_p(0, &qf(7, 5), &qq), q(1));
        assert_eq!(cal_p(4, &q(0), &qq), qpoch(&qq, &qq, 4).recip());
        for k in 1..=4 {
            assert_eq!(cal_p(4, &pow(&qq, -k), &qq), q(0));
        }
        assert_eq!(cal_p_pow(3, 2, &q(1)), q(10));
    }

    #[test]
    fn phi_q_geometric_case() {
        let qq = qf(1, 3);
        let w = qf(2, 5);
        assert_eq!(phi_q(&w, 0, 4, &qq), q(0));
        let want = (q(1) - pow(&w, 4)) / (q(1) - &w);
        assert_eq!(phi_q(&w, 4, 4, &qq), want);
    }

    #[test]
    fn skew_schur_identity_and_domain() {
        assert_eq!(skew_schur_ones(&[3, 1], &[3, 1], 4).unwrap(), q(1));
        assert!(skew_schur_ones(&[1], &[2], 2).is_err());
    }
}
