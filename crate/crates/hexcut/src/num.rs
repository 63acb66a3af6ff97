//! Exact scalar helpers over `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: i64) -> Q {
    assert!(n >= 0, "factorial of negative integer");
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Q::from_integer(acc)
}

/// Integer power with negative exponents allowed for nonzero bases.
pub fn pow(base: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn binomial(n: i64, k: i64) -> Q {
    if k < 0 || n < 0 || k > n {
        return Q::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Q::from_integer(acc)
}

/// Parses `a`, `a/b` or a finite decimal like `0.5`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(a, b));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let a: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(a))
}

/// `num/den` with the denominator always printed.
pub fn frac_str(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    match (v.numer().to_f64(), v.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // scale down huge operands before converting
            let shift = v.numer().bits().max(v.denom().bits()).saturating_sub(900);
            let n = v.numer() >> shift;
            let d = v.denom() >> shift;
            n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
        }
    }
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}

/// Product of the `Q` values yielded by an iterator.
pub fn product<'a, I: IntoIterator<Item = Q>>(it: I) -> Q {
    it.into_iter().fold(Q::one(), |a, b| a * b)
}

/// Vandermonde product `prod_{i<j} (u_i - u_j)`.
pub fn vandermonde(u: &[Q]) -> Q {
    let mut acc = Q::one();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            acc *= &u[i] - &u[j];
        }
    }
    acc
}

/// Rising factorial `(a)_n` for rational `a`.
pub fn rising(a: &Q, n: i64) -> Q {
    assert!(n >= 0, "rising factorial of negative order");
    let mut acc = Q::one();
    let mut t = a.clone();
    for _ in 0..n {
        acc *= &t;
        t += Q::one();
    }
    acc
}

/// All `k`-element subsets, preserving input order.
pub fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("2/3").unwrap(), qf(2, 3));
        assert_eq!(parse_rational("0.5").unwrap(), qf(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), qf(-5, 4));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn frac_always_has_denominator() {
        assert_eq!(frac_str(&q(3)), "3/1");
        assert_eq!(frac_str(&qf(-2, 4)), "-1/2");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), q(10));
        assert_eq!(binomial(3, 4), q(0));
        assert_eq!(binomial(0, 0), q(1));
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(&[1, 2, 3, 4], 2).len(), 6);
        assert_eq!(combinations(&[1, 2], 0), vec![Vec::<i32>::new()]);
        assert!(combinations(&[1, 2], 3).is_empty());
    }

    #[test]
    fn f64_of_huge() {
        let big = pow(&q(10), 400) / pow(&q(10), 399);
        assert!((to_f64(&big) - 10.0).abs() < 1e-9);
    }
}
