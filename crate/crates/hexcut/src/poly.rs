//! Dense univariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::num::Q;

/// Coefficients stored from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    c: Vec<Q>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> Self {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(a: Q) -> Self {
        Self::new(vec![a])
    }

    /// `z - a`
    pub fn linear(a: &Q) -> Self {
        Self::new(vec![-a.clone(), Q::one()])
    }

    /// Monic polynomial with the given roots (with repetition).
    pub fn from_roots<'a, I: IntoIterator<Item = &'a Q>>(roots: I) -> Self {
        let mut c = vec![Q::one()];
        for r in roots {
            let mut next = vec![Q::zero(); c.len() + 1];
            for (i, a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.c.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn eval(&self, z: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * z + a;
        }
        acc
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self::new(self.c.iter().map(|a| a * s).collect())
    }

    /// Returns `(quotient, remainder)`.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.c[dd].clone();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut qc = vec![Q::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] / &lead;
            for (i, b) in d.c.iter().enumerate() {
                let t = &f * b;
                r[k - dd + i] -= t;
            }
            qc[k - dd] = f;
        }
        r.truncate(dd);
        (Self::new(qc), Self::new(r))
    }

    /// Division by `z - a`, returning `None` when `a` is not a root.
    pub fn div_root(&self, a: &Q) -> Option<UniPoly> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.c.len();
        let mut qc = vec![Q::zero(); n - 1];
        let mut carry = Q::zero();
        for k in (0..n).rev() {
            let v = &self.c[k] + &carry * a;
            if k == 0 {
                if !v.is_zero() {
                    return None;
                }
            } else {
                qc[k - 1] = v.clone();
            }
            carry = v;
        }
        Some(Self::new(qc))
    }

    /// Taylor coefficients of `p(a + t)` up to `t^(order-1)`.
    pub fn taylor_at(&self, a: &Q, order: usize) -> Vec<Q> {
        let mut work = self.c.clone();
        let mut out = Vec::with_capacity(order);
        for _ in 0..order {
            // synthetic division by (z - a) gives p(a) as remainder
            let n = work.len();
            if n == 0 {
                out.push(Q::zero());
                continue;
            }
            let mut carry = Q::zero();
            let mut next = vec![Q::zero(); n.saturating_sub(1)];
            for k in (0..n).rev() {
                let v = &work[k] + &carry * a;
                if k > 0 {
                    next[k - 1] = v.clone();
                }
                carry = v;
            }
            out.push(carry);
            work = next;
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Q::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.c.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*z")?,
                _ => write!(f, "{a}*z^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn roots_and_eval() {
        let p = UniPoly::from_roots(&[q(1), q(-2), q(3)]);
        assert_eq!(p.eval(&q(1)), q(0));
        assert_eq!(p.eval(&q(0)), q(6));
        assert_eq!(p.degree(), Some(3));
    }

    #[test]
    fn divrem_roundtrip() {
        let a = UniPoly::new(vec![q(5), q(-1), q(0), q(2), q(7)]);
        let b = UniPoly::new(vec![q(1), q(3), q(2)]);
        let (qq, r) = a.divrem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn taylor_shift() {
        // p(z) = z^2, p(2 + t) = 4 + 4t + t^2
        let p = UniPoly::new(vec![q(0), q(0), q(1)]);
        assert_eq!(p.taylor_at(&q(2), 4), vec![q(4), q(4), q(1), q(0)]);
    }

    #[test]
    fn div_root_detects_nonroot() {
        let p = UniPoly::from_roots(&[q(2), q(3)]);
        assert_eq!(p.div_root(&q(2)).unwrap(), UniPoly::linear(&q(3)));
        assert!(p.div_root(&q(4)).is_none());
    }
}
