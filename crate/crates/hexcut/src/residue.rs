//! Exact residue sums of rational functions whose denominators split over Q.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::Q;
use crate::poly::UniPoly;

/// `num(z) / prod (z - a)^k` with distinct poles `a`.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: UniPoly,
    poles: Vec<(Q, usize)>,
}

/// Which poles a contour encloses.
#[derive(Clone, Debug)]
pub enum Contour {
    /// Exactly the listed points.
    Points(Vec<Q>),
    /// Every finite pole.
    AllPoles,
    /// Poles `p >= x`, i.e. a contour around `x + {0, 1, 2, ...}`.
    AtLeast(Q),
    /// A small circle around the origin.
    Origin,
}

impl RatFn {
    /// Denominator roots may repeat; equal roots are merged into one higher-order pole.
    pub fn new<I: IntoIterator<Item = Q>>(num: UniPoly, roots: I) -> Self {
        let mut poles: Vec<(Q, usize)> = Vec::new();
        for r in roots {
            match poles.iter_mut().find(|(a, _)| *a == r) {
                Some(p) => p.1 += 1,
                None => poles.push((r, 1)),
            }
        }
        RatFn { num, poles }
    }

    pub fn poles(&self) -> &[(Q, usize)] {
        &self.poles
    }

    fn denominator(&self) -> UniPoly {
        let mut roots = Vec::new();
        for (a, k) in &self.poles {
            roots.extend(std::iter::repeat(a.clone()).take(*k));
        }
        UniPoly::from_roots(roots.iter())
    }

    /// Residue at `a`, zero when `a` is not a pole.
    pub fn residue_at(&self, a: &Q) -> Q {
        let Some(&(_, k)) = self.poles.iter().find(|(p, _)| p == a) else {
            return Q::zero();
        };
        // series of num(a+t) / prod_{b != a} (a-b+t)^m up to t^(k-1)
        let mut ser = self.num.taylor_at(a, k);
        for (b, m) in &self.poles {
            if b == a {
                continue;
            }
            let c = a - b;
            let cinv = c.recip();
            let mut inv = Vec::with_capacity(k);
            let mut term = cinv.clone();
            for _ in 0..k {
                inv.push(term.clone());
                term = -(&term * &cinv);
            }
            for _ in 0..*m {
                ser = series_mul(&ser, &inv, k);
            }
        }
        ser[k - 1].clone()
    }

    /// Sum of all finite residues as the `z^(D-1)` coefficient of `num mod den`.
    pub fn sum_finite_residues(&self) -> Q {
        let den = self.denominator();
        let Some(dd) = den.degree() else { return Q::zero() };
        if dd == 0 {
            return Q::zero();
        }
        let (_, r) = self.num.divrem(&den);
        r.coeff(dd - 1)
    }

    /// Residue at infinity, from the Laurent expansion at large z.
    pub fn residue_at_infinity(&self) -> Q {
        -self.sum_finite_residues()
    }

    /// Sum of residues over every pole computed pole by pole and checked against
    /// the residue at infinity.
    pub fn sum_all_checked(&self) -> Result<Q> {
        let direct = self
            .poles
            .iter()
            .fold(Q::zero(), |acc, (a, _)| acc + self.residue_at(a));
        let via_inf = -self.residue_at_infinity();
        if direct != via_inf {
            return Err(Error::Internal(format!(
                "residue sum {direct} disagrees with residue at infinity {via_inf}"
            )));
        }
        Ok(direct)
    }

    pub fn integrate(&self, c: &Contour) -> Q {
        match c {
            Contour::AllPoles => self.sum_finite_residues(),
            Contour::Points(ps) => ps.iter().fold(Q::zero(), |acc, p| acc + self.residue_at(p)),
            Contour::AtLeast(x) => self
                .poles
                .iter()
                .filter(|(a, _)| a >= x)
                .fold(Q::zero(), |acc, (a, _)| acc + self.residue_at(a)),
            Contour::Origin => self.residue_at(&Q::zero()),
        }
    }
}

fn series_mul(a: &[Q], b: &[Q], k: usize) -> Vec<Q> {
    let mut c = vec![Q::zero(); k];
    for i in 0..k.min(a.len()) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..(k - i).min(b.len()) {
            c[i + j] += &a[i] * &b[j];
        }
    }
    c
}

/// Sum of all finite residues of `a(z) / prod (z - r)` for a polynomial `a`.
pub fn sum_all_residues(a: &UniPoly, roots: &[Q]) -> Q {
    if roots.is_empty() {
        return Q::zero();
    }
    let den = UniPoly::from_roots(roots.iter());
    let (_, r) = a.divrem(&den);
    r.coeff(roots.len() - 1)
}

/// `prod_{r != u} (u - r)` over a root list containing `u` once.
pub fn qprime(roots: &[Q], u: &Q) -> Q {
    roots
        .iter()
        .filter(|r| *r != u)
        .fold(Q::one(), |acc, r| acc * (u - r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{factorial, q, rising};

    #[test]
    fn simple_pole_at_origin() {
        let f = RatFn::new(UniPoly::one(), [q(0)]);
        assert_eq!(f.integrate(&Contour::Origin), q(1));
        assert_eq!(f.integrate(&Contour::Points(vec![q(5)])), q(0));
    }

    #[test]
    fn double_pole() {
        // z^3 / (z-1)^2 (z+1) at z=1: d/dz [z^3/(z+1)] = (3z^2(z+1) - z^3)/(z+1)^2 = 5/4
        let num = UniPoly::new(vec![q(0), q(0), q(0), q(1)]);
        let f = RatFn::new(num, [q(1), q(1), q(-1)]);
        assert_eq!(f.residue_at(&q(1)), crate::num::qf(5, 4));
        f.sum_all_checked().unwrap();
    }

    #[test]
    fn origin_integral_closed_form() {
        // 1/(z^(1+k) (1-z)^n) at 0 equals (k+1)_{n-1}/(n-1)!
        for k in 0..4i64 {
            for n in 1..5i64 {
                let sign = if n % 2 == 0 { q(1) } else { q(-1) };
                let roots: Vec<Q> = std::iter::repeat(q(0))
                    .take((k + 1) as usize)
                    .chain(std::iter::repeat(q(1)).take(n as usize))
                    .collect();
                let f = RatFn::new(UniPoly::constant(sign), roots);
                let want = rising(&q(k + 1), n - 1) / factorial(n - 1);
                assert_eq!(f.integrate(&Contour::Origin), want);
            }
        }
    }
}
