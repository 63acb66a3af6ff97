//! Sparse multivariate polynomials over Q.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Q::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Q) -> MPoly {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c * s);
        }
        r
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = Self::constant(self.nvars, Q::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, pt: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in pt.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Q)> {
        self.terms.last_key_value()
    }

    /// Exact division; fails when a remainder would be left.
    pub fn div_exact(&self, d: &MPoly) -> Result<MPoly> {
        let (de, dc) = d
            .leading()
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or_else(|| Error::Internal("division by zero polynomial".into()))?;
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        while let Some((le, lc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if le.iter().zip(&de).any(|(a, b)| a < b) {
                return Err(Error::Internal("inexact polynomial division".into()));
            }
            let te: Vec<u32> = le.iter().zip(&de).map(|(a, b)| a - b).collect();
            let tc = &lc / &dc;
            for (e, c) in &d.terms {
                let ee: Vec<u32> = e.iter().zip(&te).map(|(a, b)| a + b).collect();
                rem.add_term(ee, -(c * &tc));
            }
            quo.add_term(te, tc);
        }
        Ok(quo)
    }

    /// Substitutes `images[i]` for variable `i`; images share a common variable count.
    pub fn compose(&self, images: &[MPoly]) -> MPoly {
        let nv = images.first().map_or(0, |p| p.nvars);
        let mut cache: Vec<Vec<MPoly>> = images
            .iter()
            .map(|p| vec![MPoly::constant(nv, Q::one()), p.clone()])
            .collect();
        let mut out = MPoly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(nv, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][k as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn exact_division_roundtrip() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let a = x.sub(&y);
        let b = x.add(&y.scale(&q(3))).add(&MPoly::constant(2, q(1)));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.add(&MPoly::constant(2, q(1))).div_exact(&a).is_err());
    }
}
