//! Symmetric polynomials in the elementary basis, with power-sum conversion.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{parse_rational, q, Q};

use super::mpoly::MPoly;

/// Polynomial in `s1..sd`, where `sk` is the k-th elementary symmetric function
/// of `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    pub nvars: usize,
    pub poly: MPoly,
}

/// Polynomial in the power sums `p1..pk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumPoly {
    pub poly: MPoly,
}

/// A polynomial in an extra variable `z` whose coefficients are symmetric in the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSymPoly {
    /// `coeffs[j]` multiplies `z^j`.
    pub coeffs: Vec<SymPoly>,
}

/// Elementary symmetric functions `e_0..e_n` of the given points.
pub fn elementary(xs: &[Q]) -> Vec<Q> {
    let mut e = vec![Q::one()];
    for x in xs {
        e.push(Q::zero());
        for k in (1..e.len()).rev() {
            let t = &e[k - 1] * x;
            e[k] += t;
        }
    }
    e
}

pub fn power_sums(xs: &[Q], upto: usize) -> Vec<Q> {
    let mut p = vec![q(xs.len() as i64)];
    for a in 1..=upto {
        p.push(xs.iter().fold(Q::zero(), |acc, x| acc + num_traits::pow(x.clone(), a)));
    }
    p
}

/// Newton: `e_1..e_n` from `p_1..p_n` (index 0 unused on input).
pub fn e_from_p(p: &[Q], n: usize) -> Vec<Q> {
    let mut e = vec![Q::one()];
    for k in 1..=n {
        let mut s = Q::zero();
        for i in 1..=k {
            let t = &e[k - i] * &p[i];
            if i % 2 == 1 {
                s += t;
            } else {
                s -= t;
            }
        }
        e.push(s / q(k as i64));
    }
    e
}

impl SymPoly {
    pub fn constant(nvars: usize, c: Q) -> Self {
        SymPoly { nvars, poly: MPoly::constant(nvars, c) }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    /// `s_k` with `k` in `1..=nvars`.
    pub fn sigma(nvars: usize, k: usize) -> Self {
        SymPoly { nvars, poly: MPoly::var(nvars, k - 1) }
    }

    pub fn eval(&self, xs: &[Q]) -> Q {
        let e = elementary(xs);
        self.eval_elementary(&e)
    }

    /// Evaluation from `e_0..e_n`; missing `e_k` count as zero.
    pub fn eval_elementary(&self, e: &[Q]) -> Q {
        let pt: Vec<Q> = (1..=self.nvars)
            .map(|k| e.get(k).cloned().unwrap_or_else(Q::zero))
            .collect();
        self.poly.eval(&pt)
    }

    /// Evaluation from power sums `p_1..p_nvars` (index 0 ignored).
    pub fn eval_power_sums(&self, p: &[Q]) -> Q {
        self.eval_elementary(&e_from_p(p, self.nvars))
    }

    /// Expansion in the monomial basis of `nvars` variables.
    pub fn to_monomials(&self) -> MPoly {
        let n = self.nvars;
        let images: Vec<MPoly> = (1..=n).map(|k| elementary_mpoly(n, k)).collect();
        if n == 0 {
            return self.poly.clone();
        }
        self.poly.compose(&images)
    }

    /// Reduction of a symmetric polynomial given in monomials.
    pub fn from_monomials(p: &MPoly) -> Result<Self> {
        let n = p.nvars;
        let sig: Vec<MPoly> = (1..=n).map(|k| elementary_mpoly(n, k)).collect();
        let mut rem = p.clone();
        let mut out = MPoly::zero(n);
        while let Some((e, c)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if e.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::Internal("polynomial is not symmetric".into()));
            }
            let mut se = vec![0u32; n];
            let mut term = MPoly::constant(n, c.clone());
            for k in 0..n {
                let next = if k + 1 < n { e[k + 1] } else { 0 };
                se[k] = e[k] - next;
                if se[k] > 0 {
                    term = term.mul(&sig[k].pow(se[k]));
                }
            }
            rem = rem.sub(&term);
            out.add_term(se, c);
        }
        Ok(SymPoly { nvars: n, poly: out })
    }

    pub fn to_power_sums(&self) -> PowerSumPoly {
        let n = self.nvars;
        let p: Vec<MPoly> = std::iter::once(MPoly::zero(n))
            .chain((0..n).map(|i| MPoly::var(n, i)))
            .collect();
        // e_k as polynomials in p_1..p_n
        let mut e = vec![MPoly::constant(n, Q::one())];
        for k in 1..=n {
            let mut s = MPoly::zero(n);
            for i in 1..=k {
                let t = e[k - i].mul(&p[i]);
                s = if i % 2 == 1 { s.add(&t) } else { s.sub(&t) };
            }
            e.push(s.scale(&Q::new(1.into(), (k as i64).into())));
        }
        let poly = if n == 0 { self.poly.clone() } else { self.poly.compose(&e[1..]) };
        PowerSumPoly { poly }
    }

    /// Largest exponent of a single variable after monomial expansion.
    pub fn degree_per_variable(&self) -> u32 {
        self.poly
            .terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

impl PowerSumPoly {
    pub fn nvars(&self) -> usize {
        self.poly.nvars
    }

    pub fn eval(&self, p: &[Q]) -> Q {
        self.poly.eval(&p[1..=self.poly.nvars])
    }

    /// Rewrites in the elementary basis of `n` variables (e_k = 0 for k > n).
    pub fn to_sym(&self, n: usize) -> SymPoly {
        let k = self.poly.nvars;
        let e: Vec<MPoly> = std::iter::once(MPoly::constant(n, Q::one()))
            .chain((1..=k).map(|i| if i <= n { MPoly::var(n, i - 1) } else { MPoly::zero(n) }))
            .collect();
        // Newton: p_j = sum_{i=1}^{j-1} (-1)^{i-1} e_i p_{j-i} + (-1)^{j-1} j e_j
        let mut p = vec![MPoly::zero(n)];
        for j in 1..=k {
            let mut s = e[j].scale(&q(j as i64));
            if j % 2 == 0 {
                s = s.scale(&q(-1));
            }
            for i in 1..j {
                let t = e[i].mul(&p[j - i]);
                s = if i % 2 == 1 { s.add(&t) } else { s.sub(&t) };
            }
            p.push(s);
        }
        let poly = if k == 0 {
            MPoly { nvars: n, terms: remap_constant(&self.poly, n) }
        } else {
            self.poly.compose(&p[1..])
        };
        SymPoly { nvars: n, poly }
    }
}

fn remap_constant(p: &MPoly, n: usize) -> BTreeMap<Vec<u32>, Q> {
    p.terms.values().map(|c| (vec![0; n], c.clone())).collect()
}

/// `e_k(x_1..x_n)` as a monomial polynomial.
pub fn elementary_mpoly(n: usize, k: usize) -> MPoly {
    let mut p = MPoly::zero(n);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            let e: Vec<u32> = (0..n).map(|i| (mask >> i) & 1).collect();
            p.add_term(e, Q::one());
        }
    }
    p
}

/// Complementary transform: `S(x)` with `x ∪ x' = L` rewritten as a function of `x'`
/// (and optionally an extra `z`) via `t_a(x) = t_a(L) - t_a(x') (+ z^a)`.
pub fn complementary_transform(s: &SymPoly, l_points: &[Q], ell: usize, with_z: bool) -> ZSymPoly {
    let ps = s.to_power_sums();
    let k = s.nvars;
    let tl = power_sums(l_points, k);
    // variables: z, p'_1..p'_k
    let nv = k + 1;
    let images: Vec<MPoly> = (1..=k)
        .map(|a| {
            let mut im = MPoly::constant(nv, tl[a].clone()).sub(&MPoly::var(nv, a));
            if with_z {
                im = im.add(&MPoly::var(nv, 0).pow(a as u32));
            }
            im
        })
        .collect();
    let full = if k == 0 {
        MPoly::constant(nv, ps.poly.terms.values().next().cloned().unwrap_or_else(Q::zero))
    } else {
        ps.poly.compose(&images)
    };
    let zdeg = full.degree_in(0) as usize;
    let mut coeffs = Vec::with_capacity(zdeg + 1);
    for j in 0..=zdeg {
        let mut part = MPoly::zero(k);
        for (e, c) in &full.terms {
            if e[0] as usize == j {
                part.add_term(e[1..].to_vec(), c.clone());
            }
        }
        coeffs.push(PowerSumPoly { poly: part }.to_sym(ell));
    }
    ZSymPoly { coeffs }
}

impl ZSymPoly {
    pub fn eval(&self, z: Option<&Q>, xs: &[Q]) -> Q {
        let e = elementary(xs);
        let mut acc = Q::zero();
        let mut zp = Q::one();
        for c in &self.coeffs {
            acc += c.eval_elementary(&e) * &zp;
            if let Some(z) = z {
                zp *= z;
            }
            if z.is_none() {
                break;
            }
        }
        acc
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Vec<u32>, &Q)> = self.poly.terms.iter().collect();
        // by total degree, then by index order
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("s{}", j + 1) } else { format!("s{}^{}", j + 1, k) })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl SymPoly {
    /// Parses the text produced by `Display`.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let mut poly = MPoly::zero(nvars);
        let norm = s.replace(" - ", " + -");
        for raw in norm.split(" + ") {
            let mut t = raw.trim();
            let mut sign = Q::one();
            if let Some(rest) = t.strip_prefix('-') {
                sign = -sign;
                t = rest;
            }
            let mut coef = Q::one();
            let mut e = vec![0u32; nvars];
            for fac in t.split('*') {
                if let Some(v) = fac.strip_prefix('s') {
                    let (idx, pw) = match v.split_once('^') {
                        Some((a, b)) => (a, b),
                        None => (v, "1"),
                    };
                    let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad factor {fac:?}")))?;
                    let pw: u32 = pw.parse().map_err(|_| Error::Parse(format!("bad power {fac:?}")))?;
                    if idx == 0 || idx > nvars {
                        return Err(Error::Parse(format!("variable s{idx} out of range")));
                    }
                    e[idx - 1] += pw;
                } else {
                    coef *= parse_rational(fac)?;
                }
            }
            poly.add_term(e, sign * coef);
        }
        Ok(SymPoly { nvars, poly })
    }
}
