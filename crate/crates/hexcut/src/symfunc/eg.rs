use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::det;
use crate::num::{factorial, q, vandermonde, Q};
use crate::poly::UniPoly;

use super::mpoly::MPoly;
use super::sympoly::SymPoly;

/// Variable count above which the multivariate construction is refused.
pub const EG_VAR_CAP: usize = 6;

/// The normalising constant `prod 1/(N-j)! * Δ(y) / prod (d-j)!`.
pub fn eg_constant(y_cut: &[i64], n: i64) -> Q {
    let d = y_cut.len() as i64;
    let ys: Vec<Q> = y_cut.iter().map(|&v| q(v)).collect();
    let mut c = vandermonde(&ys);
    for j in 1..=d {
        c /= factorial(n - j) * factorial(d - j);
    }
    c
}

/// Gap polynomial in the elementary basis of `d = y_cut.len()` variables.
pub fn compute_eg(y_cut: &[i64], n: i64) -> Result<SymPoly> {
    let d = y_cut.len();
    if d == 0 {
        return Ok(SymPoly::one(0));
    }
    if d > EG_VAR_CAP {
        return Err(Error::Domain(format!("{d} variables exceeds the cap of {EG_VAR_CAP}")));
    }
    if y_cut.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Domain("lower-cut points must be strictly decreasing".into()));
    }
    let spread = y_cut[0] - y_cut[d - 1];
    if n - 1 - spread < 0 {
        return Err(Error::Domain(format!("spread {spread} exceeds N-1 = {}", n - 1)));
    }
    let nf = factorial(n - 1);
    // coefficient table C[k][beta] of (x - y_beta + 1)_{N-1} / (N-1)!
    let cols: Vec<UniPoly> = y_cut
        .iter()
        .map(|&yb| {
            let roots: Vec<Q> = (1..n).map(|j| q(yb - j)).collect();
            UniPoly::from_roots(roots.iter()).scale(&nf.recip())
        })
        .collect();
    let width = n as usize;
    let mut num = MPoly::zero(d);
    for set in increasing_subsets(width, d) {
        let minor = (0..d)
            .map(|a| (0..d).map(|b| cols[b].coeff(set[a])).collect())
            .collect();
        let c = det(&minor);
        if c.is_zero() {
            continue;
        }
        for (perm, sign) in permutations(d) {
            let e: Vec<u32> = (0..d).map(|a| set[perm[a]] as u32).collect();
            num.add_term(e, if sign { c.clone() } else { -c.clone() });
        }
    }
    let span = n - (spread + 1);
    for a in 0..d {
        for j in 1..=span {
            let f = MPoly::var(d, a).add(&MPoly::constant(d, q(j - y_cut[d - 1])));
            num = num.div_exact(&f)?;
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            num = num.div_exact(&MPoly::var(d, i).sub(&MPoly::var(d, j)))?;
        }
    }
    let num = num.scale(&eg_constant(y_cut, n).recip());
    SymPoly::from_monomials(&num)
}

fn increasing_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All permutations of `0..n` with their parity (`true` for even).
pub(crate) fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, even: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        if k == p.len() {
            out.push((p.clone(), even));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, if i == k { even } else { !even }, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, true, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn contiguous_cut_gives_one() {
        let e = compute_eg(&[3, 2, 1], 6).unwrap();
        assert_eq!(e, SymPoly::one(3));
        assert!(Q::one() == e.eval(&[q(9), q(4), q(-2)]));
    }

    #[test]
    fn permutation_parity_count() {
        let ps = permutations(4);
        assert_eq!(ps.len(), 24);
        assert_eq!(ps.iter().filter(|(_, e)| *e).count(), 12);
    }
}
