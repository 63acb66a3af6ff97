//! Exhaustive enumeration of interlacing arrays and exact correlation oracles.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::PolygonData;
use crate::num::{pow, q, Q};
use crate::symfunc::{skew_schur_ones, skew_schur_q};

/// Red-dot configuration: `levels[k]` holds the `d + k` positions on line `n = k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tiling {
    pub levels: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Measure {
    Uniform,
    Q(Q),
}

impl Measure {
    pub fn q_value(&self) -> Q {
        match self {
            Measure::Uniform => Q::one(),
            Measure::Q(v) => v.clone(),
        }
    }
}

struct Walker<'a, F> {
    p: &'a PolygonData,
    levels: Vec<Vec<i64>>,
    f: F,
    count: u64,
    stop: bool,
}

impl<'a, F: FnMut(&[Vec<i64>]) -> bool> Walker<'a, F> {
    fn xpad(&self, j: i64) -> i64 {
        if j <= self.p.d + self.p.n {
            self.p.x[(j - 1) as usize]
        } else {
            -j
        }
    }

    fn level(&mut self, k: i64) {
        if self.stop {
            return;
        }
        if k == self.p.n {
            self.count += 1;
            if !(self.f)(&self.levels) {
                self.stop = true;
            }
            return;
        }
        self.fill(k, 1);
    }

    fn fill(&mut self, k: i64, i: i64) {
        let n = self.p.n;
        let size = self.p.d + k;
        let ku = k as usize;
        let prev = &self.levels[ku - 1];
        let mut lo = self.xpad(i + n - k) + (n - k);
        let mut hi = self.xpad(i);
        if i <= size - 1 {
            lo = lo.max(prev[(i - 1) as usize]);
        }
        if i >= 2 {
            hi = hi.min(prev[(i - 2) as usize] - 1);
            hi = hi.min(self.levels[ku][(i - 2) as usize] - 1);
        }
        for v in lo..=hi {
            if self.stop {
                return;
            }
            self.levels[ku][(i - 1) as usize] = v;
            if i == size {
                self.level(k + 1);
            } else {
                self.fill(k, i + 1);
            }
        }
    }
}

/// Calls `f` on every tiling until it returns `false`; returns the number visited.
pub fn for_each_tiling<F: FnMut(&[Vec<i64>]) -> bool>(p: &PolygonData, f: F) -> u64 {
    let mut levels: Vec<Vec<i64>> = (0..=p.n).map(|k| vec![0; (p.d + k) as usize]).collect();
    levels[0] = p.y_cut().to_vec();
    levels[p.n as usize] = p.x.clone();
    let mut w = Walker { p, levels, f, count: 0, stop: false };
    w.level(1);
    w.count
}

pub fn enumerate_tilings(p: &PolygonData, cap: usize) -> Result<Vec<Tiling>> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_tiling(p, |lv| {
        if out.len() >= cap {
            over = true;
            return false;
        }
        out.push(Tiling { levels: lv.to_vec() });
        true
    });
    if over {
        return Err(Error::CapExceeded(cap));
    }
    Ok(out)
}

/// `(lambda, mu)` with `nu_i = x_i + i`.
pub fn lambda_mu(p: &PolygonData) -> (Vec<i64>, Vec<i64>) {
    let lam = p.x.iter().enumerate().map(|(i, v)| v + i as i64 + 1).collect();
    let mu = p.y.iter().enumerate().map(|(i, v)| v + i as i64 + 1).collect();
    (lam, mu)
}

/// Number of tilings from the Jacobi–Trudi determinant.
pub fn count_tilings(p: &PolygonData) -> Q {
    let (l, m) = lambda_mu(p);
    skew_schur_ones(&l, &m, p.n).expect("mu is contained in lambda for valid polygons")
}

pub fn nu_size(level: &[i64]) -> i64 {
    level.iter().enumerate().map(|(i, v)| v + i as i64 + 1).sum()
}

/// `sum_{i=1}^{N-1} |nu^(i)| - (N-1) |nu^(0)|`.
pub fn volume_exponent(t: &Tiling) -> i64 {
    let n = t.levels.len() as i64 - 1;
    let inner: i64 = (1..n as usize).map(|i| nu_size(&t.levels[i])).sum();
    inner - (n - 1) * nu_size(&t.levels[0])
}

/// Sum over all tilings of the unnormalised weight.
pub fn normalizer(p: &PolygonData, m: &Measure) -> Q {
    match m {
        Measure::Uniform => count_tilings(p),
        Measure::Q(qq) => {
            let (l, mu) = lambda_mu(p);
            skew_schur_q(&l, &mu, p.n, qq).expect("mu is contained in lambda for valid polygons")
        }
    }
}

fn raw_weight(t: &Tiling, m: &Measure) -> Q {
    match m {
        Measure::Uniform => Q::one(),
        Measure::Q(qq) => pow(qq, -volume_exponent(t)),
    }
}

pub fn weight(p: &PolygonData, t: &Tiling, m: &Measure) -> Q {
    raw_weight(t, m) / normalizer(p, m)
}

pub fn is_interlacing(p: &PolygonData, t: &Tiling) -> bool {
    if t.levels.len() as i64 != p.n + 1 || t.levels[0] != p.y_cut() || t.levels[p.n as usize] != p.x {
        return false;
    }
    for k in 1..=p.n as usize {
        let (a, b) = (&t.levels[k - 1], &t.levels[k]);
        if b.len() != a.len() + 1 {
            return false;
        }
        for i in 0..a.len() {
            if !(b[i + 1] < a[i] && a[i] <= b[i]) {
                return false;
            }
        }
    }
    true
}

/// Blue dots as `(k, x)`, meaning a dot at height `n = k - 1/2`.
pub fn blue_dots(p: &PolygonData, t: &Tiling) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let width = (p.m + p.d + p.n) as usize;
    let off = p.d + p.n;
    let mut occ_up = vec![false; width];
    let mut occ_dn = vec![false; width];
    for k in 1..=p.n {
        occ_up.iter_mut().for_each(|b| *b = false);
        occ_dn.iter_mut().for_each(|b| *b = false);
        for &v in &t.levels[k as usize] {
            occ_up[(v + off) as usize] = true;
        }
        for &v in &t.levels[k as usize - 1] {
            occ_dn[(v + off) as usize] = true;
        }
        let up = (-p.d - k..p.m).filter(|&v| !occ_up[(v + off) as usize]);
        let dn = (-p.d - k + 1..p.m).filter(|&v| !occ_dn[(v + off) as usize]);
        for (a, b) in up.zip(dn) {
            debug_assert!(b - a == 0 || b - a == 1);
            if a == b {
                out.push((k, a));
            }
        }
    }
    out
}

/// Blue dot `(k, x)` in oblique coordinates `(eta, xi)`.
pub fn blue_to_oblique(k: i64, x: i64) -> (i64, i64) {
    (k + x, k - 1 - x)
}

pub fn oblique_to_blue(eta: i64, xi: i64) -> Option<(i64, i64)> {
    if (eta + xi).rem_euclid(2) != 1 {
        return None;
    }
    let k = (eta + xi + 1) / 2;
    Some((k, eta - k))
}

/// Per-`eta` blue-dot counts of one tiling.
pub fn blue_line_counts(p: &PolygonData, t: &Tiling) -> HashMap<i64, usize> {
    let mut h = HashMap::new();
    for (k, x) in blue_dots(p, t) {
        *h.entry(k + x).or_insert(0) += 1;
    }
    h
}

/// All tilings with their exact probabilities.
pub struct Ensemble {
    pub tilings: Vec<Tiling>,
    pub weights: Vec<Q>,
}

impl Ensemble {
    pub fn new(p: &PolygonData, m: &Measure, cap: usize) -> Result<Self> {
        let tilings = enumerate_tilings(p, cap)?;
        let raw: Vec<Q> = tilings.iter().map(|t| raw_weight(t, m)).collect();
        let z = raw.iter().fold(Q::zero(), |a, b| a + b);
        let weights = raw.into_iter().map(|w| w / &z).collect();
        Ok(Ensemble { tilings, weights })
    }

    /// Probability that every `(k, x)` is a red dot.
    pub fn red_correlation(&self, pts: &[(i64, i64)]) -> Q {
        let mut acc = Q::zero();
        for (t, w) in self.tilings.iter().zip(&self.weights) {
            if pts.iter().all(|&(k, x)| t.levels[k as usize].contains(&x)) {
                acc += w;
            }
        }
        acc
    }

    /// Probability that every `(k, x)` carries a blue dot at height `k - 1/2`.
    pub fn blue_correlation(&self, p: &PolygonData, pts: &[(i64, i64)]) -> Q {
        let mut acc = Q::zero();
        for (t, w) in self.tilings.iter().zip(&self.weights) {
            let blues = blue_dots(p, t);
            if pts.iter().all(|pt| blues.contains(pt)) {
                acc += w;
            }
        }
        acc
    }
}

/// Uniform occupation counts of all 1-, 2- and 3-subsets of a point list.
pub struct SubsetCounts {
    pub total: u64,
    pub npts: usize,
    pub singles: Vec<u64>,
    pub pairs: Vec<u64>,
    pub triples: Vec<u64>,
}

impl SubsetCounts {
    pub fn single(&self, i: usize) -> Q {
        q(self.singles[i] as i64) / q(self.total as i64)
    }

    pub fn pair(&self, i: usize, j: usize) -> Q {
        q(self.pairs[i * self.npts + j] as i64) / q(self.total as i64)
    }

    pub fn triple(&self, i: usize, j: usize, k: usize) -> Q {
        let n = self.npts;
        q(self.triples[(i * n + j) * n + k] as i64) / q(self.total as i64)
    }
}

/// Counts red-dot occupation of `pts` over all tilings; triples only when `triples` is set.
pub fn subset_counts(p: &PolygonData, pts: &[(i64, i64)], triples: bool) -> SubsetCounts {
    let n = pts.len();
    let index: HashMap<(i64, i64), usize> = pts.iter().enumerate().map(|(i, &pt)| (pt, i)).collect();
    let mut c = SubsetCounts {
        total: 0,
        npts: n,
        singles: vec![0; n],
        pairs: vec![0; n * n],
        triples: if triples { vec![0; n * n * n] } else { vec![] },
    };
    let mut occ = Vec::new();
    for_each_tiling(p, |lv| {
        occ.clear();
        for (k, level) in lv.iter().enumerate() {
            for &x in level {
                if let Some(&i) = index.get(&(k as i64, x)) {
                    occ.push(i);
                }
            }
        }
        occ.sort_unstable();
        c.total += 1;
        for (a, &i) in occ.iter().enumerate() {
            c.singles[i] += 1;
            for (b, &j) in occ.iter().enumerate().skip(a + 1) {
                c.pairs[i * n + j] += 1;
                if triples {
                    for &k in &occ[b + 1..] {
                        c.triples[(i * n + j) * n + k] += 1;
                    }
                }
            }
        }
        true
    });
    c
}

/// Semistandard skew tableau of shape `lambda / mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewTableau {
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    /// Row `i` lists the entries in columns `mu_i + 1 ..= lambda_i`.
    pub rows: Vec<Vec<i64>>,
}

fn nu(t: &Tiling, k: usize, i: usize) -> i64 {
    t.levels[k].get(i).map_or(0, |v| v + i as i64 + 1)
}

pub fn to_skew_tableau(p: &PolygonData, t: &Tiling) -> SkewTableau {
    let (lambda, mu) = lambda_mu(p);
    let rows = (0..lambda.len())
        .map(|i| {
            (mu[i] + 1..=lambda[i])
                .map(|col| (1..=p.n as usize).find(|&k| nu(t, k, i) >= col).unwrap() as i64)
                .collect()
        })
        .collect();
    SkewTableau { lambda, mu, rows }
}

pub fn from_skew_tableau(p: &PolygonData, tab: &SkewTableau) -> Tiling {
    let levels = (0..=p.n)
        .map(|k| {
            (0..(p.d + k) as usize)
                .map(|i| {
                    let filled = tab.rows[i].iter().filter(|&&e| e <= k).count() as i64;
                    tab.mu[i] + filled - i as i64 - 1
                })
                .collect()
        })
        .collect();
    Tiling { levels }
}

/// Rows weakly increase and columns strictly increase.
pub fn is_semistandard(tab: &SkewTableau) -> bool {
    let entry = |i: usize, col: i64| -> Option<i64> {
        if col > tab.mu[i] && col <= tab.lambda[i] {
            Some(tab.rows[i][(col - tab.mu[i] - 1) as usize])
        } else {
            None
        }
    };
    for i in 0..tab.rows.len() {
        if tab.rows[i].windows(2).any(|w| w[0] > w[1]) {
            return false;
        }
        if i + 1 < tab.rows.len() {
            for col in tab.mu[i + 1] + 1..=tab.lambda[i + 1] {
                if let (Some(a), Some(b)) = (entry(i, col), entry(i + 1, col)) {
                    if a >= b {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_polygon, PolygonSpec};

    #[test]
    fn small_hexagons() {
        let p = build_polygon(&PolygonSpec::hexagon(1, 1, 1)).unwrap();
        assert_eq!(enumerate_tilings(&p, 100).unwrap().len(), 2);
        let p = build_polygon(&PolygonSpec::hexagon(2, 2, 2)).unwrap();
        assert_eq!(enumerate_tilings(&p, 100).unwrap().len(), 20);
        assert_eq!(enumerate_tilings(&p, 10), Err(Error::CapExceeded(10)));
    }

    #[test]
    fn oblique_blue_roundtrip() {
        for k in 1..5 {
            for x in -4..4 {
                let (e, xi) = blue_to_oblique(k, x);
                assert_eq!(oblique_to_blue(e, xi), Some((k, x)));
            }
        }
        assert_eq!(oblique_to_blue(2, 2), None);
    }
}
