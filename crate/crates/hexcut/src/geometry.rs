//! Cut hexagons: parsing, validation and the derived integer data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{q, qf, Q};

/// Polygon given by its cut and gap lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonSpec {
    pub lower_cuts: Vec<i64>,
    pub lower_gaps: Vec<i64>,
    pub upper_cuts: Vec<i64>,
    pub upper_gaps: Vec<i64>,
    pub b0: i64,
    pub bu: i64,
    pub d0: i64,
}

impl PolygonSpec {
    /// Two cuts of equal size `d` on opposite edges.
    pub fn two_cut(d: i64, n1: i64, n2: i64, m1: i64, m2: i64, b: i64, c: i64) -> Self {
        PolygonSpec {
            lower_cuts: vec![d],
            lower_gaps: vec![m1, m2],
            upper_cuts: vec![d],
            upper_gaps: vec![n1, n2],
            b0: b,
            bu: c,
            d0: c,
        }
    }

    /// Plain hexagon with sides `a, b, c`.
    pub fn hexagon(a: i64, b: i64, c: i64) -> Self {
        PolygonSpec {
            lower_cuts: vec![],
            lower_gaps: vec![a],
            upper_cuts: vec![],
            upper_gaps: vec![a],
            b0: b,
            bu: c,
            d0: c,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialises")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoCutData {
    pub rho: i64,
    pub sigma: i64,
    pub b: i64,
    pub c: i64,
    /// Whether the strict two-cut inequality chain holds; advisory only.
    pub chain_holds: bool,
}

/// Derived data. Every list is sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonData {
    pub spec: PolygonSpec,
    pub n: i64,
    pub d: i64,
    /// Total gap length, so level `k` spans `-d-k ..= m-1`.
    pub m: i64,
    /// `y_1 .. y_{d+N}`
    pub y: Vec<i64>,
    /// `x_1 .. x_{d+N}`
    pub x: Vec<i64>,
    pub left: Vec<i64>,
    pub center: Vec<i64>,
    pub right: Vec<i64>,
    pub gap: Vec<i64>,
    /// Roots of `P`, the window `y_1-N+1 .. y_d-1`.
    pub p_roots: Vec<i64>,
    pub upper_cut_x: Vec<i64>,
    pub r: i64,
    pub g: i64,
    pub two_cut: Option<TwoCutData>,
}

fn spec_err(msg: String) -> Error {
    Error::Spec(msg)
}

pub fn build_polygon(spec: &PolygonSpec) -> Result<PolygonData> {
    let s = spec;
    if s.lower_gaps.len() != s.lower_cuts.len() + 1 {
        return Err(spec_err(format!(
            "lower_gaps must have one more entry than lower_cuts ({} vs {})",
            s.lower_gaps.len(),
            s.lower_cuts.len()
        )));
    }
    if s.upper_gaps.len() != s.upper_cuts.len() + 1 {
        return Err(spec_err(format!(
            "upper_gaps must have one more entry than upper_cuts ({} vs {})",
            s.upper_gaps.len(),
            s.upper_cuts.len()
        )));
    }
    for (name, v) in [
        ("lower_cuts", &s.lower_cuts),
        ("lower_gaps", &s.lower_gaps),
        ("upper_cuts", &s.upper_cuts),
        ("upper_gaps", &s.upper_gaps),
    ] {
        if let Some(bad) = v.iter().find(|&&a| a <= 0) {
            return Err(spec_err(format!("{name} entries must be positive, found {bad}")));
        }
    }
    for (name, v) in [("b0", s.b0), ("bu", s.bu), ("d0", s.d0)] {
        if v < 0 {
            return Err(spec_err(format!("{name} must be nonnegative, found {v}")));
        }
    }
    let d: i64 = s.lower_cuts.iter().sum();
    let n = s.b0 + s.d0;
    if n < 1 {
        return Err(spec_err("N = b0 + d0 must be at least 1".into()));
    }
    let m: i64 = s.lower_gaps.iter().sum();
    let mu: i64 = s.upper_gaps.iter().sum();
    if m != mu {
        return Err(spec_err(format!("sum of lower_gaps ({m}) != sum of upper_gaps ({mu})")));
    }
    let bsum = s.b0 + s.upper_cuts.iter().sum::<i64>() + s.bu;
    if bsum != d + n {
        return Err(spec_err(format!("b0 + sum(upper_cuts) + bu = {bsum} != d + N = {}", d + n)));
    }

    let mut y = Vec::new();
    let mut pos = -d;
    for (i, gap) in s.lower_gaps.iter().enumerate() {
        pos += gap;
        if let Some(&cut) = s.lower_cuts.get(i) {
            y.extend(pos..pos + cut);
            pos += cut;
        }
    }
    y.sort_unstable_by(|a, b| b.cmp(a));
    y.extend((1..=n).map(|j| -d - j));

    let mut x: Vec<i64> = (-d - n..-d - n + s.b0).collect();
    let mut upper_cut_x = Vec::new();
    let mut pos = -d - n + s.b0;
    for (i, gap) in s.upper_gaps.iter().enumerate() {
        pos += gap;
        if let Some(&cut) = s.upper_cuts.get(i) {
            upper_cut_x.extend(pos..pos + cut);
            pos += cut;
        }
    }
    x.extend(upper_cut_x.iter().copied());
    x.extend(pos..pos + s.bu);
    x.sort_unstable_by(|a, b| b.cmp(a));
    upper_cut_x.sort_unstable_by(|a, b| b.cmp(a));

    for i in 0..(d + n) as usize {
        if x[i] < y[i] {
            return Err(spec_err(format!("x_{} = {} < y_{} = {}", i + 1, x[i], i + 1, y[i])));
        }
    }

    let (left, center, right, gap, p_roots) = if d > 0 {
        let y1 = y[0];
        let yd = y[d as usize - 1];
        if y1 - yd > n - 1 {
            return Err(spec_err(format!("y_1 - y_d = {} > N - 1 = {}", y1 - yd, n - 1)));
        }
        if upper_cut_x.contains(&yd) {
            return Err(spec_err(format!("y_d = {yd} lies under an upper cut")));
        }
        let lo = y1 - n + 1;
        let left: Vec<i64> = x.iter().copied().filter(|&v| v < lo).collect();
        let right: Vec<i64> = x.iter().copied().filter(|&v| v >= yd).collect();
        let center: Vec<i64> = x.iter().copied().filter(|&v| v >= lo && v < yd).collect();
        let p_roots: Vec<i64> = (lo..yd).rev().collect();
        let gap: Vec<i64> = p_roots.iter().copied().filter(|v| !center.contains(v)).collect();
        (left, center, right, gap, p_roots)
    } else {
        (vec![], vec![], x.clone(), vec![], vec![])
    };
    let r = left.len() as i64 - d;
    if r < 0 {
        return Err(spec_err(format!("r = |L| - d = {r} < 0")));
    }
    let g = if d > 0 { y[0] - y[d as usize - 1] - d + 1 } else { 0 };

    let two_cut = if s.lower_cuts.len() == 1
        && s.upper_cuts.len() == 1
        && s.upper_cuts[0] == s.lower_cuts[0]
        && s.bu == s.d0
    {
        let (n1, n2) = (s.upper_gaps[0], s.upper_gaps[1]);
        let (m1, m2) = (s.lower_gaps[0], s.lower_gaps[1]);
        let (b, c) = (s.b0, s.bu);
        let rho = n1 - m1 + b - d;
        let sigma = m1 - n1 + c - d;
        if rho < 0 {
            return Err(spec_err(format!("rho = n1 - m1 + b - d = {rho} < 0")));
        }
        if sigma < 0 {
            return Err(spec_err(format!("sigma = m1 - n1 + c - d = {sigma} < 0")));
        }
        let chain_holds = (-n2).max(-m1) < d - b
            && d - b <= m2 - n2
            && m2 - n2 <= c - d
            && c - d < m2.min(n1);
        Some(TwoCutData { rho, sigma, b, c, chain_holds })
    } else {
        None
    };

    Ok(PolygonData {
        spec: s.clone(),
        n,
        d,
        m,
        y,
        x,
        left,
        center,
        right,
        gap,
        p_roots,
        upper_cut_x,
        r,
        g,
        two_cut,
    })
}

impl PolygonData {
    pub fn y_cut(&self) -> &[i64] {
        &self.y[..self.d as usize]
    }

    pub fn width(&self) -> i64 {
        self.d + self.n
    }

    /// Leftmost admissible position on level `k`.
    pub fn level_min(&self, k: i64) -> i64 {
        -self.d - k
    }

    pub fn in_domain(&self, k: i64, x: i64) -> bool {
        (0..=self.n).contains(&k) && x >= self.level_min(k) && x < self.m
    }

    /// All lattice points `(k, x)` with `k` in `levels`.
    pub fn points(&self, levels: std::ops::Range<i64>) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for k in levels {
            for x in self.level_min(k)..self.m {
                out.push((k, x));
            }
        }
        out
    }

    pub fn p_eval(&self, z: &Q) -> Q {
        self.p_roots.iter().fold(q(1), |acc, &r| acc * (z - q(r)))
    }
}

/// A point of the half-integer lattice, `n` and `x` possibly half-integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub n: Q,
    pub x: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObliquePoint {
    pub eta: Q,
    pub xi: Q,
}

pub fn to_oblique(p: &LatticePoint) -> ObliquePoint {
    let h = qf(1, 2);
    ObliquePoint { eta: &p.n + &p.x + &h, xi: &p.n - &p.x - &h }
}

pub fn from_oblique(o: &ObliquePoint) -> LatticePoint {
    let h = qf(1, 2);
    LatticePoint { n: (&o.eta + &o.xi) * &h, x: (&o.eta - &o.xi) * &h - &h }
}
