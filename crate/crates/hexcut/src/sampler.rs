//! Metropolis chain on red-dot arrays.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumeration::{blue_line_counts, Measure, Tiling};
use crate::geometry::PolygonData;
use crate::lkernel::rho_strip;

/// Name of the generator, part of the reproducibility contract.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3)";

pub struct ChainState {
    pub tiling: Tiling,
    pub rng: ChaCha8Rng,
    pub steps: u64,
    pub accepted: u64,
}

/// The pointwise-minimal interlacing array.
pub fn minimal_tiling(p: &PolygonData) -> Tiling {
    let (d, n) = (p.d, p.n);
    let mut levels: Vec<Vec<i64>> = (0..=n)
        .map(|k| {
            let len = d + k;
            (0..len).map(|i| p.level_min(k) + (len - 1 - i)).collect()
        })
        .collect();
    levels[0] = p.y_cut().to_vec();
    levels[n as usize] = p.x.clone();
    // relax lower bounds from the top level downwards until stable
    loop {
        let mut changed = false;
        for k in (1..n as usize).rev() {
            for i in 0..levels[k].len() {
                let mut lo = levels[k][i];
                lo = lo.max(levels[k + 1][i + 1] + 1);
                if i < levels[k - 1].len() {
                    lo = lo.max(levels[k - 1][i]);
                }
                if lo != levels[k][i] {
                    levels[k][i] = lo;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Tiling { levels }
}

/// Whether moving dot `i` on level `k` to `v` keeps the array interlacing.
fn can_move(levels: &[Vec<i64>], k: usize, i: usize, v: i64) -> bool {
    let (up, dn) = (&levels[k + 1], &levels[k - 1]);
    if !(up[i + 1] < v && v <= up[i]) {
        return false;
    }
    if i < dn.len() && dn[i] > v {
        return false;
    }
    if i >= 1 && v >= dn[i - 1] {
        return false;
    }
    true
}

impl ChainState {
    pub fn new(p: &PolygonData, seed: u64) -> Self {
        ChainState { tiling: minimal_tiling(p), rng: ChaCha8Rng::seed_from_u64(seed), steps: 0, accepted: 0 }
    }

    /// One proposal: uniform level, dot and direction; Metropolis acceptance.
    pub fn step(&mut self, p: &PolygonData, m: &Measure, qf: f64) {
        self.steps += 1;
        let n = p.n as usize;
        if n < 2 {
            return;
        }
        let k = self.rng.gen_range(1..n);
        let i = self.rng.gen_range(0..self.tiling.levels[k].len());
        let dir: i64 = if self.rng.gen::<bool>() { 1 } else { -1 };
        let v = self.tiling.levels[k][i] + dir;
        // draw the acceptance variate unconditionally so trajectories depend only on the seed
        let u: f64 = self.rng.gen();
        if !can_move(&self.tiling.levels, k, i, v) {
            return;
        }
        let accept = match m {
            Measure::Uniform => true,
            // weight q^{-|nu|}: a +1 move multiplies it by 1/q
            Measure::Q(_) => u < qf.powi(-dir as i32).min(1.0),
        };
        if accept {
            self.tiling.levels[k][i] = v;
            self.accepted += 1;
        }
    }

    pub fn run(&mut self, p: &PolygonData, m: &Measure, steps: u64) {
        let qf = measure_q(m);
        for _ in 0..steps {
            self.step(p, m, qf);
        }
    }
}

fn measure_q(m: &Measure) -> f64 {
    match m {
        Measure::Uniform => 1.0,
        Measure::Q(q) => q.to_f64().expect("q converts to f64"),
    }
}

/// Dots on levels `1 .. N-1`.
pub fn movable_dots(p: &PolygonData) -> u64 {
    (1..p.n).map(|k| (p.d + k) as u64).sum()
}

/// Heuristic budget `20 * movable^2`; no mixing guarantee.
pub fn default_steps(p: &PolygonData) -> u64 {
    20 * movable_dots(p).pow(2)
}

pub fn sample(p: &PolygonData, m: &Measure, steps: u64, seed: u64) -> Tiling {
    let mut s = ChainState::new(p, seed);
    s.run(p, m, steps);
    s.tiling
}

/// Draws `count` states spaced `thin` steps apart from one chain.
pub fn sample_many(p: &PolygonData, m: &Measure, burn_in: u64, thin: u64, count: usize, seed: u64) -> Vec<Tiling> {
    let mut s = ChainState::new(p, seed);
    s.run(p, m, burn_in);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        s.run(p, m, thin);
        out.push(s.tiling.clone());
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    pub samples: usize,
    /// Red dots per level, identical for every sample.
    pub red_per_level: Vec<usize>,
    /// Blue dots per `eta`-line as `(min, max)` over samples.
    pub blue_per_eta: BTreeMap<i64, (usize, usize)>,
    /// Strip lines and whether each sample has exactly `r` blue dots on them.
    pub strip: Option<(i64, i64)>,
    pub strip_ok: bool,
}

pub fn stats(p: &PolygonData, samples: &[Tiling]) -> Stats {
    let mut st = Stats { samples: samples.len(), strip_ok: true, ..Default::default() };
    st.strip = rho_strip(p).map(|r| (*r.start(), *r.end()));
    for (si, t) in samples.iter().enumerate() {
        let red: Vec<usize> = t.levels.iter().map(Vec::len).collect();
        if si == 0 {
            st.red_per_level = red;
        }
        let counts = blue_line_counts(p, t);
        let lo = -p.d - p.n;
        let hi = p.m + p.n;
        for eta in lo..=hi {
            let c = *counts.get(&eta).unwrap_or(&0);
            let e = st.blue_per_eta.entry(eta).or_insert((c, c));
            e.0 = e.0.min(c);
            e.1 = e.1.max(c);
        }
        if let Some((a, b)) = st.strip {
            if (a..=b).any(|eta| *counts.get(&eta).unwrap_or(&0) as i64 != p.r) {
                st.strip_ok = false;
            }
        }
    }
    st
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::is_interlacing;
    use crate::geometry::{build_polygon, PolygonSpec};

    #[test]
    fn minimal_is_valid() {
        for spec in [PolygonSpec::hexagon(2, 3, 2), PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7)] {
            let p = build_polygon(&spec).unwrap();
            assert!(is_interlacing(&p, &minimal_tiling(&p)));
        }
    }

    #[test]
    fn zero_steps_is_minimal() {
        let p = build_polygon(&PolygonSpec::hexagon(2, 2, 2)).unwrap();
        assert_eq!(sample(&p, &Measure::Uniform, 0, 7), minimal_tiling(&p));
    }
}
