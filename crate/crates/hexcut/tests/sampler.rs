use std::collections::HashSet;

use hexcut::enumeration::{enumerate_tilings, is_interlacing, Measure};
use hexcut::geometry::{build_polygon, PolygonData, PolygonSpec};
use hexcut::num::qf;
use hexcut::sampler::{default_steps, minimal_tiling, movable_dots, sample, sample_many, stats, ChainState};
use proptest::prelude::*;

fn poly(spec: PolygonSpec) -> PolygonData {
    build_polygon(&spec).unwrap()
}

fn polygons() -> Vec<PolygonData> {
    vec![
        poly(PolygonSpec::hexagon(2, 2, 2)),
        poly(PolygonSpec::two_cut(1, 2, 2, 2, 2, 2, 2)),
        poly(PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7)),
    ]
}

#[test]
fn same_seed_same_trajectory() {
    let p = poly(PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7));
    let m = Measure::Q(qf(2, 3));
    let mut a = ChainState::new(&p, 99);
    let mut b = ChainState::new(&p, 99);
    for _ in 0..2000 {
        a.step(&p, &m, 2.0 / 3.0);
        b.step(&p, &m, 2.0 / 3.0);
        assert_eq!(a.tiling, b.tiling);
    }
    assert_eq!(a.accepted, b.accepted);
    assert_ne!(sample(&p, &m, 2000, 1), sample(&p, &m, 2000, 2));
}

#[test]
fn minimal_is_pointwise_minimum() {
    for p in &polygons()[..2] {
        let ts = enumerate_tilings(p, 10_000).unwrap();
        let min = minimal_tiling(p);
        assert!(ts.contains(&min));
        for t in &ts {
            for (a, b) in t.levels.iter().zip(&min.levels) {
                assert!(a.iter().zip(b).all(|(x, y)| x >= y));
            }
        }
    }
}

#[test]
fn two_tiling_hexagon_is_balanced() {
    let p = poly(PolygonSpec::hexagon(1, 1, 1));
    let ts = enumerate_tilings(&p, 10).unwrap();
    assert_eq!(ts.len(), 2);
    let n = 10_000;
    let samples = sample_many(&p, &Measure::Uniform, 100, 10, n, 5);
    let hits = samples.iter().filter(|t| **t == ts[0]).count() as f64;
    let sigma = (0.25 / n as f64).sqrt();
    assert!((hits / n as f64 - 0.5).abs() < 3.0 * sigma, "frequency {}", hits / n as f64);
}

#[test]
fn chain_visits_every_tiling() {
    for p in &polygons()[..2] {
        let all: HashSet<_> = enumerate_tilings(p, 10_000).unwrap().into_iter().collect();
        let mut s = ChainState::new(p, 3);
        let mut seen = HashSet::new();
        for _ in 0..200_000 {
            s.step(p, &Measure::Uniform, 1.0);
            seen.insert(s.tiling.clone());
        }
        assert_eq!(seen, all);
    }
}

#[test]
fn medium_strip_holds_on_samples() {
    let p = poly(PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7));
    let samples = sample_many(&p, &Measure::Uniform, 5_000, 500, 40, 8);
    let st = stats(&p, &samples);
    assert_eq!(st.strip, Some((4, 6)));
    assert!(st.strip_ok);
    let want: Vec<usize> = (0..=p.n).map(|k| (p.d + k) as usize).collect();
    assert_eq!(st.red_per_level, want);
    assert!(st.blue_per_eta.values().all(|(lo, hi)| lo == hi));
}

#[test]
fn step_budget() {
    let p = poly(PolygonSpec::hexagon(2, 2, 2));
    assert_eq!(movable_dots(&p), 1 + 2 + 3);
    assert_eq!(default_steps(&p), 20 * 36);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn states_stay_interlacing(seed in any::<u64>(), which in 0usize..3, qn in 1i64..4) {
        let p = &polygons()[which];
        let m = Measure::Q(qf(qn, 4));
        let mut s = ChainState::new(p, seed);
        for _ in 0..1500 {
            s.step(p, &m, qn as f64 / 4.0);
            prop_assert!(is_interlacing(p, &s.tiling));
        }
    }
}
