use std::collections::HashSet;

use hexcut::enumeration::{
    blue_line_counts, count_tilings, enumerate_tilings, from_skew_tableau, is_interlacing, is_semistandard,
    lambda_mu, subset_counts, to_skew_tableau, weight, Ensemble, Measure, Tiling,
};
use hexcut::geometry::{build_polygon, PolygonData, PolygonSpec};
use hexcut::num::{q, qf, Q};
use hexcut::sampler::minimal_tiling;
use hexcut::symfunc::skew_schur_ones;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn poly(spec: PolygonSpec) -> PolygonData {
    build_polygon(&spec).unwrap()
}

/// MacMahon box formula `prod (i+j+k-1)/(i+j+k-2)`.
fn macmahon(a: i64, b: i64, c: i64) -> Q {
    let mut v = Q::one();
    for i in 1..=a {
        for j in 1..=b {
            for k in 1..=c {
                v *= qf(i + j + k - 1, i + j + k - 2);
            }
        }
    }
    v
}

fn small_polygons() -> Vec<PolygonData> {
    vec![
        poly(PolygonSpec::hexagon(1, 1, 1)),
        poly(PolygonSpec::hexagon(2, 2, 2)),
        poly(PolygonSpec::hexagon(2, 3, 1)),
        poly(PolygonSpec::two_cut(1, 2, 2, 2, 2, 2, 2)),
        poly(PolygonSpec::two_cut(1, 2, 1, 1, 2, 2, 2)),
    ]
}

#[test]
fn hexagon_counts_match_macmahon() {
    for (a, b, c) in [(1, 1, 1), (2, 2, 2), (2, 3, 1), (3, 2, 2)] {
        let p = poly(PolygonSpec::hexagon(a, b, c));
        let n = enumerate_tilings(&p, 10_000).unwrap().len();
        assert_eq!(q(n as i64), macmahon(a, b, c), "({a},{b},{c})");
        assert_eq!(count_tilings(&p), macmahon(a, b, c));
    }
    assert_eq!(macmahon(1, 1, 1), q(2));
    assert_eq!(macmahon(2, 2, 2), q(20));
}

#[test]
fn count_is_skew_schur() {
    for p in small_polygons() {
        let (l, m) = lambda_mu(&p);
        let n = enumerate_tilings(&p, 10_000).unwrap().len();
        assert_eq!(skew_schur_ones(&l, &m, p.n).unwrap(), q(n as i64));
    }
}

#[test]
fn weights() {
    let p = poly(PolygonSpec::hexagon(2, 2, 2));
    let ts = enumerate_tilings(&p, 100).unwrap();
    for t in &ts {
        assert_eq!(weight(&p, t, &Measure::Uniform), qf(1, ts.len() as i64));
    }
    let half = Measure::Q(qf(1, 2));
    let total = ts.iter().fold(Q::zero(), |a, t| a + weight(&p, t, &half));
    assert_eq!(total, q(1));
    // c = 0 leaves one tiling
    let one = poly(PolygonSpec::hexagon(2, 1, 0));
    let ts = enumerate_tilings(&one, 10).unwrap();
    assert_eq!(ts.len(), 1);
    assert_eq!(weight(&one, &ts[0], &half), q(1));
}

#[test]
fn correlation_examples() {
    let p = poly(PolygonSpec::two_cut(1, 2, 2, 2, 2, 2, 2));
    let ens = Ensemble::new(&p, &Measure::Uniform, 10_000).unwrap();
    assert_eq!(ens.red_correlation(&[]), q(1));
    // lower-cut dots on line 0 are fixed
    for &y in p.y_cut() {
        assert_eq!(ens.red_correlation(&[(0, y)]), q(1));
    }
    let h = poly(PolygonSpec::hexagon(2, 2, 2));
    let ts = enumerate_tilings(&h, 100).unwrap();
    let ens = Ensemble::new(&h, &Measure::Uniform, 100).unwrap();
    for (k, x) in h.points(1..h.n) {
        let hits = ts.iter().filter(|t| t.levels[k as usize].contains(&x)).count();
        assert_eq!(ens.red_correlation(&[(k, x)]), qf(hits as i64, ts.len() as i64));
    }
}

#[test]
fn subset_counts_agree_with_ensemble() {
    let p = poly(PolygonSpec::hexagon(2, 2, 2));
    let ens = Ensemble::new(&p, &Measure::Uniform, 100).unwrap();
    let pts = p.points(1..p.n);
    let sc = subset_counts(&p, &pts, true);
    for i in 0..pts.len() {
        assert_eq!(sc.single(i), ens.red_correlation(&[pts[i]]));
        for j in i + 1..pts.len() {
            assert_eq!(sc.pair(i, j), ens.red_correlation(&[pts[i], pts[j]]));
            for k in j + 1..pts.len() {
                assert_eq!(sc.triple(i, j, k), ens.red_correlation(&[pts[i], pts[j], pts[k]]));
            }
        }
    }
}

#[test]
fn red_count_per_level() {
    for p in small_polygons() {
        for t in enumerate_tilings(&p, 10_000).unwrap() {
            for (k, lv) in t.levels.iter().enumerate() {
                assert_eq!(lv.len() as i64, p.d + k as i64);
            }
        }
    }
}

#[test]
fn blue_counts_do_not_depend_on_tiling() {
    for p in small_polygons() {
        let ts = enumerate_tilings(&p, 10_000).unwrap();
        let first = blue_line_counts(&p, &ts[0]);
        for t in &ts[1..] {
            assert_eq!(blue_line_counts(&p, t), first);
        }
        for eta in first.keys() {
            assert!((-p.d - p.n..=p.m + p.n).contains(eta));
        }
    }
}

/// Piecewise linear profile through the anchor points of the two-cut table.
fn table_profile(p: &PolygonData, eta: i64) -> i64 {
    let s = &p.spec;
    let (d, n1, n2, m1, b) = (p.d, s.upper_gaps[0], s.upper_gaps[1], s.lower_gaps[0], s.b0);
    let r = b - d;
    let rho = n1 - m1 + b - d;
    let anchors = [
        (-d, 0),
        (b - d, b),
        (m1 - d, b),
        (m1, r),
        (m1 + rho, r),
        (n1 + b, b),
        (n1 + n2, b),
        (n1 + n2 + b, 0),
    ];
    if eta < anchors[0].0 || eta > anchors[7].0 {
        return 0;
    }
    let w = anchors.windows(2).find(|w| w[0].0 <= eta && eta <= w[1].0).unwrap();
    let ((e0, v0), (e1, v1)) = (w[0], w[1]);
    if e0 == e1 {
        return v0;
    }
    v0 + (v1 - v0) * (eta - e0) / (e1 - e0)
}

#[test]
fn medium_blue_profile_matches_table() {
    let p = poly(PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7));
    let counts = blue_line_counts(&p, &minimal_tiling(&p));
    for eta in -p.d - p.n - 2..=p.m + p.n + 2 {
        let got = *counts.get(&eta).unwrap_or(&0) as i64;
        assert_eq!(got, table_profile(&p, eta), "eta = {eta}");
    }
}

#[test]
fn small_two_cut_strip_has_r_dots() {
    let p = poly(PolygonSpec::two_cut(1, 2, 2, 2, 2, 2, 2));
    let m1 = p.spec.lower_gaps[0];
    let rho = p.two_cut.as_ref().unwrap().rho;
    for t in enumerate_tilings(&p, 10_000).unwrap() {
        let c = blue_line_counts(&p, &t);
        for eta in m1..=m1 + rho {
            assert_eq!(*c.get(&eta).unwrap_or(&0) as i64, p.r);
        }
    }
}

#[test]
fn skew_tableau_roundtrip() {
    for p in small_polygons() {
        for t in enumerate_tilings(&p, 10_000).unwrap() {
            let tab = to_skew_tableau(&p, &t);
            assert!(is_semistandard(&tab));
            assert_eq!(from_skew_tableau(&p, &tab), t);
        }
    }
    // medium has too many tilings to enumerate; use the minimal one
    let p = poly(PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7));
    let t = minimal_tiling(&p);
    let tab = to_skew_tableau(&p, &t);
    let (l, m) = lambda_mu(&p);
    assert_eq!((tab.lambda.clone(), tab.mu.clone()), (l.clone(), m.clone()));
    let boxes: i64 = l.iter().zip(&m).map(|(a, b)| a - b).sum();
    assert_eq!(tab.rows.iter().map(|r| r.len() as i64).sum::<i64>(), boxes);
    assert!(tab.rows.iter().flatten().all(|&e| (1..=p.n).contains(&e)));
    assert!(is_semistandard(&tab));
    assert_eq!(from_skew_tableau(&p, &tab), t);
}

#[test]
fn single_tiling_has_empty_tableau() {
    let p = poly(PolygonSpec::hexagon(2, 1, 0));
    let t = &enumerate_tilings(&p, 10).unwrap()[0];
    let tab = to_skew_tableau(&p, t);
    assert_eq!(tab.lambda, tab.mu);
    assert!(tab.rows.iter().all(Vec::is_empty));
}

/// Horizontal-strip test on `nu_i = x_i + i` between consecutive levels.
fn horizontal_strips(p: &PolygonData, t: &Tiling) -> bool {
    let nu = |k: usize, i: usize| t.levels[k].get(i).map(|v| v + i as i64 + 1);
    for k in 1..=p.n as usize {
        if t.levels[k].len() != t.levels[k - 1].len() + 1 {
            return false;
        }
        for i in 0..t.levels[k - 1].len() {
            let (a, up, up_next) = (nu(k - 1, i).unwrap(), nu(k, i).unwrap(), nu(k, i + 1).unwrap());
            if !(up_next <= a && a <= up) {
                return false;
            }
        }
    }
    true
}

fn perturbed() -> impl Strategy<Value = (usize, Tiling)> {
    let polys = small_polygons();
    let all: Vec<Vec<Tiling>> = polys.iter().map(|p| enumerate_tilings(p, 10_000).unwrap()).collect();
    (0..polys.len(), any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<prop::sample::Index>(), -2i64..3)
        .prop_map(move |(pi, ti, di, li, delta)| {
            let p = &polys[pi];
            let mut t = ti.get(&all[pi]).clone();
            if p.n >= 2 {
                let k = 1 + li.index(p.n as usize - 1);
                let i = di.index(t.levels[k].len());
                t.levels[k][i] += delta;
            }
            (pi, t)
        })
}

proptest! {
    #[test]
    fn interlacing_iff_horizontal_strips((pi, t) in perturbed()) {
        let p = &small_polygons()[pi];
        prop_assert_eq!(is_interlacing(p, &t), horizontal_strips(p, &t));
    }
}

#[test]
fn enumeration_has_no_duplicates() {
    for p in small_polygons() {
        let ts = enumerate_tilings(&p, 10_000).unwrap();
        let set: HashSet<&Tiling> = ts.iter().collect();
        assert_eq!(set.len(), ts.len());
        assert!(ts.iter().all(|t| is_interlacing(&p, t)));
    }
}

#[test]
fn cap_is_enforced() {
    let p = poly(PolygonSpec::hexagon(3, 3, 3));
    assert!(matches!(enumerate_tilings(&p, 10), Err(hexcut::Error::CapExceeded(10))));
}
