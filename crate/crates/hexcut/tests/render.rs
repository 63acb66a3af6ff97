use std::collections::BTreeMap;

use hexcut::enumeration::{enumerate_tilings, Measure};
use hexcut::geometry::{build_polygon, PolygonData, PolygonSpec};
use hexcut::render::{render_svg, tiles, tiling_from_csv, tiling_to_csv, RenderStyle, TileKind};
use hexcut::sampler::sample;
use proptest::prelude::*;

fn poly(spec: PolygonSpec) -> PolygonData {
    build_polygon(&spec).unwrap()
}

/// Strict interior test for a convex quadrilateral, either orientation.
fn inside(v: &[(f64, f64); 4], pt: (f64, f64)) -> bool {
    let cross: Vec<f64> = (0..4)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % 4]);
            (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0)
        })
        .collect();
    cross.iter().all(|&c| c > 1e-9) || cross.iter().all(|&c| c < -1e-9)
}

#[test]
fn golden_hexagon() {
    let p = poly(PolygonSpec::hexagon(1, 1, 1));
    let t = &enumerate_tilings(&p, 10).unwrap()[0];
    let style = RenderStyle { red_dots: true, blue_dots: true, ..RenderStyle::default() };
    assert_eq!(render_svg(&p, t, &style), include_str!("golden/hexagon_111.svg"));
    let kinds: Vec<TileKind> = tiles(&p, t).iter().map(|t| t.kind).collect();
    let count = |k| kinds.iter().filter(|&&x| x == k).count();
    // three red including the two frozen tiles on the top line
    assert_eq!((count(TileKind::Red), count(TileKind::Blue), count(TileKind::Green)), (3, 1, 1));
}

#[test]
fn tiles_do_not_overlap() {
    for spec in [PolygonSpec::hexagon(2, 2, 2), PolygonSpec::two_cut(1, 2, 2, 2, 2, 2, 2)] {
        let p = poly(spec);
        for t in enumerate_tilings(&p, 10_000).unwrap().iter().step_by(7) {
            let ts = tiles(&p, t);
            let mut x = (-p.d - p.n) as f64 - 1.0;
            while x < (p.m + 1) as f64 {
                let mut n = -1.0;
                while n < (p.n + 1) as f64 {
                    let hits = ts.iter().filter(|tile| inside(&tile.vertices, (x, n))).count();
                    assert!(hits <= 1, "{hits} tiles cover ({x}, {n})");
                    n += 0.093;
                }
                x += 0.071;
            }
        }
    }
}

#[test]
fn red_dot_rows() {
    let p = poly(PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7));
    let t = sample(&p, &Measure::Uniform, 50_000, 4);
    let style = RenderStyle { red_dots: true, ..RenderStyle::default() };
    let svg = render_svg(&p, &t, &style);
    let mut rows: BTreeMap<String, i64> = BTreeMap::new();
    for line in svg.lines().filter(|l| l.starts_with("<circle")) {
        let cy = line.split("cy=\"").nth(1).unwrap().split('"').next().unwrap();
        *rows.entry(cy.to_string()).or_default() += 1;
    }
    // line n = k sits at pixel (N + 1 - k) * scale
    for k in 0..=p.n {
        let cy = format!("{}", (p.n + 1 - k) * 20);
        assert_eq!(rows.get(&cy).copied().unwrap_or(0), p.d + k, "level {k}");
    }
}

#[test]
fn rendering_is_deterministic() {
    let p = poly(PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7));
    let style = RenderStyle { red_dots: true, blue_dots: true, strip: true, ..RenderStyle::default() };
    let a = render_svg(&p, &sample(&p, &Measure::Uniform, 10_000, 9), &style);
    let b = render_svg(&p, &sample(&p, &Measure::Uniform, 10_000, 9), &style);
    assert_eq!(a, b);
    assert_eq!(a.matches("<line").count(), 2);
}

#[test]
fn bad_csv_rejected() {
    let p = poly(PolygonSpec::hexagon(1, 1, 1));
    assert!(tiling_from_csv(&p, "k,x\n1,a\n").is_err());
    assert!(tiling_from_csv(&p, "k,x\n7,0\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn csv_roundtrip(seed in any::<u64>(), steps in 0u64..5000) {
        let p = poly(PolygonSpec::two_cut(2, 5, 5, 4, 6, 3, 7));
        let t = sample(&p, &Measure::Uniform, steps, seed);
        prop_assert_eq!(tiling_from_csv(&p, &tiling_to_csv(&t)).unwrap(), t);
    }
}
