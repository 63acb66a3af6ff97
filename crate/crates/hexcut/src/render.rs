//! SVG rendering of tilings and CSV dumps.
//!
//! In the `(x, n)` plane a red tile centred at `(x, k)` has vertices
//! `(x+1/2, k-1), (x+1/2, k), (x-1/2, k+1), (x-1/2, k)`; a blue tile centred
//! at `(x, k-1/2)` is the unit square; a green tile centred at
//! `(x+1/2, k-1/2)` joins `[x+1/2, x+3/2]` on line `k-1` to `[x-1/2, x+1/2]`
//! on line `k`.

use std::fmt::Write as _;

use crate::enumeration::{blue_dots, Tiling};
use crate::error::{Error, Result};
use crate::geometry::PolygonData;
use crate::lkernel::rho_strip;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderStyle {
    pub red: String,
    pub blue: String,
    pub green: String,
    pub stroke: String,
    /// Pixels per lattice unit.
    pub scale: f64,
    pub red_dots: bool,
    pub blue_dots: bool,
    /// Dotted lines bounding the `{rho}` strip of a two-cut polygon.
    pub strip: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            red: "#d62728".into(),
            blue: "#1f77b4".into(),
            green: "#2ca02c".into(),
            stroke: "#000000".into(),
            scale: 20.0,
            red_dots: false,
            blue_dots: false,
            strip: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TileKind {
    Red,
    Blue,
    Green,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tile {
    pub kind: TileKind,
    /// Vertices in `(x, n)` coordinates.
    pub vertices: [(f64, f64); 4],
}

/// All tiles of a tiling: red tiles on every level, blue and green between levels.
pub fn tiles(p: &PolygonData, t: &Tiling) -> Vec<Tile> {
    let mut out = Vec::new();
    for (k, level) in t.levels.iter().enumerate() {
        let k = k as f64;
        for &x in level {
            let x = x as f64;
            out.push(Tile {
                kind: TileKind::Red,
                vertices: [(x + 0.5, k - 1.0), (x + 0.5, k), (x - 0.5, k + 1.0), (x - 0.5, k)],
            });
        }
    }
    for k in 1..=p.n {
        let holes = |lv: &[i64], lo: i64| -> Vec<i64> { (lo..p.m).filter(|v| !lv.contains(v)).collect() };
        let up = holes(&t.levels[k as usize], p.level_min(k));
        let dn = holes(&t.levels[k as usize - 1], p.level_min(k) + 1);
        let kf = k as f64;
        for (a, b) in up.into_iter().zip(dn) {
            let x = a as f64;
            if a == b {
                out.push(Tile {
                    kind: TileKind::Blue,
                    vertices: [(x - 0.5, kf - 1.0), (x + 0.5, kf - 1.0), (x + 0.5, kf), (x - 0.5, kf)],
                });
            } else {
                out.push(Tile {
                    kind: TileKind::Green,
                    vertices: [(x + 0.5, kf - 1.0), (x + 1.5, kf - 1.0), (x + 0.5, kf), (x - 0.5, kf)],
                });
            }
        }
    }
    out
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Deterministic SVG document.
pub fn render_svg(p: &PolygonData, t: &Tiling, style: &RenderStyle) -> String {
    let s = style.scale;
    let xmin = (-p.d - p.n) as f64 - 1.0;
    let xmax = p.m as f64 + 1.0;
    let nmin = -1.0;
    let nmax = p.n as f64 + 1.0;
    let w = (xmax - xmin) * s;
    let h = (nmax - nmin) * s;
    let px = |x: f64| (x - xmin) * s;
    let py = |n: f64| (nmax - n) * s;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt(w),
        fmt(h),
        fmt(w),
        fmt(h)
    );
    for tile in tiles(p, t) {
        let fill = match tile.kind {
            TileKind::Red => &style.red,
            TileKind::Blue => &style.blue,
            TileKind::Green => &style.green,
        };
        let pts: Vec<String> = tile.vertices.iter().map(|&(x, n)| format!("{},{}", fmt(px(x)), fmt(py(n)))).collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{}" stroke="{}" stroke-width="{}"/>"#,
            pts.join(" "),
            fill,
            style.stroke,
            fmt(s / 20.0)
        );
    }
    let rad = fmt(s / 8.0);
    if style.red_dots {
        for (k, level) in t.levels.iter().enumerate() {
            for &x in level {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
                    fmt(px(x as f64)),
                    fmt(py(k as f64)),
                    rad,
                    style.stroke
                );
            }
        }
    }
    if style.blue_dots {
        for (k, x) in blue_dots(p, t) {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
                fmt(px(x as f64)),
                fmt(py(k as f64 - 0.5)),
                rad,
                "#ffffff"
            );
        }
    }
    if style.strip {
        if let Some(range) = rho_strip(p) {
            // the line eta = e is x + n = e - 1/2
            for e in [*range.start(), *range.end()] {
                let c = e as f64 - 0.5;
                let _ = writeln!(
                    out,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-dasharray="{}"/>"#,
                    fmt(px(c - nmin)),
                    fmt(py(nmin)),
                    fmt(px(c - nmax)),
                    fmt(py(nmax)),
                    style.stroke,
                    fmt(s / 5.0)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Tiling dump: header `k,x`, then one red dot per line.
pub fn tiling_to_csv(t: &Tiling) -> String {
    let mut out = String::from("k,x\n");
    for (k, level) in t.levels.iter().enumerate() {
        for x in level {
            let _ = writeln!(out, "{k},{x}");
        }
    }
    out
}

pub fn tiling_from_csv(p: &PolygonData, s: &str) -> Result<Tiling> {
    let mut levels: Vec<Vec<i64>> = vec![Vec::new(); p.n as usize + 1];
    for (ln, line) in s.lines().enumerate() {
        let line = line.trim();
        if ln == 0 || line.is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let parse = |f: Option<&str>| -> Result<i64> {
            f.and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: expected `k,x`", ln + 1)))
        };
        let k = parse(it.next())?;
        let x = parse(it.next())?;
        if !(0..=p.n).contains(&k) {
            return Err(Error::Parse(format!("line {}: level {k} outside 0..={}", ln + 1, p.n)));
        }
        levels[k as usize].push(x);
    }
    for lv in &mut levels {
        lv.sort_unstable_by(|a, b| b.cmp(a));
    }
    Ok(Tiling { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::enumerate_tilings;
    use crate::geometry::{build_polygon, PolygonSpec};

    #[test]
    fn tile_counts_are_constant() {
        // every tiling of the (2,2,2) hexagon uses the same number of tiles of each kind
        let p = build_polygon(&PolygonSpec::hexagon(2, 2, 2)).unwrap();
        let mut seen = None;
        for t in enumerate_tilings(&p, 100).unwrap() {
            let ts = tiles(&p, &t);
            let c = [TileKind::Red, TileKind::Blue, TileKind::Green].map(|k| ts.iter().filter(|x| x.kind == k).count());
            assert_eq!(*seen.get_or_insert(c), c);
        }
    }

    #[test]
    fn csv_roundtrip() {
        let p = build_polygon(&PolygonSpec::hexagon(1, 2, 1)).unwrap();
        for t in enumerate_tilings(&p, 100).unwrap() {
            assert_eq!(tiling_from_csv(&p, &tiling_to_csv(&t)).unwrap(), t);
        }
    }
}
