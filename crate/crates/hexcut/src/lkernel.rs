//! Blue-dot kernel obtained from the red kernel by a half-step shift.

use num_traits::Zero;

use crate::enumeration::{blue_to_oblique, oblique_to_blue, Ensemble};
use crate::error::{Error, Result};
use crate::geometry::PolygonData;
use crate::kernel_red::{Form, RedKernel};
use crate::linalg::{det, Matrix};
use crate::num::{abs, Q};

/// Blue dot in oblique coordinates; `eta + xi` is odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BluePoint {
    pub eta: i64,
    pub xi: i64,
}

impl BluePoint {
    pub fn new(eta: i64, xi: i64) -> Result<Self> {
        if (eta + xi).rem_euclid(2) != 1 {
            return Err(Error::Domain(format!("(eta, xi) = ({eta}, {xi}) is not a blue-lattice point")));
        }
        Ok(BluePoint { eta, xi })
    }

    pub fn from_level(k: i64, x: i64) -> Self {
        let (eta, xi) = blue_to_oblique(k, x);
        BluePoint { eta, xi }
    }

    /// `(k, x)` with the dot at height `k - 1/2`.
    pub fn level(&self) -> (i64, i64) {
        oblique_to_blue(self.eta, self.xi).expect("parity checked on construction")
    }
}

/// Blue positions `(k, x)` inside the polygon.
pub fn blue_points(p: &PolygonData) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for k in 1..=p.n {
        for x in p.level_min(k) + 1..p.m {
            out.push((k, x));
        }
    }
    out
}

pub struct BlueKernel {
    pub red: RedKernel,
    pub form: Form,
}

impl BlueKernel {
    pub fn new(p: &PolygonData) -> Result<Self> {
        Ok(BlueKernel { red: RedKernel::new(p)?, form: Form::R })
    }

    fn check(&self, k: i64, x: i64) -> Result<()> {
        let p = &self.red.p;
        if !(1..=p.n).contains(&k) || x <= p.level_min(k) || x >= p.m {
            return Err(Error::Domain(format!("blue point (k, x) = ({k}, {x}) outside the polygon")));
        }
        Ok(())
    }

    /// `L((k, x), (k', x')) = -K_red(k-1, x; k', x')`.
    pub fn l(&self, a: (i64, i64), b: (i64, i64)) -> Result<Q> {
        self.check(a.0, a.1)?;
        self.check(b.0, b.1)?;
        Ok(-self.red.k(self.form, a.0 - 1, a.1, b.0, b.1)?)
    }

    pub fn l_oblique(&self, a: BluePoint, b: BluePoint) -> Result<Q> {
        self.l(a.level(), b.level())
    }

    pub fn matrix(&self, pts: &[(i64, i64)]) -> Result<Matrix> {
        pts.iter().map(|&a| pts.iter().map(|&b| self.l(a, b)).collect()).collect()
    }

    pub fn correlation(&self, pts: &[(i64, i64)]) -> Result<Q> {
        Ok(det(&self.matrix(pts)?))
    }

    /// Expected number of blue dots on the line `eta`.
    pub fn line_trace(&self, eta: i64) -> Result<Q> {
        let mut acc = Q::zero();
        for (k, x) in blue_points(&self.red.p) {
            if k + x == eta {
                acc += self.l((k, x), (k, x))?;
            }
        }
        Ok(acc)
    }
}

/// The lines `eta = m_1, ..., m_1 + rho` of a two-cut polygon.
pub fn rho_strip(p: &PolygonData) -> Option<std::ops::RangeInclusive<i64>> {
    let t = p.two_cut.as_ref()?;
    let m1 = p.spec.lower_gaps[0];
    Some(m1..=m1 + t.rho)
}

#[derive(Clone, Debug, Default)]
pub struct Thm2Report {
    pub checked: usize,
    pub mismatches: usize,
    pub max_discrepancy: Q,
}

/// Compares `det L` with enumerated blue correlations on all sets of size
/// at most `max_size` (1 or 2).
pub fn verify_thm2(p: &PolygonData, ens: &Ensemble, max_size: usize) -> Result<Thm2Report> {
    let kern = BlueKernel::new(p)?;
    let pts = blue_points(p);
    let mut rep = Thm2Report::default();
    let mut record = |set: &[(i64, i64)]| -> Result<()> {
        let want = ens.blue_correlation(p, set);
        let got = kern.correlation(set)?;
        let diff = abs(&(got - want));
        rep.checked += 1;
        if !diff.is_zero() {
            rep.mismatches += 1;
        }
        if diff > rep.max_discrepancy {
            rep.max_discrepancy = diff;
        }
        Ok(())
    };
    for i in 0..pts.len() {
        record(&[pts[i]])?;
        if max_size >= 2 {
            for j in i + 1..pts.len() {
                record(&[pts[i], pts[j]])?;
            }
        }
    }
    Ok(rep)
}
