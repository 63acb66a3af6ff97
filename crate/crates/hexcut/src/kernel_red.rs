//! The limiting red-dot kernel, evaluated exactly in four equivalent forms.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::PolygonData;
use crate::linalg::{det, Matrix};
use crate::num::{combinations, factorial, product, q, rising, vandermonde, Q};
use crate::poly::UniPoly;
use crate::residue::{qprime, sum_all_residues, Contour, RatFn};
use crate::symfunc::{compute_eg, eg_constant, h_ones, SymPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// `d + 2`-fold form with the cut determinants.
    D2,
    /// Residues over the right set.
    R,
    /// Residues over the left set.
    L,
    /// At most `r + 2`-fold form.
    R3,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::D2, Form::R, Form::L, Form::R3];
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d2" => Ok(Form::D2),
            "R" => Ok(Form::R),
            "L" => Ok(Form::L),
            "r3" => Ok(Form::R3),
            _ => Err(Error::Parse(format!("unknown kernel form {s:?} (expected d2, R, L or r3)"))),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::D2 => "d2",
            Form::R => "R",
            Form::L => "L",
            Form::R3 => "r3",
        })
    }
}

/// Which finite set the Omega residues run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

struct Tuple {
    u: Vec<Q>,
    w: Q,
    /// `prod (z - x_i)` over the `x_i` not in the tuple.
    rest: UniPoly,
}

struct SideCache {
    full: Vec<Tuple>,
    om00: Q,
    /// `(d-1)`-tuples with weight `C prod P/Q' Δ^2`.
    minus: Vec<(Vec<Q>, Q)>,
}

struct D2Cache {
    full: Vec<Tuple>,
    om00: Q,
    /// `(d-1)`-tuples with `1/prod Q'` and their cut rows.
    minus: Vec<(Vec<Q>, Q, Vec<Vec<Q>>)>,
}

struct R3Entry {
    u: Vec<Q>,
    f: Q,
    vpoles: Vec<Q>,
    /// `prod (z - p)` over the v-poles, used on the infinite contour.
    num: UniPoly,
    /// Left points outside the tuple.
    l_rest: Vec<Q>,
}

struct R3Cache {
    om00: Q,
    inf: Vec<R3Entry>,
    tau: Vec<R3Entry>,
}

/// Kernel context for one polygon; caches are filled on first use.
pub struct RedKernel {
    pub p: PolygonData,
    pub eg: SymPoly,
    c_nd: Q,
    xq: Vec<Q>,
    qp: HashMap<i64, Q>,
    t_l: Vec<Q>,
    right: OnceLock<SideCache>,
    left: OnceLock<SideCache>,
    d2: OnceLock<D2Cache>,
    r3: OnceLock<R3Cache>,
}

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&a| q(a)).collect()
}

/// `-(y-x+1)_{n-m-1}/(n-m-1)!` for `n > m` and `y >= x`.
pub fn k_zero(m: i64, x: i64, n: i64, y: i64) -> Q {
    if n > m && y >= x {
        -rising(&q(y - x + 1), n - m - 1) / factorial(n - m - 1)
    } else {
        Q::zero()
    }
}

impl RedKernel {
    pub fn new(p: &PolygonData) -> Result<Self> {
        let eg = compute_eg(p.y_cut(), p.n)?;
        let c_nd = if p.d > 0 { eg_constant(p.y_cut(), p.n) } else { Q::one() };
        let xq = qs(&p.x);
        let qp = p.x.iter().zip(&xq).map(|(&a, aq)| (a, qprime(&xq, aq))).collect();
        let lq = qs(&p.left);
        let t_l = crate::symfunc::sympoly::power_sums(&lq, p.d as usize);
        Ok(RedKernel {
            p: p.clone(),
            eg,
            c_nd,
            xq,
            qp,
            t_l,
            right: OnceLock::new(),
            left: OnceLock::new(),
            d2: OnceLock::new(),
            r3: OnceLock::new(),
        })
    }

    fn d(&self) -> usize {
        self.p.d as usize
    }

    fn qprime_x(&self, u: &Q) -> Q {
        qprime(&self.xq, u)
    }

    /// Complementary gap polynomial: `E` at the power sums `t(L) - t(u) (+ z^a)`.
    pub fn e_tilde(&self, u: &[Q], z: Option<&Q>) -> Q {
        let d = self.d();
        let mut p = vec![q(0); d + 1];
        for a in 1..=d {
            let mut s = self.t_l[a].clone();
            for v in u {
                s -= num_traits::pow(v.clone(), a);
            }
            if let Some(z) = z {
                s += num_traits::pow(z.clone(), a);
            }
            p[a] = s;
        }
        self.eg.eval_power_sums(&p)
    }

    fn side_points(&self, side: Side) -> Vec<Q> {
        match side {
            Side::Right => qs(&self.p.right),
            Side::Left => qs(&self.p.left),
        }
    }

    fn side_cache(&self, side: Side) -> &SideCache {
        let cell = match side {
            Side::Right => &self.right,
            Side::Left => &self.left,
        };
        cell.get_or_init(|| {
            let s = self.side_points(side);
            let d = self.d();
            let base = |u: &[Q]| -> Q {
                let mut w = self.c_nd.clone();
                for v in u {
                    w *= self.p.p_eval(v) / self.qprime_x(v);
                }
                let dv = vandermonde(u);
                w * &dv * &dv
            };
            let full: Vec<Tuple> = combinations(&s, d)
                .into_iter()
                .map(|u| {
                    let w = base(&u) * self.eg.eval(&u);
                    let rest_roots: Vec<Q> = self.xq.iter().filter(|a| !u.contains(a)).cloned().collect();
                    Tuple { rest: UniPoly::from_roots(rest_roots.iter()), u, w }
                })
                .collect();
            let om00 = full.iter().fold(Q::zero(), |a, t| a + &t.w);
            let minus = if d > 0 {
                combinations(&s, d - 1).into_iter().map(|u| { let w = base(&u); (u, w) }).collect()
            } else {
                vec![]
            };
            SideCache { full, om00, minus }
        })
    }

    fn cut_row(&self, u: &Q) -> Vec<Q> {
        let nf = factorial(self.p.n - 1);
        self.p
            .y_cut()
            .iter()
            .map(|&yb| rising(&(u - q(yb) + q(1)), self.p.n - 1) / &nf)
            .collect()
    }

    fn d2_cache(&self) -> &D2Cache {
        self.d2.get_or_init(|| {
            let s = qs(&self.p.right);
            let d = self.d();
            let full: Vec<Tuple> = combinations(&s, d)
                .into_iter()
                .map(|u| {
                    let rows: Matrix = u.iter().map(|v| self.cut_row(v)).collect();
                    let qpp = product(u.iter().map(|v| self.qprime_x(v)));
                    let w = vandermonde(&u) * det(&rows) / qpp;
                    let rest_roots: Vec<Q> = self.xq.iter().filter(|a| !u.contains(a)).cloned().collect();
                    Tuple { rest: UniPoly::from_roots(rest_roots.iter()), u, w }
                })
                .collect();
            let om00 = full.iter().fold(Q::zero(), |a, t| a + &t.w);
            let minus = if d > 0 {
                combinations(&s, d - 1)
                    .into_iter()
                    .map(|u| {
                        let inv = product(u.iter().map(|v| self.qprime_x(v))).recip();
                        let rows = u.iter().map(|v| self.cut_row(v)).collect();
                        (u, inv, rows)
                    })
                    .collect()
            } else {
                vec![]
            };
            D2Cache { full, om00, minus }
        })
    }

    /// `h(u) / Q_L'(u)` with `h = Q_R / P_G`.
    fn w_left(&self, u: &Q) -> Q {
        let lq = qs(&self.p.left);
        let num = product(self.p.right.iter().map(|&a| u - q(a)));
        let den = product(self.p.gap.iter().map(|&g| u - q(g)));
        num / den / qprime(&lq, u)
    }

    fn r3_cache(&self) -> &R3Cache {
        self.r3.get_or_init(|| {
            let lq = qs(&self.p.left);
            let rc: Vec<Q> = self.p.right.iter().chain(&self.p.center).map(|&a| q(a)).collect();
            let r = self.p.r as usize;
            let entry = |u: Vec<Q>, with_e: bool| -> R3Entry {
                let mut f = product(u.iter().map(|v| self.w_left(v)));
                let dv = vandermonde(&u);
                f *= &dv * &dv;
                if with_e {
                    f *= self.e_tilde(&u, None) * factorial(r as i64);
                } else {
                    f *= factorial(r as i64 + 1);
                }
                let vpoles: Vec<Q> = rc.iter().chain(&u).cloned().collect();
                let num = UniPoly::from_roots(vpoles.iter());
                let l_rest = lq.iter().filter(|a| !u.contains(a)).cloned().collect();
                R3Entry { u, f, vpoles, num, l_rest }
            };
            let inf: Vec<R3Entry> = combinations(&lq, r).into_iter().map(|u| entry(u, true)).collect();
            let om00 = inf.iter().fold(Q::zero(), |a, e| a + &e.f);
            let tau = if self.p.d > 0 {
                combinations(&lq, r + 1).into_iter().map(|u| entry(u, false)).collect()
            } else {
                vec![]
            };
            R3Cache { om00, inf, tau }
        })
    }

    /// Points enclosed by the finite contour: `y+n-N ..= min(y_1-N, y)` when `y + n <= y_1`.
    pub fn gamma_tau(&self, n: i64, y: i64) -> Vec<i64> {
        if self.p.d == 0 {
            return vec![];
        }
        let y1 = self.p.y[0];
        let tau = y + n - y1 - 1;
        if tau >= 0 {
            return vec![];
        }
        (y + n - self.p.n..=(y1 - self.p.n).min(y)).collect()
    }

    fn check_domain(&self, m: i64, x: i64, n: i64, y: i64) -> Result<()> {
        let p = &self.p;
        if !(0..p.n).contains(&m) || !p.in_domain(m, x) {
            return Err(Error::Domain(format!("(m, x) = ({m}, {x})")));
        }
        if !p.in_domain(n, y) {
            return Err(Error::Domain(format!("(n, y) = ({n}, {y})")));
        }
        Ok(())
    }

    pub fn k(&self, form: Form, m: i64, x: i64, n: i64, y: i64) -> Result<Q> {
        self.check_domain(m, x, n, y)?;
        Ok(match form {
            Form::D2 => self.k_d2(m, x, n, y),
            Form::R => self.k_side(Side::Right, m, x, n, y),
            Form::L => self.k_side(Side::Left, m, x, n, y),
            Form::R3 => self.k_r3(m, x, n, y),
        })
    }

    fn roots_y(&self, n: i64, y: i64) -> Vec<Q> {
        (0..=self.p.n - n).map(|i| q(y - i)).collect()
    }

    fn k_side(&self, side: Side, m: i64, x: i64, n: i64, y: i64) -> Q {
        let big_n = self.p.n;
        let cache = self.side_cache(side);
        let roots_y = self.roots_y(n, y);
        let gt: Vec<Q> = qs(&self.gamma_tau(n, y));
        let mut tot = Q::zero();
        for (&xv, v) in self.p.x.iter().zip(&self.xq) {
            if xv < x {
                continue;
            }
            let pref = rising(&q(xv - x + 1), big_n - m - 1) / &self.qp[&xv];
            let mut inner = Q::zero();
            let mut roots = Vec::with_capacity(roots_y.len() + 1);
            roots.push(v.clone());
            roots.extend(roots_y.iter().cloned());
            for t in &cache.full {
                let c = product(t.u.iter().map(|u| v - u)) * &t.w;
                if c.is_zero() {
                    continue;
                }
                inner += c * sum_all_residues(&t.rest, &roots);
            }
            let omt = |z: &Q| -> Q {
                cache.minus.iter().fold(Q::zero(), |acc, (u, w)| {
                    let mut uz = u.clone();
                    uz.insert(0, z.clone());
                    acc + w * self.eg.eval(&uz) * product(u.iter().map(|a| (z - a) * (v - a)))
                })
            };
            let tilde_at = |z: &Q| self.p.p_eval(z) * omt(z) / qprime(&roots_y, z);
            let mut tilde = Q::zero();
            if self.p.d > 0 {
                let s2 = gt.iter().fold(Q::zero(), |a, z| a + tilde_at(z));
                tilde = match side {
                    Side::Right => roots_y.iter().fold(Q::zero(), |a, z| a + tilde_at(z)) - s2,
                    Side::Left => s2,
                };
            }
            tot += pref * (inner + tilde) / &cache.om00;
        }
        k_zero(m, x, n, y) + tot * factorial(big_n - n) / factorial(big_n - m - 1)
    }

    /// The three terms `(K_0, K_1, K_2)` of the `d2` form.
    pub fn d2_terms(&self, m: i64, x: i64, n: i64, y: i64) -> Result<(Q, Q, Q)> {
        self.check_domain(m, x, n, y)?;
        let big_n = self.p.n;
        let d = self.d();
        let cache = self.d2_cache();
        let roots_y = self.roots_y(n, y);
        let hrow: Vec<Q> = self.p.y_cut().iter().map(|&yb| h_ones(y - yb, n)).collect();
        let (mut k1, mut k2) = (Q::zero(), Q::zero());
        for (&xv, v) in self.p.x.iter().zip(&self.xq) {
            if xv < x {
                continue;
            }
            let pref = rising(&q(xv - x + 1), big_n - m - 1) / factorial(big_n - m - 1) / &self.qp[&xv] / &cache.om00;
            let mut roots = vec![v.clone()];
            roots.extend(roots_y.iter().cloned());
            let mut inner = Q::zero();
            for t in &cache.full {
                let c = product(t.u.iter().map(|u| v - u)) * &t.w;
                if c.is_zero() {
                    continue;
                }
                inner += c * sum_all_residues(&t.rest, &roots);
            }
            k1 += &pref * inner * factorial(big_n - n);
            if d > 0 && hrow.iter().any(|h| !h.is_zero()) {
                // ordered (d-1)-tuples give (d-1)! copies, cancelling d/d!
                let mut inner2 = Q::zero();
                for (u, inv, rows) in &cache.minus {
                    let mut pts = vec![v.clone()];
                    pts.extend(u.iter().cloned());
                    let dv = vandermonde(&pts);
                    if dv.is_zero() {
                        continue;
                    }
                    let mut mat = vec![hrow.clone()];
                    mat.extend(rows.iter().cloned());
                    inner2 += dv * det(&mat) * inv;
                }
                k2 += &pref * inner2;
            }
        }
        Ok((k_zero(m, x, n, y), k1, k2))
    }

    fn k_d2(&self, m: i64, x: i64, n: i64, y: i64) -> Q {
        let (k0, k1, k2) = self.d2_terms(m, x, n, y).expect("domain checked by caller");
        k0 + k1 + k2
    }

    fn k_r3(&self, m: i64, x: i64, n: i64, y: i64) -> Q {
        let big_n = self.p.n;
        let r = self.p.r;
        let cache = self.r3_cache();
        let roots_y = self.roots_y(n, y);
        let gt: Vec<Q> = qs(&self.gamma_tau(n, y));
        let xq = q(x);
        let mut tot = Q::zero();
        for e in &cache.inf {
            for pole in &e.vpoles {
                if pole < &xq {
                    continue;
                }
                let mut roots = vec![pole.clone()];
                roots.extend(roots_y.iter().cloned());
                let j = sum_all_residues(&e.num, &roots);
                tot += rising(&(pole - &xq + q(1)), big_n - m - 1) * j * &e.f / qprime(&e.vpoles, pole);
            }
        }
        tot /= &cache.om00;
        let mut tau_part = Q::zero();
        if !gt.is_empty() {
            for e in &cache.tau {
                let s2 = gt.iter().fold(Q::zero(), |acc, z| {
                    acc + self.p.p_eval(z) * product(e.l_rest.iter().map(|a| z - a)) * self.e_tilde(&e.u, Some(z))
                        / qprime(&roots_y, z)
                });
                if s2.is_zero() {
                    continue;
                }
                for pole in &e.vpoles {
                    if pole < &xq {
                        continue;
                    }
                    tau_part += rising(&(pole - &xq + q(1)), big_n - m - 1) * &e.f * &s2 / qprime(&e.vpoles, pole);
                }
            }
            tau_part /= q(r + 1) * &cache.om00;
        }
        k_zero(m, x, n, y) + (tot + tau_part) * factorial(big_n - n) / factorial(big_n - m - 1)
    }

    /// Kernel matrix `K(p_i; p_j)` for points `(level, x)`.
    pub fn matrix(&self, form: Form, pts: &[(i64, i64)]) -> Result<Matrix> {
        pts.iter()
            .map(|&(m, x)| pts.iter().map(|&(n, y)| self.k(form, m, x, n, y)).collect())
            .collect()
    }

    pub fn correlation(&self, form: Form, pts: &[(i64, i64)]) -> Result<Q> {
        Ok(det(&self.matrix(form, pts)?))
    }

    /// `Omega(v, z)` over the chosen side (combination sum); `None` gives `Omega(0, 0)`,
    /// meaning the `(v-u)/(z-u)` factors are dropped.
    pub fn omega(&self, side: Side, vz: Option<(&Q, &Q)>) -> Q {
        let cache = self.side_cache(side);
        cache.full.iter().fold(Q::zero(), |acc, t| {
            let f = match vz {
                None => Q::one(),
                Some((v, z)) => product(t.u.iter().map(|u| (v - u) / (z - u))),
            };
            acc + &t.w * f
        })
    }

    /// `(d-1)! sum C prod P/Q' E(z, u) Δ(u)^2 prod (z-u)(v-u)` over `(d-1)`-subsets.
    pub fn omega_tilde(&self, side: Side, v: &Q, z: &Q) -> Q {
        let d = self.d();
        if d == 0 {
            return Q::zero();
        }
        let cache = self.side_cache(side);
        let s = cache.minus.iter().fold(Q::zero(), |acc, (u, w)| {
            let mut uz = u.clone();
            uz.insert(0, z.clone());
            acc + w * self.eg.eval(&uz) * product(u.iter().map(|a| (z - a) * (v - a)))
        });
        s * factorial(d as i64 - 1)
    }

    /// `r!`-weighted sum over `r`-subsets of the left set; `Omega^+_0 = 1`.
    pub fn omega_plus(&self, vz: Option<(&Q, &Q)>) -> Q {
        if self.p.r == 0 {
            return Q::one();
        }
        let cache = self.r3_cache();
        cache.inf.iter().fold(Q::zero(), |acc, e| {
            let f = match vz {
                None => Q::one(),
                Some((v, z)) => product(e.u.iter().map(|u| (z - u) / (v - u))),
            };
            acc + &e.f * f
        })
    }

    /// `(r+1)!`-weighted sum over `(r+1)`-subsets with `E~(u; z)` and `1/((z-u)(v-u))`.
    pub fn omega_minus(&self, v: &Q, z: &Q) -> Q {
        let cache = self.r3_cache();
        cache.tau.iter().fold(Q::zero(), |acc, e| {
            let f = product(e.u.iter().map(|u| ((z - u) * (v - u)).recip()));
            acc + &e.f * self.e_tilde(&e.u, Some(z)) * f
        })
    }
}

/// Kernel of the hexagon `(a, b, c)` from its two-integral formula, with
/// `Q(z) = (z-a+1)_c (z+c+1)_b`.
pub fn k_red_hexagon(a: i64, b: i64, c: i64, m: i64, x: i64, n: i64, y: i64) -> Q {
    let big_n = b + c;
    let roots: Vec<Q> = (1..=c).map(|j| q(a - j)).chain((1..=b).map(|j| q(-c - j))).collect();
    let qz = UniPoly::from_roots(roots.iter());
    let mut tot = Q::zero();
    for v in &roots {
        if v < &q(x) {
            continue;
        }
        let inner_roots = std::iter::once(v.clone()).chain((0..=big_n - n).map(|i| q(y - i)));
        let inner = RatFn::new(qz.clone(), inner_roots).integrate(&Contour::AllPoles);
        tot += rising(&(v - q(x) + q(1)), big_n - m - 1) * inner / qprime(&roots, v);
    }
    k_zero(m, x, n, y) + tot * factorial(big_n - n) / factorial(big_n - m - 1)
}
