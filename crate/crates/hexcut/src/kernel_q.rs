//! The q-deformed kernel: exact matrix route, residue-sum route and the
//! block-matrix structure behind them.

use num_traits::{One, Zero};

use crate::enumeration::Tiling;
use crate::error::{Error, Result};
use crate::geometry::PolygonData;
use crate::kernel_red::{Form, RedKernel};
use crate::linalg::{det, identity, inverse, matmul, transpose, Matrix};
use crate::num::{combinations, pow, to_f64, vandermonde, Q};
use crate::poly::UniPoly;
use crate::symfunc::{cal_p, cal_p_tilde, h_geo, qpoch};

fn check_q(qq: &Q) -> Result<()> {
    if *qq <= Q::zero() || *qq >= Q::one() {
        return Err(Error::Domain(format!("q must lie in (0, 1), got {qq}")));
    }
    Ok(())
}

fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![Q::zero(); c]; r]
}

/// `H_ij = h_{x_i - y_j}(q^d, ..., q^(d+N-1))`.
pub fn build_h(p: &PolygonData, qq: &Q) -> Matrix {
    let (d, n) = (p.d, p.n);
    p.x.iter()
        .map(|&xi| p.y.iter().map(|&yj| h_geo(xi - yj, d, n, qq)).collect())
        .collect()
}

/// `T = 1_d (+) T_N`, independent of `x` and `y`.
pub fn build_t(p: &PolygonData, qq: &Q) -> Result<Matrix> {
    let (d, n) = (p.d as usize, p.n as usize);
    let nn = n as i64;
    // coefficients e_0 .. e_{N-1} of cal_P_{N-1}(z)
    let roots: Vec<Q> = (1..nn).map(|i| pow(qq, -i)).collect();
    let lead = (1..nn).fold(Q::one(), |a, i| a * (-pow(qq, i) / (Q::one() - pow(qq, i))));
    let e = UniPoly::from_roots(roots.iter()).scale(&lead);
    let vdm: Matrix = (0..n)
        .map(|i| (1..=n).map(|k| pow(qq, -(i as i64) * (nn - k as i64))).collect())
        .collect();
    let vinv = inverse(&vdm)?;
    // Pi_N D_N^{-1} with D_N = diag(e_{N-1}, ..., e_0)
    let mut pd = zeros(n, n);
    for i in 0..n {
        let j = n - 1 - i;
        pd[i][j] = e.coeff(n - 1 - j).recip();
    }
    let tt = matmul(&vinv, &pd);
    let mut t = identity(d + n);
    for i in 0..n {
        for j in 0..n {
            let left = pow(qq, (nn - 1 - i as i64) * p.d);
            let right = pow(qq, -(p.d + nn) * (p.d + nn - 1 - j as i64));
            t[d + i][d + j] = &tt[i][j] * left * right;
        }
    }
    Ok(t)
}

/// The closed form of `H T`: the cut columns of `H`, then pure powers `q^(x_i (d+N-j))`.
pub fn build_htilde(p: &PolygonData, qq: &Q) -> Matrix {
    let (d, n) = (p.d, p.n);
    p.x.iter()
        .map(|&xi| {
            let mut row: Vec<Q> = p.y_cut().iter().map(|&yj| h_geo(xi - yj, d, n, qq)).collect();
            row.extend((1..=n).map(|j| pow(qq, xi * (d + n - j))));
            row
        })
        .collect()
}

/// `1_d (+) (delta_{2d+N-i+1, j} (q;q)_{i-d-1})`.
pub fn mtilde_inverse(p: &PolygonData, qq: &Q) -> Matrix {
    let (d, n) = (p.d as usize, p.n as usize);
    let mut m = zeros(d + n, d + n);
    for i in 0..d {
        m[i][i] = Q::one();
    }
    for i in d + 1..=d + n {
        let j = 2 * d + n + 1 - i;
        m[i - 1][j - 1] = qpoch(qq, qq, (i - d - 1) as i64);
    }
    m
}

/// `M` from the convolution closed forms, with `psi` built on `H^{-1}`.
pub fn build_m(p: &PolygonData, qq: &Q) -> Result<Matrix> {
    let hinv = inverse(&build_h(p, qq))?;
    let (d, n) = (p.d, p.n);
    let w = (d + n) as usize;
    let mut m = zeros(w, w);
    for k in 1..=w {
        for l in 1..=w {
            let mut acc = Q::zero();
            for (a, &xa) in p.x.iter().enumerate() {
                let f = if (k as i64) <= d {
                    h_geo(xa - p.y[k - 1], d, n, qq)
                } else {
                    pow(qq, (k as i64 - 1) * xa)
                };
                acc += &hinv[l - 1][a] * f;
            }
            if k as i64 > d {
                acc /= qpoch(qq, qq, d + n - k as i64);
            }
            m[k - 1][l - 1] = acc;
        }
    }
    Ok(m)
}

/// Outcome of the exact block-structure checks.
#[derive(Clone, Debug, Default)]
pub struct StructureReport {
    /// `H T` equals the closed form entrywise.
    pub ht_matches: bool,
    /// Rows below `c` of the cut block vanish.
    pub lower_left_zero: bool,
    /// `(M T^{T -1}) M~^{-1} = I`.
    pub minv_matches: bool,
    /// `det H~ / Delta(q^x)` agrees with the residue sum.
    pub det_matches: bool,
}

impl StructureReport {
    pub fn all(&self) -> bool {
        self.ht_matches && self.lower_left_zero && self.minv_matches && self.det_matches
    }
}

pub fn check_structure(p: &PolygonData, qq: &Q) -> Result<StructureReport> {
    check_q(qq)?;
    let h = build_h(p, qq);
    let t = build_t(p, qq)?;
    let ht = build_htilde(p, qq);
    let c = p.right.len();
    let d = p.d as usize;
    let lower_left_zero = ht[c..].iter().all(|row| row[..d].iter().all(Zero::is_zero));
    let ht_matches = matmul(&h, &t) == ht;
    let m = build_m(p, qq)?;
    let prod = matmul(&matmul(&m, &inverse(&transpose(&t))?), &mtilde_inverse(p, qq));
    let minv_matches = prod == identity(d + p.n as usize);
    let det_matches = det_htilde_ratio(p, qq) == det_htilde_residue(p, qq);
    Ok(StructureReport { ht_matches, lower_left_zero, minv_matches, det_matches })
}

/// `det H~ / Delta_{d+N}(q^{x_1}, ..., q^{x_{d+N}})`.
pub fn det_htilde_ratio(p: &PolygonData, qq: &Q) -> Q {
    let qx: Vec<Q> = p.x.iter().map(|&v| pow(qq, v)).collect();
    det(&build_htilde(p, qq)) / vandermonde(&qx)
}

/// `(-1)^{d(d-1)/2} / d! * prod q^{d x_i} * Omega_q(0, 0)` with the ordered sum.
pub fn det_htilde_residue(p: &PolygonData, qq: &Q) -> Q {
    let ctx = Residues::new(p, qq);
    let sign = if (p.d * (p.d - 1) / 2) % 2 == 0 { Q::one() } else { -Q::one() };
    let px = p.x.iter().fold(Q::one(), |a, &v| a * pow(qq, p.d * v));
    sign * px * &ctx.om00
}

/// `q^{(k-1)(z-x)} 1_{x <= z}`, or `q^{(k-1) z}` for the virtual point `None`.
pub fn phi(k: i64, x: Option<i64>, z: i64, qq: &Q) -> Q {
    match x {
        None => pow(qq, (k - 1) * z),
        Some(x) if x <= z => pow(qq, (k - 1) * (z - x)),
        Some(_) => Q::zero(),
    }
}

/// Closed form of `phi_{n+1} * ... * phi_m (x, y)`.
pub fn phi_chain(n: i64, m: i64, x: i64, y: i64, qq: &Q) -> Q {
    if n < m {
        h_geo(y - x, n, m - n, qq)
    } else {
        Q::zero()
    }
}

/// Closed form of `phi_n(virt, .) * phi_{n+1} * ... * phi_m (., y)`.
pub fn virt_chain(n: i64, m: i64, y: i64, qq: &Q) -> Q {
    if n < m {
        pow(qq, (n - 1) * y) / qpoch(qq, qq, m - n)
    } else {
        Q::zero()
    }
}

/// `C_{N,d,q} det(chi) prod det(phi) det(psi)` for a red-dot array.
pub fn karlin_mcgregor_weight(p: &PolygonData, t: &Tiling, qq: &Q) -> Result<Q> {
    let (d, n) = (p.d, p.n);
    if t.levels.len() as i64 != n + 1 {
        return Err(Error::Domain(format!("expected {} levels, got {}", n + 1, t.levels.len())));
    }
    for (k, lv) in t.levels.iter().enumerate() {
        if lv.len() as i64 != d + k as i64 {
            return Err(Error::Domain(format!("level {k} has {} points, expected {}", lv.len(), d + k as i64)));
        }
    }
    let cst = pow(qq, d * n * (d + n) + n * (n * n - 1) / 3);
    let du = d as usize;
    let chi: Matrix = (0..du)
        .map(|i| (0..du).map(|j| if t.levels[0][j] == p.y[i] { Q::one() } else { Q::zero() }).collect())
        .collect();
    let mut acc = cst * det(&chi);
    for m in 1..=n as usize {
        let k = d + m as i64;
        let size = du + m;
        let prev = &t.levels[m - 1];
        let cur = &t.levels[m];
        let mat: Matrix = (0..size)
            .map(|i| {
                let from = if i + 1 == size { None } else { Some(prev[i]) };
                (0..size).map(|j| phi(k, from, cur[j], qq)).collect()
            })
            .collect();
        acc *= det(&mat);
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    let hinv = inverse(&build_h(p, qq))?;
    let top = &t.levels[n as usize];
    let w = (d + n) as usize;
    let psi: Matrix = (0..w)
        .map(|i| {
            (0..w)
                .map(|j| {
                    p.x.iter()
                        .position(|&v| v == top[j])
                        .map_or(Q::zero(), |a| hinv[i][a].clone())
                })
                .collect()
        })
        .collect();
    Ok(acc * det(&psi))
}

/// Residue-sum data shared by the integral route.
struct Residues {
    qx: Vec<Q>,
    qp: Vec<Q>,
    /// `P~^{y_b}_{N-1}(q^{x_i})` for `i < c`.
    pt: Vec<Vec<Q>>,
    /// `d`-subsets of the right set with their weights.
    tuples: Vec<(Vec<usize>, Q)>,
    om00: Q,
}

impl Residues {
    fn new(p: &PolygonData, qq: &Q) -> Self {
        let (d, n) = (p.d, p.n);
        let qx: Vec<Q> = p.x.iter().map(|&v| pow(qq, v)).collect();
        let qp: Vec<Q> = qx
            .iter()
            .enumerate()
            .map(|(i, a)| {
                qx.iter().enumerate().filter(|&(k, _)| k != i).fold(Q::one(), |acc, (_, b)| acc * (a - b))
            })
            .collect();
        let c = p.right.len();
        let pt: Vec<Vec<Q>> = (0..c)
            .map(|i| p.y_cut().iter().map(|&yb| cal_p_tilde(n - 1, d, yb, &qx[i], qq)).collect())
            .collect();
        let idx: Vec<usize> = (0..c).collect();
        let tuples: Vec<(Vec<usize>, Q)> = combinations(&idx, d as usize)
            .into_iter()
            .map(|t| {
                let u: Vec<Q> = t.iter().map(|&i| qx[i].clone()).collect();
                let m: Matrix = t.iter().map(|&i| pt[i].clone()).collect();
                let den = t.iter().fold(Q::one(), |a, &i| a * &qp[i]);
                let w = vandermonde(&u) * det(&m) / den;
                (t, w)
            })
            .collect();
        let om00 = tuples.iter().fold(Q::zero(), |a, (_, w)| a + w);
        Residues { qx, qp, pt, tuples, om00 }
    }
}

/// Kernel context for one polygon and one value of `q`.
pub struct QKernel {
    pub p: PolygonData,
    pub q: Q,
    ht_inv: Matrix,
    res: std::sync::OnceLock<Residues>,
}

impl QKernel {
    pub fn new(p: &PolygonData, qq: &Q) -> Result<Self> {
        check_q(qq)?;
        let ht_inv = inverse(&build_htilde(p, qq))?;
        Ok(QKernel { p: p.clone(), q: qq.clone(), ht_inv, res: std::sync::OnceLock::new() })
    }

    fn check_point(&self, k: i64, x: i64) -> Result<()> {
        if !(0..=self.p.n).contains(&k) {
            return Err(Error::Domain(format!("level {k} outside 0..={}", self.p.n)));
        }
        let _ = x;
        Ok(())
    }

    /// `psi~_k^{(mm)}(x)`, `k` one-based.
    pub fn psi_tilde(&self, k: usize, mm: i64, x: i64) -> Q {
        let (d, n) = (self.p.d, self.p.n);
        let row = &self.ht_inv[k - 1];
        self.p
            .x
            .iter()
            .zip(row)
            .fold(Q::zero(), |a, (&xl, h)| a + h * h_geo(xl - x, d + mm - 1, n - mm + 1, &self.q))
    }

    /// Matrix route.
    pub fn k(&self, m: i64, x: i64, n: i64, y: i64) -> Result<Q> {
        self.check_point(m, x)?;
        self.check_point(n, y)?;
        let (d, nn) = (self.p.d, self.p.n);
        let qq = &self.q;
        let w = (d + nn) as usize;
        let mut t1 = Q::zero();
        if n > m {
            t1 = -h_geo(y - x, d + m, n - m, qq);
        }
        let mut t2 = Q::zero();
        for k in 1..=n {
            let c = (n + 1..=nn).fold(Q::one(), |a, i| a * (Q::one() - pow(qq, i - k)));
            t2 += self.psi_tilde(w - k as usize + 1, m + 1, x) * pow(qq, (k - 1) * y) * c;
        }
        t2 *= pow(qq, d * y);
        let mut t3 = Q::zero();
        for k in 1..=d as usize {
            t3 += self.psi_tilde(k, m + 1, x) * h_geo(y - self.p.y[k - 1], d, n, qq);
        }
        Ok(t1 + t2 + t3)
    }

    pub fn matrix(&self, pts: &[(i64, i64)]) -> Result<Matrix> {
        pts.iter()
            .map(|&(m, x)| pts.iter().map(|&(n, y)| self.k(m, x, n, y)).collect())
            .collect()
    }

    pub fn correlation(&self, pts: &[(i64, i64)]) -> Result<Q> {
        Ok(det(&self.matrix(pts)?))
    }

    /// `q^{(d+m)(x-y)} K_q`, the normalisation that tends to the red kernel.
    pub fn conjugated(&self, m: i64, x: i64, n: i64, y: i64) -> Result<Q> {
        Ok(pow(&self.q, (self.p.d + m) * (x - y)) * self.k(m, x, n, y)?)
    }

    /// Residue-sum route, returned as `(K0, K1, K2)` in conjugated normalisation.
    pub fn integral_terms(&self, m: i64, x: i64, n: i64, y: i64) -> Result<(Q, Q, Q)> {
        self.check_point(m, x)?;
        self.check_point(n, y)?;
        if m == self.p.n {
            return Err(Error::Domain("the residue route needs m < N".into()));
        }
        let p = &self.p;
        let qq = &self.q;
        let (d, nn) = (p.d, p.n);
        let r = self.res.get_or_init(|| Residues::new(p, qq));
        let w = (d + nn) as usize;
        let c = p.right.len();

        let mut k0 = Q::zero();
        if n > m && y >= x {
            k0 = -qpoch(&pow(qq, y - x + 1), qq, n - m - 1) / qpoch(qq, qq, n - m - 1);
        }

        let ck: Vec<Q> = (1..=n)
            .map(|k| (n + 1..=nn).fold(Q::one(), |a, rr| a * (Q::one() - pow(qq, rr - k))))
            .collect();
        let qy: Vec<Q> = p.x.iter().map(|&v| pow(qq, v - y)).collect();
        let mut k1 = Q::zero();
        for j in 0..w {
            if p.x[j] < x {
                continue;
            }
            let den = (0..w).filter(|&k| k != j).fold(Q::one(), |a, k| a * (&qy[j] - &qy[k]));
            let star = pow(qq, m * (p.x[j] - y)) * cal_p(nn - m - 1, &pow(qq, p.x[j] - x), qq) / den;
            let mut inner = Q::zero();
            for (t, wt) in &r.tuples {
                if t.contains(&j) {
                    continue;
                }
                let s = t.iter().fold(wt.clone(), |a, &i| a * (&qy[j] - &qy[i]));
                let roots: Vec<&Q> = (0..w).filter(|rr| *rr != j && !t.contains(rr)).map(|rr| &qy[rr]).collect();
                let a = UniPoly::from_roots(roots);
                let ct = ck.iter().enumerate().fold(Q::zero(), |acc, (k, c)| acc + c * a.coeff(k));
                inner += s * ct;
            }
            k1 += star * inner;
        }
        k1 /= &r.om00;

        let mut k2 = Q::zero();
        if d > 0 {
            let idx: Vec<usize> = (0..c).collect();
            let subsets = combinations(&idx, d as usize - 1);
            for i in 0..w {
                if p.x[i] < x {
                    continue;
                }
                let pre = pow(qq, m * (p.x[i] - y)) * cal_p(nn - m - 1, &pow(qq, p.x[i] - x), qq) / &r.qp[i];
                let mut om = Q::zero();
                for rr in 0..d as usize {
                    if p.y[rr] > y {
                        continue;
                    }
                    let mut fr = Q::zero();
                    for t in &subsets {
                        let mat: Matrix = t
                            .iter()
                            .map(|&a| (0..d as usize).filter(|&b| b != rr).map(|b| r.pt[a][b].clone()).collect())
                            .collect();
                        let mut u = vec![r.qx[i].clone()];
                        u.extend(t.iter().map(|&a| r.qx[a].clone()));
                        let den = t.iter().fold(Q::one(), |acc, &a| acc * &r.qp[a]);
                        fr += det(&mat) / den * vandermonde(&u);
                    }
                    let sgn = if rr % 2 == 0 { Q::one() } else { -Q::one() };
                    om += sgn * h_geo(y - p.y[rr], d, n, qq) * fr;
                }
                k2 += pre * om;
            }
            k2 /= pow(qq, y * d) * &r.om00;
        }
        Ok((k0, k1, k2))
    }

    /// Residue-sum route in the same normalisation as [`QKernel::k`].
    pub fn k_integral(&self, m: i64, x: i64, n: i64, y: i64) -> Result<Q> {
        let (a, b, c) = self.integral_terms(m, x, n, y)?;
        Ok((a + b + c) / pow(&self.q, (self.p.d + m) * (x - y)))
    }
}

/// One line of the q -> 1 probe.
#[derive(Clone, Debug)]
pub struct ProbeRow {
    pub point: (i64, i64, i64, i64),
    pub eps: Vec<Q>,
    pub errors: Vec<f64>,
    /// Empirical order `log2(e_i / e_{i+1})` between consecutive halvings.
    pub orders: Vec<f64>,
}

impl ProbeRow {
    pub fn monotone(&self) -> bool {
        self.errors.windows(2).all(|w| w[1] < w[0] || w[0] == 0.0)
    }
}

/// Compares the conjugated `K_q` at `q = 1 - eps` with the red kernel.
pub fn q_to_1_probe(p: &PolygonData, pts: &[(i64, i64, i64, i64)], eps: &[Q]) -> Result<Vec<ProbeRow>> {
    let red = RedKernel::new(p)?;
    let kernels: Vec<QKernel> = eps.iter().map(|e| QKernel::new(p, &(Q::one() - e))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for &(m, x, n, y) in pts {
        let target = red.k(Form::D2, m, x, n, y)?;
        let mut errors = Vec::new();
        for kq in &kernels {
            let v = kq.conjugated(m, x, n, y)?;
            errors.push(to_f64(&(v - &target)).abs());
        }
        let orders = errors
            .windows(2)
            .map(|w| if w[1] > 0.0 { (w[0] / w[1]).log2() } else { f64::INFINITY })
            .collect();
        out.push(ProbeRow { point: (m, x, n, y), eps: eps.to_vec(), errors, orders });
    }
    Ok(out)
}
