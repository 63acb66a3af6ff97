//! Numerical evaluation of the discrete tacnode kernel.
//!
//! Vertical lines use the trapezoid rule on `[-T, T]`, small circles about the
//! origin use the uniform rule. The `r`-fold `W` integrals are reduced to
//! `r x r` moment determinants (Andreief), which is exact for any product
//! quadrature rule.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TacParams {
    pub r: usize,
    pub rho: i64,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    /// Abscissa of the vertical lines.
    pub a: f64,
    /// Radius of the circle about the origin.
    pub eps: f64,
    pub t_max: f64,
    pub h: f64,
    pub circle_points: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { a: 0.5, eps: 0.25, t_max: 8.0, h: 1.0 / 64.0, circle_points: 64 }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > self.eps && self.eps > 0.0 && self.t_max > 0.0 && self.h > 0.0 && self.circle_points > 0) {
            return Err(Error::Domain(format!("bad quadrature config {self:?}; need a > eps > 0")));
        }
        Ok(())
    }

    /// Nodes and weights for `(1/2 pi i) int_{a - i inf}^{a + i inf} f(z) dz`.
    pub fn line(&self) -> Vec<(C, C)> {
        let n = (self.t_max / self.h).round() as i64;
        (-n..=n)
            .map(|k| {
                let t = k as f64 * self.h;
                let w = if k.abs() == n { 0.5 } else { 1.0 };
                (C::new(self.a, t), C::new(w * self.h / (2.0 * PI), 0.0))
            })
            .collect()
    }

    /// Nodes and weights for `(1/2 pi i) oint_{|z| = eps} f(z) dz`.
    pub fn circle(&self) -> Vec<(C, C)> {
        let n = self.circle_points;
        (0..n)
            .map(|j| {
                let z = C::from_polar(self.eps, 2.0 * PI * j as f64 / n as f64);
                (z, z / n as f64)
            })
            .collect()
    }
}

fn cdet(mut m: Vec<Vec<C>>) -> C {
    let n = m.len();
    let mut acc = C::new(1.0, 0.0);
    for i in 0..n {
        let p = (i..n).max_by(|&a, &b| m[a][i].norm().total_cmp(&m[b][i].norm())).unwrap();
        if m[p][i].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if p != i {
            m.swap(p, i);
            acc = -acc;
        }
        acc *= m[i][i];
        for k in i + 1..n {
            let f = m[k][i] / m[i][i];
            for j in i..n {
                let v = m[i][j];
                m[k][j] -= f * v;
            }
        }
    }
    acc
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `e^{2W^2 + beta W} / W^rho`.
fn weight(w: C, p: &TacParams) -> C {
    (2.0 * w * w + p.beta * w).exp() / w.powi(p.rho as i32)
}

/// Tables of `W`-moments for one parameter set.
pub struct Tacnode {
    pub p: TacParams,
    pub qc: QuadConfig,
    line: Vec<(C, C)>,
    circle: Vec<(C, C)>,
    /// `mu_k = int w W^k`, `k < 2r + 3`.
    mu: Vec<C>,
    theta00: C,
    /// `Theta_r(V, Z) / ((Z - V) Theta_r(0,0))`, V on the circle, Z on the line.
    g1: Vec<Vec<C>>,
    /// `Theta^+_{r-1}` as a polynomial: `coef[a][b]` of `V^a Z^b`.
    plus: Vec<Vec<C>>,
    /// `Theta^-_{r+1}(V, Z) / Theta_r(0,0)` on circle x circle.
    g4: Vec<Vec<C>>,
}

impl Tacnode {
    pub fn new(p: TacParams, qc: QuadConfig) -> Result<Self> {
        qc.validate()?;
        if p.rho < 0 {
            return Err(Error::Domain(format!("rho must be nonnegative, got {}", p.rho)));
        }
        let line = qc.line();
        let circle = qc.circle();
        let r = p.r;
        let kmax = 2 * r + 3;
        let wts: Vec<(C, C)> = line.iter().map(|&(w, dw)| (w, weight(w, &p) * dw)).collect();
        let mu: Vec<C> = (0..kmax).map(|k| wts.iter().map(|&(w, f)| f * w.powi(k as i32)).sum()).collect();
        let hankel = |n: usize, m: &dyn Fn(usize) -> C| -> C {
            let mat = (0..n).map(|i| (0..n).map(|j| m(i + j)).collect()).collect();
            factorial(n) * cdet(mat)
        };
        let theta00 = hankel(r, &|k| mu[k]);
        if theta00.norm() == 0.0 {
            return Err(Error::Quadrature("Theta_r(0,0) vanished".into()));
        }
        // nu_k(V) = int w W^k / (V - W), sigma_k(V) = int w W^k / (V - W)^2
        let nu: Vec<Vec<C>> = circle
            .iter()
            .map(|&(v, _)| (0..kmax).map(|k| wts.iter().map(|&(w, f)| f * w.powi(k as i32) / (v - w)).sum()).collect())
            .collect();
        let sig: Vec<Vec<C>> = circle
            .iter()
            .map(|&(v, _)| {
                (0..kmax).map(|k| wts.iter().map(|&(w, f)| f * w.powi(k as i32) / ((v - w) * (v - w))).sum()).collect()
            })
            .collect();
        let g1 = circle
            .iter()
            .enumerate()
            .map(|(i, &(v, _))| {
                line.iter()
                    .map(|&(z, _)| hankel(r, &|k| mu[k] + (z - v) * nu[i][k]) / ((z - v) * theta00))
                    .collect()
            })
            .collect();
        let plus = if r >= 1 {
            // interpolate the bivariate polynomial of degree r-1 in each variable
            let nodes: Vec<C> = (0..r).map(|k| C::new(k as f64, 0.0)).collect();
            let vals: Vec<Vec<C>> = nodes
                .iter()
                .map(|&v| {
                    nodes
                        .iter()
                        .map(|&z| hankel(r - 1, &|k| z * v * mu[k] - (z + v) * mu[k + 1] + mu[k + 2]))
                        .collect()
                })
                .collect();
            interpolate_2d(&nodes, &vals)
        } else {
            Vec::new()
        };
        let g4 = (0..circle.len())
            .map(|i| {
                (0..circle.len())
                    .map(|j| {
                        let (v, z) = (circle[i].0, circle[j].0);
                        let m = |k: usize| if i == j { sig[i][k] } else { (nu[i][k] - nu[j][k]) / (z - v) };
                        hankel(r + 1, &m) / theta00
                    })
                    .collect()
            })
            .collect();
        Ok(Tacnode { p, qc, line, circle, mu, theta00, g1, plus, g4 })
    }

    pub fn theta00(&self) -> C {
        self.theta00
    }

    /// `Theta_r(V, Z)` at arbitrary points off the line.
    pub fn theta(&self, v: C, z: C) -> C {
        let r = self.p.r;
        let wts: Vec<(C, C)> = self.line.iter().map(|&(w, dw)| (w, weight(w, &self.p) * dw)).collect();
        let nu: Vec<C> = (0..2 * r).map(|k| wts.iter().map(|&(w, f)| f * w.powi(k as i32) / (v - w)).sum()).collect();
        let mat = (0..r).map(|i| (0..r).map(|j| self.mu[i + j] + (z - v) * nu[i + j]).collect()).collect();
        factorial(r) * cdet(mat)
    }

    /// `Theta_r` by direct `r`-fold tensor quadrature, for `r <= 2`.
    pub fn theta_tensor(&self, v: C, z: C) -> Result<C> {
        let f = |w: C, dw: C| weight(w, &self.p) * dw * (z - w) / (v - w);
        match self.p.r {
            0 => Ok(C::new(1.0, 0.0)),
            1 => Ok(self.line.iter().map(|&(w, dw)| f(w, dw)).sum()),
            2 => {
                let vals: Vec<(C, C)> = self.line.iter().map(|&(w, dw)| (w, f(w, dw))).collect();
                let mut acc = C::new(0.0, 0.0);
                for &(w1, f1) in &vals {
                    for &(w2, f2) in &vals {
                        acc += f1 * f2 * (w1 - w2) * (w1 - w2);
                    }
                }
                Ok(acc)
            }
            r => Err(Error::Domain(format!("tensor quadrature is limited to r <= 2, got {r}"))),
        }
    }

    /// The five terms `L0 .. L4`.
    pub fn terms(&self, t1: i64, th1: f64, t2: i64, th2: f64) -> [C; 5] {
        let p = &self.p;
        let (rho, beta) = (p.rho, p.beta);
        let l0 = C::new(-heaviside(t1 - t2, th2 - th1), 0.0);

        let pw = |z: C, e: i64| z.powi(e as i32);
        let a1: Vec<C> = self.circle.iter().map(|&(v, dv)| dv * pw(v, rho - t1) * (-v * v - th1 * v).exp()).collect();
        let b1: Vec<C> = self.line.iter().map(|&(z, dz)| dz * pw(z, t2 - rho) * (z * z + th2 * z).exp()).collect();
        let l1 = bilinear(&a1, &self.g1, &b1);

        let a2: Vec<C> = self.circle.iter().map(|&(v, dv)| dv * pw(v, t2) * (-v * v + (th2 - beta) * v).exp()).collect();
        let b2: Vec<C> = self.line.iter().map(|&(z, dz)| dz * pw(z, -t1) * (z * z - (th1 - beta) * z).exp()).collect();
        let l2 = bilinear(&a2, &self.g1, &b2);

        let l3 = if p.r >= 1 {
            let moments = |f: &dyn Fn(C) -> C, shift: i64| -> Vec<C> {
                (0..p.r).map(|a| self.line.iter().map(|&(z, dz)| dz * f(z) * pw(z, a as i64 + shift)).sum()).collect()
            };
            let iv = moments(&|v| (v * v - (th1 - beta) * v).exp(), -t1);
            let jz = moments(&|z| (z * z + th2 * z).exp(), t2 - rho);
            let mut acc = C::new(0.0, 0.0);
            for a in 0..p.r {
                for b in 0..p.r {
                    acc += self.plus[a][b] * iv[a] * jz[b];
                }
            }
            acc * p.r as f64 / self.theta00
        } else {
            C::new(0.0, 0.0)
        };

        let a4: Vec<C> = self.circle.iter().map(|&(v, dv)| dv * pw(v, rho - t1) * (-v * v - th1 * v).exp()).collect();
        let b4: Vec<C> = self.circle.iter().map(|&(z, dz)| dz * pw(z, t2) * (-z * z + (th2 - beta) * z).exp()).collect();
        let l4 = -bilinear(&a4, &self.g4, &b4) / (p.r as f64 + 1.0);
        [l0, l1, l2, l3, l4]
    }

    pub fn kernel_complex(&self, t1: i64, th1: f64, t2: i64, th2: f64) -> C {
        self.terms(t1, th1, t2, th2).iter().sum()
    }

    /// Real value; errors when the imaginary part exceeds `tol` relative to the magnitude.
    pub fn kernel(&self, t1: i64, th1: f64, t2: i64, th2: f64, tol: f64) -> Result<f64> {
        let v = self.kernel_complex(t1, th1, t2, th2);
        if v.im.abs() > tol * v.re.abs().max(1.0) {
            return Err(Error::Quadrature(format!("imaginary part {:e} at ({t1}, {th1}; {t2}, {th2})", v.im)));
        }
        Ok(v.re)
    }

    /// The involuted arguments `(rho - t2, beta - th2; rho - t1, beta - th1)`.
    pub fn involute(&self, t1: i64, th1: f64, t2: i64, th2: f64) -> (i64, f64, i64, f64) {
        (self.p.rho - t2, self.p.beta - th2, self.p.rho - t1, self.p.beta - th1)
    }

    pub fn involution_residual(&self, t1: i64, th1: f64, t2: i64, th2: f64) -> InvolutionResidual {
        let a = self.terms(t1, th1, t2, th2);
        let (u1, v1, u2, v2) = self.involute(t1, th1, t2, th2);
        let b = self.terms(u1, v1, u2, v2);
        let sa: C = a.iter().sum();
        let sb: C = b.iter().sum();
        InvolutionResidual {
            total: (sa - sb).norm(),
            exchange_12: (a[1] - b[2]).norm().max((a[2] - b[1]).norm()),
            self_3: (a[3] - b[3]).norm(),
            self_4: (a[4] - b[4]).norm(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct InvolutionResidual {
    pub total: f64,
    pub exchange_12: f64,
    pub self_3: f64,
    pub self_4: f64,
}

impl InvolutionResidual {
    pub fn max(&self) -> f64 {
        self.total.max(self.exchange_12).max(self.self_3).max(self.self_4)
    }
}

/// `H^m(z) = z^{m-1} / (m-1)!` for `z >= 0` and `m >= 1`.
pub fn heaviside(m: i64, z: f64) -> f64 {
    if m < 1 || z < 0.0 {
        return 0.0;
    }
    z.powi(m as i32 - 1) / factorial(m as usize - 1)
}

fn bilinear(a: &[C], g: &[Vec<C>], b: &[C]) -> C {
    a.iter()
        .zip(g)
        .map(|(ai, row)| *ai * row.iter().zip(b).map(|(gij, bj)| gij * bj).sum::<C>())
        .sum()
}

/// Coefficients `c[a][b]` with `sum c[a][b] v_i^a z_j^b = vals[i][j]`.
fn interpolate_2d(nodes: &[C], vals: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = nodes.len();
    let vinv = invert(&(0..n).map(|i| (0..n).map(|k| nodes[i].powi(k as i32)).collect()).collect());
    // c = V^{-1} vals V^{-T}
    let mul = |a: &Vec<Vec<C>>, b: &Vec<Vec<C>>| -> Vec<Vec<C>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    let vt: Vec<Vec<C>> = (0..n).map(|i| (0..n).map(|j| vinv[j][i]).collect()).collect();
    mul(&mul(&vinv, &vals.to_vec()), &vt)
}

fn invert(m: &Vec<Vec<C>>) -> Vec<Vec<C>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }));
            r
        })
        .collect();
    for i in 0..n {
        let p = (i..n).max_by(|&x, &y| a[x][i].norm().total_cmp(&a[y][i].norm())).unwrap();
        a.swap(i, p);
        let pv = a[i][i];
        a[i].iter_mut().for_each(|v| *v /= pv);
        for k in 0..n {
            if k != i {
                let f = a[k][i];
                let row = a[i].clone();
                a[k].iter_mut().zip(row).for_each(|(v, w)| *v -= f * w);
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// The default 5 x 5 grid of `(tau, theta)` points around the strip.
pub fn default_grid(p: &TacParams) -> Vec<(i64, f64)> {
    let c = p.rho / 2;
    let mut out = Vec::new();
    for t in c - 2..=c + 2 {
        for k in -2..=2 {
            out.push((t, p.beta / 2.0 + 0.5 * k as f64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heaviside_values() {
        assert_eq!(heaviside(0, 1.0), 0.0);
        assert_eq!(heaviside(1, 0.0), 1.0);
        assert_eq!(heaviside(3, 2.0), 2.0);
        assert_eq!(heaviside(2, -1.0), 0.0);
    }

    #[test]
    fn theta_zero_is_one() {
        let t = Tacnode::new(TacParams { r: 0, rho: 1, beta: 0.0 }, QuadConfig::default()).unwrap();
        assert_eq!(t.theta00(), C::new(1.0, 0.0));
    }
}
