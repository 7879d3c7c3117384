// SPDX-License-Identifier: Apache-2.0

//! Dense collocation system for the completed single-layer formulation.
//!
//! Unknowns are the Fourier coefficients α_{ℓ,k_s,k_θ} of the density and the
//! centerline velocity samples c_{i,j_s}. Equations are the fiber-integrity
//! conditions on the (s*, θ*) grid followed by the averaged-force conditions
//! at each s*.
//!
//! Every quadrature line varies in only one coordinate, so the sums over
//! Fourier modes separate: kernel values are first accumulated against the
//! varying exponential and then multiplied by the exponential of the fixed
//! coordinate.

use super::problem::ProblemSpec;
use crate::error::{Error, Result};
use crate::geometry::{FrameEval, Section};
use crate::quadrature::{QuadratureRule, RuleLine};
use crate::Vec3;
use faer::{c64, Mat};
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use std::sync::Mutex;

/// Stokeslet (6), traction (6), source velocity (9), source traction (9).
const COMPONENTS: usize = 30;
const G0: usize = 0;
const K0: usize = 6;
const VR0: usize = 12;
const TR0: usize = 21;
/// Point-source terms vanish for larger |k_θ|.
const SOURCE_MODES: i64 = 2;
/// Position of (i, j) in the packed upper triangle of a symmetric 3×3 matrix.
const SYM: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unknown {
    Density { component: usize, ks: i64, ktheta: i64 },
    Velocity { component: usize, js: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equation {
    Integrity { component: usize, js: usize, jtheta: usize },
    Force { component: usize, js: usize },
}

/// Row and column numbering of the discrete system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexMap {
    pub ns: usize,
    pub ntheta: usize,
}

impl IndexMap {
    pub fn new(ns: usize, ntheta: usize) -> Self {
        Self { ns, ntheta }
    }

    pub fn dimension(&self) -> usize {
        3 * (self.ns * self.ntheta + self.ns)
    }

    fn grid(&self) -> usize {
        self.ns * self.ntheta
    }

    /// Mode number for a position in the symmetric range of `n` modes.
    #[inline]
    pub fn mode(n: usize, idx: usize) -> i64 {
        idx as i64 - (n as i64 - 1) / 2
    }

    #[inline]
    fn mode_index(n: usize, k: i64) -> Option<usize> {
        let idx = k + (n as i64 - 1) / 2;
        (0..n as i64).contains(&idx).then_some(idx as usize)
    }

    pub fn density_column(&self, component: usize, ks: i64, ktheta: i64) -> Option<usize> {
        let a = Self::mode_index(self.ns, ks)?;
        let b = Self::mode_index(self.ntheta, ktheta)?;
        (component < 3).then(|| component * self.grid() + a * self.ntheta + b)
    }

    pub fn velocity_column(&self, component: usize, js: usize) -> usize {
        3 * self.grid() + component * self.ns + js
    }

    pub fn integrity_row(&self, component: usize, js: usize, jtheta: usize) -> usize {
        component * self.grid() + js * self.ntheta + jtheta
    }

    pub fn force_row(&self, component: usize, js: usize) -> usize {
        3 * self.grid() + component * self.ns + js
    }

    pub fn column(&self, col: usize) -> Option<Unknown> {
        let g = self.grid();
        if col < 3 * g {
            let (component, rest) = (col / g, col % g);
            Some(Unknown::Density {
                component,
                ks: Self::mode(self.ns, rest / self.ntheta),
                ktheta: Self::mode(self.ntheta, rest % self.ntheta),
            })
        } else if col < self.dimension() {
            let rest = col - 3 * g;
            Some(Unknown::Velocity {
                component: rest / self.ns,
                js: rest % self.ns,
            })
        } else {
            None
        }
    }

    pub fn row(&self, row: usize) -> Option<Equation> {
        let g = self.grid();
        if row < 3 * g {
            let (component, rest) = (row / g, row % g);
            Some(Equation::Integrity {
                component,
                js: rest / self.ntheta,
                jtheta: rest % self.ntheta,
            })
        } else if row < self.dimension() {
            let rest = row - 3 * g;
            Some(Equation::Force {
                component: rest / self.ns,
                js: rest % self.ns,
            })
        } else {
            None
        }
    }
}

/// Assembled square system `matrix · x = rhs`.
#[derive(Clone, Debug)]
pub struct DiscreteSystem {
    pub matrix: Mat<c64>,
    pub rhs: Vec<c64>,
    pub index: IndexMap,
    /// Quadrature nodes in the rule used at each s*.
    pub rule_nodes: Vec<usize>,
}

/// Kernel values at one quadrature node, already multiplied by w·J.
#[inline]
fn node_kernels(
    target: &Vec3,
    target_normal: &Vec3,
    sec: &Section,
    radius: f64,
    theta: f64,
    weight: f64,
    out: &mut [f64; COMPONENTS],
) {
    let (sn, cs) = theta.sin_cos();
    let nu = sec.normal * cs + sec.binormal * sn;
    let jac = radius * sec.speed * (1.0 - radius * (sec.kappa1 * cs + sec.kappa2 * sn));
    let wj = weight * jac;
    let r = target - (sec.point + nu * radius);
    let r2 = r.norm_squared();
    let inv_r = 1.0 / r2.sqrt();
    let inv_r3 = inv_r * inv_r * inv_r;
    let rn = r.dot(target_normal) * inv_r3 * inv_r * inv_r;
    for i in 0..3 {
        for j in i..3 {
            let rr = r[i] * r[j];
            let diag = if i == j { inv_r } else { 0.0 };
            out[G0 + SYM[i][j]] = wj * (diag + rr * inv_r3);
            out[K0 + SYM[i][j]] = wj * rr * rn;
        }
    }
    let big_r = target - sec.point;
    let inv_big = 1.0 / big_r.norm();
    let inv_big3 = inv_big * inv_big * inv_big;
    let big_rn = big_r.dot(target_normal) * inv_big3 * inv_big * inv_big;
    for i in 0..3 {
        let v = big_r[i] * inv_big3;
        let t = 2.0 * target_normal[i] * inv_big3 - 6.0 * big_r[i] * big_rn;
        for l in 0..3 {
            out[VR0 + 3 * i + l] = wj * v * nu[l];
            out[TR0 + 3 * i + l] = wj * t * nu[l];
        }
    }
}

/// e^{i m x} for m in the symmetric range of `n` modes, as (re, im).
fn phases(n: usize, x: f64, re: &mut [f64], im: &mut [f64]) {
    let half = (n - 1) / 2;
    let (s, c) = x.sin_cos();
    re[half] = 1.0;
    im[half] = 0.0;
    let (mut pr, mut pi) = (1.0, 0.0);
    for k in 1..=half {
        (pr, pi) = (pr * c - pi * s, pr * s + pi * c);
        re[half + k] = pr;
        im[half + k] = pi;
        re[half - k] = pr;
        im[half - k] = -pi;
    }
}

/// Per-line accumulator over the varying coordinate's modes.
struct LineSum {
    modes: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    pr: Vec<f64>,
    pi: Vec<f64>,
}

impl LineSum {
    fn new(modes: usize) -> Self {
        Self {
            modes,
            re: vec![0.0; COMPONENTS * modes],
            im: vec![0.0; COMPONENTS * modes],
            pr: vec![0.0; modes],
            pi: vec![0.0; modes],
        }
    }

    fn clear(&mut self) {
        self.re.fill(0.0);
        self.im.fill(0.0);
    }

    #[inline]
    fn add(&mut self, coordinate: f64, values: &[f64; COMPONENTS]) {
        phases(self.modes, coordinate, &mut self.pr, &mut self.pi);
        let m = self.modes;
        for (c, &v) in values.iter().enumerate() {
            let re = &mut self.re[c * m..(c + 1) * m];
            let im = &mut self.im[c * m..(c + 1) * m];
            for k in 0..m {
                re[k] += v * self.pr[k];
                im[k] += v * self.pi[k];
            }
        }
    }
}

/// Kernel moments E[c][k_s][k_θ] for one target point.
struct Moments {
    ns: usize,
    nt: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    qr: Vec<f64>,
    qi: Vec<f64>,
}

impl Moments {
    fn new(ns: usize, nt: usize) -> Self {
        Self {
            ns,
            nt,
            re: vec![0.0; COMPONENTS * ns * nt],
            im: vec![0.0; COMPONENTS * ns * nt],
            qr: vec![0.0; ns.max(nt)],
            qi: vec![0.0; ns.max(nt)],
        }
    }

    fn clear(&mut self) {
        self.re.fill(0.0);
        self.im.fill(0.0);
    }

    /// Adds a line that varied in θ at fixed `s`.
    fn flush_theta_line(&mut self, line: &LineSum, s: f64) {
        let (ns, nt) = (self.ns, self.nt);
        phases(ns, s, &mut self.qr, &mut self.qi);
        for c in 0..COMPONENTS {
            let (lr, li) = (&line.re[c * nt..(c + 1) * nt], &line.im[c * nt..(c + 1) * nt]);
            for a in 0..ns {
                let (qr, qi) = (self.qr[a], self.qi[a]);
                let base = (c * ns + a) * nt;
                let (er, ei) = (&mut self.re[base..base + nt], &mut self.im[base..base + nt]);
                for b in 0..nt {
                    er[b] += lr[b] * qr - li[b] * qi;
                    ei[b] += lr[b] * qi + li[b] * qr;
                }
            }
        }
    }

    /// Adds a line that varied in s at fixed `theta`.
    fn flush_s_line(&mut self, line: &LineSum, theta: f64) {
        let (ns, nt) = (self.ns, self.nt);
        phases(nt, theta, &mut self.qr, &mut self.qi);
        for c in 0..COMPONENTS {
            for a in 0..ns {
                let (lr, li) = (line.re[c * ns + a], line.im[c * ns + a]);
                let base = (c * ns + a) * nt;
                let (er, ei) = (&mut self.re[base..base + nt], &mut self.im[base..base + nt]);
                for b in 0..nt {
                    er[b] += lr * self.qr[b] - li * self.qi[b];
                    ei[b] += lr * self.qi[b] + li * self.qr[b];
                }
            }
        }
    }

    #[inline]
    fn get(&self, c: usize, a: usize, b: usize) -> c64 {
        let k = (c * self.ns + a) * self.nt + b;
        c64::new(self.re[k], self.im[k])
    }
}

/// Frame data at every distinct s of one rule.
struct PreparedRule {
    rule: QuadratureRule,
    inner: Vec<Vec<Section>>,
    outer: Vec<Section>,
}

fn prepare<F: FrameEval>(p: &ProblemSpec<F>, s_star: f64) -> Result<PreparedRule> {
    let rule = QuadratureRule::build(&p.surface, s_star, 0.0, p.qn)?;
    let inner = rule
        .inner_lines()
        .iter()
        .map(|line| match line {
            RuleLine::ConstS { s, .. } => vec![p.surface.section(*s)],
            RuleLine::ConstTheta { nodes, .. } => nodes.iter().map(|&(s, _)| p.surface.section(s)).collect(),
        })
        .collect();
    let outer = rule.outer_s().iter().map(|&(s, _)| p.surface.section(s)).collect();
    Ok(PreparedRule { rule, inner, outer })
}

/// Integrates all kernel moments for the target X(s*, θ*).
fn target_moments(prepared: &PreparedRule, target: &Vec3, normal: &Vec3, theta_star: f64, radius: f64, m: &mut Moments) {
    let (ns, nt) = (m.ns, m.nt);
    let mut by_theta = LineSum::new(nt);
    let mut by_s = LineSum::new(ns);
    let mut values = [0.0; COMPONENTS];
    m.clear();
    for (line, secs) in prepared.rule.inner_lines().iter().zip(&prepared.inner) {
        match line {
            RuleLine::ConstS { s, nodes } => {
                by_theta.clear();
                for &(dtheta, w) in nodes {
                    let theta = theta_star + dtheta;
                    node_kernels(target, normal, &secs[0], radius, theta, w, &mut values);
                    by_theta.add(theta, &values);
                }
                m.flush_theta_line(&by_theta, *s);
            }
            RuleLine::ConstTheta { dtheta, nodes } => {
                let theta = theta_star + dtheta;
                by_s.clear();
                for (&(s, w), sec) in nodes.iter().zip(secs) {
                    node_kernels(target, normal, sec, radius, theta, w, &mut values);
                    by_s.add(s, &values);
                }
                m.flush_s_line(&by_s, theta);
            }
        }
    }
    for &(dtheta, wt) in prepared.rule.outer_theta() {
        let theta = theta_star + dtheta;
        by_s.clear();
        for (&(s, ws), sec) in prepared.rule.outer_s().iter().zip(&prepared.outer) {
            node_kernels(target, normal, sec, radius, theta, ws * wt, &mut values);
            by_s.add(s, &values);
        }
        m.flush_s_line(&by_s, theta);
    }
}

/// Rows of one collocation cross-section: 3 n_θ integrity rows then 3 force rows.
struct Block {
    js: usize,
    rows: Vec<Vec<c64>>,
    nodes: usize,
}

fn assemble_block<F: FrameEval>(p: &ProblemSpec<F>, index: &IndexMap, js: usize) -> Result<Block> {
    let (ns, nt) = (p.ns, p.ntheta);
    let dim = index.dimension();
    let radius = p.surface.radius();
    let s_star = p.collocation_s(js);
    let prepared = prepare(p, s_star)?;
    let star = p.surface.section(s_star);
    let mut moments = Moments::new(ns, nt);
    let mut rows = vec![vec![c64::new(0.0, 0.0); dim]; 3 * nt + 3];
    let sl = 1.0 / (8.0 * PI);
    let src = 1.0 / (4.0 * PI);
    let mut eks = vec![c64::new(0.0, 0.0); ns];
    for (a, e) in eks.iter_mut().enumerate() {
        *e = c64::from_polar(1.0, IndexMap::mode(ns, a) as f64 * s_star);
    }
    for jt in 0..nt {
        let theta_star = p.collocation_theta(jt);
        let target = star.surface_point(radius, theta_star);
        let normal = star.surface_normal(theta_star);
        let fold = star.jacobian(radius, theta_star) * TAU / nt as f64;
        target_moments(&prepared, &target, &normal, theta_star, radius, &mut moments);
        let (head, force_rows) = rows.split_at_mut(3 * nt);
        for i in 0..3 {
            let vel = &mut head[i * nt + jt];
            for l in 0..3 {
                for a in 0..ns {
                    for b in 0..nt {
                        let kt = IndexMap::mode(nt, b);
                        let col = index.density_column(l, IndexMap::mode(ns, a), kt).expect("mode in range");
                        let mut v = moments.get(G0 + SYM[i][l], a, b) * sl;
                        let mut t = moments.get(K0 + SYM[i][l], a, b) * (-3.0 * src);
                        if kt.abs() <= SOURCE_MODES {
                            v += moments.get(VR0 + 3 * i + l, a, b) * src;
                            t += moments.get(TR0 + 3 * i + l, a, b) * src;
                        }
                        if i == l {
                            let e = eks[a] * c64::from_polar(1.0, kt as f64 * theta_star);
                            t -= e * 0.5;
                        }
                        vel[col] = v;
                        force_rows[i][col] += t * fold;
                    }
                }
            }
            vel[index.velocity_column(i, js)] = c64::new(-1.0, 0.0);
        }
    }
    Ok(Block {
        js,
        rows,
        nodes: prepared.rule.node_count(),
    })
}

/// Builds the square collocation system. Cross-sections are assembled in
/// parallel on the current rayon pool.
pub fn assemble<F: FrameEval>(p: &ProblemSpec<F>) -> Result<DiscreteSystem> {
    let index = IndexMap::new(p.ns, p.ntheta);
    let dim = index.dimension();
    let matrix = Mutex::new(Mat::<c64>::zeros(dim, dim));
    let rule_nodes = Mutex::new(vec![0usize; p.ns]);
    (0..p.ns).into_par_iter().try_for_each(|js| -> Result<()> {
        let block = assemble_block(p, &index, js)?;
        let nt = p.ntheta;
        let mut target = matrix.lock().expect("matrix lock");
        for (k, row) in block.rows.iter().enumerate() {
            let r = if k < 3 * nt {
                index.integrity_row(k / nt, block.js, k % nt)
            } else {
                index.force_row(k - 3 * nt, block.js)
            };
            for (col, v) in row.iter().enumerate() {
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFiniteEntry { row: r, col });
                }
                target[(r, col)] = *v;
            }
        }
        rule_nodes.lock().expect("node lock")[block.js] = block.nodes;
        Ok(())
    })?;
    let mut rhs = vec![c64::new(0.0, 0.0); dim];
    for js in 0..p.ns {
        let s = p.collocation_s(js);
        let f = p.force.eval(s) * p.surface.centerline().speed(s);
        for i in 0..3 {
            rhs[index.force_row(i, js)] = c64::new(f[i], 0.0);
        }
    }
    Ok(DiscreteSystem {
        matrix: matrix.into_inner().expect("matrix lock"),
        rhs,
        index,
        rule_nodes: rule_nodes.into_inner().expect("node lock"),
    })
}
