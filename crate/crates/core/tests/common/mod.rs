//! Shared oracles for the integration and acceptance tests.

#![allow(dead_code)]

use mixkin::harness::presets::{RIEMANN_INTERFACE, RIEMANN_LEFT, RIEMANN_RIGHT, T_FINAL};
use mixkin::harness::{run_riemann_euler, EulerKind};
use mixkin::{advance, build_grid, BoundaryCondition, MixtureState, RegimeParams, Scheme, SpeciesTable, TimeControl};
use std::f64::consts::PI;

/// Exact solution of the Riemann problem for a polytropic gas.
#[derive(Debug, Clone, Copy)]
pub struct ExactRiemann {
    pub gamma: f64,
    pub left: (f64, f64, f64),
    pub right: (f64, f64, f64),
    p_star: f64,
    u_star: f64,
}

impl ExactRiemann {
    /// `left`, `right` are `(rho, u, p)`.
    pub fn new(gamma: f64, left: (f64, f64, f64), right: (f64, f64, f64)) -> Self {
        let mut r = ExactRiemann { gamma, left, right, p_star: 0.0, u_star: 0.0 };
        r.solve_star();
        r
    }

    fn sound(&self, (rho, _, p): (f64, f64, f64)) -> f64 {
        (self.gamma * p / rho).sqrt()
    }

    /// Pressure function of one side and its derivative.
    fn f_side(&self, p: f64, side: (f64, f64, f64)) -> (f64, f64) {
        let g = self.gamma;
        let (rho, _, pk) = side;
        let c = self.sound(side);
        if p > pk {
            let a = 2.0 / ((g + 1.0) * rho);
            let b = (g - 1.0) / (g + 1.0) * pk;
            let q = (a / (p + b)).sqrt();
            ((p - pk) * q, q * (1.0 - 0.5 * (p - pk) / (p + b)))
        } else {
            let e = (g - 1.0) / (2.0 * g);
            let f = 2.0 * c / (g - 1.0) * ((p / pk).powf(e) - 1.0);
            (f, (p / pk).powf(-(g + 1.0) / (2.0 * g)) / (rho * c))
        }
    }

    fn solve_star(&mut self) {
        let du = self.right.1 - self.left.1;
        let mut p = 0.5 * (self.left.2 + self.right.2);
        for _ in 0..100 {
            let (fl, dl) = self.f_side(p, self.left);
            let (fr, dr) = self.f_side(p, self.right);
            let next = (p - (fl + fr + du) / (dl + dr)).max(1e-12);
            let done = (next - p).abs() <= 1e-15 * p;
            p = next;
            if done {
                break;
            }
        }
        let (fl, _) = self.f_side(p, self.left);
        let (fr, _) = self.f_side(p, self.right);
        self.p_star = p;
        self.u_star = 0.5 * (self.left.1 + self.right.1) + 0.5 * (fr - fl);
    }

    pub fn star(&self) -> (f64, f64) {
        (self.p_star, self.u_star)
    }

    /// `(rho, u, p)` at similarity coordinate `s = (x - x0) / t`.
    pub fn sample(&self, s: f64) -> (f64, f64, f64) {
        let g = self.gamma;
        let (ps, us) = (self.p_star, self.u_star);
        let gm = (g - 1.0) / (g + 1.0);
        if s <= us {
            let (rho, u, p) = self.left;
            let c = self.sound(self.left);
            if ps > p {
                let speed = u - c * ((g + 1.0) / (2.0 * g) * ps / p + (g - 1.0) / (2.0 * g)).sqrt();
                if s < speed {
                    self.left
                } else {
                    (rho * (ps / p + gm) / (gm * ps / p + 1.0), us, ps)
                }
            } else {
                let cs = c * (ps / p).powf((g - 1.0) / (2.0 * g));
                if s < u - c {
                    self.left
                } else if s > us - cs {
                    (rho * (ps / p).powf(1.0 / g), us, ps)
                } else {
                    let uf = 2.0 / (g + 1.0) * (c + (g - 1.0) / 2.0 * u + s);
                    let cf = 2.0 / (g + 1.0) * (c + (g - 1.0) / 2.0 * (u - s));
                    (rho * (cf / c).powf(2.0 / (g - 1.0)), uf, p * (cf / c).powf(2.0 * g / (g - 1.0)))
                }
            }
        } else {
            let (rho, u, p) = self.right;
            let c = self.sound(self.right);
            if ps > p {
                let speed = u + c * ((g + 1.0) / (2.0 * g) * ps / p + (g - 1.0) / (2.0 * g)).sqrt();
                if s > speed {
                    self.right
                } else {
                    (rho * (ps / p + gm) / (gm * ps / p + 1.0), us, ps)
                }
            } else {
                let cs = c * (ps / p).powf((g - 1.0) / (2.0 * g));
                if s > u + c {
                    self.right
                } else if s < us + cs {
                    (rho * (ps / p).powf(1.0 / g), us, ps)
                } else {
                    let uf = 2.0 / (g + 1.0) * (-c + (g - 1.0) / 2.0 * u + s);
                    let cf = 2.0 / (g + 1.0) * (c - (g - 1.0) / 2.0 * (u - s));
                    (rho * (cf / c).powf(2.0 / (g - 1.0)), uf, p * (cf / c).powf(2.0 * g / (g - 1.0)))
                }
            }
        }
    }

    /// Cell averages over `[x - dx/2, x + dx/2]` using `sub` midpoint samples.
    pub fn cell_average(&self, x: f64, dx: f64, x0: f64, t: f64, sub: usize) -> (f64, f64, f64) {
        let mut acc = (0.0, 0.0, 0.0);
        for k in 0..sub {
            let xs = x - 0.5 * dx + (k as f64 + 0.5) * dx / sub as f64;
            let (r, u, p) = self.sample((xs - x0) / t);
            acc = (acc.0 + r, acc.1 + u, acc.2 + p);
        }
        let w = 1.0 / sub as f64;
        (acc.0 * w, acc.1 * w, acc.2 * w)
    }
}

/// Max-norm error of `g1` against exact advection after `t_final`, for one
/// species with no collisions.
pub fn free_transport_error(scheme: Scheme, nx: usize, t_final: f64) -> f64 {
    let grid = build_grid([-1.0, 1.0], nx, BoundaryCondition::Periodic, [-1.0, 1.0], 8).unwrap();
    let species = SpeciesTable::uniform(vec![1.0], 0.0).unwrap();
    let density = |x: f64| 1.0 + 0.5 * (PI * x).sin();
    let mut state = MixtureState::for_grid(1, &grid);
    state.set_maxwellian(0, &grid, 1.0, 1.0, |x| (density(x), 0.0, 1.0)).unwrap();
    let tc = TimeControl::constant(2.0, t_final);
    let regime = RegimeParams::single_scale(1.0).unwrap();
    let out = advance(&state, &tc, scheme, &grid, &species, &regime).unwrap();
    let t = out.state.time;
    let mut err = 0.0f64;
    for i in 0..nx {
        let x = grid.x_nodes[i];
        for (j, &v) in grid.v_nodes.iter().enumerate() {
            let k = state.index(0, i, j);
            let exact = state.g1[k] / density(x) * density(x - v * t);
            err = err.max((out.state.g1[k] - exact).abs());
        }
    }
    err
}

/// Relative L1 differences in `rho`, `u`, `p` between the single-temperature
/// hydrodynamic shock tube at `nx` cells and the exact solution.
pub fn sod_errors(nx: usize) -> [(&'static str, f64); 3] {
    let run = run_riemann_euler(EulerKind::Single, nx, T_FINAL, 0.4).unwrap();
    let exact = ExactRiemann::new(5.0 / 3.0, RIEMANN_LEFT, RIEMANN_RIGHT);
    let dx = run.grid.dx;
    let (mut rho, mut u, mut p) = (Vec::new(), Vec::new(), Vec::new());
    for &x in &run.grid.x_nodes {
        let (r, v, q) = exact.cell_average(x, dx, RIEMANN_INTERFACE, T_FINAL, 16);
        rho.push(r);
        u.push(v);
        p.push(q);
    }
    let m = &run.moments;
    let pressure: Vec<f64> = m.n.iter().zip(&m.t).map(|(n, t)| n * t * run.species.k_b).collect();
    [("rho", l1_rel(&m.rho, &rho)), ("u", l1_rel(&m.u, &u)), ("p", l1_rel(&pressure, &p))]
}

pub fn l1_rel(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    num / b.iter().map(|y| y.abs()).sum::<f64>()
}

/// Least-squares slope of `-log2(error)` against `log2(N)`.
pub fn fitted_order(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|(n, _)| (*n as f64).log2()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, e)| -e.log2()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Rates between consecutive entries.
pub fn pair_rates(points: &[(usize, f64)]) -> Vec<f64> {
    points.windows(2).map(|w| (w[0].1 / w[1].1).log2()).collect()
}
