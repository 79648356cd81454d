//! CWENO reconstruction and the conservative sliding-average evaluation.
//!
//! Nodal values are read as cell averages over `[x_i - dx/2, x_i + dx/2]`.
//! For each cell a CWENO polynomial `R_i` is built whose cell average
//! reproduces the nodal value exactly. A shifted value is then the average of
//! the piecewise polynomial over a window of width `dx` centred at
//! `x_i + theta dx`, which only touches `R_i` and `R_{i+1}`:
//!
//! `Q(x_i + theta dx) = sum_l dx^l (alpha_l(theta) R_i^(l) + beta_l(theta) R_{i+1}^(l))`.
//!
//! Summing `Q` over a periodic row telescopes back to the sum of the input,
//! which is what makes the semi-Lagrangian transport conservative.
//!
//! Two constructions are provided:
//!
//! - degree 2 (CWENO23): left/right linear candidates and a central parabola,
//!   ideal weights `(1/4, 1/4, 1/2)`;
//! - degree 4 (CWENO35): the three three-point parabolas and a central quartic,
//!   ideal weights `(1/6, 1/6, 1/6, 1/2)`.
//!
//! Both use Jiang-Shu smoothness indicators with exponent 2.

use std::sync::OnceLock;

use crate::error::{MixError, Result};
use crate::linalg::invert;
use crate::phase_space::{decompose_cells, BoundaryCondition, PhaseGrid};

/// Default regularization of the nonlinear weights.
pub const DEFAULT_EPS_W: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    Two,
    Four,
}

impl Degree {
    pub fn from_k(k: usize) -> Result<Self> {
        match k {
            2 => Ok(Degree::Two),
            4 => Ok(Degree::Four),
            other => Err(MixError::UnsupportedDegree(other)),
        }
    }

    pub fn k(self) -> usize {
        match self {
            Degree::Two => 2,
            Degree::Four => 4,
        }
    }

    /// Stencil half-width.
    pub fn half(self) -> usize {
        self.k() / 2
    }
}

/// Regularization `eps` in the nonlinear weights `d / (eps + beta)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularization {
    /// Fixed `eps`, independent of the data magnitude.
    Absolute(f64),
    /// `eps` times the mean square of the stencil values; makes the weights
    /// invariant under scaling of the data.
    Relative(f64),
}

impl Default for Regularization {
    fn default() -> Self {
        Regularization::Absolute(DEFAULT_EPS_W)
    }
}

/// Candidate polynomial: monomial coefficients in `xi = (x - x_i)/dx` as a
/// linear map of the stencil values, plus its smoothness quadratic form.
#[derive(Debug, Clone)]
struct Candidate {
    coef: [[f64; 5]; 5],
    smooth: [[f64; 5]; 5],
    ideal: f64,
}

#[derive(Debug, Clone)]
struct Table {
    width: usize,
    terms: usize,
    candidates: Vec<Candidate>,
}

/// Map from cell averages on `offsets` to monomial coefficients, embedded in a
/// stencil of the given half-width.
fn average_fit(offsets: &[i32], half: usize) -> [[f64; 5]; 5] {
    let r = offsets.len();
    let mut v = vec![0.0; r * r];
    for (row, &o) in offsets.iter().enumerate() {
        let (lo, hi) = (o as f64 - 0.5, o as f64 + 0.5);
        for col in 0..r {
            let p = (col + 1) as i32;
            v[row * r + col] = (hi.powi(p) - lo.powi(p)) / p as f64;
        }
    }
    let inv = invert(&v, r).expect("cell-average Vandermonde matrix is invertible");
    let mut out = [[0.0; 5]; 5];
    for l in 0..r {
        for (row, &o) in offsets.iter().enumerate() {
            out[l][(half as i32 + o) as usize] = inv[l * r + row];
        }
    }
    out
}

/// `G[a][b] = sum_{l >= 1} int_{-1/2}^{1/2} D^l xi^a D^l xi^b`.
fn smoothness_gram(terms: usize) -> [[f64; 5]; 5] {
    let falling = |a: usize, l: usize| -> f64 { ((a - l + 1)..=a).map(|v| v as f64).product() };
    let moment = |p: usize| -> f64 {
        if p % 2 == 1 {
            0.0
        } else {
            2.0 * 0.5f64.powi(p as i32 + 1) / (p + 1) as f64
        }
    };
    let mut g = [[0.0; 5]; 5];
    for a in 1..terms {
        for b in 1..terms {
            let mut acc = 0.0;
            for l in 1..=a.min(b) {
                acc += falling(a, l) * falling(b, l) * moment(a + b - 2 * l);
            }
            g[a][b] = acc;
        }
    }
    g
}

fn quadratic_form(coef: &[[f64; 5]; 5], g: &[[f64; 5]; 5], width: usize, terms: usize) -> [[f64; 5]; 5] {
    let mut s = [[0.0; 5]; 5];
    for p in 0..width {
        for q in 0..width {
            let mut acc = 0.0;
            for a in 0..terms {
                for b in 0..terms {
                    acc += coef[a][p] * g[a][b] * coef[b][q];
                }
            }
            s[p][q] = acc;
        }
    }
    s
}

fn build_table(degree: Degree) -> Table {
    let half = degree.half();
    let width = 2 * half + 1;
    let terms = degree.k() + 1;
    let full: Vec<i32> = (-(half as i32)..=half as i32).collect();
    let (lows, d_low): (Vec<Vec<i32>>, f64) = match degree {
        Degree::Two => (vec![vec![-1, 0], vec![0, 1]], 0.25),
        Degree::Four => (vec![vec![-2, -1, 0], vec![-1, 0, 1], vec![0, 1, 2]], 1.0 / 6.0),
    };
    let d0 = 0.5;
    let opt = average_fit(&full, half);
    let low_fits: Vec<_> = lows.iter().map(|o| average_fit(o, half)).collect();
    let mut p0 = [[0.0; 5]; 5];
    for l in 0..terms {
        for c in 0..width {
            let lo: f64 = low_fits.iter().map(|f| f[l][c]).sum();
            p0[l][c] = (opt[l][c] - d_low * lo) / d0;
        }
    }
    let g = smoothness_gram(terms);
    let mut candidates = vec![Candidate { coef: p0, smooth: quadratic_form(&p0, &g, width, terms), ideal: d0 }];
    for f in low_fits {
        candidates.push(Candidate { coef: f, smooth: quadratic_form(&f, &g, width, terms), ideal: d_low });
    }
    Table { width, terms, candidates }
}

fn table(degree: Degree) -> &'static Table {
    static T2: OnceLock<Table> = OnceLock::new();
    static T4: OnceLock<Table> = OnceLock::new();
    match degree {
        Degree::Two => T2.get_or_init(|| build_table(Degree::Two)),
        Degree::Four => T4.get_or_init(|| build_table(Degree::Four)),
    }
}

/// CWENO polynomial of the centre cell of `stencil` as monomial coefficients
/// in `xi = (x - x_i)/dx`. `stencil` has `k + 1` entries centred on the cell.
pub fn reconstruct_cell(degree: Degree, stencil: &[f64], reg: Regularization) -> [f64; 5] {
    let t = table(degree);
    let w = &stencil[..t.width];
    let eps = match reg {
        Regularization::Absolute(e) => e,
        Regularization::Relative(e) => e * w.iter().map(|v| v * v).sum::<f64>() / t.width as f64 + f64::MIN_POSITIVE,
    };
    let mut poly = [0.0; 5];
    let mut total = 0.0;
    for c in &t.candidates {
        let mut beta = 0.0;
        for p in 0..t.width {
            let mut row = 0.0;
            for q in 0..t.width {
                row += c.smooth[p][q] * w[q];
            }
            beta += w[p] * row;
        }
        let e = eps + beta;
        let alpha = c.ideal / (e * e);
        total += alpha;
        for l in 0..t.terms {
            let mut acc = 0.0;
            for q in 0..t.width {
                acc += c.coef[l][q] * w[q];
            }
            poly[l] += alpha * acc;
        }
    }
    let inv = 1.0 / total;
    for v in poly.iter_mut().take(t.terms) {
        *v *= inv;
    }
    poly
}

/// Value of the degree-2 reconstruction of the centre cell of
/// `[u_{i-1}, u_i, u_{i+1}]` at its right face `x_i + dx/2`.
pub fn face_value_deg2(stencil: &[f64; 3], reg: Regularization) -> f64 {
    let p = reconstruct_cell(Degree::Two, stencil, reg);
    p[0] + 0.5 * p[1] + 0.25 * p[2]
}

/// Per-cell reconstruction `R_i(x) = sum_l R_i^(l) (x - x_i)^l / l!`.
///
/// Coefficients are stored scaled as `dx^l R_i^(l)`, so the field itself is
/// independent of the cell size.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField {
    pub degree: Degree,
    pub bc: BoundaryCondition,
    n: usize,
    terms: usize,
    coeffs: Vec<f64>,
    edge: [f64; 2],
}

impl PolyField {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Scaled coefficient `dx^l R_i^(l)`. Periodic fields wrap; free-flow
    /// cells beyond the row are constant edge values.
    #[inline]
    pub fn scaled(&self, cell: isize, l: usize) -> f64 {
        let n = self.n as isize;
        match self.bc {
            BoundaryCondition::Periodic => {
                let c = cell.rem_euclid(n) as usize;
                self.coeffs[c * self.terms + l]
            }
            BoundaryCondition::Freeflow => {
                if cell < 0 || cell >= n {
                    if l == 0 {
                        self.edge[(cell >= n) as usize]
                    } else {
                        0.0
                    }
                } else {
                    self.coeffs[cell as usize * self.terms + l]
                }
            }
        }
    }

    /// `R_i^(l)` for a cell of size `dx`.
    pub fn derivative(&self, cell: isize, l: usize, dx: f64) -> f64 {
        if l >= self.terms {
            return 0.0;
        }
        self.scaled(cell, l) / dx.powi(l as i32)
    }

    /// Average of `R_i` over its own cell.
    pub fn cell_average(&self, cell: isize) -> f64 {
        // int_{-1/2}^{1/2} xi^l / l! = 2 (1/2)^(l+1) / (l+1)! for even l
        let mut acc = 0.0;
        let mut fact = 1.0;
        for l in 0..self.terms {
            fact *= (l + 1) as f64;
            if l % 2 == 0 {
                acc += self.scaled(cell, l) * 2.0 * 0.5f64.powi(l as i32 + 1) / fact;
            }
        }
        acc
    }

    /// Point value of `R_i` at `x_i + xi dx`.
    pub fn eval(&self, cell: isize, xi: f64) -> f64 {
        let mut acc = 0.0;
        let mut pow = 1.0;
        let mut fact = 1.0;
        for l in 0..self.terms {
            if l > 0 {
                fact *= l as f64;
                pow *= xi;
            }
            acc += self.scaled(cell, l) * pow / fact;
        }
        acc
    }

    /// Sliding averages at every node shifted by `displacement`, written to `out`.
    pub fn shift_into(&self, values: &[f64], grid: &PhaseGrid, displacement: f64, out: &mut [f64]) {
        let foot = decompose_cells(displacement / grid.dx);
        let kernel = ShiftKernel::new(foot.theta, self.degree);
        let n = self.n;
        // left and right contributions of every cell for this theta
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        for c in 0..n {
            let base = c * self.terms;
            let mut a = 0.0;
            let mut b = 0.0;
            for l in 0..self.terms {
                a += kernel.alpha[l] * self.coeffs[base + l];
                b += kernel.beta[l] * self.coeffs[base + l];
            }
            left[c] = a;
            right[c] = b;
        }
        match self.bc {
            BoundaryCondition::Periodic => {
                let q = foot.base.rem_euclid(n as isize) as usize;
                for (i, o) in out.iter_mut().enumerate().take(n) {
                    let c = (i + q) % n;
                    let c1 = if c + 1 == n { 0 } else { c + 1 };
                    *o = left[c] + right[c1];
                }
            }
            BoundaryCondition::Freeflow => {
                let [x_min, x_max] = grid.x_domain;
                // beyond the row the reconstruction is the constant edge value
                let part = |c: isize, from_left: bool| -> f64 {
                    if c < 0 || c >= n as isize {
                        let e = self.edge[(c >= n as isize) as usize];
                        if from_left {
                            kernel.alpha[0] * e
                        } else {
                            kernel.beta[0] * e
                        }
                    } else if from_left {
                        left[c as usize]
                    } else {
                        right[c as usize]
                    }
                };
                for i in 0..n {
                    let x = grid.x_nodes[i] + displacement;
                    out[i] = if x < x_min {
                        values[0]
                    } else if x > x_max {
                        values[n - 1]
                    } else {
                        let c = i as isize + foot.base;
                        part(c, true) + part(c + 1, false)
                    };
                }
            }
        }
    }
}

pub fn cweno_reconstruct(values: &[f64], k: usize, bc: BoundaryCondition) -> Result<PolyField> {
    reconstruct_row(values, Degree::from_k(k)?, bc, Regularization::default())
}

/// Reconstruction of a whole row with an explicit regularization.
pub fn reconstruct_row(
    values: &[f64],
    degree: Degree,
    bc: BoundaryCondition,
    reg: Regularization,
) -> Result<PolyField> {
    let n = values.len();
    if n < degree.k() + 2 {
        return Err(MixError::InvalidGrid(format!("row of length {n} is too short for degree {}", degree.k())));
    }
    let half = degree.half();
    let terms = degree.k() + 1;
    // padded copy with ghost cells
    let mut ext = Vec::with_capacity(n + 2 * half);
    for g in 0..half {
        let src = match bc {
            BoundaryCondition::Periodic => n - half + g,
            BoundaryCondition::Freeflow => 0,
        };
        ext.push(values[src]);
    }
    ext.extend_from_slice(values);
    for g in 0..half {
        let src = match bc {
            BoundaryCondition::Periodic => g,
            BoundaryCondition::Freeflow => n - 1,
        };
        ext.push(values[src]);
    }
    let mut coeffs = vec![0.0; n * terms];
    let mut fact = [1.0; 5];
    for l in 1..5 {
        fact[l] = fact[l - 1] * l as f64;
    }
    for i in 0..n {
        let p = reconstruct_cell(degree, &ext[i..i + 2 * half + 1], reg);
        for l in 0..terms {
            coeffs[i * terms + l] = p[l] * fact[l];
        }
    }
    Ok(PolyField { degree, bc, n, terms, coeffs, edge: [values[0], values[n - 1]] })
}

/// Sliding-average weights for a fractional shift `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftKernel {
    pub theta: f64,
    pub degree: Degree,
    pub alpha: [f64; 5],
    pub beta: [f64; 5],
}

impl ShiftKernel {
    pub fn new(theta: f64, degree: Degree) -> Self {
        let mut alpha = [0.0; 5];
        let mut beta = [0.0; 5];
        let s = 2.0 * theta - 1.0;
        let mut fact = 1.0;
        for l in 0..=degree.k() {
            fact *= (l + 1) as f64;
            let p = (l + 1) as i32;
            let den = 2f64.powi(p) * fact;
            let sp = s.powi(p);
            alpha[l] = (1.0 - sp) / den;
            beta[l] = (sp - (-1f64).powi(p)) / den;
        }
        ShiftKernel { theta, degree, alpha, beta }
    }
}

/// Sliding average of the reconstruction over the window centred at
/// `x_i + theta dx`.
pub fn q_eval(field: &PolyField, cell: isize, theta: f64) -> f64 {
    let kernel = ShiftKernel::new(theta, field.degree);
    let mut acc = 0.0;
    for l in 0..=field.degree.k() {
        acc += kernel.alpha[l] * field.scaled(cell, l) + kernel.beta[l] * field.scaled(cell + 1, l);
    }
    acc
}

/// Values at `x_i + displacement` for every node of the row.
pub fn shift_field(values: &[f64], grid: &PhaseGrid, displacement: f64, degree: Degree) -> Result<Vec<f64>> {
    let field = reconstruct_row(values, degree, grid.bc, Regularization::default())?;
    let mut out = vec![0.0; values.len()];
    field.shift_into(values, grid, displacement, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::build_grid;
    use proptest::prelude::*;

    fn periodic(nx: usize) -> PhaseGrid {
        build_grid([-1.0, 1.0], nx, BoundaryCondition::Periodic, [-1.0, 1.0], 2).unwrap()
    }

    #[test]
    fn kernel_identities_at_zero() {
        let k = ShiftKernel::new(0.0, Degree::Four);
        let want = [1.0, 0.0, 1.0 / 24.0, 0.0, 1.0 / 1920.0];
        for l in 0..5 {
            assert!((k.alpha[l] - want[l]).abs() < 1e-16);
            assert_eq!(k.beta[l], 0.0);
        }
        for theta in [0.0, 0.1, 0.5, 0.77, 0.999] {
            let k = ShiftKernel::new(theta, Degree::Two);
            assert!((k.alpha[0] + k.beta[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unsupported_degree() {
        assert!(matches!(
            cweno_reconstruct(&[1.0; 8], 3, BoundaryCondition::Periodic),
            Err(MixError::UnsupportedDegree(3))
        ));
        assert!(cweno_reconstruct(&[1.0; 5], 4, BoundaryCondition::Periodic).is_err());
    }

    #[test]
    fn constants_are_reproduced() {
        for k in [2, 4] {
            let f = cweno_reconstruct(&[2.5; 12], k, BoundaryCondition::Periodic).unwrap();
            for i in 0..12 {
                assert!((f.scaled(i, 0) - 2.5).abs() < 1e-15);
                for l in 1..=k {
                    assert!(f.scaled(i, l).abs() < 1e-14);
                }
                for theta in [0.0, 0.3, 0.9] {
                    assert!((q_eval(&f, i, theta) - 2.5).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn theta_zero_returns_nodal_value() {
        let vals: Vec<f64> = (0..20).map(|i| ((i * 7919) % 13) as f64 * 0.37 - 1.0).collect();
        for k in [2, 4] {
            let f = cweno_reconstruct(&vals, k, BoundaryCondition::Periodic).unwrap();
            for i in 0..20 {
                assert!((q_eval(&f, i as isize, 0.0) - vals[i]).abs() < 1e-13);
            }
        }
    }

    /// Data from a polynomial every candidate reproduces (linear for k = 2,
    /// quadratic for k = 4) must come back exactly whatever the weights.
    #[test]
    fn candidate_polynomials_are_reproduced() {
        for (k, p) in [(2usize, vec![1.0, -0.7]), (4, vec![1.0, 2.0, -1.0])] {
            let anti = |x: f64| -> f64 { (0..p.len()).map(|l| p[l] * x.powi(l as i32 + 1) / (l + 1) as f64).sum() };
            let avgs: Vec<f64> = (0..12).map(|i| anti(i as f64 + 0.5) - anti(i as f64 - 0.5)).collect();
            let f = reconstruct_row(
                &avgs,
                Degree::from_k(k).unwrap(),
                BoundaryCondition::Freeflow,
                Regularization::default(),
            )
            .unwrap();
            let h = k / 2;
            for i in h..12 - h {
                for xi in [-0.5, -0.1, 0.3, 0.5] {
                    let x = i as f64 + xi;
                    let exact: f64 = (0..p.len()).map(|l| p[l] * x.powi(l as i32)).sum();
                    assert!((f.eval(i as isize, xi) - exact).abs() < 1e-12 * exact.abs().max(1.0), "k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn linear_weights_recover_polynomial_exactly() {
        // with a huge regularization the weights are ideal and the
        // reconstruction is the optimal polynomial
        let p = [0.3, -1.0, 0.7, 0.2, -0.1];
        let anti = |x: f64| -> f64 { (0..5).map(|l| p[l] * x.powi(l as i32 + 1) / (l + 1) as f64).sum() };
        let avgs: Vec<f64> = (0..10).map(|i| anti(i as f64 + 0.5) - anti(i as f64 - 0.5)).collect();
        let f =
            reconstruct_row(&avgs, Degree::Four, BoundaryCondition::Freeflow, Regularization::Absolute(1e20)).unwrap();
        for i in 2..8 {
            let x = i as f64;
            let exact: f64 = (0..5).map(|l| p[l] * x.powi(l as i32)).sum();
            assert!((f.eval(i, 0.0) - exact).abs() < 1e-10 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn integer_shift_rotates() {
        let g = periodic(16);
        let vals: Vec<f64> = (0..16).map(|i| (i as f64 * 0.9).sin()).collect();
        for m in [-3i32, -1, 2, 5] {
            let out = shift_field(&vals, &g, m as f64 * g.dx, Degree::Four).unwrap();
            for i in 0..16 {
                let src = (i as i32 + m).rem_euclid(16) as usize;
                assert!((out[i] - vals[src]).abs() < 1e-13);
            }
        }
        assert_eq!(shift_field(&vals, &g, 0.0, Degree::Two).unwrap().len(), 16);
        let id = shift_field(&vals, &g, 0.0, Degree::Two).unwrap();
        for i in 0..16 {
            assert!((id[i] - vals[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn step_shift_is_non_oscillatory() {
        let nx = 200;
        let g = periodic(nx);
        let vals: Vec<f64> = g.x_nodes.iter().map(|&x| if x.abs() < 0.5 { 1.0 } else { 0.0 }).collect();
        for degree in [Degree::Two, Degree::Four] {
            for frac in [0.25, 0.5, 0.83, 2.4, -1.7] {
                let out = shift_field(&vals, &g, frac * g.dx, degree).unwrap();
                let max = out.iter().copied().fold(f64::MIN, f64::max);
                let min = out.iter().copied().fold(f64::MAX, f64::min);
                assert!(max <= 1.0 + 1e-2, "{degree:?} {frac}: {max}");
                assert!(min >= -1e-2, "{degree:?} {frac}: {min}");
            }
        }
    }

    #[test]
    fn freeflow_feet_outside_domain_take_edge_values() {
        let g = build_grid([0.0, 1.0], 10, BoundaryCondition::Freeflow, [-1.0, 1.0], 2).unwrap();
        let vals: Vec<f64> = (0..10).map(|i| 1.0 + i as f64).collect();
        let out = shift_field(&vals, &g, -0.3, Degree::Two).unwrap();
        assert_eq!(out[0], 1.0);
        assert_eq!(out[2], 1.0);
        let out = shift_field(&vals, &g, 0.3, Degree::Four).unwrap();
        assert_eq!(out[9], 10.0);
        assert_eq!(out[7], 10.0);
    }

    #[test]
    fn face_value_of_linear_data() {
        let v = face_value_deg2(&[1.0, 2.0, 3.0], Regularization::Relative(1e-6));
        assert!((v - 2.5).abs() < 1e-14);
    }

    #[test]
    fn relative_regularization_is_scale_invariant() {
        let s = [0.3, 1.7, -0.4, 2.2, 0.9];
        let a = reconstruct_cell(Degree::Four, &s, Regularization::Relative(1e-6));
        let s2: Vec<f64> = s.iter().map(|v| v * 1e-5).collect();
        let b = reconstruct_cell(Degree::Four, &s2, Regularization::Relative(1e-6));
        for l in 0..5 {
            assert!((a[l] * 1e-5 - b[l]).abs() < 1e-14 * a[l].abs().max(1e-5));
        }
    }

    proptest! {
        #[test]
        fn cell_average_is_conserved(vals in proptest::collection::vec(-5.0f64..5.0, 8..40), k4 in any::<bool>()) {
            let k = if k4 { 4 } else { 2 };
            let f = cweno_reconstruct(&vals, k, BoundaryCondition::Periodic).unwrap();
            for i in 0..vals.len() {
                prop_assert!((f.cell_average(i as isize) - vals[i]).abs() < 1e-13 * vals[i].abs().max(1.0));
            }
        }

        #[test]
        fn periodic_shift_conserves_sum(vals in proptest::collection::vec(0.0f64..3.0, 8..60), frac in -4.0f64..4.0, k4 in any::<bool>()) {
            let g = periodic(vals.len());
            let degree = if k4 { Degree::Four } else { Degree::Two };
            let out = shift_field(&vals, &g, frac * g.dx, degree).unwrap();
            let a: f64 = vals.iter().sum();
            let b: f64 = out.iter().sum();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }
}
