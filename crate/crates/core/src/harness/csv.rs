//! CSV emission. Floats use Rust's shortest round-trip formatting.

use std::fmt::Write as _;

use crate::error::{MixError, Result};
use crate::moments::MomentField;
use crate::stepper::Diagnostics;

use super::ConvergenceRow;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn join(cells: impl IntoIterator<Item = String>) -> String {
    cells.into_iter().collect::<Vec<_>>().join(",")
}

/// `x,n_1..n_L,u_1..u_L,T_1..T_L,n,rho,u,T,E`, one row per node.
pub fn moments_csv(x: &[f64], m: &MomentField, k_b: f64) -> String {
    let l = m.species.len();
    let mut header = vec!["x".to_string()];
    for prefix in ["n", "u", "T"] {
        header.extend((1..=l).map(|s| format!("{prefix}_{s}")));
    }
    header.extend(["n", "rho", "u", "T", "E"].map(String::from));
    let mut out = join(header);
    out.push('\n');
    let energy = m.energy(k_b);
    for i in 0..x.len() {
        let mut row = vec![fmt_f64(x[i])];
        row.extend(m.species.iter().map(|s| fmt_f64(s.n[i])));
        row.extend(m.species.iter().map(|s| fmt_f64(s.u[i])));
        row.extend(m.species.iter().map(|s| fmt_f64(s.t[i])));
        row.extend([m.n[i], m.rho[i], m.u[i], m.t[i], energy[i]].map(fmt_f64));
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}

/// `step,t,dt,mass_1..mass_L,momentum,energy,min_g1`.
pub fn diagnostics_csv(rows: &[Diagnostics]) -> String {
    let l = rows.first().map_or(0, |r| r.mass.len());
    let mut header = vec!["step".to_string(), "t".into(), "dt".into()];
    header.extend((1..=l).map(|s| format!("mass_{s}")));
    header.extend(["momentum", "energy", "min_g1"].map(String::from));
    let mut out = join(header);
    out.push('\n');
    for r in rows {
        let mut row = vec![r.step.to_string(), fmt_f64(r.t), fmt_f64(r.dt)];
        row.extend(r.mass.iter().map(|&m| fmt_f64(m)));
        row.extend([r.momentum, r.energy, r.min_g1].map(fmt_f64));
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}

/// `Nx,error,rate`; the first row has an empty rate.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("Nx,error,rate\n");
    for r in rows {
        let rate = r.rate.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", r.nx, fmt_f64(r.error), rate);
    }
    out
}

/// Parsed numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }
}

/// Reads a numeric CSV; empty cells become NaN.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut lines = text.lines();
    let header: Vec<String> =
        lines.next().ok_or_else(|| MixError::Io("empty CSV".into()))?.split(',').map(String::from).collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|c| if c.is_empty() { Ok(f64::NAN) } else { c.parse::<f64>() }).collect();
        let row = row.map_err(|e| MixError::Io(format!("CSV line {}: {e}", k + 2)))?;
        if row.len() != header.len() {
            return Err(MixError::LengthMismatch(row.len(), header.len()));
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}
