//! Dense Gaussian elimination for the small per-node systems.

use crate::error::{MixError, Result};

/// Pivots below this magnitude are treated as singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// Solves `a x = b` in place for a row-major `n x n` matrix using partial
/// pivoting. On return `b` holds the solution; `a` is destroyed.
pub fn solve_dense(a: &mut [f64], b: &mut [f64]) -> Result<()> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if !(best > PIVOT_TOL) {
            return Err(MixError::SingularSystem(best));
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= f * a[col * n + c];
            }
            b[r] -= f * b[col];
        }
    }
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r * n + c] * b[c];
        }
        b[r] = acc / a[r * n + r];
    }
    Ok(())
}

/// Inverse of a small dense matrix, column by column.
pub fn invert(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for c in 0..n {
        let mut m = a.to_vec();
        let mut e = vec![0.0; n];
        e[c] = 1.0;
        solve_dense(&mut m, &mut e)?;
        for r in 0..n {
            inv[r * n + c] = e[r];
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_two_by_two() {
        let mut a = vec![2.0, -1.0, -1.0, 2.0];
        let mut b = vec![1.0, 0.0];
        solve_dense(&mut a, &mut b).unwrap();
        assert!((b[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((b[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pivots_zero_leading_entry() {
        let mut a = vec![0.0, 1.0, 1.0, 0.0];
        let mut b = vec![3.0, 4.0];
        solve_dense(&mut a, &mut b).unwrap();
        assert_eq!(b, vec![4.0, 3.0]);
    }

    #[test]
    fn singular_is_reported() {
        let mut a = vec![1.0, 2.0, 2.0, 4.0];
        let mut b = vec![1.0, 1.0];
        assert!(matches!(solve_dense(&mut a, &mut b), Err(MixError::SingularSystem(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        let inv = invert(&a, 3).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let v: f64 = (0..3).map(|k| a[r * 3 + k] * inv[k * 3 + c]).sum();
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-14);
            }
        }
    }
}
