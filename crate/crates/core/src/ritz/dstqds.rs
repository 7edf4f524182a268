use crate::error::{Error, Result};

/// Differential stationary qd transform with shift.
///
/// Given `T = L D L^T` (`d` of length `n`, unit lower bidiagonal `l` of
/// length `n - 1`), returns `(l_plus, d_plus)` with
/// `L+ D+ L+^T = T - shift * I`. `d_plus` may contain negative entries. An
/// exact zero pivot is replaced by `eps * ||T||` carrying the sign of the
/// previous pivot.
pub fn shifted_ldlt(d: &[f64], l: &[f64], shift: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    if n == 0 || l.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            found: l.len(),
        });
    }
    let tiny = f64::EPSILON * tridiagonal_norm(d, l);
    let mut d_plus = vec![0.0; n];
    let mut l_plus = vec![0.0; n - 1];
    let mut s = -shift;
    let mut prev_sign = 1.0;
    for i in 0..n - 1 {
        let mut dp = d[i] + s;
        if dp == 0.0 {
            dp = prev_sign * tiny;
        }
        d_plus[i] = dp;
        l_plus[i] = d[i] * l[i] / dp;
        s = l_plus[i] * l[i] * s - shift;
        prev_sign = dp.signum();
    }
    let mut last = d[n - 1] + s;
    if last == 0.0 {
        last = prev_sign * tiny;
    }
    d_plus[n - 1] = last;
    if d_plus.iter().chain(&l_plus).any(|v| !v.is_finite()) {
        return Err(Error::Oracle("shifted factorization overflowed".into()));
    }
    Ok((l_plus, d_plus))
}

/// Infinity norm of the tridiagonal `L D L^T`.
fn tridiagonal_norm(d: &[f64], l: &[f64]) -> f64 {
    let n = d.len();
    let mut norm: f64 = 0.0;
    for i in 0..n {
        let mut diag = d[i];
        let mut row = 0.0;
        if i > 0 {
            diag += d[i - 1] * l[i - 1] * l[i - 1];
            row += (d[i - 1] * l[i - 1]).abs();
        }
        if i + 1 < n {
            row += (d[i] * l[i]).abs();
        }
        norm = norm.max(diag.abs() + row);
    }
    norm
}

/// Solves `L D L^T y = rhs`.
pub fn ldlt_solve(l: &[f64], d: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut y = rhs.to_vec();
    for i in 1..n {
        y[i] -= l[i - 1] * y[i - 1];
    }
    for (yi, di) in y.iter_mut().zip(d) {
        *yi /= di;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        y[i] -= l[i] * y[i + 1];
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assemble(l: &[f64], d: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = d.len();
        let diag = (0..n)
            .map(|i| d[i] + if i > 0 { d[i - 1] * l[i - 1] * l[i - 1] } else { 0.0 })
            .collect();
        let off = (0..n - 1).map(|i| d[i] * l[i]).collect();
        (diag, off)
    }

    #[test]
    fn zero_shift_is_identity() {
        let d = [2.0, 3.0, 0.5];
        let l = [0.25, -1.5];
        let (lp, dp) = shifted_ldlt(&d, &l, 0.0).unwrap();
        assert_eq!(dp, d);
        assert_eq!(lp, l);
    }

    #[test]
    fn two_by_two_hand_check() {
        // T = [[2, 1], [1, 2]]: D = (2, 3/2), L = (1/2); T - I = [[1, 1], [1, 1]]
        let (lp, dp) = shifted_ldlt(&[2.0, 1.5], &[0.5], 1.0).unwrap();
        assert_eq!(dp[0], 1.0);
        assert_eq!(lp[0], 1.0);
        assert!(dp[1].abs() <= 4.0 * f64::EPSILON * 3.0);
        assert!(dp[1] > 0.0);
    }

    #[test]
    fn reconstruction() {
        let d = [4.0, 1.0, 2.5, 0.7, 3.0];
        let l = [0.3, -0.8, 1.1, 0.2];
        let shift = 1.7;
        let (lp, dp) = shifted_ldlt(&d, &l, shift).unwrap();
        let (t, e) = assemble(&l, &d);
        let (tp, ep) = assemble(&lp, &dp);
        for i in 0..5 {
            assert!((tp[i] + shift - t[i]).abs() < 1e-13 * 5.0);
        }
        for i in 0..4 {
            assert!((ep[i] - e[i]).abs() < 1e-13 * 5.0);
        }
    }

    #[test]
    fn solve_round_trip() {
        let d = [4.0, -1.0, 2.5];
        let l = [0.3, -0.8];
        let y = ldlt_solve(&l, &d, &[1.0, 2.0, 3.0]);
        let (t, e) = assemble(&l, &d);
        let ty = [
            t[0] * y[0] + e[0] * y[1],
            e[0] * y[0] + t[1] * y[1] + e[1] * y[2],
            e[1] * y[1] + t[2] * y[2],
        ];
        for (a, b) in ty.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
