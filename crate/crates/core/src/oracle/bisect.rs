use crate::error::{Error, Result};

/// Number of eigenvalues below `x` of the zero-diagonal tridiagonal with
/// off-diagonal `e` (the Golub-Kahan form of a bidiagonal).
fn count_below(e: &[f64], x: f64) -> usize {
    let pivmin = f64::MIN_POSITIVE;
    let mut count = 0;
    let mut d = -x;
    for i in 0..=e.len() {
        if i > 0 {
            d = -x - e[i - 1] * e[i - 1] / d;
        }
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// `(sigma_max, sigma_min)` of an upper bidiagonal by Sturm-count bisection.
///
/// Works on the `2n x 2n` zero-diagonal Golub-Kahan tridiagonal, whose
/// eigenvalues are `+-sigma_i`. Its Sturm counts are computed to high
/// relative accuracy, so small singular values come out with full relative
/// precision where an `O(eps ||B||)` dense solver would not.
pub fn bidiagonal_extremes_bisection(alphas: &[f64], betas: &[f64]) -> Result<(f64, f64)> {
    let n = alphas.len();
    if n == 0 || betas.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            found: betas.len(),
        });
    }
    if alphas.iter().chain(betas).any(|v| !v.is_finite()) {
        return Err(Error::Oracle("non-finite bidiagonal entry".into()));
    }
    let mut e = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        e.push(alphas[i].abs());
        if i + 1 < n {
            e.push(betas[i].abs());
        }
    }
    let upper = (0..e.len())
        .map(|i| e[i] + if i + 1 < e.len() { e[i + 1] } else { 0.0 })
        .fold(e[0], f64::max);
    // number of singular values below x is count_below(x) - n for x > 0
    let below = |x: f64| count_below(&e, x).saturating_sub(n);
    let bisect = |target: usize| {
        let (mut lo, mut hi) = (0.0f64, upper * (1.0 + 4.0 * f64::EPSILON));
        for _ in 0..2200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * hi {
                break;
            }
            if below(mid) > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    Ok((bisect(n - 1), bisect(0)))
}
