/// Largest eigenpair of `[[rho, sigma], [sigma, tau]]`.
///
/// The eigenvector is `(s, c)` with `s >= 0` and `sign(c) = sign(sigma)`,
/// where `sign(0) = +1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoByTwoEig {
    pub rho: f64,
    pub sigma: f64,
    pub tau: f64,
    pub chi: f64,
    pub lambda_plus: f64,
    pub c2: f64,
    pub c: f64,
    pub s: f64,
}

impl TwoByTwoEig {
    /// `chi * c^2`, the growth `lambda_plus - rho`; never negative.
    pub fn gain(&self) -> f64 {
        self.chi * self.c2
    }
}

pub fn two_by_two_eigmax(rho: f64, sigma: f64, tau: f64) -> TwoByTwoEig {
    let diff = rho - tau;
    let chi = diff.hypot(2.0 * sigma);
    let c2 = if chi == 0.0 {
        // multiple of the identity: keep the old vector
        0.0
    } else if diff > 0.0 {
        // cancellation-free form of (1 - diff/chi) / 2
        (2.0 * sigma * sigma / (chi * (chi + diff))).min(1.0)
    } else {
        (0.5 * (1.0 - diff / chi)).min(1.0)
    };
    let sign = if sigma < 0.0 { -1.0 } else { 1.0 };
    let c = sign * c2.sqrt();
    let s = (1.0 - c2).sqrt();
    TwoByTwoEig {
        rho,
        sigma,
        tau,
        chi,
        lambda_plus: rho + chi * c2,
        c2,
        c,
        s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_case() {
        let e = two_by_two_eigmax(2.0, 1.0, 2.0);
        assert_eq!(e.chi, 2.0);
        assert_eq!(e.lambda_plus, 3.0);
        assert!((e.c2 - 0.5).abs() < 1e-16);
    }

    #[test]
    fn decoupled() {
        let e = two_by_two_eigmax(5.0, 0.0, 1.0);
        assert_eq!(e.lambda_plus, 5.0);
        assert_eq!(e.c2, 0.0);
        assert_eq!(e.s, 1.0);
        let e = two_by_two_eigmax(1.0, 0.0, 5.0);
        assert_eq!(e.lambda_plus, 5.0);
        assert_eq!(e.c, 1.0);
    }

    #[test]
    fn degenerate_identity() {
        let e = two_by_two_eigmax(3.0, 0.0, 3.0);
        assert_eq!((e.c, e.s, e.lambda_plus), (0.0, 1.0, 3.0));
    }

    #[test]
    fn eigenvector_residual() {
        for &(r, g, t) in &[(1.0, -2.0, 3.0), (4.0, 0.1, -1.0), (1e-3, 5.0, 1e3)] {
            let e = two_by_two_eigmax(r, g, t);
            let res0 = r * e.s + g * e.c - e.lambda_plus * e.s;
            let res1 = g * e.s + t * e.c - e.lambda_plus * e.c;
            let scale = e.lambda_plus.abs().max(1.0);
            assert!(res0.abs() < 1e-13 * scale && res1.abs() < 1e-13 * scale);
            assert!(e.c * g >= 0.0);
        }
    }
}
