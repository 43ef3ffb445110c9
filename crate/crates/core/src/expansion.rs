//! Truncated Gram-Charlier A series of the conditional loss density.
//!
//! With `z = (x - mean) / std` the density is approximated by
//! `rho(x) = (1/std) sum_{n=0}^{N} c_n He_n(z) phi(z)` where
//! `c_n = E[He_n(Z)] / n!` for the standardized loss `Z`. Orthogonality of the
//! Hermite polynomials makes `rho` reproduce the moments of order `0..=N`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::guard;
use crate::moments::ConditionalMoments;
use crate::special::{hermite_table, std_normal_pdf};
use crate::{Error, Result};

/// Largest accepted truncation order.
pub const MAX_TRUNCATION_ORDER: usize = 12;

/// `HERMITE_COEFFS[n][j]` is the coefficient of `x^j` in `He_n(x)`.
const HERMITE_COEFFS: [[f64; MAX_TRUNCATION_ORDER + 1]; MAX_TRUNCATION_ORDER + 1] = hermite_coefficients();

const fn hermite_coefficients() -> [[f64; MAX_TRUNCATION_ORDER + 1]; MAX_TRUNCATION_ORDER + 1] {
    // integer arithmetic, exact; He_{n+1} = x He_n - n He_{n-1}
    let mut ints = [[0i64; MAX_TRUNCATION_ORDER + 1]; MAX_TRUNCATION_ORDER + 1];
    ints[0][0] = 1;
    ints[1][1] = 1;
    let mut n = 1;
    while n < MAX_TRUNCATION_ORDER {
        let mut j = 0;
        while j <= n + 1 {
            let shifted = if j > 0 { ints[n][j - 1] } else { 0 };
            ints[n + 1][j] = shifted - (n as i64) * ints[n - 1][j];
            j += 1;
        }
        n += 1;
    }
    let mut out = [[0.0; MAX_TRUNCATION_ORDER + 1]; MAX_TRUNCATION_ORDER + 1];
    let mut n = 0;
    while n <= MAX_TRUNCATION_ORDER {
        let mut j = 0;
        while j <= MAX_TRUNCATION_ORDER {
            out[n][j] = ints[n][j] as f64;
            j += 1;
        }
        n += 1;
    }
    out
}

/// Coefficient of `x^power` in `He_degree(x)`, for degrees up to 12.
pub fn hermite_monomial_coefficient(degree: usize, power: usize) -> f64 {
    HERMITE_COEFFS[degree][power]
}

const FACTORIAL: [f64; MAX_TRUNCATION_ORDER + 1] = {
    let mut f = [1.0; MAX_TRUNCATION_ORDER + 1];
    let mut i = 1;
    while i <= MAX_TRUNCATION_ORDER {
        f[i] = f[i - 1] * i as f64;
        i += 1;
    }
    f
};

/// Conditional mean, standard deviation and Gram-Charlier coefficients
/// `c_0..c_N` for one factor scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct GCExpansion {
    mean: f64,
    std: f64,
    coeffs: Vec<f64>,
}

impl GCExpansion {
    /// Assembles an expansion from its parts.
    ///
    /// Requires a finite positive `std`, at least one coefficient, `c_0 = 1`
    /// and `c_1 = c_2 = 0` where present (the series is standardized).
    pub fn new(mean: f64, std: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(std > 0.0 && std.is_finite()) || !mean.is_finite() {
            return Err(Error::InvalidExpansion("std must be finite and positive"));
        }
        if coeffs.is_empty() || coeffs[0] != 1.0 {
            return Err(Error::InvalidExpansion("c_0 must equal 1"));
        }
        if coeffs.iter().skip(1).take(2).any(|&c| c != 0.0) {
            return Err(Error::InvalidExpansion("c_1 and c_2 must be 0"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidExpansion("coefficients must be finite"));
        }
        Ok(GCExpansion { mean, std, coeffs })
    }

    /// Pure Gaussian, coefficients `[1, 0]`.
    pub fn normal(mean: f64, std: f64) -> Result<Self> {
        Self::new(mean, std, vec![1.0, 0.0])
    }

    /// Coefficients from conditional central moments.
    ///
    /// `c_n = (1/n!) sum_j [x^j]He_n * mu_j / sigma^j`. Fails with
    /// [`Error::Degenerate`] when the variance is zero or the standardized
    /// moments overflow.
    pub fn from_moments(moments: &ConditionalMoments, order: usize) -> Result<Self> {
        guard("truncation order", order, 1, MAX_TRUNCATION_ORDER)?;
        if moments.central.len() <= order.max(2) {
            return Err(Error::Guard {
                what: "available moment order",
                value: moments.order(),
                min: order.max(2),
                max: crate::moments::MAX_MOMENT_ORDER,
            });
        }
        if moments.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let std = libm::sqrt(moments.variance);
        let mut standardized = [0.0; MAX_TRUNCATION_ORDER + 1];
        standardized[0] = 1.0;
        standardized[2] = 1.0;
        let mut scale = std * std;
        for j in 3..=order {
            scale *= std;
            standardized[j] = moments.central[j] / scale;
        }
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = 1.0;
        for n in 3..=order {
            let mut e = 0.0;
            // only powers of matching parity appear
            let mut j = n % 2;
            while j <= n {
                e += HERMITE_COEFFS[n][j] * standardized[j];
                j += 2;
            }
            coeffs[n] = e / FACTORIAL[n];
        }
        if !std.is_finite() || coeffs.iter().any(|c| !c.is_finite()) || !moments.mean.is_finite() {
            return Err(Error::Degenerate);
        }
        Ok(GCExpansion {
            mean: moments.mean,
            std,
            coeffs,
        })
    }

    /// Conditional mean.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Conditional standard deviation.
    pub fn std(&self) -> f64 {
        self.std
    }

    /// `c_0..c_N`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The (possibly negative) truncated density at loss `x`.
    pub fn density(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.std;
        let mut h = [0.0; MAX_TRUNCATION_ORDER + 1];
        let h = &mut h[..self.coeffs.len().min(MAX_TRUNCATION_ORDER + 1)];
        hermite_table(z, h);
        let series: f64 = self.coeffs.iter().zip(h.iter()).map(|(c, he)| c * he).sum();
        series * std_normal_pdf(z) / self.std
    }
}

/// Free-function form of [`GCExpansion::from_moments`].
pub fn gram_charlier_coefficients(moments: &ConditionalMoments, order: usize) -> Result<GCExpansion> {
    GCExpansion::from_moments(moments, order)
}

/// Free-function form of [`GCExpansion::density`].
pub fn truncated_density(expansion: &GCExpansion, x: f64) -> f64 {
    expansion.density(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::FRAC_1_SQRT_2PI;

    fn standardized(m3: f64, m4: f64, m5: f64) -> ConditionalMoments {
        ConditionalMoments {
            mean: 0.0,
            variance: 1.0,
            central: vec![1.0, 0.0, 1.0, m3, m4, m5],
        }
    }

    #[test]
    fn gaussian_moments_annihilate_corrections() {
        let e = GCExpansion::from_moments(&standardized(0.0, 3.0, 0.0), 5).unwrap();
        assert_eq!(e.coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn low_order_coefficient_identities() {
        let (m3, m4, m5) = (0.7, 4.1, 5.3);
        let e = GCExpansion::from_moments(&standardized(m3, m4, m5), 5).unwrap();
        let c = e.coeffs();
        assert!((c[3] - m3 / 6.0).abs() < 1e-15);
        assert!((c[4] - (m4 - 3.0) / 24.0).abs() < 1e-15);
        assert!((c[5] - (m5 - 10.0 * m3) / 120.0).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_skew_coefficient() {
        // two-point law v = 1, p = 0.2: standardized skew 1.5
        let p: f64 = 0.2;
        let mu3 = p * libm::pow(1.0 - p, 3.0) + (1.0 - p) * libm::pow(-p, 3.0);
        let m = ConditionalMoments {
            mean: p,
            variance: p * (1.0 - p),
            central: vec![1.0, 0.0, p * (1.0 - p), mu3],
        };
        let e = GCExpansion::from_moments(&m, 3).unwrap();
        assert!((e.coeffs()[3] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn hermite_table_matches_known_polynomials() {
        // He_4 = x^4 - 6x^2 + 3, He_5 = x^5 - 10x^3 + 15x
        assert_eq!(&HERMITE_COEFFS[4][..5], &[3.0, 0.0, -6.0, 0.0, 1.0]);
        assert_eq!(&HERMITE_COEFFS[5][..6], &[0.0, 15.0, 0.0, -10.0, 0.0, 1.0]);
        assert_eq!(HERMITE_COEFFS[12][0], 10395.0);
    }

    #[test]
    fn degenerate_and_guarded() {
        let m = ConditionalMoments {
            mean: 0.1,
            variance: 0.0,
            central: vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        };
        assert_eq!(GCExpansion::from_moments(&m, 5), Err(Error::Degenerate));
        assert!(matches!(
            GCExpansion::from_moments(&standardized(0.0, 3.0, 0.0), 13),
            Err(Error::Guard { .. })
        ));
        assert!(matches!(
            GCExpansion::from_moments(&standardized(0.0, 3.0, 0.0), 0),
            Err(Error::Guard { .. })
        ));
    }

    #[test]
    fn normal_density_is_gaussian() {
        let e = GCExpansion::normal(0.2, 0.05).unwrap();
        assert!((e.density(0.2) - FRAC_1_SQRT_2PI / 0.05).abs() < 1e-13);
        for d in [0.01, 0.03, 0.1] {
            let (hi, lo) = (e.density(0.2 + d), e.density(0.2 - d));
            assert!((hi - lo).abs() <= 1e-12 * hi, "{hi} vs {lo}");
        }
    }

    #[test]
    fn constructor_rejects_unstandardized() {
        assert!(GCExpansion::new(0.0, 1.0, vec![1.0, 0.1]).is_err());
        assert!(GCExpansion::new(0.0, 1.0, vec![0.9]).is_err());
        assert!(GCExpansion::new(0.0, 0.0, vec![1.0]).is_err());
        assert!(GCExpansion::new(0.0, 1.0, vec![1.0, 0.0, 0.0, 0.25]).is_ok());
    }
}
