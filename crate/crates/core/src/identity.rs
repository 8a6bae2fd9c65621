//! Executable checks of the reciprocal-gamma rewrites.
//!
//! Each rewrite expresses `1 / Gamma(xi)^m` as a constant times latent-variable
//! integrals times a Stirling factor. Every one of those integrals is a
//! recognizable beta or gamma kernel, so both sides can be evaluated in closed
//! form and compared in log space. A nonzero residual beyond float noise means
//! a defect in the formulas or in the special-function kernels, so the
//! verifiers double as a regression net for [`crate::special`].

use crate::special::{ln_beta, ln_gamma, lsf_unchecked, LN_2PI};
use crate::{Error, Result};

/// Log-scale difference between the two sides of a rewrite.
#[derive(Debug, Clone, Copy)]
pub struct IdentityResidual {
    pub residual: f64,
    pub m: u32,
    pub xi: f64,
    pub k_levels: u32,
}

fn check_inputs(op: &'static str, xi: f64, m: u32) -> Result<()> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::domain(op, "xi", xi));
    }
    if m == 0 {
        return Err(Error::domain(op, "m", 0.0));
    }
    Ok(())
}

/// Log of `C_m = 1 / ((2 pi)^{(m-1)/2} prod_{j=2}^m Gamma((m-j+1)/m))`.
fn ln_c_m(m: u32) -> f64 {
    let mf = m as f64;
    let mut acc = -0.5 * (mf - 1.0) * LN_2PI;
    for j in 2..=m {
        acc -= ln_gamma((mf - j as f64 + 1.0) / mf).expect("argument in (0,1)");
    }
    acc
}

/// Sum of the log beta-function values that replace the latent integrals
/// `int rho^(xi + (j-1)/m - 1) (1-rho)^((m-j+1)/m - 1) drho`, j = 2..m.
fn ln_beta_integrals(xi: f64, m: u32) -> f64 {
    let mf = m as f64;
    let mut acc = 0.0;
    for j in 2..=m {
        let jf = j as f64;
        acc += ln_beta(xi + (jf - 1.0) / mf, (mf - jf + 1.0) / mf).expect("positive arguments");
    }
    acc
}

/// Residual of the m-fold multiplication-formula rewrite of
/// `1 / Gamma(xi)^m` with all latent integrals replaced by beta functions.
pub fn verify_multiplication_identity(xi: f64, m: u32) -> Result<IdentityResidual> {
    check_inputs("verify_multiplication_identity", xi, m)?;
    let mf = m as f64;
    let lhs = -mf * ln_gamma(xi)?;
    let rhs = ln_c_m(m)
        - mf * xi * xi.ln()
        + (mf - 0.5) * xi.ln()
        + mf * xi
        + ln_beta_integrals(xi, m)
        + lsf_unchecked(mf * xi);
    let residual = rhs - lhs;
    if !residual.is_finite() {
        return Err(Error::Propriety {
            what: "verify_multiplication_identity residual",
            value: residual,
        });
    }
    Ok(IdentityResidual {
        residual,
        m,
        xi,
        k_levels: 0,
    })
}

/// Residual of the integral rewrite of `1 / xi^(m xi)`, with the latent
/// integral replaced by `Gamma(m xi) / (m xi^2)^(m xi)`.
pub fn verify_gamma_power_identity(xi: f64, m: u32) -> Result<IdentityResidual> {
    check_inputs("verify_gamma_power_identity", xi, m)?;
    let mf = m as f64;
    let mxi = mf * xi;
    let lhs = -mxi * xi.ln();
    let rhs = 0.5 * mxi.ln() + mxi + lsf_unchecked(mxi) + ln_gamma(mxi)?
        - mxi * (mf * xi * xi).ln();
    let residual = rhs - lhs;
    if !residual.is_finite() {
        return Err(Error::Propriety {
            what: "verify_gamma_power_identity residual",
            value: residual,
        });
    }
    Ok(IdentityResidual {
        residual,
        m,
        xi,
        k_levels: 0,
    })
}

/// Residual of the K-level duplication rewrite of `1 / Gamma(xi)^m`, whose
/// extra latents have gamma full conditionals; `k_levels = 0` coincides with
/// [`verify_multiplication_identity`].
///
/// The closed forms used: beta functions for the rho integrals and
/// `Gamma(2^(k-1) m xi + 1/2) / (2^K m xi)^(2^(k-1) m xi + 1/2)` for the
/// level-k latent integral.
pub fn verify_k_level_identity(xi: f64, m: u32, k_levels: u32) -> Result<IdentityResidual> {
    check_inputs("verify_k_level_identity", xi, m)?;
    if k_levels > 10 {
        return Err(Error::domain("verify_k_level_identity", "k_levels", k_levels as f64));
    }
    let mf = m as f64;
    let kf = k_levels as f64;
    let two_k = (1u64 << k_levels) as f64;
    let big = two_k * mf * xi;

    let lhs = -mf * ln_gamma(xi)?;
    // ln C_{m,K} = (K/2) ln(2^K m / (2 pi)) + ln C_m
    let ln_c = 0.5 * kf * ((two_k * mf).ln() - LN_2PI) + ln_c_m(m);
    let mut rhs = ln_c - mf * xi * xi.ln() + (mf + 0.5 * kf - 0.5) * xi.ln()
        + big
        + (2.0 * (two_k - 1.0) - kf) * mf * xi * std::f64::consts::LN_2
        + ln_beta_integrals(xi, m)
        + lsf_unchecked(big);
    for k in 1..=k_levels {
        let shape = (1u64 << (k - 1)) as f64 * mf * xi + 0.5;
        rhs += ln_gamma(shape)? - shape * big.ln();
    }
    let residual = rhs - lhs;
    if !residual.is_finite() {
        return Err(Error::Propriety {
            what: "verify_k_level_identity residual",
            value: residual,
        });
    }
    Ok(IdentityResidual {
        residual,
        m,
        xi,
        k_levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_identity_m1_is_algebraic() {
        // m = 1 reduces to ln g(xi) + xi - (xi - 1/2) ln xi = -ln Gamma(xi).
        let r = verify_multiplication_identity(1.0, 1).unwrap();
        assert!(r.residual.abs() < 1e-12, "{}", r.residual);
    }

    #[test]
    fn multiplication_identity_closed_form_cases() {
        let r = verify_multiplication_identity(2.5, 3).unwrap();
        assert!(r.residual.abs() < 1e-10, "{}", r.residual);
        let r = verify_multiplication_identity(0.01, 100).unwrap();
        assert!(r.residual.abs() < 1e-8, "{}", r.residual);
    }

    #[test]
    fn gamma_power_identity_cases() {
        let r = verify_gamma_power_identity(1.0, 1).unwrap();
        assert!(r.residual.abs() < 1e-12, "{}", r.residual);
        let r = verify_gamma_power_identity(3.7, 4).unwrap();
        assert!(r.residual.abs() < 1e-10, "{}", r.residual);
        let r = verify_gamma_power_identity(0.05, 50).unwrap();
        assert!(r.residual.abs() < 1e-9, "{}", r.residual);
    }

    #[test]
    fn k_level_identity_reduces_to_multiplication_at_k0() {
        let a = verify_k_level_identity(2.0, 3, 0).unwrap();
        let b = verify_multiplication_identity(2.0, 3).unwrap();
        assert!((a.residual - b.residual).abs() < 1e-12);
    }

    #[test]
    fn k_level_identity_cases() {
        let r = verify_k_level_identity(2.0, 3, 3).unwrap();
        assert!(r.residual.abs() < 1e-8, "{}", r.residual);
        let r = verify_k_level_identity(0.1, 10, 5).unwrap();
        assert!(r.residual.abs() < 1e-8, "{}", r.residual);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(verify_multiplication_identity(-1.0, 2).is_err());
        assert!(verify_multiplication_identity(1.0, 0).is_err());
        assert!(verify_k_level_identity(1.0, 2, 11).is_err());
    }
}
