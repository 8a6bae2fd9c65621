//! Property tests for the pure-function invariants.

use proptest::prelude::*;
use recipgamma::augment::ptn_params_from_conditional;
use recipgamma::diag::ess;
use recipgamma::special::{
    log_stirling_factor, mh_accept_bound, mh_log_accept, reg_lower_gamma, reg_upper_gamma, LN_2PI,
};

fn positive() -> impl Strategy<Value = f64> {
    // Log-uniform over a wide positive range.
    (-6.0f64..6.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn stirling_factor_strictly_sandwiched(e in -3.0f64..3.0) {
        // Strictness is only float-representable while the bound gap
        // 1/(360 xi^3) exceeds one ulp, i.e. for xi below ~3e4; the upper
        // bound stays strict far beyond that. Test the documented grid range.
        let xi = 10f64.powf(e);
        let v = log_stirling_factor(xi).unwrap().value;
        prop_assert!(v < -0.5 * LN_2PI);
        prop_assert!(v > -1.0 / (12.0 * xi) - 0.5 * LN_2PI);
    }

    #[test]
    fn mh_log_accept_bounded_and_nonpositive(
        m_eff in positive(),
        xi_new in positive(),
        xi_old in positive(),
        squared in any::<bool>(),
    ) {
        let power = if squared { 2 } else { 1 };
        let v = mh_log_accept(m_eff, xi_new, xi_old, power).unwrap();
        prop_assert!(v <= 0.0);
        prop_assert!(v >= mh_accept_bound(m_eff, xi_new, power) - 1e-12);
        // The squared route is exactly twice the linear route in log space.
        let single = mh_log_accept(m_eff, xi_new, xi_old, 1).unwrap();
        let double = mh_log_accept(m_eff, xi_new, xi_old, 2).unwrap();
        prop_assert!((double - 2.0 * single).abs() <= 1e-12 * single.abs().max(1.0));
    }

    #[test]
    fn ptn_mapping_preserves_positivity_and_mode(
        a3 in 0.6f64..200.0,
        b3 in -50.0f64..50.0,
        m in 1u32..200,
        w in positive(),
    ) {
        let p = ptn_params_from_conditional(a3, b3, m, w).unwrap();
        prop_assert!(p.c > 1.0);
        prop_assert!(p.a > 0.0);
        // The mode is the positive stationary point of the log density.
        let mode = p.mode();
        prop_assert!(mode > 0.0);
        let resid = 2.0 * p.a * mode * mode - p.b * mode - (p.c - 1.0);
        let scale = (p.a * mode * mode).abs() + p.b.abs() * mode + p.c;
        prop_assert!(resid.abs() <= 1e-9 * scale.max(1.0), "resid {resid}");
    }

    #[test]
    fn incomplete_gamma_complement(a in positive(), x in positive()) {
        let s = reg_lower_gamma(a, x).unwrap() + reg_upper_gamma(a, x).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-11, "P + Q = {s}");
    }

    #[test]
    fn ess_affine_invariant(
        seed in any::<u64>(),
        scale in -20.0f64..20.0,
        shift in -100.0f64..100.0,
    ) {
        prop_assume!(scale.abs() > 1e-6);
        // A short deterministic AR(1) series from the seed.
        let mut state = seed | 1;
        let mut next = move || {
            // xorshift64*; uniform in (0,1)
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut x = 0.0;
        let series: Vec<f64> = (0..256)
            .map(|_| {
                x = 0.4 * x + (next() - 0.5);
                x
            })
            .collect();
        let transformed: Vec<f64> = series.iter().map(|v| scale * v + shift).collect();
        let a = ess(&series).unwrap();
        let b = ess(&transformed).unwrap();
        prop_assert!((a - b).abs() <= 1e-6 * a.max(1.0), "{a} vs {b}");
    }
}
