//! Level and action bounds at fixed degree.
//!
//! At fixed doubled degree `k` the cover is determined by the rest of the
//! data, and the action becomes
//!
//! ```text
//! A(w) = (1 - (c-1)tau) * nu*a + tau*(k + 2e)/4 - (tau+1) f(q),
//! e = ind(q) - dim M/2 - s/2,   s = ±1
//! ```
//!
//! while the level is `-ind(q) + dim M/2 + 2c*nu*a`. For `c >= 1` with
//! `(c-1)tau < 1` both are increasing in `a`, so a floor on one bounds the
//! other.

use crate::bundle::BundleParams;
use crate::error::{Error, Result};
use crate::generator::Grading;
use crate::rational::{ceil_int, int, Rational};

fn lemma_params(params: &BundleParams) -> Result<(i64, i64, Rational)> {
    match params.c() {
        Some(c) if c >= 1 => {
            let coeff = int(1) - int(c - 1) * params.tau;
            if coeff <= int(0) {
                return Err(Error::LemmaHypothesis(
                    (int(c - 1) * params.tau).to_string(),
                ));
            }
            Ok((c, params.nu(), coeff))
        }
        _ => Err(Error::NotApplicable(
            "action/level bounds need c >= 1".into(),
        )),
    }
}

/// Smallest level a generator of degree `degree` with action `>= floor` can
/// have. Requires `c >= 1` and `(c-1)tau < 1`.
pub fn min_level(params: &BundleParams, degree: Grading, floor: Rational) -> Result<i64> {
    let (c, nu, coeff) = lemma_params(params)?;
    let tau = params.tau;
    let max_m = params.max_morse_index();
    // tau*(k + 2e_max)/4 with 2e_max = 2max_m - dim + 1
    let index_term = tau * Rational::new(degree.twice_mu() + 2 * max_m - params.dim_m + 1, 4);
    let omega_min = (floor - index_term + (tau + int(1)) * params.min_value()) / coeff;
    let a_min = ceil_int(omega_min / int(nu));
    Ok(-max_m + params.half_dim() + 2 * c * nu * a_min)
}

/// Smallest action a generator of degree `degree` at level `>= level` can
/// have. Requires `c >= 1` and `(c-1)tau < 1`.
pub fn min_action(params: &BundleParams, degree: Grading, level: i64) -> Result<Rational> {
    let (c, nu, coeff) = lemma_params(params)?;
    let tau = params.tau;
    let min_m = params.min_morse_index();
    let a_min = ceil_int(int(level + min_m - params.half_dim()) / int(2 * c * nu));
    let index_term = tau * Rational::new(degree.twice_mu() + 2 * min_m - params.dim_m - 1, 4);
    Ok(coeff * int(nu * a_min) + index_term - (tau + int(1)) * params.max_value())
}
