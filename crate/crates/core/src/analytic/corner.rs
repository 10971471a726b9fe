//! Corner expansion of the isolated-pair probability in the square.
//!
//! Two linked nodes near a right-angle corner at polar coordinates
//! `(r_i, theta_i)`, `(r_j, theta_j)` see the joint connectivity mass
//!
//! `K(r_i, r_j) ~ A + B (r_i (cos theta_i + sin theta_i) + r_j (cos theta_j + sin theta_j))`
//!
//! with `A = r0^2 (pi/2) Gamma(1 + 2/eta) (1 - 2^(-1 - 2/eta))` and
//! `B = r0 Gamma(1 + 1/eta) (1 - 2^(-1 - 1/eta))`. Integrating
//! `exp(-rho K)` over both quarter planes, using
//! `integral_0^(pi/2) dtheta / (cos theta + sin theta)^2 = 1`, and summing
//! over the four corners gives
//!
//! `Pi(1) ~ 2 exp(-rho A) / (rho^2 B^4)`.
//!
//! In the disk limit `A = pi r0^2 / 4` and `B = r0 / 2`, so
//! `Pi(1) ~ 32 exp(-rho pi r0^2 / 4) / (r0^4 rho^2)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::AnalyticParams;
use crate::channel::ConnectionModel;
use crate::error::{Error, Result};
use crate::special::gamma;

/// Constant and linear coefficients of the corner exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerCoefficients {
    pub a: f64,
    pub b: f64,
}

pub fn corner_coefficients(model: &ConnectionModel) -> CornerCoefficients {
    let r0 = model.r0();
    match model {
        ConnectionModel::Disk(_) => CornerCoefficients {
            a: PI * r0 * r0 / 4.0,
            b: 0.5 * r0,
        },
        ConnectionModel::Rayleigh(m) => {
            let eta = m.eta();
            CornerCoefficients {
                a: r0
                    * r0
                    * (PI / 2.0)
                    * gamma(1.0 + 2.0 / eta)
                    * (1.0 - (-1.0 - 2.0 / eta).exp2()),
                b: r0 * gamma(1.0 + 1.0 / eta) * (1.0 - (-1.0 - 1.0 / eta).exp2()),
            }
        }
    }
}

/// Linearized corner exponent `K(r_i, r_j)` for two nodes given in corner
/// polar coordinates `(r, theta)`. Terms of order `r_i r_j` are dropped, so
/// the value is meaningful for `r << r0`.
pub fn corner_exponent_khat(
    r_i: (f64, f64),
    r_j: (f64, f64),
    model: &ConnectionModel,
) -> Result<f64> {
    for (r, theta) in [r_i, r_j] {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::param(
                "r",
                format!("must be finite and non-negative, got {r}"),
            ));
        }
        if !theta.is_finite() {
            return Err(Error::param(
                "theta",
                format!("must be finite, got {theta}"),
            ));
        }
    }
    let CornerCoefficients { a, b } = corner_coefficients(model);
    let lin = |(r, theta): (f64, f64)| r * (theta.cos() + theta.sin());
    Ok(a + b * (lin(r_i) + lin(r_j)))
}

fn require_square(params: &AnalyticParams, what: &str) -> Result<()> {
    if params.dimension() != 2 {
        return Err(Error::Unsupported(format!(
            "{what} is defined for the square only"
        )));
    }
    Ok(())
}

/// Corner-dominated probability of an isolated pair, summed over the four corners.
///
/// Raw formula value; it grows like `rho^-2` at small density and can exceed 1.
/// The disk model gives the `eta -> inf` limit.
pub fn pi1_closed_form(params: &AnalyticParams) -> Result<f64> {
    require_square(params, "pi1_closed_form")?;
    let CornerCoefficients { a, b } = corner_coefficients(&params.model);
    let rho = params.density;
    Ok((std::f64::consts::LN_2 - rho * a - 2.0 * rho.ln() - 4.0 * b.ln()).exp())
}

/// `Pi(1) = leading * exp(f)`, where `leading = 32 exp(-rho pi r0^2 / 4) / (r0^4 rho^2)`
/// is the disk value and `f <= 0` carries the finite-`eta` correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pi1Asymptotic {
    pub leading: f64,
    pub f: f64,
}

impl Pi1Asymptotic {
    pub fn value(&self) -> f64 {
        self.leading * self.f.exp()
    }
}

/// Disk-limit isolated-pair probability and the log-correction `f` of the
/// given model relative to it. `f = 0` for the disk model.
pub fn pi1_asymptotic(params: &AnalyticParams) -> Result<Pi1Asymptotic> {
    require_square(params, "pi1_asymptotic")?;
    let r0 = params.model.r0();
    let rho = params.density;
    let ln_leading = 32f64.ln() - rho * PI * r0 * r0 / 4.0 - 4.0 * r0.ln() - 2.0 * rho.ln();
    let f = match params.model {
        ConnectionModel::Disk(_) => 0.0,
        ConnectionModel::Rayleigh(_) => pi1_closed_form(params)?.ln() - ln_leading,
    };
    debug_assert!(f <= 1e-9, "positive corner correction f = {f}");
    Ok(Pi1Asymptotic {
        leading: ln_leading.exp(),
        f,
    })
}

/// Probability of an isolated node near one of the square's corners,
/// `4 exp(-rho pi r0^2 / 4) / (r0^2 rho)`, using the disk-limit range `r0`.
pub fn p_isolated_node_square(params: &AnalyticParams) -> Result<f64> {
    require_square(params, "p_isolated_node_square")?;
    let r0 = params.model.r0();
    let rho = params.density;
    Ok(4.0 * (-rho * PI * r0 * r0 / 4.0).exp() / (r0 * r0 * rho))
}
