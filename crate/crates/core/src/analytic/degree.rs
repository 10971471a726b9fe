//! Degree-based predictions averaged over node positions.

use serde::{Deserialize, Serialize};

use super::mass::domain_average;
use super::AnalyticParams;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

/// A probability computed by a formula that can leave `[0, 1]` outside its
/// regime of validity. `value` is clamped, `raw` is the formula itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Clamped {
    pub value: f64,
    pub raw: f64,
}

impl Clamped {
    fn new(raw: f64) -> Self {
        Clamped {
            value: raw.clamp(0.0, 1.0),
            raw,
        }
    }

    pub fn was_clamped(&self) -> bool {
        self.value != self.raw
    }
}

/// `P(Poisson(lambda) < k)`.
fn poisson_below(k: u32, lambda: f64) -> f64 {
    let mut term = (-lambda).exp();
    let mut sum = term;
    for m in 1..k {
        term *= lambda / m as f64;
        sum += term;
    }
    sum
}

/// Probability that all `n` nodes have degree at least `k = params.k`:
///
/// `[1 - (1/V) integral of sum_{m<k} (rho M)^m / m! exp(-rho M) dr]^n`.
pub fn p_md_analytic(params: &AnalyticParams, n: usize, quad: &QuadratureSpec) -> Result<f64> {
    if n < 2 {
        return Err(Error::param(
            "n",
            format!("need at least two nodes, got {n}"),
        ));
    }
    let rho = params.density;
    let k = params.k;
    let deficient = domain_average(&params.domain, &params.model, quad, |m| {
        poisson_below(k, rho * m)
    })?;
    if deficient >= 1.0 {
        return Ok(0.0);
    }
    Ok((n as f64 * (-deficient).ln_1p()).exp())
}

/// High-density full-connectivity estimate from isolated nodes alone,
/// `1 - rho * integral of exp(-rho M_H(r)) dr`.
pub fn p_fc_isolated_node(params: &AnalyticParams, quad: &QuadratureSpec) -> Result<Clamped> {
    let rho = params.density;
    let avg = domain_average(&params.domain, &params.model, quad, |m| (-rho * m).exp())?;
    Ok(Clamped::new(1.0 - rho * params.domain.volume() * avg))
}

/// Mean degree including boundary losses, `rho * (1/V) integral of M_H(r) dr`.
pub fn mean_degree_bounded(params: &AnalyticParams, quad: &QuadratureSpec) -> Result<f64> {
    Ok(params.density * domain_average(&params.domain, &params.model, quad, |m| m)?)
}
