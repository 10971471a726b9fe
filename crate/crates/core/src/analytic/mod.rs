//! Analytic predictions for mean degree, minimum degree, isolated nodes and
//! corner-dominated isolated pairs.
//!
//! Every function takes the node density `rho` directly. When comparing with
//! a simulation of `N` nodes in volume `V`, use `rho = (N - 1) / V`
//! ([`AnalyticParams::matching_simulation`]).

mod corner;
mod degree;
mod mass;

pub use corner::{
    corner_coefficients, corner_exponent_khat, p_isolated_node_square, pi1_asymptotic,
    pi1_closed_form, CornerCoefficients, Pi1Asymptotic,
};
pub use degree::{mean_degree_bounded, p_fc_isolated_node, p_md_analytic, Clamped};
pub use mass::{disk_rectangle_area, domain_average, m_h, m_h_rays};

use serde::{Deserialize, Serialize};

use crate::channel::ConnectionModel;
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::special::{gamma, solid_angle};

pub use crate::quadrature::QuadratureSpec;

/// Inputs shared by the analytic predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticParams {
    pub density: f64,
    pub model: ConnectionModel,
    pub domain: Domain,
    /// Degree threshold for the minimum-degree probability.
    pub k: u32,
}

impl AnalyticParams {
    pub fn new(density: f64, model: ConnectionModel, domain: Domain) -> Result<Self> {
        Self::with_k(density, model, domain, 1)
    }

    pub fn with_k(density: f64, model: ConnectionModel, domain: Domain, k: u32) -> Result<Self> {
        if !(density.is_finite() && density > 0.0) {
            return Err(Error::param(
                "density",
                format!("must be positive and finite, got {density}"),
            ));
        }
        if k == 0 {
            return Err(Error::param("k", "must be at least 1"));
        }
        Ok(AnalyticParams {
            density,
            model,
            domain,
            k,
        })
    }

    /// Parameters for comparison with a simulation of `n` nodes: `rho = (n - 1) / V`.
    pub fn matching_simulation(n: usize, model: ConnectionModel, domain: Domain) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(
                "n",
                format!("need at least two nodes, got {n}"),
            ));
        }
        Self::new((n - 1) as f64 / domain.volume(), model, domain)
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    /// Whether boundary effects are likely to be large: `r0 > L / 5`.
    pub fn boundary_warning(&self) -> bool {
        self.model.r0() > self.domain.side() / 5.0
    }
}

/// `rho * Omega * Gamma(d / eta) / (eta * beta^(d / eta))`, the mean degree in
/// unbounded space for `H(r) = exp(-beta r^eta)`. Any `eta > 0` is accepted.
pub fn mean_degree_formula(d: usize, density: f64, beta: f64, eta: f64) -> f64 {
    let r0 = beta.powf(-1.0 / eta);
    density * solid_angle(d) * r0.powi(d as i32) * gamma(d as f64 / eta) / eta
}

/// Boundary-free mean degree of the Rayleigh model.
pub fn mean_degree_soft(params: &AnalyticParams) -> Result<f64> {
    match params.model {
        ConnectionModel::Rayleigh(m) => Ok(params.density
            * solid_angle(params.dimension())
            * m.r0().powi(params.dimension() as i32)
            * gamma(params.dimension() as f64 / m.eta())
            / m.eta()),
        ConnectionModel::Disk(_) => Err(Error::Unsupported(
            "mean_degree_soft needs a Rayleigh model; use mean_degree_disk".into(),
        )),
    }
}

/// Boundary-free mean degree of the disk model, `rho * Omega * r0^d / d`.
/// A Rayleigh model is replaced by its disk limit.
pub fn mean_degree_disk(params: &AnalyticParams) -> f64 {
    let d = params.dimension();
    params.density * solid_angle(d) * params.model.r0().powi(d as i32) / d as f64
}

/// Mean degree for either model: the soft formula or its disk limit.
pub fn mean_degree(params: &AnalyticParams) -> f64 {
    match params.model {
        ConnectionModel::Disk(_) => mean_degree_disk(params),
        ConnectionModel::Rayleigh(_) => mean_degree_soft(params).expect("Rayleigh model"),
    }
}

/// Minimizer of `eta -> mean degree` on `(d/5, 50)` at unit density, found by
/// golden-section search to an absolute tolerance of `1e-4` in `eta`.
/// Returns `(eta_star, mu_min)`.
pub fn argmin_mean_degree(d: usize, beta: f64) -> Result<(f64, f64)> {
    if d != 2 && d != 3 {
        return Err(Error::InvalidDomain(format!(
            "dimension must be 2 or 3, got {d}"
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::param(
            "beta",
            format!("must be positive and finite, got {beta}"),
        ));
    }
    let f = |eta: f64| mean_degree_formula(d, 1.0, beta, eta);
    let (lo, hi) = (d as f64 / 5.0, 50.0);
    let eta = golden_section(f, lo, hi, 1e-4)?;
    Ok((eta, f(eta)))
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (fa, fb) = (f(a), f(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    if !(fc.min(fd) < fa.min(fb)) {
        return Err(Error::Bracket(format!(
            "no interior minimum on ({a}, {b}): f(a) = {fa}, f(b) = {fb}"
        )));
    }
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    Ok(0.5 * (a + b))
}
