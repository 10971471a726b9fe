use std::path::Path;

use geonet::analytic::{
    mean_degree, p_fc_isolated_node, p_isolated_node_square, p_md_analytic, pi1_asymptotic,
    pi1_closed_form, AnalyticParams,
};

use crate::config::{read_json, AnalyticConfig, DensityConvention, Formula};
use crate::error::CliError;
use crate::output::{beta_field, create_dir, csv_writer, eta_field, num, ManifestBuilder};

pub const ANALYTIC_HEADER: [&str; 11] = [
    "formula", "d", "side", "eta", "beta", "r0", "rho", "rho_eff", "n", "k", "value",
];

fn probability(raw: f64, clamp: bool) -> f64 {
    if clamp {
        raw.clamp(0.0, 1.0)
    } else {
        raw
    }
}

pub fn run(config_path: &Path, out: &Path) -> Result<usize, CliError> {
    let config: AnalyticConfig = read_json(config_path)?;
    config.quadrature.validate()?;
    let formulas = config.formulas()?;
    let models = config.models.models()?;
    let densities = config.density_grid.values("density_grid")?;
    let ks = config.ks()?;
    let domain = config.domain;
    let quad = &config.quadrature;
    create_dir(out)?;

    let manifest = ManifestBuilder::start("analytic", &config)?;
    let mut w = csv_writer(&out.join("analytic.csv"))?;
    w.write_record(ANALYTIC_HEADER)?;
    let mut rows = 0;
    for &formula in &formulas {
        let formula_ks: &[u32] = if formula == Formula::PMd { &ks } else { &[1] };
        for model in &models {
            let mut warned = false;
            for (i, &rho) in densities.iter().enumerate() {
                if !(rho.is_finite() && rho > 0.0) {
                    return Err(CliError::config(format!(
                        "density_grid[{i}]: must be positive, got {rho}"
                    )));
                }
                let n = domain.node_count(rho);
                let rho_eff = match config.density_convention {
                    DensityConvention::Sample => {
                        if n < 2 {
                            return Err(CliError::config(format!(
                                "density_grid[{i}]: rho = {rho} gives N = {n}; the sample convention needs N >= 2"
                            )));
                        }
                        (n - 1) as f64 / domain.volume()
                    }
                    DensityConvention::Nominal => rho,
                };
                for &k in formula_ks {
                    let params = AnalyticParams::with_k(rho_eff, *model, domain, k)?;
                    if params.boundary_warning() && !warned {
                        eprintln!("warning: {model}: r0 > L/5, boundary effects dominate");
                        warned = true;
                    }
                    let value = match formula {
                        Formula::MeanDegree => mean_degree(&params),
                        Formula::PMd => p_md_analytic(&params, n.max(2), quad)?,
                        Formula::PFc1 => {
                            let c = p_fc_isolated_node(&params, quad)?;
                            if config.clamp {
                                c.value
                            } else {
                                c.raw
                            }
                        }
                        Formula::Pi1 => probability(pi1_closed_form(&params)?, config.clamp),
                        Formula::Pi1Asym => {
                            probability(pi1_asymptotic(&params)?.leading, config.clamp)
                        }
                        Formula::IsolatedNode => {
                            probability(p_isolated_node_square(&params)?, config.clamp)
                        }
                    };
                    w.write_record([
                        formula.name().to_string(),
                        domain.dimension().to_string(),
                        num(Some(domain.side())),
                        eta_field(model),
                        beta_field(model),
                        num(Some(model.r0())),
                        num(Some(rho)),
                        num(Some(rho_eff)),
                        n.to_string(),
                        k.to_string(),
                        num(Some(value)),
                    ])?;
                    rows += 1;
                }
            }
        }
    }
    w.flush()?;
    drop(w);
    manifest.finish(out, &["analytic.csv"])?;
    Ok(rows)
}
