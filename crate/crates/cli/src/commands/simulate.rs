use std::path::Path;

use geonet::montecarlo::{run_sweep_with, SweepResult};
use geonet::stats::Proportion;

use crate::config::{read_json, SimulateConfig};
use crate::error::CliError;
use crate::output::{
    beta_field, create_dir, csv_writer, eta_field, num, write_json, ManifestBuilder,
};

pub const SWEEP_HEADER: [&str; 20] = [
    "eta",
    "beta",
    "r0",
    "rho",
    "n",
    "k",
    "trials",
    "p_fc",
    "p_fc_lo",
    "p_fc_hi",
    "p_md",
    "p_md_lo",
    "p_md_hi",
    "p_fc_edge",
    "p_fc_edge_lo",
    "p_fc_edge_hi",
    "delta",
    "mean_degree",
    "mean_degree_se",
    "isolated_pair_freq",
];

pub struct SimulateArgs<'a> {
    pub config: &'a Path,
    pub out: &'a Path,
    pub parallelism: usize,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

fn proportion_fields(p: Option<Proportion>) -> [String; 3] {
    let ci = p.and_then(|p| p.ci);
    [
        num(p.map(|p| p.estimate)),
        num(ci.map(|c| c.0)),
        num(ci.map(|c| c.1)),
    ]
}

pub fn write_sweep_csv(path: &Path, result: &SweepResult) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(SWEEP_HEADER)?;
    for cell in &result.cells {
        for est in &cell.per_k {
            let mut row = vec![
                eta_field(&cell.model),
                beta_field(&cell.model),
                num(Some(cell.model.r0())),
                num(Some(cell.density)),
                cell.n.to_string(),
                est.k.to_string(),
                cell.trials.to_string(),
            ];
            row.extend(proportion_fields(est.p_fc));
            row.extend(proportion_fields(est.p_md));
            row.extend(proportion_fields(est.p_fc_edge));
            row.push(num(est.delta.map(|p| p.estimate)));
            row.push(num(cell.mean_degree.map(|m| m.mean)));
            row.push(num(cell.mean_degree.map(|m| m.std_error)));
            row.push(num(cell.isolated_pair.map(|p| p.estimate)));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: SimulateArgs<'_>) -> Result<SweepResult, CliError> {
    let mut file_config: SimulateConfig = read_json(args.config)?;
    if let Some(t) = args.trials {
        file_config.trials = t;
    }
    if let Some(s) = args.seed {
        file_config.master_seed = s;
    }
    let config = file_config.experiment()?;
    config.validate()?;
    create_dir(args.out)?;

    let mut manifest = ManifestBuilder::start("simulate", &file_config)?;
    let total = config.model_grid.len() * config.density_grid.len();
    let result = run_sweep_with(&config, args.parallelism, |cell, wall| {
        eprintln!(
            "[{}/{}] {} rho = {} (N = {}): {:.2} s",
            cell.index + 1,
            total,
            cell.model,
            cell.density,
            cell.n,
            wall.as_secs_f64()
        );
        manifest.timing(cell.index, cell.model, cell.density, cell.n, wall);
    })?;
    manifest.rng = Some(result.rng.clone());
    manifest.seed_scheme = Some(result.seed_scheme.clone());

    write_sweep_csv(&args.out.join("sweep.csv"), &result)?;
    write_json(&args.out.join("sweep.json"), &result)?;
    manifest.finish(args.out, &["sweep.csv", "sweep.json"])?;
    Ok(result)
}
