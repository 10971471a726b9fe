use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use geonet::montecarlo::{sample_network, MAX_NODES};
use geonet::network::Components;

use crate::config::{read_json, SimulateConfig};
use crate::error::CliError;
use crate::output::{create_dir, ManifestBuilder};

pub struct RenderSummary {
    pub nodes: usize,
    pub edges: usize,
    pub components: Components,
}

pub fn run(config_path: &Path, out: &Path, seed: Option<u64>) -> Result<RenderSummary, CliError> {
    let mut file_config: SimulateConfig = read_json(config_path)?;
    if let Some(s) = seed {
        file_config.master_seed = s;
    }
    let config = file_config.experiment()?;
    let cells = config.cells_unchecked();
    if cells.len() != 1 {
        return Err(CliError::config(format!(
            "render-sample needs a single cell, the config has {} ({} models x {} densities)",
            cells.len(),
            config.model_grid.len(),
            config.density_grid.len()
        )));
    }
    let cell = cells[0];
    if cell.n == 0 {
        return Err(CliError::config(format!(
            "density {} gives no nodes",
            cell.density
        )));
    }
    if cell.n > MAX_NODES {
        return Err(CliError::Resource(format!(
            "N = {} is above the limit of {MAX_NODES}",
            cell.n
        )));
    }
    let trial = file_config.trial.unwrap_or(0);
    create_dir(out)?;
    let manifest = ManifestBuilder::start("render-sample", &file_config)?;
    let sample = sample_network(&config, &cell, trial)?;
    let components = sample.components();

    let write = |name: &str,
                 f: &dyn Fn(&mut BufWriter<File>) -> std::io::Result<()>|
     -> Result<(), CliError> {
        let path = out.join(name);
        let mut w = BufWriter::new(
            File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        );
        f(&mut w)?;
        w.flush()?;
        Ok(())
    };
    write("positions.csv", &|w| {
        sample.write_positions_csv(w, Some(&components.labels))
    })?;
    write("edges.txt", &|w| sample.write_edge_list(w))?;
    manifest.finish(out, &["positions.csv", "edges.txt"])?;
    Ok(RenderSummary {
        nodes: sample.node_count(),
        edges: sample.edge_count(),
        components,
    })
}
