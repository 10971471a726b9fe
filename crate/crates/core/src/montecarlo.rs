//! Reproducible, parallel Monte Carlo sweeps.
//!
//! A sweep visits every (model, density) cell of a grid, model-major. Each
//! trial draws its own positions and links from a seed derived from
//! `(master_seed, cell, trial)`, and per-trial outcomes are reduced with
//! integer counters. The result is therefore identical for any thread count.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ConnectionModel;
use crate::error::{Error, Result};
use crate::geometry::{sample_points_with, Domain};
use crate::network::{analyze, build_graph, ConnectivityReport, LinkSampling, NetworkSample};
use crate::seed::{link_rng, position_rng, trial_seed, RNG_NAME, SEED_SCHEME};
use crate::stats::{MeanEstimate, Proportion};

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_K_MAX: u32 = 4;
/// Largest `k_max` accepted by a sweep.
pub const MAX_K: u32 = 8;
/// Cells with more nodes than this are refused.
pub const MAX_NODES: usize = 1 << 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// k-vertex-connectivity.
    Fc,
    /// Minimum degree at least k.
    Md,
    /// k-edge-connectivity.
    EdgeFc,
    /// `P_md(k) - P_fc(k)` from the same trials.
    Delta,
    MeanDegree,
    IsolatedPair,
    BridgedPair,
}

impl Observable {
    pub const ALL: [Observable; 7] = [
        Observable::Fc,
        Observable::Md,
        Observable::EdgeFc,
        Observable::Delta,
        Observable::MeanDegree,
        Observable::IsolatedPair,
        Observable::BridgedPair,
    ];

    fn needs_connectivity(self) -> bool {
        matches!(
            self,
            Observable::Fc | Observable::EdgeFc | Observable::Delta | Observable::BridgedPair
        )
    }
}

fn default_k_max() -> u32 {
    DEFAULT_K_MAX
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}

fn all_observables() -> BTreeSet<Observable> {
    Observable::ALL.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: Domain,
    pub model_grid: Vec<ConnectionModel>,
    pub density_grid: Vec<f64>,
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "all_observables")]
    pub observables: BTreeSet<Observable>,
    /// Node count used for every cell instead of `round(rho * V)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub model: ConnectionModel,
    pub density: f64,
    pub n: usize,
}

impl ExperimentConfig {
    pub fn new(domain: Domain, model_grid: Vec<ConnectionModel>, density_grid: Vec<f64>) -> Self {
        ExperimentConfig {
            domain,
            model_grid,
            density_grid,
            k_max: DEFAULT_K_MAX,
            trials: DEFAULT_TRIALS,
            master_seed: 0,
            observables: all_observables(),
            nodes: None,
        }
    }

    pub fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }

    /// Connectivity cap passed to [`analyze`]; 0 when no observable needs max flow.
    fn analysis_k(&self) -> u32 {
        if self.observables.iter().any(|o| o.needs_connectivity()) {
            self.k_max
        } else {
            0
        }
    }

    /// Grid cells in model-major order, without the sweep-only checks.
    pub fn cells_unchecked(&self) -> Vec<Cell> {
        let mut cells = Vec::with_capacity(self.model_grid.len() * self.density_grid.len());
        for model in &self.model_grid {
            for &density in &self.density_grid {
                cells.push(Cell {
                    index: cells.len(),
                    model: *model,
                    density,
                    n: self
                        .nodes
                        .unwrap_or_else(|| self.domain.node_count(density)),
                });
            }
        }
        cells
    }

    pub fn validate(&self) -> Result<()> {
        if self.model_grid.is_empty() {
            return Err(Error::param("model_grid", "must not be empty"));
        }
        if self.density_grid.is_empty() {
            return Err(Error::param("density_grid", "must not be empty"));
        }
        if let Some(rho) = self
            .density_grid
            .iter()
            .find(|r| !(r.is_finite() && **r > 0.0))
        {
            return Err(Error::param(
                "density_grid",
                format!("densities must be positive and finite, got {rho}"),
            ));
        }
        if self.trials == 0 {
            return Err(Error::param("trials", "must be positive"));
        }
        if !(1..=MAX_K).contains(&self.k_max) {
            return Err(Error::param(
                "k_max",
                format!("must be in 1..={MAX_K}, got {}", self.k_max),
            ));
        }
        for cell in self.cells_unchecked() {
            if cell.n < 2 {
                return Err(Error::param(
                    "density_grid",
                    format!(
                        "density {} gives N = {} nodes; at least 2 are required",
                        cell.density, cell.n
                    ),
                ));
            }
            if cell.n > MAX_NODES {
                return Err(Error::ResourceLimit(format!(
                    "density {} gives N = {} nodes, above the limit of {MAX_NODES}",
                    cell.density, cell.n
                )));
            }
        }
        Ok(())
    }

    /// Grid cells in model-major order.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        self.validate()?;
        Ok(self.cells_unchecked())
    }
}

/// Draws the network of one trial. Positions use the trial's position stream
/// and links its link stream, so the disk model consumes no link randomness.
pub fn sample_network(
    config: &ExperimentConfig,
    cell: &Cell,
    trial_index: u64,
) -> Result<NetworkSample> {
    let seed = trial_seed(config.master_seed, cell.index as u64, trial_index);
    let positions = sample_points_with(&config.domain, cell.n, &mut position_rng(seed));
    build_graph(
        &config.domain,
        positions,
        &cell.model,
        &mut link_rng(seed),
        LinkSampling::Pruned,
    )
}

/// One replayable trial.
pub fn run_trial(
    config: &ExperimentConfig,
    cell: &Cell,
    trial_index: u64,
) -> Result<ConnectivityReport> {
    Ok(analyze(
        &sample_network(config, cell, trial_index)?,
        config.analysis_k(),
    ))
}

/// Per-cell event counters; index `k - 1` holds the count for `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCounts {
    pub trials: u64,
    pub fc: Vec<u64>,
    pub edge_fc: Vec<u64>,
    pub md: Vec<u64>,
    pub bridged_pair: Vec<u64>,
    pub isolated_pair: u64,
    /// Sum over trials of the total degree `2 |E|`.
    pub degree_sum: u64,
    pub degree_sum_sq: u128,
}

impl CellCounts {
    pub fn new(k_max: u32) -> Self {
        let k = k_max as usize;
        CellCounts {
            trials: 0,
            fc: vec![0; k],
            edge_fc: vec![0; k],
            md: vec![0; k],
            bridged_pair: vec![0; k],
            isolated_pair: 0,
            degree_sum: 0,
            degree_sum_sq: 0,
        }
    }

    pub fn record(&mut self, r: &ConnectivityReport) {
        self.trials += 1;
        for k in 1..=self.fc.len() as u32 {
            let i = k as usize - 1;
            self.fc[i] += r.is_k_connected(k) as u64;
            self.edge_fc[i] += r.is_k_edge_connected(k) as u64;
            self.md[i] += r.has_min_degree(k) as u64;
            self.bridged_pair[i] += r.has_bridged_pair(k) as u64;
        }
        self.isolated_pair += r.has_isolated_pair as u64;
        let total = r.total_degree() as u64;
        self.degree_sum += total;
        self.degree_sum_sq += (total as u128) * (total as u128);
    }

    pub fn merge(mut self, other: CellCounts) -> Self {
        let add = |a: &mut Vec<u64>, b: &[u64]| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        self.trials += other.trials;
        add(&mut self.fc, &other.fc);
        add(&mut self.edge_fc, &other.edge_fc);
        add(&mut self.md, &other.md);
        add(&mut self.bridged_pair, &other.bridged_pair);
        self.isolated_pair += other.isolated_pair;
        self.degree_sum += other.degree_sum;
        self.degree_sum_sq += other.degree_sum_sq;
        self
    }

    /// Mean over trials of the per-network mean degree, with its standard error.
    pub fn mean_degree(&self, n: usize) -> MeanEstimate {
        mean_from_totals(self.degree_sum, self.degree_sum_sq, self.trials, n)
    }
}

fn mean_from_totals(sum: u64, sum_sq: u128, trials: u64, n: usize) -> MeanEstimate {
    let t = trials as u128;
    let n = n as f64;
    let mean = sum as f64 / trials as f64 / n;
    let std_error = if trials > 1 {
        // exact integer numerator of the sample variance of the totals
        let num = t * sum_sq - (sum as u128) * (sum as u128);
        (num as f64 / (t * (t - 1)) as f64 / trials as f64).sqrt() / n
    } else {
        f64::NAN
    };
    MeanEstimate {
        mean,
        std_error,
        count: trials,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KEstimate {
    pub k: u32,
    pub p_fc: Option<Proportion>,
    pub p_md: Option<Proportion>,
    pub p_fc_edge: Option<Proportion>,
    /// Trials with minimum degree `>= k` that are not k-connected.
    pub delta: Option<Proportion>,
    pub bridged_pair: Option<Proportion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub index: usize,
    pub model: ConnectionModel,
    pub density: f64,
    pub n: usize,
    pub trials: u64,
    pub per_k: Vec<KEstimate>,
    pub mean_degree: Option<MeanEstimate>,
    pub isolated_pair: Option<Proportion>,
    pub counts: CellCounts,
}

impl CellResult {
    fn from_counts(config: &ExperimentConfig, cell: &Cell, counts: CellCounts) -> Self {
        let t = counts.trials;
        let pick = |o: Observable, c: u64| config.wants(o).then(|| Proportion::new(c, t));
        let per_k = (0..config.k_max as usize)
            .map(|i| KEstimate {
                k: i as u32 + 1,
                p_fc: pick(Observable::Fc, counts.fc[i]),
                p_md: pick(Observable::Md, counts.md[i]),
                p_fc_edge: pick(Observable::EdgeFc, counts.edge_fc[i]),
                delta: pick(Observable::Delta, counts.md[i] - counts.fc[i]),
                bridged_pair: pick(Observable::BridgedPair, counts.bridged_pair[i]),
            })
            .collect();
        CellResult {
            index: cell.index,
            model: cell.model,
            density: cell.density,
            n: cell.n,
            trials: t,
            per_k,
            mean_degree: config
                .wants(Observable::MeanDegree)
                .then(|| counts.mean_degree(cell.n)),
            isolated_pair: pick(Observable::IsolatedPair, counts.isolated_pair),
            counts,
        }
    }

    pub fn k(&self, k: u32) -> Option<&KEstimate> {
        self.per_k.get(k.checked_sub(1)? as usize)
    }

    /// Density matching this cell's node count, `(N - 1) / V`.
    pub fn effective_density(&self, domain: &Domain) -> f64 {
        (self.n - 1) as f64 / domain.volume()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    pub rng: String,
    pub seed_scheme: String,
    pub cells: Vec<CellResult>,
    /// Per-cell wall-clock time; not serialized so results stay reproducible.
    #[serde(skip)]
    pub wall_times: Vec<Duration>,
}

fn thread_pool(parallelism: usize) -> Result<rayon::ThreadPool> {
    if parallelism == 0 {
        return Err(Error::param("parallelism", "must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| {
            Error::ResourceLimit(format!("cannot start {parallelism} worker threads: {e}"))
        })
}

fn run_cell(config: &ExperimentConfig, cell: &Cell) -> Result<CellCounts> {
    let k_max = config.k_max;
    (0..config.trials)
        .into_par_iter()
        .try_fold(
            || CellCounts::new(k_max),
            |mut acc, t| {
                acc.record(&run_trial(config, cell, t)?);
                Ok(acc)
            },
        )
        .try_reduce(|| CellCounts::new(k_max), |a, b| Ok(a.merge(b)))
}

/// Runs every cell of the grid on a pool of `parallelism` worker threads.
pub fn run_sweep(config: &ExperimentConfig, parallelism: usize) -> Result<SweepResult> {
    run_sweep_with(config, parallelism, |_, _| {})
}

/// [`run_sweep`], calling `on_cell` after each cell completes.
pub fn run_sweep_with<F>(
    config: &ExperimentConfig,
    parallelism: usize,
    mut on_cell: F,
) -> Result<SweepResult>
where
    F: FnMut(&CellResult, Duration),
{
    let cells = config.cells()?;
    let pool = thread_pool(parallelism)?;
    let mut results = Vec::with_capacity(cells.len());
    let mut wall_times = Vec::with_capacity(cells.len());
    for cell in &cells {
        let start = Instant::now();
        let counts = pool.install(|| run_cell(config, cell))?;
        let result = CellResult::from_counts(config, cell, counts);
        let elapsed = start.elapsed();
        on_cell(&result, elapsed);
        results.push(result);
        wall_times.push(elapsed);
    }
    Ok(SweepResult {
        config: config.clone(),
        rng: RNG_NAME.to_string(),
        seed_scheme: SEED_SCHEME.to_string(),
        cells: results,
        wall_times,
    })
}

/// Mean degree of one cell over `trials` networks, in the current rayon pool.
pub fn estimate_mean_degree(
    config: &ExperimentConfig,
    cell: &Cell,
    trials: u64,
) -> Result<MeanEstimate> {
    if trials == 0 {
        return Err(Error::param("trials", "must be positive"));
    }
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|t| sample_network(config, cell, t).map(|s| s.total_degree() as u64))
        .try_fold(
            || (0u64, 0u128),
            |(s, q), total| total.map(|x| (s + x, q + (x as u128) * (x as u128))),
        )
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(mean_from_totals(sum, sum_sq, trials, cell.n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaPoint {
    pub density: f64,
    pub n: usize,
    pub delta: Proportion,
}

/// Location and height of the largest gap. `density`/`height` are refined by
/// a parabola through the grid maximum and its neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaPeak {
    pub density: f64,
    pub height: f64,
    pub grid_density: f64,
    pub grid_height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaCurve {
    pub model: ConnectionModel,
    pub k: u32,
    pub points: Vec<DeltaPoint>,
    pub peak: DeltaPeak,
}

impl DeltaCurve {
    /// One curve per model of the sweep, ordered by density.
    pub fn from_sweep(result: &SweepResult, k: u32) -> Result<Vec<DeltaCurve>> {
        if k == 0 || k > result.config.k_max {
            return Err(Error::param(
                "k",
                format!("must be in 1..={}, got {k}", result.config.k_max),
            ));
        }
        let mut curves = Vec::new();
        for model in &result.config.model_grid {
            let mut points: Vec<DeltaPoint> = result
                .cells
                .iter()
                .filter(|c| c.model == *model)
                .map(|c| {
                    let i = k as usize - 1;
                    DeltaPoint {
                        density: c.density,
                        n: c.n,
                        delta: Proportion::new(c.counts.md[i] - c.counts.fc[i], c.trials),
                    }
                })
                .collect();
            points.sort_by(|a, b| a.density.total_cmp(&b.density));
            let peak = find_peak(&points);
            curves.push(DeltaCurve {
                model: *model,
                k,
                points,
                peak,
            });
        }
        Ok(curves)
    }
}

fn find_peak(points: &[DeltaPoint]) -> DeltaPeak {
    let (i, best) = points
        .iter()
        .enumerate()
        .fold((0, &points[0]), |(bi, b), (i, p)| {
            if p.delta.estimate > b.delta.estimate {
                (i, p)
            } else {
                (bi, b)
            }
        });
    let grid = DeltaPeak {
        density: best.density,
        height: best.delta.estimate,
        grid_density: best.density,
        grid_height: best.delta.estimate,
    };
    if i == 0 || i + 1 == points.len() {
        return grid;
    }
    let (x0, y0) = (points[i - 1].density, points[i - 1].delta.estimate);
    let (x1, y1) = (best.density, best.delta.estimate);
    let (x2, y2) = (points[i + 1].density, points[i + 1].delta.estimate);
    // vertex of the interpolating parabola, divided differences
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if !(a < 0.0) {
        return grid;
    }
    let b = d01 - a * (x0 + x1);
    let xv = (-b / (2.0 * a)).clamp(x0, x2);
    let yv = y1 + d01 * (xv - x1) + a * (xv - x0) * (xv - x1);
    DeltaPeak {
        density: xv,
        height: yv,
        ..grid
    }
}

/// Runs the sweep and returns the `Delta(1)` curve of every model.
pub fn delta_curve(config: &ExperimentConfig, parallelism: usize) -> Result<Vec<DeltaCurve>> {
    if config.k_max < 1 {
        return Err(Error::param("k_max", "must be at least 1"));
    }
    let mut config = config.clone();
    config
        .observables
        .extend([Observable::Fc, Observable::Md, Observable::Delta]);
    DeltaCurve::from_sweep(&run_sweep(&config, parallelism)?, 1)
}
