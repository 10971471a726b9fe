use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use geonet::stats::{wilson_interval, Z95};
use serde::Serialize;

use crate::config::Formula;
use crate::error::CliError;
use crate::output::{canonical, create_dir, csv_writer, num, write_json, GridKey, ManifestBuilder};

/// Smallest half-width of the band used for probability comparisons.
pub const PROBABILITY_FLOOR: f64 = 0.02;
/// Relative floor of the mean-degree band, next to `3 SE`.
pub const MEAN_DEGREE_REL: f64 = 0.03;

pub const COMPARE_HEADER: [&str; 11] = [
    "formula",
    "eta",
    "beta",
    "rho",
    "k",
    "simulated",
    "analytic",
    "ci_lo",
    "ci_hi",
    "covered",
    "residual",
];

struct Table {
    columns: HashMap<String, usize>,
    rows: Vec<csv::StringRecord>,
    path: String,
}

impl Table {
    fn read(path: &Path) -> Result<Self, CliError> {
        let mut r = csv::Reader::from_path(path)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let columns = r
            .headers()
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
            .iter()
            .enumerate()
            .map(|(i, h)| (h.to_string(), i))
            .collect();
        let rows = r
            .records()
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        Ok(Table {
            columns,
            rows,
            path: path.display().to_string(),
        })
    }

    fn require(&self, names: &[&str]) -> Result<(), CliError> {
        let missing: Vec<&str> = names
            .iter()
            .copied()
            .filter(|n| !self.columns.contains_key(*n))
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(CliError::config(format!(
                "{}: missing columns {}",
                self.path,
                missing.join(", ")
            )))
        }
    }

    fn field<'r>(&self, row: &'r csv::StringRecord, name: &str) -> &'r str {
        self.columns
            .get(name)
            .and_then(|&i| row.get(i))
            .unwrap_or("")
    }

    fn number(
        &self,
        row: &csv::StringRecord,
        name: &str,
        line: usize,
    ) -> Result<Option<f64>, CliError> {
        let s = self.field(row, name).trim();
        if s.is_empty() {
            return Ok(None);
        }
        s.parse::<f64>().map(Some).map_err(|_| {
            CliError::config(format!(
                "{} line {line}: column {name}: not a number: {s:?}",
                self.path
            ))
        })
    }

    fn key(&self, row: &csv::StringRecord, line: usize) -> Result<GridKey, CliError> {
        let k = self.field(row, "k").trim();
        let k = k.parse::<u32>().map_err(|_| {
            CliError::config(format!(
                "{} line {line}: column k: not an integer: {k:?}",
                self.path
            ))
        })?;
        Ok(GridKey {
            eta: canonical(self.field(row, "eta")),
            beta: canonical(self.field(row, "beta")),
            rho: canonical(self.field(row, "rho")),
            k,
        })
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Coverage {
    pub points: usize,
    pub covered: usize,
    pub fraction: f64,
    pub max_abs_residual: f64,
}

impl Coverage {
    fn add(&mut self, covered: bool, residual: f64) {
        self.points += 1;
        self.covered += covered as usize;
        self.fraction = self.covered as f64 / self.points as f64;
        self.max_abs_residual = self.max_abs_residual.max(residual.abs());
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub overall: Coverage,
    /// Keyed by `formula` and then by `eta`.
    pub by_formula: BTreeMap<String, BTreeMap<String, Coverage>>,
}

/// Simulated value and comparison band of `formula` in one simulation row.
fn simulated_band(
    sim: &Table,
    row: &csv::StringRecord,
    formula: Formula,
    line: usize,
) -> Result<(f64, f64, f64), CliError> {
    let need = |name: &str| -> Result<f64, CliError> {
        sim.number(row, name, line)?.ok_or_else(|| {
            CliError::config(format!(
                "{} line {line}: column {name} is empty; the sweep did not record it",
                sim.path
            ))
        })
    };
    let widen = |p: f64, lo: f64, hi: f64| {
        (
            p,
            lo.min(p - PROBABILITY_FLOOR),
            hi.max(p + PROBABILITY_FLOOR),
        )
    };
    let interval = |name: &str| -> Result<(f64, f64, f64), CliError> {
        let p = need(name)?;
        let lo = sim.number(row, &format!("{name}_lo"), line)?.unwrap_or(p);
        let hi = sim.number(row, &format!("{name}_hi"), line)?.unwrap_or(p);
        Ok((p, lo, hi))
    };
    Ok(match formula {
        Formula::MeanDegree => {
            let m = need("mean_degree")?;
            let se = sim.number(row, "mean_degree_se", line)?.unwrap_or(0.0);
            let tol = (3.0 * se).max(MEAN_DEGREE_REL * m.abs());
            (m, m - tol, m + tol)
        }
        Formula::PMd | Formula::PFc1 => {
            let (p, lo, hi) = interval(if formula == Formula::PMd {
                "p_md"
            } else {
                "p_fc"
            })?;
            widen(p, lo, hi)
        }
        Formula::IsolatedNode => {
            let (p, lo, hi) = interval("p_md")?;
            widen(1.0 - p, 1.0 - hi, 1.0 - lo)
        }
        Formula::Pi1 | Formula::Pi1Asym => {
            let d = need("delta")?;
            let trials = need("trials")?;
            if !(trials >= 1.0) {
                return Err(CliError::config(format!(
                    "{} line {line}: trials must be positive",
                    sim.path
                )));
            }
            let t = trials as u64;
            let s = ((d * trials).round().max(0.0) as u64).min(t);
            let (lo, hi) = wilson_interval(s, t, Z95);
            (d, lo, hi)
        }
    })
}

pub fn run(sim_path: &Path, analytic_path: &Path, out: &Path) -> Result<CompareSummary, CliError> {
    let sim = Table::read(sim_path)?;
    let ana = Table::read(analytic_path)?;
    ana.require(&["formula", "eta", "beta", "rho", "k", "value"])?;
    sim.require(&["eta", "beta", "rho", "k"])?;
    // an analytic table on the simulated side is compared value for value
    let self_compare = sim.columns.contains_key("formula");
    if self_compare {
        sim.require(&["value"])?;
    }

    let mut index: HashMap<(String, GridKey), usize> = HashMap::new();
    for (i, row) in sim.rows.iter().enumerate() {
        let formula = if self_compare {
            sim.field(row, "formula").to_string()
        } else {
            String::new()
        };
        index.entry((formula, sim.key(row, i + 2)?)).or_insert(i);
    }

    let mut points = Vec::new();
    let mut unmatched = Vec::new();
    for (i, row) in ana.rows.iter().enumerate() {
        let line = i + 2;
        let name = ana.field(row, "formula");
        let formula = Formula::parse(name).ok_or_else(|| {
            CliError::config(format!(
                "{} line {line}: unknown formula {name:?}",
                ana.path
            ))
        })?;
        let key = ana.key(row, line)?;
        let analytic = ana
            .number(row, "value", line)?
            .ok_or_else(|| CliError::config(format!("{} line {line}: empty value", ana.path)))?;
        let lookup = (
            if self_compare {
                name.to_string()
            } else {
                String::new()
            },
            key.clone(),
        );
        let Some(&j) = index.get(&lookup) else {
            unmatched.push(format!("{name} {key}"));
            continue;
        };
        let srow = &sim.rows[j];
        let (simulated, lo, hi) = if self_compare {
            let v = sim.number(srow, "value", j + 2)?.ok_or_else(|| {
                CliError::config(format!("{} line {}: empty value", sim.path, j + 2))
            })?;
            (v, v, v)
        } else {
            simulated_band(&sim, srow, formula, j + 2)?
        };
        points.push((formula, key, simulated, analytic, lo, hi));
    }
    if !unmatched.is_empty() {
        return Err(CliError::config(format!(
            "{} analytic grid point(s) have no simulated counterpart: {}",
            unmatched.len(),
            unmatched.join("; ")
        )));
    }
    if points.is_empty() {
        return Err(CliError::config(
            "nothing to compare: the analytic table is empty",
        ));
    }

    create_dir(out)?;
    let manifest = ManifestBuilder::start(
        "compare",
        &serde_json::json!({"sim": sim_path.display().to_string(), "analytic": analytic_path.display().to_string()}),
    )?;
    let mut overall = Coverage::default();
    let mut by_formula: BTreeMap<String, BTreeMap<String, Coverage>> = BTreeMap::new();
    let mut w = csv_writer(&out.join("compare.csv"))?;
    w.write_record(COMPARE_HEADER)?;
    for (formula, key, simulated, analytic, lo, hi) in points {
        let covered = lo <= analytic && analytic <= hi;
        let residual = analytic - simulated;
        overall.add(covered, residual);
        by_formula
            .entry(formula.name().to_string())
            .or_default()
            .entry(key.eta.clone())
            .or_default()
            .add(covered, residual);
        w.write_record([
            formula.name().to_string(),
            key.eta,
            key.beta,
            key.rho,
            key.k.to_string(),
            num(Some(simulated)),
            num(Some(analytic)),
            num(Some(lo)),
            num(Some(hi)),
            covered.to_string(),
            num(Some(residual)),
        ])?;
    }
    w.flush()?;
    drop(w);
    let summary = CompareSummary {
        overall,
        by_formula,
    };
    write_json(&out.join("compare-summary.json"), &summary)?;
    manifest.finish(out, &["compare.csv", "compare-summary.json"])?;
    Ok(summary)
}
