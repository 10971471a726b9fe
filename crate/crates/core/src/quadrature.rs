//! One-dimensional Gauss–Kronrod quadrature.
//!
//! The adaptive driver keeps every subinterval in a max-heap keyed by its
//! error estimate and bisects the worst one until the summed error meets
//! the tolerance. The tensor-grid driver uses uniform composite panels and
//! doubles them until two successive sums agree. Multi-dimensional
//! integrals are built by nesting.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Adaptive,
    TensorGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub method: Method,
    pub rel_tol: f64,
    /// Integrand evaluations allowed per one-dimensional integral.
    pub max_evals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: Method::Adaptive,
            rel_tol: 1e-8,
            max_evals: 200_000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::param(
                "rel_tol",
                format!("must lie in (0, 1e-2], got {}", self.rel_tol),
            ));
        }
        if self.max_evals < 15 {
            return Err(Error::param(
                "max_evals",
                "must allow at least one 15-point rule",
            ));
        }
        Ok(())
    }

    /// Same method and budget with the tolerance scaled, for inner integrals of a nest.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tol: (self.rel_tol * factor).max(1e-14),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod value and error estimate on `[a, b]` (QUADPACK error heuristic).
fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, v) in fv.iter_mut().enumerate() {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx)?, f(c + dx)?);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        *v = (f1, f2);
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let (kronrod, gauss, abs_sum, asc) = (kronrod * h, gauss * h, abs_sum * h.abs(), asc * h.abs());
    let mut err = (kronrod - gauss).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * abs_sum;
    if roundoff > f64::MIN_POSITIVE {
        err = err.max(roundoff);
    }
    Ok((kronrod, err))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integral of `f` over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_breaks(|x| Ok(f(x)), &[a, b], spec).map(|e| e.value)
}

/// Integral of a fallible `f` over consecutive segments `points[0]..points[last]`.
///
/// Breakpoints should sit where `f` or its derivatives jump; interior
/// points that coincide are skipped.
pub fn integrate_breaks<F>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if points.len() < 2 {
        return Err(Error::param("points", "need at least two breakpoints"));
    }
    let segments: Vec<(f64, f64)> = points
        .windows(2)
        .map(|w| (w[0], w[1]))
        .filter(|(a, b)| a != b)
        .collect();
    if segments.is_empty() {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    match spec.method {
        Method::Adaptive => adaptive(&mut f, &segments, spec),
        Method::TensorGrid => tensor_grid(&mut f, &segments, spec),
    }
}

fn converged(value: f64, error: f64, rel_tol: f64) -> bool {
    error <= rel_tol * value.abs() || error <= f64::MIN_POSITIVE
}

fn adaptive<F>(f: &mut F, segments: &[(f64, f64)], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    let (mut value, mut error) = (0.0, 0.0);
    // panels too narrow to split further
    let (mut frozen_value, mut frozen_error) = (0.0, 0.0);
    for &(a, b) in segments {
        let (v, e) = gk15(f, a, b)?;
        evals += 15;
        value += v;
        error += e;
        heap.push(Panel {
            a,
            b,
            value: v,
            error: e,
        });
    }
    loop {
        if converged(value, error, spec.rel_tol) {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        if evals + 30 > spec.max_evals {
            heap.push(worst);
            return Err(Error::Quadrature {
                estimate: value,
                error,
                evals,
            });
        }
        let (v1, e1) = gk15(f, worst.a, mid)?;
        let (v2, e2) = gk15(f, mid, worst.b)?;
        evals += 30;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // resum to shed the drift of the running totals
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = frozen_value + panels.iter().map(|p| p.value).sum::<f64>();
    let error = frozen_error + panels.iter().map(|p| p.error).sum::<f64>();
    Ok(Estimate {
        value,
        error,
        evals,
    })
}

fn tensor_grid<F>(f: &mut F, segments: &[(f64, f64)], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut evals = 0;
    let mut panels = 2usize;
    let mut previous: Option<f64> = None;
    loop {
        let cost = 15 * panels * segments.len();
        if evals + cost > spec.max_evals {
            return Err(Error::Quadrature {
                estimate: previous.unwrap_or(f64::NAN),
                error: f64::INFINITY,
                evals,
            });
        }
        let mut sum = 0.0;
        for &(a, b) in segments {
            let h = (b - a) / panels as f64;
            for p in 0..panels {
                let lo = a + p as f64 * h;
                let hi = if p + 1 == panels { b } else { lo + h };
                sum += gk15(f, lo, hi)?.0;
            }
        }
        evals += cost;
        if let Some(prev) = previous {
            let error = (sum - prev).abs();
            if converged(sum, error, spec.rel_tol) {
                return Ok(Estimate {
                    value: sum,
                    error,
                    evals,
                });
            }
        }
        previous = Some(sum);
        panels *= 2;
    }
}
