//! Pair connection functions.
//!
//! A link between two nodes at distance `r` exists with probability `H(r)`.
//! Under Rayleigh fading with path loss exponent `eta`,
//! `H(r) = exp(-beta * r^eta)`, and `r0 = beta^(-1/eta)` is the
//! characteristic connection length. As `eta` grows the function sharpens
//! into the hard disk `H(r) = 1{r <= r0}`, which is kept as its own variant
//! so that the deterministic model is exact and never touches the RNG.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `H` is treated as zero beyond the distance where it drops below this value.
pub const CUTOFF_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub enum ConnectionModel {
    Rayleigh(Rayleigh),
    Disk(Disk),
}

/// Rayleigh-fading connection function `exp(-beta r^eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rayleigh {
    beta: f64,
    eta: f64,
    r0: f64,
}

/// Hard-disk connection function `1{r <= r0}` (closed ball).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    r0: f64,
}

impl Rayleigh {
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn r0(&self) -> f64 {
        self.r0
    }
}

impl Disk {
    pub fn r0(&self) -> f64 {
        self.r0
    }
}

impl ConnectionModel {
    /// Rayleigh model; `eta` must be finite and at least 1.
    pub fn rayleigh(beta: f64, eta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::param(
                "beta",
                format!("must be positive and finite, got {beta}"),
            ));
        }
        if !(eta.is_finite() && eta >= 1.0) {
            return Err(Error::param(
                "eta",
                format!("must be finite and >= 1 (use the disk model for eta = inf), got {eta}"),
            ));
        }
        let r0 = beta.powf(-1.0 / eta);
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::param(
                "beta",
                format!("r0 = beta^(-1/eta) is not representable for beta={beta}, eta={eta}"),
            ));
        }
        Ok(ConnectionModel::Rayleigh(Rayleigh { beta, eta, r0 }))
    }

    pub fn disk(r0: f64) -> Result<Self> {
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::param(
                "r0",
                format!("must be positive and finite, got {r0}"),
            ));
        }
        Ok(ConnectionModel::Disk(Disk { r0 }))
    }

    pub fn r0(&self) -> f64 {
        match self {
            ConnectionModel::Rayleigh(m) => m.r0,
            ConnectionModel::Disk(m) => m.r0,
        }
    }

    /// Path loss exponent; `f64::INFINITY` for the disk model.
    pub fn eta(&self) -> f64 {
        match self {
            ConnectionModel::Rayleigh(m) => m.eta,
            ConnectionModel::Disk(_) => f64::INFINITY,
        }
    }

    /// `beta` for the Rayleigh model, `None` for the disk.
    pub fn beta(&self) -> Option<f64> {
        match self {
            ConnectionModel::Rayleigh(m) => Some(m.beta),
            ConnectionModel::Disk(_) => None,
        }
    }

    pub fn is_disk(&self) -> bool {
        matches!(self, ConnectionModel::Disk(_))
    }

    /// The `eta -> inf` limit: a disk of radius `r0`. Identity on disk models.
    pub fn disk_limit(&self) -> ConnectionModel {
        ConnectionModel::Disk(Disk { r0: self.r0() })
    }

    /// `H(r)`. Negative or NaN distances are rejected.
    pub fn connection_probability(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::param(
                "r",
                format!("distance must be non-negative, got {r}"),
            ));
        }
        Ok(self.h(r))
    }

    /// Bernoulli link draw with success probability `H(r)`.
    ///
    /// The disk model returns the indicator without consuming randomness.
    pub fn sample_link<R: Rng + ?Sized>(&self, r: f64, rng: &mut R) -> Result<bool> {
        if !(r >= 0.0) {
            return Err(Error::param(
                "r",
                format!("distance must be non-negative, got {r}"),
            ));
        }
        Ok(self.sample_link_sq(r * r, rng))
    }

    /// Distance beyond which `H < CUTOFF_PROBABILITY` (exactly `r0` for the disk).
    pub fn cutoff_radius(&self) -> f64 {
        match self {
            ConnectionModel::Disk(m) => m.r0,
            ConnectionModel::Rayleigh(m) => m.r0 * (-CUTOFF_PROBABILITY.ln()).powf(1.0 / m.eta),
        }
    }

    #[inline]
    pub(crate) fn h(&self, r: f64) -> f64 {
        match self {
            ConnectionModel::Disk(m) => {
                if r <= m.r0 {
                    1.0
                } else {
                    0.0
                }
            }
            // exp(-(r/r0)^eta) == exp(-beta r^eta), but stays finite for huge eta
            ConnectionModel::Rayleigh(m) => (-(r / m.r0).powf(m.eta)).exp(),
        }
    }

    /// `H` evaluated from a squared distance; avoids the square root in hot loops.
    #[inline]
    pub(crate) fn h_sq(&self, r_sq: f64) -> f64 {
        match self {
            ConnectionModel::Disk(m) => {
                if r_sq <= m.r0 * m.r0 {
                    1.0
                } else {
                    0.0
                }
            }
            ConnectionModel::Rayleigh(m) => {
                let s = r_sq / (m.r0 * m.r0);
                if m.eta == 2.0 {
                    (-s).exp()
                } else {
                    (-s.powf(0.5 * m.eta)).exp()
                }
            }
        }
    }

    #[inline]
    pub(crate) fn sample_link_sq<R: Rng + ?Sized>(&self, r_sq: f64, rng: &mut R) -> bool {
        match self {
            ConnectionModel::Disk(m) => r_sq <= m.r0 * m.r0,
            ConnectionModel::Rayleigh(_) => rng.gen::<f64>() < self.h_sq(r_sq),
        }
    }
}

impl fmt::Display for ConnectionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectionModel::Rayleigh(m) => write!(f, "rayleigh(beta={}, eta={})", m.beta, m.eta),
            ConnectionModel::Disk(m) => write!(f, "disk(r0={})", m.r0),
        }
    }
}

/// Wire form: `{"model": "rayleigh"|"disk", "beta": .., "eta": .., "r0": ..}`.
///
/// `eta` may be the string `"inf"`, which turns a Rayleigh entry into its disk
/// limit (radius `r0` if given, else `beta^0 = 1`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelRepr {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Eta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
}

/// A path loss exponent that may be infinite; serialized as a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eta(pub f64);

impl Serialize for Eta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Eta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Eta(x)),
            Raw::Str(s) if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") => {
                Ok(Eta(f64::INFINITY))
            }
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "eta must be a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

impl TryFrom<ModelRepr> for ConnectionModel {
    type Error = Error;

    fn try_from(r: ModelRepr) -> Result<Self> {
        match r.model.as_str() {
            "rayleigh" => {
                let eta = r
                    .eta
                    .ok_or_else(|| Error::param("eta", "required for the rayleigh model"))?
                    .0;
                if eta.is_infinite() {
                    return ConnectionModel::disk(r.r0.unwrap_or(1.0));
                }
                let beta = match (r.beta, r.r0) {
                    (Some(b), _) => b,
                    (None, Some(r0)) if r0 > 0.0 => r0.powf(-eta),
                    (None, _) => {
                        return Err(Error::param("beta", "rayleigh model needs beta or r0"))
                    }
                };
                let m = ConnectionModel::rayleigh(beta, eta)?;
                if let (Some(_), Some(r0)) = (r.beta, r.r0) {
                    if ((m.r0() - r0) / r0).abs() > 1e-9 {
                        return Err(Error::param(
                            "r0",
                            format!("inconsistent with beta^(-1/eta) = {}", m.r0()),
                        ));
                    }
                }
                Ok(m)
            }
            "disk" => {
                if let Some(Eta(e)) = r.eta {
                    if e.is_finite() {
                        return Err(Error::param("eta", "the disk model has eta = inf"));
                    }
                }
                let r0 =
                    r.r0.ok_or_else(|| Error::param("r0", "required for the disk model"))?;
                ConnectionModel::disk(r0)
            }
            other => Err(Error::param(
                "model",
                format!("expected \"rayleigh\" or \"disk\", got {other:?}"),
            )),
        }
    }
}

impl From<ConnectionModel> for ModelRepr {
    fn from(m: ConnectionModel) -> Self {
        match m {
            ConnectionModel::Rayleigh(r) => ModelRepr {
                model: "rayleigh".into(),
                beta: Some(r.beta),
                eta: Some(Eta(r.eta)),
                r0: Some(r.r0),
            },
            ConnectionModel::Disk(d) => ModelRepr {
                model: "disk".into(),
                beta: None,
                eta: None,
                r0: Some(d.r0),
            },
        }
    }
}
