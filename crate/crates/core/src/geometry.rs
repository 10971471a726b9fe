//! Deployment domains, node placement and distances.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// An axis-aligned square (`dimension = 2`) or cube (`dimension = 3`) `[0, side]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub struct Domain {
    dimension: usize,
    side: f64,
}

#[derive(Serialize, Deserialize)]
struct DomainRepr {
    dimension: usize,
    side: f64,
}

impl TryFrom<DomainRepr> for Domain {
    type Error = Error;
    fn try_from(r: DomainRepr) -> Result<Self> {
        Domain::new(r.dimension, r.side)
    }
}

impl From<Domain> for DomainRepr {
    fn from(d: Domain) -> Self {
        DomainRepr {
            dimension: d.dimension,
            side: d.side,
        }
    }
}

impl Domain {
    pub fn new(dimension: usize, side: f64) -> Result<Self> {
        if dimension != 2 && dimension != 3 {
            return Err(Error::InvalidDomain(format!(
                "dimension must be 2 or 3, got {dimension}"
            )));
        }
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "side must be positive and finite, got {side}"
            )));
        }
        Ok(Domain { dimension, side })
    }

    pub fn square(side: f64) -> Result<Self> {
        Self::new(2, side)
    }

    pub fn cube(side: f64) -> Result<Self> {
        Self::new(3, side)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.dimension as i32)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dimension() == self.dimension
            && p.coords().iter().all(|&c| (0.0..=self.side).contains(&c))
    }

    /// Node count matching a density on this domain, `round(rho * V)`.
    pub fn node_count(&self, density: f64) -> usize {
        (density * self.volume()).round() as usize
    }
}

/// A location in 2-D or 3-D space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: u8,
}

impl Point {
    pub fn xy(x: f64, y: f64) -> Self {
        Point {
            coords: [x, y, 0.0],
            dim: 2,
        }
    }

    pub fn xyz(x: f64, y: f64, z: f64) -> Self {
        Point {
            coords: [x, y, z],
            dim: 3,
        }
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        match *coords {
            [x, y] => Ok(Point::xy(x, y)),
            [x, y, z] => Ok(Point::xyz(x, y, z)),
            _ => Err(Error::DimensionMismatch {
                expected: 2,
                got: coords.len(),
            }),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    /// Squared Euclidean distance. Both points must share a dimension.
    #[inline]
    pub fn distance_sq(&self, other: &Point) -> f64 {
        assert_eq!(self.dim, other.dim, "points of different dimension");
        let dx = self.coords[0] - other.coords[0];
        let dy = self.coords[1] - other.coords[1];
        let dz = self.coords[2] - other.coords[2];
        dx * dx + dy * dy + dz * dz
    }
}

/// Euclidean distance between two points.
///
/// # Panics
///
/// If the points have different dimensions.
pub fn distance(a: &Point, b: &Point) -> f64 {
    a.distance_sq(b).sqrt()
}

/// Draws `n` points i.i.d. uniform on the domain from the position stream of `rng_seed`.
pub fn sample_points(domain: &Domain, n: usize, rng_seed: u64) -> Result<Vec<Point>> {
    if n == 0 {
        return Err(Error::param("n", "at least one point is required"));
    }
    let mut rng = seed::position_rng(rng_seed);
    Ok(sample_points_with(domain, n, &mut rng))
}

/// Same as [`sample_points`] but drawing from a caller-owned generator.
pub fn sample_points_with<R: Rng + ?Sized>(domain: &Domain, n: usize, rng: &mut R) -> Vec<Point> {
    let side = domain.side;
    (0..n)
        .map(|_| {
            let x = rng.gen::<f64>() * side;
            let y = rng.gen::<f64>() * side;
            if domain.dimension == 3 {
                Point::xyz(x, y, rng.gen::<f64>() * side)
            } else {
                Point::xy(x, y)
            }
        })
        .collect()
}

/// Corners of the square, counter-clockwise from the origin.
pub fn corner(domain: &Domain, corner_index: usize) -> Result<Point> {
    if domain.dimension != 2 {
        return Err(Error::Unsupported(
            "corner coordinates are only defined for the square".into(),
        ));
    }
    let l = domain.side;
    match corner_index {
        0 => Ok(Point::xy(0.0, 0.0)),
        1 => Ok(Point::xy(l, 0.0)),
        2 => Ok(Point::xy(l, l)),
        3 => Ok(Point::xy(0.0, l)),
        _ => Err(Error::param(
            "corner_index",
            format!("{corner_index} is not in 0..4"),
        )),
    }
}

/// Polar coordinates `(r, theta)` of `point` relative to a corner of the square.
///
/// `theta` is the angle from the corner's horizontal edge toward its vertical
/// edge, so it lies in `[0, pi/2]` for points inside the domain. At the corner
/// itself `theta` is reported as 0.
pub fn corner_polar(point: &Point, domain: &Domain, corner_index: usize) -> Result<(f64, f64)> {
    let c = corner(domain, corner_index)?;
    if point.dimension() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: point.dimension(),
        });
    }
    let dx = (point.coords[0] - c.coords[0]).abs();
    let dy = (point.coords[1] - c.coords[1]).abs();
    let r = dx.hypot(dy);
    if r == 0.0 {
        return Ok((0.0, 0.0));
    }
    Ok((r, dy.atan2(dx).clamp(0.0, FRAC_PI_2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    #[test]
    fn domain_validation() {
        assert!(Domain::new(1, 1.0).is_err());
        assert!(Domain::new(4, 1.0).is_err());
        assert!(Domain::new(2, 0.0).is_err());
        assert!(Domain::new(2, -3.0).is_err());
        assert!(Domain::new(2, f64::NAN).is_err());
        assert_eq!(Domain::cube(7.0).unwrap().volume(), 343.0);
        assert_eq!(Domain::square(10.0).unwrap().node_count(1.5), 150);
    }

    #[test]
    fn distances() {
        assert_eq!(distance(&Point::xy(0.0, 0.0), &Point::xy(3.0, 4.0)), 5.0);
        assert_eq!(distance(&Point::xy(1.0, 1.0), &Point::xy(1.0, 1.0)), 0.0);
        let d = distance(&Point::xyz(0.0, 0.0, 0.0), &Point::xyz(1.0, 1.0, 1.0));
        assert!((d - 1.732_050_807_568_877).abs() < 1e-12);
    }

    #[test]
    #[should_panic]
    fn distance_dimension_mismatch_panics() {
        distance(&Point::xy(0.0, 0.0), &Point::xyz(0.0, 0.0, 0.0));
    }

    #[test]
    fn sample_points_basic() {
        let d = Domain::square(10.0).unwrap();
        let pts = sample_points(&d, 150, 3).unwrap();
        assert_eq!(pts.len(), 150);
        assert!(pts.iter().all(|p| d.contains(p)));

        let unit = Domain::square(1.0).unwrap();
        let one = sample_points(&unit, 1, 12345).unwrap();
        assert_eq!(one.len(), 1);
        assert!(unit.contains(&one[0]));

        assert!(sample_points(&d, 0, 1).is_err());
    }

    #[test]
    fn sample_points_deterministic() {
        let d = Domain::cube(7.0).unwrap();
        assert_eq!(
            sample_points(&d, 50, 9).unwrap(),
            sample_points(&d, 50, 9).unwrap()
        );
        assert_ne!(
            sample_points(&d, 50, 9).unwrap(),
            sample_points(&d, 50, 10).unwrap()
        );
    }

    #[test]
    fn per_axis_mean_is_half_side() {
        let d = Domain::square(10.0).unwrap();
        let n = 100_000;
        let pts = sample_points(&d, n, 2024).unwrap();
        // uniform on [0, L]: sd = L / sqrt(12)
        let se = 10.0 / 12f64.sqrt() / (n as f64).sqrt();
        for axis in 0..2 {
            let mean = pts.iter().map(|p| p.coords()[axis]).sum::<f64>() / n as f64;
            assert!((mean - 5.0).abs() < 3.0 * se, "axis {axis} mean {mean}");
        }
    }

    #[test]
    fn chi_square_uniformity_on_4x4_grid() {
        let d = Domain::square(10.0).unwrap();
        let n = 100_000;
        let pts = sample_points(&d, n, 77).unwrap();
        let mut counts = [0usize; 16];
        for p in &pts {
            let i = ((p.coords()[0] / 2.5) as usize).min(3);
            let j = ((p.coords()[1] / 2.5) as usize).min(3);
            counts[i * 4 + j] += 1;
        }
        let expected = n as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // upper 0.001 quantile of chi-square with 15 degrees of freedom
        assert!(chi2 < 37.697, "chi2 = {chi2}");
    }

    #[test]
    fn corner_polar_examples() {
        let d = Domain::square(10.0).unwrap();
        assert_eq!(
            corner_polar(&Point::xy(0.0, 0.0), &d, 0).unwrap(),
            (0.0, 0.0)
        );
        let (r, t) = corner_polar(&Point::xy(1.0, 1.0), &d, 0).unwrap();
        assert!((r - SQRT_2).abs() < 1e-15 && (t - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(
            corner_polar(&Point::xy(10.0, 10.0), &d, 2).unwrap(),
            (0.0, 0.0)
        );
        let (r, t) = corner_polar(&Point::xy(9.0, 8.0), &d, 2).unwrap();
        assert!((r - 5f64.sqrt()).abs() < 1e-15);
        assert!((t - 2f64.atan()).abs() < 1e-15);
    }

    #[test]
    fn corner_polar_rejects_cube_and_bad_index() {
        let cube = Domain::cube(10.0).unwrap();
        assert!(corner_polar(&Point::xyz(0.0, 0.0, 0.0), &cube, 0).is_err());
        let sq = Domain::square(10.0).unwrap();
        assert!(corner_polar(&Point::xy(0.0, 0.0), &sq, 4).is_err());
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(
            a in prop::array::uniform3(0.0f64..10.0),
            b in prop::array::uniform3(0.0f64..10.0),
            c in prop::array::uniform3(0.0f64..10.0),
        ) {
            let (a, b, c) = (Point::xyz(a[0], a[1], a[2]), Point::xyz(b[0], b[1], b[2]), Point::xyz(c[0], c[1], c[2]));
            let ab = distance(&a, &b);
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, distance(&b, &a));
            prop_assert!(distance(&a, &c) <= ab + distance(&b, &c) + 1e-12);
        }
    }
}
