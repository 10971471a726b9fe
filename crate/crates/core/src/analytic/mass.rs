//! Connectivity mass `M_H(r) = integral over the domain of H(|r - r'|) dr'`.

use std::f64::consts::{PI, TAU};

use crate::channel::ConnectionModel;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::quadrature::{integrate_breaks, QuadratureSpec};
use crate::special::{erf, gamma, gamma_p};

/// Connectivity mass of `point`.
///
/// Exact for the disk in the square (circle–rectangle area) and for
/// `eta = 2` in any dimension (product of error functions). Other cases
/// reduce to one- or two-dimensional quadrature along rays from the point.
pub fn m_h(
    point: &Point,
    domain: &Domain,
    model: &ConnectionModel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_point(point, domain, quad)?;
    let l = domain.side();
    let c = point.coords();
    match (model, domain.dimension()) {
        (ConnectionModel::Disk(m), 2) => {
            Ok(disk_rectangle_area(c[0], c[1], m.r0(), [0.0, l, 0.0, l]))
        }
        (ConnectionModel::Disk(m), _) => disk_mass_3d(c, l, m.r0(), quad),
        (ConnectionModel::Rayleigh(m), _) if m.eta() == 2.0 => {
            Ok(c.iter().map(|&x| gaussian_segment(x, l, m.r0())).product())
        }
        (ConnectionModel::Rayleigh(m), 2) => rayleigh_mass_2d(c, l, m.r0(), m.eta(), quad),
        (ConnectionModel::Rayleigh(m), _) => rayleigh_mass_3d(c, l, m.r0(), m.eta(), quad),
    }
}

/// Rayleigh connectivity mass through the ray quadrature for every `eta`,
/// `eta = 2` included.
pub fn m_h_rays(
    point: &Point,
    domain: &Domain,
    model: &ConnectionModel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_point(point, domain, quad)?;
    let ConnectionModel::Rayleigh(m) = model else {
        return Err(Error::Unsupported(
            "ray quadrature is only used for the Rayleigh model".into(),
        ));
    };
    let (c, l) = (point.coords(), domain.side());
    match domain.dimension() {
        2 => rayleigh_mass_2d(c, l, m.r0(), m.eta(), quad),
        _ => rayleigh_mass_3d(c, l, m.r0(), m.eta(), quad),
    }
}

fn check_point(point: &Point, domain: &Domain, quad: &QuadratureSpec) -> Result<()> {
    quad.validate()?;
    if point.dimension() != domain.dimension() {
        return Err(Error::DimensionMismatch {
            expected: domain.dimension(),
            got: point.dimension(),
        });
    }
    if !domain.contains(point) {
        return Err(Error::param(
            "point",
            format!("{:?} lies outside the domain", point.coords()),
        ));
    }
    Ok(())
}

/// Area of the disk of radius `r` centred at `(cx, cy)` inside the rectangle
/// `[x0, x1] x [y0, y1]`, given as `[x0, x1, y0, y1]`.
pub fn disk_rectangle_area(cx: f64, cy: f64, r: f64, rect: [f64; 4]) -> f64 {
    let [x0, x1, y0, y1] = rect;
    if r <= 0.0 || x1 <= x0 || y1 <= y0 {
        return 0.0;
    }
    if cx - r >= x0 && cx + r <= x1 && cy - r >= y0 && cy + r <= y1 {
        return PI * r * r;
    }
    let g = |x: f64, y: f64| quadrant_area(x - cx, y - cy, r);
    let area = g(x1, y1) - g(x0, y1) - g(x1, y0) + g(x0, y0);
    area.clamp(0.0, PI * r * r)
}

/// Area of the origin-centred disk of radius `r` within `{x <= xmax, y <= ymax}`.
fn quadrant_area(xmax: f64, ymax: f64, r: f64) -> f64 {
    let xm = xmax.clamp(-r, r);
    if xm <= -r || ymax <= -r {
        return 0.0;
    }
    let s = |x: f64| (r * r - x * x).max(0.0).sqrt();
    // antiderivative of s
    let f = |x: f64| 0.5 * (x * s(x) + r * r * (x / r).clamp(-1.0, 1.0).asin());
    let chord = |p: f64, q: f64| if q > p { f(q) - f(p) } else { 0.0 };
    if ymax >= r {
        return 2.0 * chord(-r, xm);
    }
    let a = s(ymax);
    // |x| <= a: the chord is cut at ymax; |x| > a: whole chord if ymax >= 0, nothing otherwise
    let outer = if ymax >= 0.0 {
        2.0 * (chord(-r, xm.min(-a)) + chord(a, xm))
    } else {
        0.0
    };
    let hi = xm.min(a);
    let inner = if hi > -a {
        ymax * (hi + a) + chord(-a, hi)
    } else {
        0.0
    };
    outer + inner
}

/// `integral over [0, l] of exp(-((x - c) / r0)^2) dx`.
fn gaussian_segment(c: f64, l: f64, r0: f64) -> f64 {
    0.5 * PI.sqrt() * r0 * (erf((l - c) / r0) + erf(c / r0))
}

/// `integral over [0, R] of exp(-(s / r0)^eta) s^(d-1) ds`.
fn radial_mass(d: usize, r_max: f64, r0: f64, eta: f64) -> f64 {
    let a = d as f64 / eta;
    r0.powi(d as i32) / eta * gamma(a) * gamma_p(a, (r_max / r0).powf(eta))
}

/// Distance from `c` to the wall of `[0, l]` along direction component `u`.
fn wall_distance(c: f64, l: f64, u: f64) -> f64 {
    if u > 0.0 {
        (l - c) / u
    } else if u < 0.0 {
        -c / u
    } else {
        f64::INFINITY
    }
}

fn corner_angles(c: &[f64], l: f64) -> Vec<f64> {
    let mut angles = vec![0.0, TAU];
    for (x, y) in [(0.0, 0.0), (l, 0.0), (l, l), (0.0, l)] {
        let (dx, dy) = (x - c[0], y - c[1]);
        if dx != 0.0 || dy != 0.0 {
            angles.push(dy.atan2(dx).rem_euclid(TAU));
        }
    }
    angles.sort_by(f64::total_cmp);
    angles
}

fn rayleigh_mass_2d(c: &[f64], l: f64, r0: f64, eta: f64, quad: &QuadratureSpec) -> Result<f64> {
    let ray = |phi: f64| {
        let (sin, cos) = phi.sin_cos();
        let r_max = wall_distance(c[0], l, cos).min(wall_distance(c[1], l, sin));
        Ok(radial_mass(2, r_max, r0, eta))
    };
    Ok(integrate_breaks(ray, &corner_angles(c, l), quad)?.value)
}

fn rayleigh_mass_3d(c: &[f64], l: f64, r0: f64, eta: f64, quad: &QuadratureSpec) -> Result<f64> {
    let inner = quad.tightened(0.1);
    let azimuth = |phi: f64| {
        let (sin, cos) = phi.sin_cos();
        let horizontal = wall_distance(c[0], l, cos).min(wall_distance(c[1], l, sin));
        // polar cosines where the limiting wall switches between side and top/bottom
        let mut breaks = vec![-1.0, 1.0];
        for dz in [l - c[2], -c[2]] {
            let t = dz / horizontal;
            if t.is_finite() && t != 0.0 {
                breaks.push(t / (1.0 + t * t).sqrt());
            }
        }
        breaks.sort_by(f64::total_cmp);
        let polar = |u: f64| {
            let s = (1.0 - u * u).max(0.0).sqrt();
            let r_max = (horizontal / s).min(wall_distance(c[2], l, u));
            Ok(radial_mass(3, r_max, r0, eta))
        };
        Ok(integrate_breaks(polar, &breaks, &inner)?.value)
    };
    Ok(integrate_breaks(azimuth, &corner_angles(c, l), quad)?.value)
}

fn disk_mass_3d(c: &[f64], l: f64, r0: f64, quad: &QuadratureSpec) -> Result<f64> {
    let (lo, hi) = ((c[2] - r0).max(0.0), (c[2] + r0).min(l));
    let mut breaks = vec![lo, hi];
    let (dx, dy) = (c[0].min(l - c[0]), c[1].min(l - c[1]));
    let (ex, ey) = (c[0].max(l - c[0]), c[1].max(l - c[1]));
    for delta in [
        dx,
        dy,
        ex,
        ey,
        dx.hypot(dy),
        dx.hypot(ey),
        ex.hypot(dy),
        ex.hypot(ey),
    ] {
        if delta < r0 {
            let h = (r0 * r0 - delta * delta).sqrt();
            for z in [c[2] - h, c[2] + h] {
                if z > lo && z < hi {
                    breaks.push(z);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    let slice = |z: f64| {
        let dz = z - c[2];
        let radius = (r0 * r0 - dz * dz).max(0.0).sqrt();
        Ok(disk_rectangle_area(c[0], c[1], radius, [0.0, l, 0.0, l]))
    };
    Ok(integrate_breaks(slice, &breaks, quad)?.value)
}

/// Domain average `(1 / V) * integral of g(M_H(r)) dr`.
///
/// The box symmetry reduces the integral to `[0, L/2]^d`. Each axis is split
/// at `r0` from the wall, where `M_H` changes fastest.
pub fn domain_average<G>(
    domain: &Domain,
    model: &ConnectionModel,
    quad: &QuadratureSpec,
    g: G,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    quad.validate()?;
    let half = 0.5 * domain.side();
    let r0 = model.r0();
    let splits: &[f64] = if model.is_disk() {
        &[1.0]
    } else {
        &[1.0, 2.0, 4.0]
    };
    let mut axis = vec![0.0];
    axis.extend(splits.iter().map(|s| s * r0).filter(|&b| b < half));
    axis.push(half);
    let mass_quad = quad.tightened(0.01);
    let mid = quad.tightened(0.1);
    let inner = quad.tightened(0.01);
    let mass = |p: &Point| m_h(p, domain, model, &mass_quad);

    // inner axis breakpoints, including the disk-corner arc sqrt(r0^2 - x^2)
    let inner_axis = |x: f64| {
        let mut pts = axis.clone();
        if model.is_disk() && x < r0 {
            let y = (r0 * r0 - x * x).sqrt();
            if y > 0.0 && y < half {
                pts.push(y);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    };

    let total = if domain.dimension() == 2 {
        integrate_breaks(
            |x| {
                let e = integrate_breaks(|y| Ok(g(mass(&Point::xy(x, y))?)), &inner_axis(x), &mid)?;
                Ok(e.value)
            },
            &axis,
            quad,
        )?
        .value
            * 4.0
    } else {
        integrate_breaks(
            |x| {
                let e = integrate_breaks(
                    |y| {
                        let e = integrate_breaks(
                            |z| Ok(g(mass(&Point::xyz(x, y, z))?)),
                            &axis,
                            &inner,
                        )?;
                        Ok(e.value)
                    },
                    &axis,
                    &mid,
                )?;
                Ok(e.value)
            },
            &axis,
            quad,
        )?
        .value
            * 8.0
    };
    Ok(total / domain.volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn disk_at_centre_edge_and_corner() {
        let d = Domain::square(10.0).unwrap();
        let m = ConnectionModel::disk(1.0).unwrap();
        let at = |x, y| m_h(&Point::xy(x, y), &d, &m, &spec()).unwrap();
        assert_eq!(at(5.0, 5.0), PI);
        assert_eq!(at(0.0, 0.0), PI / 4.0);
        assert_eq!(at(10.0, 10.0), PI / 4.0);
        assert!((at(0.0, 5.0) - PI / 2.0).abs() < 1e-15);
        assert!((at(5.0, 10.0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn disk_area_against_direct_quadrature() {
        // oracle: integrate the clipped chord length column by column
        let q = spec();
        let cases = [
            (0.3, 0.7, 1.0),
            (0.5, 9.9, 1.3),
            (9.2, 0.1, 2.0),
            (1.5, 1.5, 2.5),
            (0.2, 0.4, 20.0),
        ];
        for (cx, cy, r) in cases {
            let exact = disk_rectangle_area(cx, cy, r, [0.0, 10.0, 0.0, 10.0]);
            let (lo, hi) = (f64::max(cx - r, 0.0), f64::min(cx + r, 10.0));
            let chord = |x: f64| {
                let s = (r * r - (x - cx) * (x - cx)).max(0.0).sqrt();
                ((cy + s).min(10.0) - (cy - s).max(0.0)).max(0.0)
            };
            let mut pts = vec![lo, hi];
            for yw in [0.0, 10.0] {
                let dy = (yw - cy);
                if dy.abs() < r {
                    let h = (r * r - dy * dy).sqrt();
                    pts.extend([cx - h, cx + h].into_iter().filter(|&x| x > lo && x < hi));
                }
            }
            pts.sort_by(f64::total_cmp);
            let oracle = integrate_breaks(|x| Ok(chord(x)), &pts, &q).unwrap().value;
            assert!(
                (exact - oracle).abs() < 1e-9,
                "({cx}, {cy}, {r}): {exact} vs {oracle}"
            );
        }
        // square entirely inside a huge disk
        assert!(
            (disk_rectangle_area(5.0, 5.0, 100.0, [0.0, 10.0, 0.0, 10.0]) - 100.0).abs() < 1e-9
        );
    }

    #[test]
    fn corner_is_quarter_of_centre_for_small_range() {
        let d = Domain::square(100.0).unwrap();
        let m = ConnectionModel::disk(1.0).unwrap();
        let centre = m_h(&Point::xy(50.0, 50.0), &d, &m, &spec()).unwrap();
        let corner = m_h(&Point::xy(0.0, 100.0), &d, &m, &spec()).unwrap();
        assert!((corner - 0.25 * centre).abs() <= 1e-9 * centre);
    }

    #[test]
    fn gaussian_product_against_two_dimensional_quadrature() {
        let d = Domain::square(10.0).unwrap();
        let m = ConnectionModel::rayleigh(1.0, 2.0).unwrap();
        let centre = m_h(&Point::xy(5.0, 5.0), &d, &m, &spec()).unwrap();
        assert!((centre - PI * erf(5.0).powi(2)).abs() < 1e-8 * PI);
        let q = spec();
        for (x, y) in [(5.0, 5.0), (0.3, 1.1), (0.0, 0.0), (9.5, 4.0)] {
            let closed = m_h(&Point::xy(x, y), &d, &m, &q).unwrap();
            let inner = q.tightened(0.01);
            let oracle = integrate(
                |u| {
                    integrate(
                        |v| (-((u - x) * (u - x) + (v - y) * (v - y))).exp(),
                        0.0,
                        10.0,
                        &inner,
                    )
                    .unwrap()
                },
                0.0,
                10.0,
                &q,
            )
            .unwrap();
            assert!((closed - oracle).abs() / oracle < 1e-8, "({x}, {y})");
        }
    }

    #[test]
    fn polar_route_agrees_with_gaussian_product() {
        // eta = 2 evaluated through the general ray integral
        let q = spec();
        for (x, y) in [(5.0, 5.0), (0.4, 0.2), (0.0, 3.0), (10.0, 10.0)] {
            let polar = rayleigh_mass_2d(&[x, y], 10.0, 1.0, 2.0, &q).unwrap();
            let product = gaussian_segment(x, 10.0, 1.0) * gaussian_segment(y, 10.0, 1.0);
            assert!(
                (polar - product).abs() / product < 1e-8,
                "({x}, {y}): {polar} vs {product}"
            );
        }
        for (x, y, z) in [(3.5, 3.5, 3.5), (0.2, 0.5, 0.1), (7.0, 0.0, 3.0)] {
            let sph = rayleigh_mass_3d(&[x, y, z], 7.0, 1.0, 2.0, &q).unwrap();
            let product: f64 = [x, y, z]
                .iter()
                .map(|&c| gaussian_segment(c, 7.0, 1.0))
                .product();
            assert!(
                (sph - product).abs() / product < 1e-7,
                "({x}, {y}, {z}): {sph} vs {product}"
            );
        }
    }

    #[test]
    fn general_eta_far_from_walls_matches_unbounded_mass() {
        let d = Domain::square(20.0).unwrap();
        let m = ConnectionModel::rayleigh(1.0, 4.0).unwrap();
        let v = m_h(&Point::xy(10.0, 10.0), &d, &m, &spec()).unwrap();
        let unbounded = PI * gamma(1.5);
        assert!((v - unbounded).abs() < 1e-8);
        let corner = m_h(&Point::xy(0.0, 0.0), &d, &m, &spec()).unwrap();
        assert!((corner - unbounded / 4.0).abs() < 1e-8);
    }

    #[test]
    fn disk_in_cube() {
        let d = Domain::cube(7.0).unwrap();
        let m = ConnectionModel::disk(1.0).unwrap();
        let at = |x, y, z| m_h(&Point::xyz(x, y, z), &d, &m, &spec()).unwrap();
        let ball = 4.0 * PI / 3.0;
        assert!((at(3.5, 3.5, 3.5) - ball).abs() < 1e-10);
        assert!((at(0.0, 0.0, 0.0) - ball / 8.0).abs() < 1e-10);
        assert!((at(0.0, 3.0, 3.0) - ball / 2.0).abs() < 1e-10);
        assert!((at(0.0, 0.0, 3.0) - ball / 4.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_points() {
        let d = Domain::square(10.0).unwrap();
        let m = ConnectionModel::disk(1.0).unwrap();
        assert!(m_h(&Point::xy(11.0, 1.0), &d, &m, &spec()).is_err());
        assert!(m_h(&Point::xyz(1.0, 1.0, 1.0), &d, &m, &spec()).is_err());
    }

    #[test]
    fn averages() {
        let q = spec();
        let d = Domain::square(10.0).unwrap();
        let one = domain_average(&d, &ConnectionModel::disk(1.0).unwrap(), &q, |_| 1.0).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        // mean Gaussian mass has a closed form: (1/L^2) (integral over [0, L] of gaussian_segment)^2
        let m = ConnectionModel::rayleigh(1.0, 2.0).unwrap();
        let seg = integrate(|c| gaussian_segment(c, 10.0, 1.0), 0.0, 10.0, &q).unwrap();
        let exact = seg * seg / 100.0;
        let avg = domain_average(&d, &m, &q, |x| x).unwrap();
        assert!((avg - exact).abs() / exact < 1e-9);
        // disk: mean mass = pi r0^2 - perimeter loss (8/3) r0^3 / L + corner term r0^4 / (2 L^2) in L^2 units
        let disk_avg = domain_average(&d, &ConnectionModel::disk(1.0).unwrap(), &q, |x| x).unwrap();
        let exact_disk = PI - 4.0 * 10.0 * (2.0 / 3.0) / 100.0 + 0.5 / 100.0;
        assert!(
            (disk_avg - exact_disk).abs() < 1e-9,
            "{disk_avg} vs {exact_disk}"
        );
    }
}
