//! WGS84 UTM conversion, haversine distances and city-centre vectors.
//!
//! The transverse Mercator maps use Krüger's series to sixth order in the
//! third flattening, which is accurate to a few nanometres inside a zone.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{asinh, atan, atan2, atanh, cos, cosh, sin, sinh, sqrt};

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Mean Earth radius (IUGG), kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

pub const WGS84_A: f64 = 6_378_137.0;
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;
pub const UTM_K0: f64 = 0.9996;
pub const FALSE_EASTING: f64 = 500_000.0;
pub const FALSE_NORTHING_SOUTH: f64 = 10_000_000.0;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !(lat.is_finite() && (-90.0..=90.0).contains(&lat)) {
            return Err(Error::CoordinateRange(format!("latitude {lat} outside [-90, 90]")));
        }
        if !(lon.is_finite() && (-180.0..=180.0).contains(&lon)) {
            return Err(Error::CoordinateRange(format!("longitude {lon} outside [-180, 180]")));
        }
        Ok(GeoPoint { lat, lon })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Hemisphere {
    North,
    South,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct UtmCoord {
    pub easting: f64,
    pub northing: f64,
    pub zone: u8,
    pub hemisphere: Hemisphere,
}

impl UtmCoord {
    pub fn new(easting: f64, northing: f64, zone: u8, hemisphere: Hemisphere) -> Result<Self> {
        let c = UtmCoord {
            easting,
            northing,
            zone,
            hemisphere,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if !(1..=60).contains(&self.zone) {
            return Err(Error::CoordinateRange(format!("UTM zone {} outside 1..60", self.zone)));
        }
        if !(self.easting > 0.0 && self.easting < 1.0e6) {
            return Err(Error::CoordinateRange(format!(
                "easting {} outside (0, 1e6)",
                self.easting
            )));
        }
        if !(0.0..=1.0e7).contains(&self.northing) {
            return Err(Error::CoordinateRange(format!(
                "northing {} outside [0, 1e7]",
                self.northing
            )));
        }
        Ok(())
    }
}

/// Central meridian of a zone, degrees.
pub fn central_meridian(zone: u8) -> f64 {
    6.0 * f64::from(zone) - 183.0
}

struct Series {
    e: f64,
    rect_radius: f64,
    alpha: [f64; 6],
    beta: [f64; 6],
}

fn series() -> Series {
    let f = WGS84_F;
    let n = f / (2.0 - f);
    let (n2, n3) = (n * n, n * n * n);
    let (n4, n5, n6) = (n3 * n, n3 * n2, n3 * n3);
    let rect_radius = WGS84_A / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
    let alpha = [
        n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 - 127.0 * n5 / 288.0
            + 7891.0 * n6 / 37800.0,
        13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 + 281.0 * n5 / 630.0
            - 1983433.0 * n6 / 1935360.0,
        61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0
            + 167603.0 * n6 / 181440.0,
        49561.0 * n4 / 161280.0 - 179.0 * n5 / 168.0 + 6601661.0 * n6 / 7257600.0,
        34729.0 * n5 / 80640.0 - 3418889.0 * n6 / 1995840.0,
        212378941.0 * n6 / 319334400.0,
    ];
    let beta = [
        n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0 - n4 / 360.0 - 81.0 * n5 / 512.0
            + 96199.0 * n6 / 604800.0,
        n2 / 48.0 + n3 / 15.0 - 437.0 * n4 / 1440.0 + 46.0 * n5 / 105.0
            - 1118711.0 * n6 / 3870720.0,
        17.0 * n3 / 480.0 - 37.0 * n4 / 840.0 - 209.0 * n5 / 4480.0 + 5569.0 * n6 / 90720.0,
        4397.0 * n4 / 161280.0 - 11.0 * n5 / 504.0 - 830251.0 * n6 / 7257600.0,
        4583.0 * n5 / 161280.0 - 108847.0 * n6 / 3991680.0,
        20648693.0 * n6 / 638668800.0,
    ];
    Series {
        e: sqrt(f * (2.0 - f)),
        rect_radius,
        alpha,
        beta,
    }
}

/// tan of the conformal latitude from tan of the geodetic latitude.
fn conformal_tan(tau: f64, e: f64) -> f64 {
    let sigma = sinh(e * atanh(e * tau / sqrt(1.0 + tau * tau)));
    tau * sqrt(1.0 + sigma * sigma) - sigma * sqrt(1.0 + tau * tau)
}

/// Newton inversion of [`conformal_tan`].
fn geodetic_tan(tau_c: f64, e: f64) -> f64 {
    let e2m = 1.0 - e * e;
    let mut tau = tau_c;
    for _ in 0..8 {
        let tc = conformal_tan(tau, e);
        let d = (tau_c - tc) / sqrt(1.0 + tc * tc) * (1.0 + e2m * tau * tau)
            / (e2m * sqrt(1.0 + tau * tau));
        tau += d;
        if d.abs() <= 1e-15 * tau.abs().max(1.0) {
            break;
        }
    }
    tau
}

/// Inverse transverse Mercator.
pub fn utm_to_geo(c: UtmCoord) -> Result<GeoPoint> {
    c.validate()?;
    let s = series();
    let k = UTM_K0 * s.rect_radius;
    let n0 = match c.hemisphere {
        Hemisphere::North => 0.0,
        Hemisphere::South => FALSE_NORTHING_SOUTH,
    };
    let xi = (c.northing - n0) / k;
    let eta = (c.easting - FALSE_EASTING) / k;
    let mut xi_p = xi;
    let mut eta_p = eta;
    for (j, b) in s.beta.iter().enumerate() {
        let m = 2.0 * (j + 1) as f64;
        xi_p -= b * sin(m * xi) * cosh(m * eta);
        eta_p -= b * cos(m * xi) * sinh(m * eta);
    }
    let tau_c = sin(xi_p) / sqrt(sinh(eta_p) * sinh(eta_p) + cos(xi_p) * cos(xi_p));
    let dlon = atan2(sinh(eta_p), cos(xi_p));
    let lat = atan(geodetic_tan(tau_c, s.e)).to_degrees();
    let lon = central_meridian(c.zone) + dlon.to_degrees();
    GeoPoint::new(lat, lon)
}

/// Forward transverse Mercator into the given zone.
pub fn geo_to_utm(p: GeoPoint, zone: u8, hemisphere: Hemisphere) -> Result<UtmCoord> {
    if !(1..=60).contains(&zone) {
        return Err(Error::CoordinateRange(format!("UTM zone {zone} outside 1..60")));
    }
    if !(p.lat.abs() < 84.0) {
        return Err(Error::CoordinateRange(format!(
            "latitude {} is polar; UTM needs |lat| < 84",
            p.lat
        )));
    }
    let s = series();
    let dlon = (p.lon - central_meridian(zone)).to_radians();
    let tau_c = conformal_tan(libm::tan(p.lat.to_radians()), s.e);
    let xi_p = atan2(tau_c, cos(dlon));
    let eta_p = asinh(sin(dlon) / sqrt(tau_c * tau_c + cos(dlon) * cos(dlon)));
    let mut xi = xi_p;
    let mut eta = eta_p;
    for (j, a) in s.alpha.iter().enumerate() {
        let m = 2.0 * (j + 1) as f64;
        xi += a * sin(m * xi_p) * cosh(m * eta_p);
        eta += a * cos(m * xi_p) * sinh(m * eta_p);
    }
    let k = UTM_K0 * s.rect_radius;
    let n0 = match hemisphere {
        Hemisphere::North => 0.0,
        Hemisphere::South => FALSE_NORTHING_SOUTH,
    };
    UtmCoord::new(FALSE_EASTING + k * eta, n0 + k * xi, zone, hemisphere)
}

/// Great-circle distance on a sphere of radius [`EARTH_RADIUS_KM`].
pub fn haversine_km(p: GeoPoint, q: GeoPoint) -> f64 {
    let (phi1, phi2) = (p.lat.to_radians(), q.lat.to_radians());
    let dphi = phi2 - phi1;
    let dlam = (q.lon - p.lon).to_radians();
    let h = sin(dphi / 2.0) * sin(dphi / 2.0) + cos(phi1) * cos(phi2) * sin(dlam / 2.0) * sin(dlam / 2.0);
    2.0 * EARTH_RADIUS_KM * libm::asin(sqrt(h.min(1.0)))
}

/// Arithmetic mean of latitudes and of longitudes. Ignores sphericity.
pub fn mean_center(points: &[GeoPoint]) -> Result<GeoPoint> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("mean of an empty point set".into()));
    }
    let n = points.len() as f64;
    let lat = points.iter().map(|p| p.lat).sum::<f64>() / n;
    let lon = points.iter().map(|p| p.lon).sum::<f64>() / n;
    GeoPoint::new(lat, lon)
}

/// Normalised mean of the unit vectors, projected back to the sphere.
pub fn spherical_center(points: &[GeoPoint]) -> Result<GeoPoint> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("mean of an empty point set".into()));
    }
    let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
    for p in points {
        let (phi, lam) = (p.lat.to_radians(), p.lon.to_radians());
        x += cos(phi) * cos(lam);
        y += cos(phi) * sin(lam);
        z += sin(phi);
    }
    let h = sqrt(x * x + y * y);
    if h == 0.0 && z == 0.0 {
        return Err(Error::InvalidArgument("points cancel out; centre undefined".into()));
    }
    GeoPoint::new(atan2(z, h).to_degrees(), atan2(y, x).to_degrees())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum CenterMethod {
    /// Degree-plane mean of lat and lon.
    #[default]
    Mean,
    Spherical,
}

/// Node locations with their distance to the city centre.
#[derive(Clone, Debug, PartialEq)]
pub struct GeoTable {
    pub nodes: Vec<NodeId>,
    pub points: Vec<GeoPoint>,
    pub center: GeoPoint,
    /// Kilometres, aligned with `nodes`.
    pub distances: Vec<f64>,
}

impl GeoTable {
    pub fn distance_of(&self, id: NodeId) -> Option<f64> {
        self.nodes.binary_search(&id).ok().map(|i| self.distances[i])
    }
}

/// Centre of all nodes and each node's haversine distance to it. Nodes come
/// back sorted by id.
pub fn distances_to_center(
    located: &[(NodeId, Option<GeoPoint>)],
    method: CenterMethod,
) -> Result<GeoTable> {
    let mut rows: Vec<(NodeId, GeoPoint)> = Vec::with_capacity(located.len());
    for &(id, p) in located {
        rows.push((id, p.ok_or(Error::MissingCoordinates(id))?));
    }
    rows.sort_by_key(|r| r.0);
    let points: Vec<GeoPoint> = rows.iter().map(|r| r.1).collect();
    let center = match method {
        CenterMethod::Mean => mean_center(&points)?,
        CenterMethod::Spherical => spherical_center(&points)?,
    };
    let distances = points.iter().map(|&p| haversine_km(center, p)).collect();
    Ok(GeoTable {
        nodes: rows.into_iter().map(|r| r.0).collect(),
        points,
        center,
        distances,
    })
}

/// Half the circumference, the largest haversine distance.
pub const MAX_DISTANCE_KM: f64 = PI * EARTH_RADIUS_KM;
