use serde::{Deserialize, Serialize};

/// Mean earth radius used for all distance computations, in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// A WGS-84 coordinate in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub const fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    pub fn is_valid(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..=180.0).contains(&self.lon)
    }

    /// Great-circle distance on a spherical earth (haversine).
    pub fn distance_m(&self, other: &GeoPoint) -> f64 {
        let (lat1, lat2) = (self.lat.to_radians(), other.lat.to_radians());
        let dlat = lat2 - lat1;
        let dlon = (other.lon - self.lon).to_radians();
        let s_lat = libm::sin(dlat / 2.0);
        let s_lon = libm::sin(dlon / 2.0);
        let h = s_lat * s_lat + libm::cos(lat1) * libm::cos(lat2) * s_lon * s_lon;
        2.0 * EARTH_RADIUS_M * libm::asin(libm::sqrt(h.clamp(0.0, 1.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_distance_to_self() {
        let p = GeoPoint::new(41.8781, -87.6298);
        assert_eq!(p.distance_m(&p), 0.0);
    }

    #[test]
    fn one_degree_of_latitude() {
        // pi * R / 180
        let a = GeoPoint::new(0.0, 0.0);
        let b = GeoPoint::new(1.0, 0.0);
        let expected = core::f64::consts::PI * EARTH_RADIUS_M / 180.0;
        assert!((a.distance_m(&b) - expected).abs() < 1e-6);
    }

    #[test]
    fn symmetric() {
        let a = GeoPoint::new(41.88, -87.63);
        let b = GeoPoint::new(41.89, -87.62);
        assert!((a.distance_m(&b) - b.distance_m(&a)).abs() < 1e-9);
    }
}
