use serde::{Deserialize, Serialize};

/// Rectangular lon/lat grid with square cells of `step` degrees, indexed
/// row-major from the south-west corner: `bin = row · columns + column`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lon_min: f64,
    pub lon_max: f64,
    pub lat_min: f64,
    pub lat_max: f64,
    pub step: f64,
}

impl Default for GridSpec {
    /// The New York City window: 40 columns × 11 rows of 0.05°.
    fn default() -> Self {
        Self {
            lon_min: -75.0,
            lon_max: -73.0,
            lat_min: 40.4,
            lat_max: 40.95,
            step: 0.05,
        }
    }
}

// Absorbs representation error at exact cell boundaries, e.g. 0.35 / 0.05.
const BOUNDARY_SLACK: f64 = 1e-9;

impl GridSpec {
    pub fn is_valid(&self) -> bool {
        self.step > 0.0 && self.lon_min < self.lon_max && self.lat_min < self.lat_max
    }

    pub fn columns(&self) -> u32 {
        cells(self.lon_max - self.lon_min, self.step)
    }

    pub fn rows(&self) -> u32 {
        cells(self.lat_max - self.lat_min, self.step)
    }

    pub fn num_bins(&self) -> u32 {
        self.columns() * self.rows()
    }

    /// Cell index of a point, or `None` outside the window (bounds inclusive).
    pub fn bin(&self, lat: f64, lon: f64) -> Option<u32> {
        if !(lat.is_finite() && lon.is_finite()) {
            return None;
        }
        if lat < self.lat_min || lat > self.lat_max || lon < self.lon_min || lon > self.lon_max {
            return None;
        }
        let row = index((lat - self.lat_min) / self.step, self.rows());
        let col = index((lon - self.lon_min) / self.step, self.columns());
        Some(row * self.columns() + col)
    }
}

fn cells(span: f64, step: f64) -> u32 {
    libm::round(span / step).max(1.0) as u32
}

fn index(offset: f64, count: u32) -> u32 {
    (libm::floor(offset + BOUNDARY_SLACK) as u32).min(count - 1)
}

/// [`GridSpec::bin`] on the default grid.
pub fn bin_location(lat: f64, lon: f64, grid: &GridSpec) -> Option<u32> {
    grid.bin(lat, lon)
}
