//! Density and scatter rasters (binary PPM) and log-log plot data.

use std::io::Write;
use std::path::Path;
use std::sync::LazyLock;

use crate::csvio;
use crate::dimension::{DimensionEstimate, LogLogSeries};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Window};

/// Relative padding added around the data bounding box.
pub const PAD_FRACTION: f64 = 0.02;

pub const BACKGROUND: [u8; 3] = [0, 0, 0];
pub const SCATTER_INK: [u8; 3] = [255, 255, 255];

/// Plasma-like ramp: dark violet through magenta and orange to yellow.
const PLASMA_ANCHORS: [[f64; 3]; 9] = [
    [13.0, 8.0, 135.0],
    [75.0, 3.0, 161.0],
    [125.0, 3.0, 168.0],
    [168.0, 34.0, 150.0],
    [203.0, 70.0, 121.0],
    [229.0, 107.0, 93.0],
    [248.0, 148.0, 65.0],
    [253.0, 195.0, 40.0],
    [240.0, 249.0, 33.0],
];

/// The 256-entry colour table used by [`write_density_image`].
pub static COLOR_TABLE: LazyLock<[[u8; 3]; 256]> = LazyLock::new(|| {
    let mut table = [[0u8; 3]; 256];
    let segments = (PLASMA_ANCHORS.len() - 1) as f64;
    for (i, entry) in table.iter_mut().enumerate() {
        let t = i as f64 / 255.0 * segments;
        let k = (t.floor() as usize).min(PLASMA_ANCHORS.len() - 2);
        let f = t - k as f64;
        for c in 0..3 {
            let v = PLASMA_ANCHORS[k][c] + f * (PLASMA_ANCHORS[k + 1][c] - PLASMA_ANCHORS[k][c]);
            entry[c] = v.round() as u8;
        }
    }
    table
});

/// Square-cell histogram of a point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub nx: usize,
    pub ny: usize,
    pub origin: Point2,
    pub cell_w: f64,
    pub cell_h: f64,
    /// Row-major, row `iy = 0` at the bottom (smallest y).
    pub counts: Vec<u64>,
}

impl DensityGrid {
    pub fn count(&self, ix: usize, iy: usize) -> u64 {
        self.counts[iy * self.nx + ix]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

/// Bounding box padded by [`PAD_FRACTION`]; a zero-length side gets ±0.5.
pub fn render_window(points: &[Point2]) -> Result<Window> {
    let b = Window::bounding(points).ok_or(Error::EmptyCloud)?;
    let mut w = b.padded(PAD_FRACTION, 0.0);
    if w.width() <= 0.0 {
        w.x_min -= 0.5;
        w.x_max += 0.5;
    }
    if w.height() <= 0.0 {
        w.y_min -= 0.5;
        w.y_max += 0.5;
    }
    Ok(w)
}

fn cell_index(v: f64, lo: f64, size: f64, n: usize) -> usize {
    (((v - lo) / size).floor().max(0.0) as usize).min(n - 1)
}

pub fn density_grid(points: &[Point2], nx: usize, ny: usize) -> Result<DensityGrid> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument(format!("grid must be at least 1×1, got {nx}×{ny}")));
    }
    let w = render_window(points)?;
    let (cell_w, cell_h) = (w.width() / nx as f64, w.height() / ny as f64);
    let mut counts = vec![0u64; nx * ny];
    for p in points {
        let ix = cell_index(p.x, w.x_min, cell_w, nx);
        let iy = cell_index(p.y, w.y_min, cell_h, ny);
        counts[iy * nx + ix] += 1;
    }
    Ok(DensityGrid { nx, ny, origin: Point2::new(w.x_min, w.y_min), cell_w, cell_h, counts })
}

fn write_ppm(path: &Path, width: usize, height: usize, rgb: &[u8]) -> Result<()> {
    let ctx = || path.display().to_string();
    let mut w = csvio::create(path)?;
    write!(w, "P6\n{width} {height}\n255\n").map_err(|e| Error::io(ctx(), e))?;
    w.write_all(rgb).map_err(|e| Error::io(ctx(), e))?;
    w.flush().map_err(|e| Error::io(ctx(), e))
}

/// RGB bytes of the density image, top row first. Empty cells get
/// [`BACKGROUND`], the rest `COLOR_TABLE[round(255 · ln(1+c) / ln(1+max))]`.
pub fn density_pixels(grid: &DensityGrid) -> Vec<u8> {
    let max = grid.max_count();
    let denom = (max as f64).ln_1p();
    let mut rgb = Vec::with_capacity(grid.nx * grid.ny * 3);
    for row in 0..grid.ny {
        let iy = grid.ny - 1 - row;
        for ix in 0..grid.nx {
            let c = grid.count(ix, iy);
            let px = if c == 0 {
                BACKGROUND
            } else {
                let v = (c as f64).ln_1p() / denom;
                COLOR_TABLE[(v * 255.0).round() as usize]
            };
            rgb.extend_from_slice(&px);
        }
    }
    rgb
}

pub fn write_density_image(grid: &DensityGrid, path: &Path) -> Result<()> {
    write_ppm(path, grid.nx, grid.ny, &density_pixels(grid))
}

/// One white pixel per occupied pixel cell on a black canvas. Returns the
/// number of lit pixels.
pub fn write_scatter_image(points: &[Point2], width: usize, height: usize, path: &Path) -> Result<usize> {
    let lit = scatter_mask(points, width, height)?;
    let rgb: Vec<u8> = lit
        .iter()
        .flat_map(|&on| if on { SCATTER_INK } else { BACKGROUND })
        .collect();
    write_ppm(path, width, height, &rgb)?;
    Ok(lit.iter().filter(|&&on| on).count())
}

/// Lit-pixel mask, top row first.
pub fn scatter_mask(points: &[Point2], width: usize, height: usize) -> Result<Vec<bool>> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(format!("canvas must be at least 1×1, got {width}×{height}")));
    }
    let w = render_window(points)?;
    let (pw, ph) = (w.width() / width as f64, w.height() / height as f64);
    let mut lit = vec![false; width * height];
    for p in points {
        let ix = cell_index(p.x, w.x_min, pw, width);
        let row = height - 1 - cell_index(p.y, w.y_min, ph, height);
        lit[row * width + ix] = true;
    }
    Ok(lit)
}

/// Two square scatter panels, each framed on its own data, side by side.
pub fn write_side_by_side(left: &[Point2], right: &[Point2], size: usize, path: &Path) -> Result<()> {
    let a = scatter_mask(left, size, size)?;
    let b = scatter_mask(right, size, size)?;
    let mut rgb = Vec::with_capacity(size * size * 6);
    for row in 0..size {
        for mask in [&a, &b] {
            for &on in &mask[row * size..(row + 1) * size] {
                rgb.extend_from_slice(if on { &SCATTER_INK } else { &BACKGROUND });
            }
        }
    }
    write_ppm(path, 2 * size, size, &rgb)
}

/// `log_inv_eps,log_count,fit_line` with `fit_line = intercept + value · x`.
pub fn write_loglog_csv(series: &dyn LogLogSeries, fit: &DimensionEstimate, path: &Path) -> Result<()> {
    csvio::write_rows(
        path,
        "log_inv_eps,log_count,fit_line",
        series.loglog_points().into_iter().map(|(x, y)| {
            format!(
                "{},{},{}",
                csvio::fmt_f64(x),
                csvio::fmt_f64(y),
                csvio::fmt_f64(fit.intercept + fit.value * x)
            )
        }),
    )
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let ctx = || path.display().to_string();
    let mut w = csvio::create(path)?;
    w.write_all(text.as_bytes()).map_err(|e| Error::io(ctx(), e))?;
    w.flush().map_err(|e| Error::io(ctx(), e))
}
