#![allow(dead_code)]

use depthlab::rng::stream_rng;
use depthlab::DataMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub const STARS_CSV: &str = include_str!("../../data/starsCYG.csv");

/// starsCYG as (log temperature, log light intensity).
pub fn stars() -> (Vec<f64>, Vec<f64>) {
    let m = stars_matrix();
    (m.column(0), m.column(1))
}

pub fn stars_matrix() -> DataMatrix {
    depthlab::load_matrix(STARS_CSV.as_bytes(), true).unwrap()
}

/// `n` standard normal rows in `d` dimensions, scaled and shifted.
pub fn gaussian(n: usize, d: usize, seed: u64, scale: f64, shift: f64) -> DataMatrix {
    let mut rng = stream_rng(seed, 77);
    let v: Vec<f64> = (0..n * d)
        .map(|_| shift + scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    DataMatrix::new(n, d, v).unwrap()
}

pub fn write_csv(dir: &std::path::Path, name: &str, m: &DataMatrix) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut buf = Vec::new();
    depthlab::save_matrix(&mut buf, m, None).unwrap();
    std::fs::write(&path, buf).unwrap();
    path
}
