#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use iqa_core::{ImagePair, ScalarField2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_field(rng: &mut impl Rng, w: usize, h: usize) -> ScalarField2D {
    ScalarField2D::from_fn(w, h, |_, _| rng.random::<f64>())
}

/// A smooth random image with some texture, closer to natural content than
/// white noise.
pub fn textured_field(rng: &mut impl Rng, w: usize, h: usize) -> ScalarField2D {
    let (fx, fy, ph): (f64, f64, f64) = (rng.random_range(0.05..0.4), rng.random_range(0.05..0.4), rng.random());
    ScalarField2D::from_fn(w, h, |x, y| {
        let base = 0.5 + 0.3 * ((x as f64 * fx + y as f64 * fy + ph * 6.0).sin());
        (base + 0.2 * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0)
    })
}

pub fn random_pair(rng: &mut impl Rng, w: usize, h: usize) -> ImagePair {
    ImagePair::from_fields(random_field(rng, w, h), random_field(rng, w, h), 1).unwrap()
}

pub fn to_img(f: &ScalarField2D) -> oracle::Img {
    (0..f.height()).map(|y| f.row(y).to_vec()).collect()
}

pub fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata/images")
        .join(name)
}

pub const BUNDLED: [&str; 10] = [
    "astronaut.png",
    "brick16.png",
    "camera.png",
    "chelsea.bmp",
    "coffee.png",
    "coins.png",
    "grass.png",
    "gravel.bmp",
    "hubble.png",
    "rocket.png",
];

pub fn max_abs_diff(a: &ScalarField2D, b: &oracle::Img) -> f64 {
    let mut worst: f64 = 0.0;
    for y in 0..a.height() {
        for x in 0..a.width() {
            worst = worst.max((a.get(x, y) - b[y][x]).abs());
        }
    }
    worst
}
