#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use image::{ImageBuffer, Luma};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

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

pub const MANIFEST_HEADER: &str = "ref_path,test_path,subjective,subjective_kind,distortion,database";

pub fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata/images")
        .join(name)
}

pub fn iqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iqa"))
        .args(args)
        .output()
        .expect("spawn iqa")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// 16-bit grayscale copy of `src` with additive Gaussian noise of standard
/// deviation `sigma` (in units of full scale).
pub fn write_noisy(src: &Path, dst: &Path, sigma: f64, seed: u64) {
    let gray = image::open(src).unwrap().to_luma16();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma * 65535.0).unwrap();
    let out: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_fn(gray.width(), gray.height(), |x, y| {
            let v = gray.get_pixel(x, y)[0] as f64 + noise.sample(&mut rng);
            Luma([v.round().clamp(0.0, 65535.0) as u16])
        });
    out.save(dst).unwrap();
}

pub fn write_gray(src: &Path, dst: &Path) {
    image::open(src).unwrap().to_luma16().save(dst).unwrap();
}
