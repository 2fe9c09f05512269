//! Straight-line reference implementation of the full scoring pipeline on
//! plain `Vec<Vec<f64>>` images. Deliberately slow and independent of the
//! library: direct-sum DFTs, explicit mirror indexing, no shared helpers.

#![allow(dead_code)]

use std::f64::consts::PI;

pub type Img = Vec<Vec<f64>>; // img[y][x]

pub fn dims(img: &Img) -> (usize, usize) {
    (img[0].len(), img.len())
}

/// Mirror about the edge sample, valid while the overhang is below `n`.
pub fn mirror(i: isize, n: usize) -> usize {
    let n = n as isize;
    if n == 1 {
        return 0;
    }
    let mut i = i;
    loop {
        if i < 0 {
            i = -i;
        } else if i >= n {
            i = 2 * (n - 1) - i;
        } else {
            return i as usize;
        }
    }
}

pub fn window(img: &Img, x: usize, y: usize) -> [f64; 9] {
    let (w, h) = dims(img);
    let mut out = [0.0; 9];
    for dy in 0..3 {
        for dx in 0..3 {
            let sx = mirror(x as isize + dx as isize - 1, w);
            let sy = mirror(y as isize + dy as isize - 1, h);
            out[dy * 3 + dx] = img[sy][sx];
        }
    }
    out
}

pub fn contrast(img: &Img) -> Img {
    let (w, h) = dims(img);
    (0..h)
        .map(|y| {
            (0..w)
                .map(|x| {
                    let win = window(img, x, y);
                    let m: f64 = win.iter().sum::<f64>() / 9.0;
                    (win.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 9.0).sqrt()
                })
                .collect()
        })
        .collect()
}

/// Scharr derivatives. Taps of opposite sign are differenced before
/// weighting: on a mirrored border the derivative across the edge is exactly
/// zero, and any rounding residue there would turn into a random orientation.
pub fn scharr(img: &Img) -> (Img, Img) {
    const K: [f64; 3] = [3.0, 10.0, 3.0];
    let (w, h) = dims(img);
    let mut gx = vec![vec![0.0; w]; h];
    let mut gy = vec![vec![0.0; w]; h];
    for y in 0..h {
        for x in 0..w {
            let win = window(img, x, y);
            let at = |r: usize, c: usize| win[r * 3 + c];
            let (mut sx, mut sy) = (0.0, 0.0);
            for i in 0..3 {
                sx += K[i] * (at(i, 2) - at(i, 0));
                sy += K[i] * (at(2, i) - at(0, i));
            }
            gx[y][x] = sx / 16.0;
            gy[y][x] = sy / 16.0;
        }
    }
    (gx, gy)
}

pub fn pearson9(a: &[f64; 9], b: &[f64; 9]) -> f64 {
    let ma: f64 = a.iter().sum::<f64>() / 9.0;
    let mb: f64 = b.iter().sum::<f64>() / 9.0;
    let va: f64 = a.iter().map(|v| (v - ma).powi(2)).sum::<f64>() / 9.0;
    let vb: f64 = b.iter().map(|v| (v - mb).powi(2)).sum::<f64>() / 9.0;
    match (va < 1e-12, vb < 1e-12) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => {
            let cov: f64 = (0..9).map(|i| (a[i] - ma) * (b[i] - mb)).sum::<f64>() / 9.0;
            (cov / (va * vb).sqrt()).clamp(-1.0, 1.0)
        }
    }
}

pub fn local_corr(a: &Img, b: &Img) -> Img {
    let (w, h) = dims(a);
    (0..h)
        .map(|y| (0..w).map(|x| pearson9(&window(a, x, y), &window(b, x, y))).collect())
        .collect()
}

pub fn resize(img: &Img, nw: usize, nh: usize) -> Img {
    let (w, h) = dims(img);
    if (w, h) == (nw, nh) {
        return img.clone();
    }
    let src = |i: usize, from: usize, to: usize| -> (usize, usize, f64) {
        let s = (i as f64 + 0.5) * from as f64 / to as f64 - 0.5;
        let s = s.max(0.0).min((from - 1) as f64);
        let lo = s.floor() as usize;
        (lo, (lo + 1).min(from - 1), s - lo as f64)
    };
    let mut out = vec![vec![0.0; nw]; nh];
    for (y, row) in out.iter_mut().enumerate() {
        let (y0, y1, fy) = src(y, h, nh);
        for (x, v) in row.iter_mut().enumerate() {
            let (x0, x1, fx) = src(x, w, nw);
            let top = img[y0][x0] * (1.0 - fx) + img[y0][x1] * fx;
            let bot = img[y1][x0] * (1.0 - fx) + img[y1][x1] * fx;
            *v = top * (1.0 - fy) + bot * fy;
        }
    }
    out
}

type Cplx = (f64, f64);
type Grid = Vec<Vec<Cplx>>;

fn dft1(v: &[Cplx], sign: f64) -> Vec<Cplx> {
    let n = v.len();
    (0..n)
        .map(|k| {
            let mut acc = (0.0, 0.0);
            for (j, &(re, im)) in v.iter().enumerate() {
                let ang = sign * 2.0 * PI * ((k * j) % n) as f64 / n as f64;
                let (s, c) = ang.sin_cos();
                acc.0 += re * c - im * s;
                acc.1 += re * s + im * c;
            }
            acc
        })
        .collect()
}

fn dft2(g: &Grid, sign: f64) -> Grid {
    let h = g.len();
    let w = g[0].len();
    let rows: Grid = g.iter().map(|r| dft1(r, sign)).collect();
    let mut out = vec![vec![(0.0, 0.0); w]; h];
    for x in 0..w {
        let col: Vec<Cplx> = (0..h).map(|y| rows[y][x]).collect();
        for (y, v) in dft1(&col, sign).into_iter().enumerate() {
            out[y][x] = v;
        }
    }
    out
}

fn abs(c: Cplx) -> f64 {
    c.0.hypot(c.1)
}

fn gauss_blur(img: &Img) -> Img {
    let (w, h) = dims(img);
    let taps: Vec<f64> = (-4i32..=4)
        .map(|i| (-(i * i) as f64 / (2.0 * 2.5 * 2.5)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    let taps: Vec<f64> = taps.iter().map(|t| t / total).collect();
    let mut tmp = vec![vec![0.0; w]; h];
    for y in 0..h {
        for x in 0..w {
            tmp[y][x] = (0..9)
                .map(|k| taps[k] * img[y][mirror(x as isize + k as isize - 4, w)])
                .sum();
        }
    }
    let mut out = vec![vec![0.0; w]; h];
    for y in 0..h {
        for x in 0..w {
            out[y][x] = (0..9)
                .map(|k| taps[k] * tmp[mirror(y as isize + k as isize - 4, h)][x])
                .sum();
        }
    }
    out
}

/// Unnormalized spectral saliency (`residual = true` for SR, false for PFT).
pub fn saliency(img: &Img, residual: bool) -> Img {
    let (w, h) = dims(img);
    let wh = ((h as f64 * 64.0 / w as f64).round() as usize).max(1);
    let small = resize(img, 64, wh);
    let grid: Grid = small.iter().map(|r| r.iter().map(|&v| (v, 0.0)).collect()).collect();
    let f = dft2(&grid, -1.0);
    let peak = f.iter().flatten().map(|&c| abs(c)).fold(0.0, f64::max);
    let phasor = |c: Cplx| -> Cplx {
        let m = abs(c);
        if m > peak * 1e-12 {
            (c.0 / m, c.1 / m)
        } else {
            (0.0, 0.0)
        }
    };
    let log_amp: Img = f
        .iter()
        .map(|r| r.iter().map(|&c| (abs(c) + 1e-10).ln()).collect())
        .collect();
    let mut rebuilt = vec![vec![(0.0, 0.0); 64]; wh];
    for y in 0..wh {
        for x in 0..64 {
            let p = if peak == 0.0 {
                if (x, y) == (0, 0) {
                    (1.0, 0.0)
                } else {
                    (0.0, 0.0)
                }
            } else {
                phasor(f[y][x])
            };
            let gain = if residual {
                let m: f64 = window(&log_amp, x, y).iter().sum::<f64>() / 9.0;
                (log_amp[y][x] - m).exp()
            } else {
                1.0
            };
            rebuilt[y][x] = (p.0 * gain, p.1 * gain);
        }
    }
    let inv = dft2(&rebuilt, 1.0);
    let n = (64 * wh) as f64;
    let energy: Img = inv
        .iter()
        .map(|r| r.iter().map(|&(re, im)| (re / n).powi(2) + (im / n).powi(2)).collect())
        .collect();
    resize(&gauss_blur(&energy), w, h)
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.max(0.0)).collect())
        .collect()
}

pub struct OracleMaps {
    pub d_f: Img,
    pub s_ref: Img,
    pub s_test: Img,
    pub q: f64,
}

/// Scores preprocessed luminance images with the given saliency maps
/// (already jointly normalized).
pub fn score_with_saliency(r: &Img, t: &Img, s_ref: &Img, s_test: &Img) -> OracleMaps {
    let (w, h) = dims(r);
    let (vr, vt) = (contrast(r), contrast(t));
    let (gxr, gyr) = scharr(r);
    let (gxt, gyt) = scharr(t);
    let sm = local_corr(s_ref, s_test);
    let xc = local_corr(&gxr, &gxt);
    let yc = local_corr(&gyr, &gyt);
    let mut d_f = vec![vec![0.0; w]; h];
    let (mut num, mut den) = (0.0, 0.0);
    for y in 0..h {
        for x in 0..w {
            let lcd = ((vr[y][x] - vt[y][x]) / 2.0).powi(2);
            let mr = (gxr[y][x].powi(2) + gyr[y][x].powi(2)).sqrt();
            let mt = (gxt[y][x].powi(2) + gyt[y][x].powi(2)).sqrt();
            let ori = |gx: f64, gy: f64| if gx == 0.0 && gy == 0.0 { 0.0 } else { gy.atan2(gx) };
            let or = ori(gxr[y][x], gyr[y][x]);
            let ot = ori(gxt[y][x], gyt[y][x]);
            let gd = ((((mr - mt).abs() / 2f64.sqrt()).max((or - ot).abs() / (2.0 * PI))) / 2.0).powi(2);
            let (smc, x_c, y_c) = (sm[y][x], xc[y][x], yc[y][x]);
            let hc = x_c.max(y_c);
            let lc = x_c.min(y_c);
            let t_ = (lcd * (1.0 - smc) / 2.0 * gd).cbrt();
            let dev = [hc - lc, 1.0 - x_c, 1.0 - y_c, 1.0 - smc]
                .into_iter()
                .fold(f64::MIN, f64::max);
            let dp = dev / 2.0 * t_;
            // gaps below the correlations' numerical resolution count as ties
            let (a, b) = if smc - lc > 1e-12 {
                ((lcd * (1.0 - smc) / 2.0).sqrt(), (lcd * gd).sqrt())
            } else {
                (0.0, 0.0)
            };
            d_f[y][x] = dp + a + b;
            let wgt = s_ref[y][x].max(s_test[y][x]);
            num += d_f[y][x] * wgt;
            den += wgt;
        }
    }
    OracleMaps {
        d_f,
        s_ref: s_ref.clone(),
        s_test: s_test.clone(),
        q: 10000.0 * num / den,
    }
}

/// Full pipeline on preprocessed images, saliency included.
pub fn score(r: &Img, t: &Img, residual: bool) -> OracleMaps {
    let sr = saliency(r, residual);
    let st = saliency(t, residual);
    let peak = sr.iter().chain(&st).flatten().cloned().fold(0.0, f64::max);
    let norm = |s: Img| -> Img {
        if peak > 0.0 {
            s.into_iter().map(|r| r.into_iter().map(|v| v / peak).collect()).collect()
        } else {
            s
        }
    };
    score_with_saliency(r, t, &norm(sr), &norm(st))
}
