//! Linear and rank correlation coefficients.

use std::cmp::Ordering;

use crate::error::{IqaError, Result};

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(IqaError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(IqaError::DegenerateSeries(format!(
            "need at least 2 items, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(IqaError::DegenerateSeries("series contains NaN".into()));
    }
    Ok(())
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Pearson's linear correlation coefficient (signed).
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(IqaError::DegenerateSeries("constant series".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties sharing the average of the positions they span.
pub fn fractional_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rank-order correlation (signed).
pub fn srocc(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

/// Kendall's tau-b (signed), by Knight's O(n log n) merge-sort algorithm.
pub fn krocc(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len() as u64;
    let total = n * (n - 1) / 2;

    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));

    let tied_x = tie_pairs(&idx, |a, b| x[a] == x[b]);
    let tied_xy = tie_pairs(&idx, |a, b| x[a] == x[b] && y[a] == y[b]);

    let mut buf = idx.clone();
    let swaps = merge_count(&mut idx, &mut buf, y);
    let tied_y = tie_pairs(&idx, |a, b| y[a] == y[b]);

    let denom_x = total - tied_x;
    let denom_y = total - tied_y;
    if denom_x == 0 || denom_y == 0 {
        return Err(IqaError::DegenerateSeries("constant series".into()));
    }
    let numer = total as i128 - tied_x as i128 - tied_y as i128 + tied_xy as i128 - 2 * swaps as i128;
    Ok((numer as f64 / ((denom_x as f64) * (denom_y as f64)).sqrt()).clamp(-1.0, 1.0))
}

/// Number of tied pairs among consecutive runs of `sorted` under `eq`.
fn tie_pairs(sorted: &[usize], eq: impl Fn(usize, usize) -> bool) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if eq(w[0], w[1]) {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Stable merge sort of `idx` by `key`, returning the number of inversions.
fn merge_count(idx: &mut [usize], buf: &mut [usize], key: &[f64]) -> u64 {
    let n = idx.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (l, r) = idx.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl, key) + merge_count(r, br, key)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if key[idx[j]].total_cmp(&key[idx[i]]) == Ordering::Less {
            buf[k] = idx[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = idx[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&idx[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&idx[j..n]);
    idx.copy_from_slice(&buf[..n]);
    swaps
}
