#![allow(dead_code)]

use std::f64::consts::PI;

use nlll::LuttingerParams;

/// Partition numbers by Euler's pentagonal-number recurrence.
pub fn partition_numbers(n: usize) -> Vec<u64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut total = 0i64;
        for j in 1.. {
            let j = j as i64;
            let g1 = (j * (3 * j - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            total += sign * p[m - g1];
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g2 <= m {
                total += sign * p[m - g2];
            }
        }
        p[m] = total;
    }
    p.into_iter().map(|x| x as u64).collect()
}

/// `v = m = 1`, `k = 0.5`, and `L` chosen so that `kbar = 50`.
pub const K: f64 = 0.5;

pub fn params(xi: f64) -> LuttingerParams {
    LuttingerParams::new(xi, 1.0, 1.0, 2.0 * PI * 50.0 / K).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}
