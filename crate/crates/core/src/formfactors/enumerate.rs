use crate::error::{Error, Result};

use super::ParticleHoleConfig;

/// Largest momentum enumerated by default; p(40) = 37338 configurations.
pub const DEFAULT_CAP: u32 = 40;

/// Strictly increasing sequences of `len` integers `>= min` summing to
/// `total`, in lexicographic order.
fn distinct_parts(total: i64, len: usize, min: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if len == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    // smallest completion uses min, min+1, ..., min+len-1
    let n = len as i64;
    let mut x = min;
    while n * x + n * (n - 1) / 2 <= total {
        prefix.push(x);
        distinct_parts(total - x, len - 1, x + 1, prefix, out);
        prefix.pop();
        x += 1;
    }
}

/// All particle-hole configurations of total momentum `m` at the standard
/// Fermi point, each exactly once, ordered by `(n, particles, holes)`.
///
/// There are `p(m)` of them (integer partitions of `m`).
pub fn enumerate_configs(m: u32) -> Result<Vec<ParticleHoleConfig>> {
    enumerate_configs_with_cap(m, DEFAULT_CAP)
}

pub fn enumerate_configs_with_cap(m: u32, cap: u32) -> Result<Vec<ParticleHoleConfig>> {
    if m > cap {
        return Err(Error::CapExceeded { m, cap });
    }
    let m = i64::from(m);
    let mut configs = Vec::new();
    let mut n = 0usize;
    // n pairs carry at least n^2 quanta
    while (n * n) as i64 <= m {
        let mut particle_sets = Vec::new();
        for s in 0..=m {
            distinct_parts(s, n, 1, &mut Vec::new(), &mut particle_sets);
        }
        for particles in particle_sets {
            let rest = m - particles.iter().sum::<i64>();
            let mut depths = Vec::new();
            distinct_parts(rest, n, 0, &mut Vec::new(), &mut depths);
            for d in depths {
                let holes = d.into_iter().map(|x| -x).collect();
                configs.push(ParticleHoleConfig::new(particles.clone(), holes)?);
            }
        }
        n += 1;
    }
    configs.sort();
    Ok(configs)
}

/// Configurations for the high-energy hole channel, where two extra
/// particles fill the right Fermi point: positions `p_i > 2`, `q_i <= 2`,
/// momentum `m` measured from the shifted Fermi point.
///
/// This is the standard enumeration moved by `+2`.
pub fn hole_channel_configs(m: u32) -> Result<Vec<ParticleHoleConfig>> {
    Ok(enumerate_configs(m)?.into_iter().map(|c| c.shifted(2)).collect())
}
