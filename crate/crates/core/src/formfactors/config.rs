use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Particle-hole excitation near one Fermi point.
///
/// Positions are integers in units of `2 pi / L`. Particles sit strictly
/// above `origin`, holes at or below it; the standard Fermi point has
/// `origin = 0`. Particles are stored ascending and holes descending, so both
/// lists start at the Fermi point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ParticleHoleConfig {
    particles: Vec<i64>,
    holes: Vec<i64>,
    origin: i64,
}

impl ParticleHoleConfig {
    pub fn empty() -> Self {
        ParticleHoleConfig {
            particles: Vec::new(),
            holes: Vec::new(),
            origin: 0,
        }
    }

    /// Validated configuration around the standard Fermi point.
    pub fn new(particles: Vec<i64>, holes: Vec<i64>) -> Result<Self> {
        Self::with_origin(particles, holes, 0)
    }

    /// Validated configuration around the Fermi point `origin`. Input order
    /// is irrelevant.
    pub fn with_origin(mut particles: Vec<i64>, mut holes: Vec<i64>, origin: i64) -> Result<Self> {
        if particles.len() != holes.len() {
            return Err(Error::InvalidConfig(format!(
                "{} particles but {} holes",
                particles.len(),
                holes.len()
            )));
        }
        particles.sort_unstable();
        holes.sort_unstable_by(|a, b| b.cmp(a));
        if particles.windows(2).any(|w| w[0] == w[1]) || holes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig("positions must be distinct".into()));
        }
        if let Some(&p) = particles.first() {
            if p <= origin {
                return Err(Error::InvalidConfig(format!(
                    "particle at {p} is not above the Fermi point {origin}"
                )));
            }
        }
        if let Some(&q) = holes.first() {
            if q > origin {
                return Err(Error::InvalidConfig(format!(
                    "hole at {q} is above the Fermi point {origin}"
                )));
            }
        }
        Ok(ParticleHoleConfig {
            particles,
            holes,
            origin,
        })
    }

    pub fn particles(&self) -> &[i64] {
        &self.particles
    }

    pub fn holes(&self) -> &[i64] {
        &self.holes
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn pairs(&self) -> usize {
        self.particles.len()
    }

    /// Momentum in units of `2 pi / L` carried relative to the Fermi point.
    pub fn total_momentum(&self) -> i64 {
        let o = self.origin;
        self.particles.iter().map(|p| p - o).sum::<i64>()
            - self.holes.iter().map(|q| q - o).sum::<i64>()
    }

    /// Moves every position (and the Fermi point) by `delta`.
    pub fn shifted(&self, delta: i64) -> Self {
        ParticleHoleConfig {
            particles: self.particles.iter().map(|p| p + delta).collect(),
            holes: self.holes.iter().map(|q| q + delta).collect(),
            origin: self.origin + delta,
        }
    }

    /// Positions measured from the Fermi point.
    pub(crate) fn relative(&self) -> (Vec<i64>, Vec<i64>) {
        let o = self.origin;
        (
            self.particles.iter().map(|p| p - o).collect(),
            self.holes.iter().map(|q| q - o).collect(),
        )
    }
}

impl Ord for ParticleHoleConfig {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.pairs(), &self.particles, &self.holes, self.origin).cmp(&(
            other.pairs(),
            &other.particles,
            &other.holes,
            other.origin,
        ))
    }
}

impl PartialOrd for ParticleHoleConfig {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ParticleHoleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={:?} q={:?}", self.particles, self.holes)?;
        if self.origin != 0 {
            write!(f, " @{}", self.origin)?;
        }
        Ok(())
    }
}
