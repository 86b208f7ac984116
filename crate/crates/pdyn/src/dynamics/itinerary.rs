//! Symbolic itineraries in the shift locus.

use super::levels::{level_structure, LevelStructure};
use super::map::CubicMap;
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;

/// Deepest level searched for critical-point-free balls.
const MAX_LABEL_LEVEL: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Itinerary {
    pub symbols: Vec<u8>,
    /// Level whose balls all carry a single label.
    pub level: usize,
}

/// First level at which every ball has a single label, with its structure.
pub fn singleton_level(f: &CubicMap) -> Result<(usize, LevelStructure)> {
    for n in 1..=MAX_LABEL_LEVEL {
        let ls = level_structure(f, n)?;
        if ls.levels[n].iter().all(|b| b.labels.len() == 1) {
            return Ok((n, ls));
        }
    }
    Err(Error::DepthBudgetExceeded(MAX_LABEL_LEVEL))
}

/// Symbols j_k = L(ball of level N containing f^k(z)), k < depth.
pub fn itinerary(f: &CubicMap, z: &PuiseuxSeries, depth: usize) -> Result<Itinerary> {
    let (n, ls) = singleton_level(f)?;
    itinerary_with(&ls, n, f, z, depth)
}

pub fn itinerary_with(ls: &LevelStructure, n: usize, f: &CubicMap, z: &PuiseuxSeries, depth: usize) -> Result<Itinerary> {
    let mut symbols = Vec::with_capacity(depth);
    let mut w = z.clone();
    for k in 0..depth {
        let i = ls
            .locate(n, &w)
            .map_err(|_| Error::PrecisionInsufficient(format!("iterate {k} is not known well enough")))?
            .ok_or_else(|| Error::NotALevelNPoint { level: n + k, detail: format!("iterate {k} misses every level-{n} ball") })?;
        symbols.push(ls.levels[n][i].labels[0]);
        if k + 1 < depth {
            w = f.eval(&w)?;
        }
    }
    Ok(Itinerary { symbols, level: n })
}
