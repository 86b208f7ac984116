//! Dynamical balls of every level, their degrees, labels and annuli.

use std::collections::HashMap;

use serde_json::{json, Value};

use super::map::{capture_radius, CubicMap};
use crate::balls::{degree_on_ball, image_ball, preimage_balls, UltrametricBall};
use crate::coeff::rational::fmt_rational;
use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;

/// The level-n annulus around a ball: the partition class of its parent
/// that contains it, minus the ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelAnnulus {
    pub modulus: Rational,
    /// Degree of f on the partition class.
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelBall {
    pub ball: UltrametricBall,
    pub degree: usize,
    pub labels: Vec<u8>,
    /// Index of the containing ball one level up.
    pub parent: Option<usize>,
    /// Index of f(ball) one level up.
    pub image: Option<usize>,
    pub critical: bool,
    pub annulus: LevelAnnulus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelStructure {
    pub levels: Vec<Vec<LevelBall>>,
    pub log_capture: Rational,
    /// log r̂, r̂ the radius of f(D₀).
    pub log_rhat: Rational,
}

impl LevelStructure {
    pub fn count(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Index of the level-n ball containing z.
    pub fn locate(&self, n: usize, z: &PuiseuxSeries) -> Result<Option<usize>> {
        for (i, b) in self.levels[n].iter().enumerate() {
            if b.ball.contains(z)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|lv| {
                Value::Array(
                    lv.iter()
                        .map(|b| {
                            json!({
                                "ball": b.ball.to_json(),
                                "degree": b.degree,
                                "labels": b.labels,
                                "parent": b.parent,
                                "image": b.image,
                                "critical": b.critical,
                                "annulus_modulus": fmt_rational(&b.annulus.modulus),
                                "annulus_degree": b.annulus.degree,
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "logR": fmt_rational(&self.log_capture),
            "log_rhat": fmt_rational(&self.log_rhat),
            "counts": self.levels.iter().map(Vec::len).collect::<Vec<_>>(),
            "levels": levels,
        })
    }
}

/// Level-0 to level-n dynamical balls of f.
pub fn level_structure(f: &CubicMap, n: usize) -> Result<LevelStructure> {
    let p = f.poly();
    let log_capture = capture_radius(f)?;
    let d0 = UltrametricBall::closed(PuiseuxSeries::zero(), -log_capture.clone())?;
    let (img0, deg0) = image_ball(p, &d0)?;
    let log_rhat = -img0.log_radius().clone();
    let outer0 = UltrametricBall::open(PuiseuxSeries::zero(), img0.log_radius().clone())?;
    let w = f.omega_plus();
    let root = LevelBall {
        ball: d0.clone(),
        degree: deg0,
        labels: (1..=deg0 as u8).collect(),
        parent: None,
        image: None,
        critical: d0.contains(&w)?,
        annulus: LevelAnnulus { modulus: d0.log_radius() - img0.log_radius(), degree: degree_on_ball(p, &outer0)? },
    };
    let mut levels = vec![vec![root]];
    for lv in 1..=n {
        let prev = &levels[lv - 1];
        // Level-(lv − 1) balls grouped by the ball (one more level up) that
        // contains them.
        let mut inside: HashMap<Option<usize>, Vec<usize>> = HashMap::new();
        for (i, b) in prev.iter().enumerate() {
            inside.entry(b.parent).or_default().push(i);
        }
        let mut next: Vec<LevelBall> = Vec::new();
        for (pi, par) in prev.iter().enumerate() {
            // Targets: level-(lv − 1) balls inside f(par); for lv = 1 this is
            // D₀ itself, whose parent and image are both absent.
            let targets = inside.get(&par.image).cloned().unwrap_or_default();
            for ti in targets {
                let tgt = &prev[ti].ball;
                let mut comps = preimage_balls(p, tgt, &par.ball)?;
                comps.sort_by_cached_key(|(b, _)| (b.center().lex_key(), b.center().to_string()));
                let total: usize = comps.iter().map(|(_, d)| d).sum();
                if total != par.degree {
                    return Err(Error::NoConvergence(format!(
                        "preimages of {tgt} in {} have total degree {total}, expected {}",
                        par.ball, par.degree
                    )));
                }
                let mut chunk = par.labels.iter().copied();
                for (ball, deg) in comps {
                    let mine: Vec<u8> = chunk.by_ref().take(deg).collect();
                    let class = UltrametricBall::open(ball.center().clone(), par.ball.log_radius().clone())?;
                    let annulus = LevelAnnulus {
                        modulus: ball.log_radius() - par.ball.log_radius(),
                        degree: degree_on_ball(p, &class)?,
                    };
                    next.push(LevelBall {
                        critical: ball.contains(&w)?,
                        ball,
                        degree: deg,
                        labels: mine,
                        parent: Some(pi),
                        image: Some(ti),
                        annulus,
                    });
                }
            }
        }
        levels.push(next);
    }
    Ok(LevelStructure { levels, log_capture, log_rhat })
}
