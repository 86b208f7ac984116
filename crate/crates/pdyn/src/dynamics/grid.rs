//! Marked grids, the admissibility rules and the moduli they determine.

use serde_json::{json, Value};

use crate::coeff::rational::fmt_rational;
use crate::coeff::Rational;
use crate::error::{Error, Result, Rule};

/// Triangular 0/1 array M_{ℓ,k}, ℓ + k ≤ depth. Row ℓ is the level, column
/// k the iterate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedGrid {
    depth: usize,
    rows: Vec<Vec<bool>>,
    period: Option<usize>,
}

impl MarkedGrid {
    /// Grid of the given depth with the listed positions marked, closed
    /// downward in each column.
    pub fn from_marks(depth: usize, marks: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut rows: Vec<Vec<bool>> = (0..=depth).map(|l| vec![false; depth + 1 - l]).collect();
        for (l, k) in marks {
            if l + k > depth {
                return Err(Error::parse(format!("position ({l}, {k}) lies outside a depth-{depth} grid")));
            }
            rows[l][k] = true;
        }
        let mut g = MarkedGrid { depth, rows, period: None };
        g.close_columns();
        Ok(g)
    }

    pub fn from_rows(rows: Vec<Vec<bool>>, period: Option<usize>) -> Result<Self> {
        let depth = rows.len().checked_sub(1).ok_or_else(|| Error::parse("grid needs at least one row"))?;
        for (l, r) in rows.iter().enumerate() {
            if r.len() != depth + 1 - l {
                return Err(Error::parse(format!("row {l} has {} entries, expected {}", r.len(), depth + 1 - l)));
            }
        }
        let mut g = MarkedGrid { depth, rows, period: None };
        g.close_columns();
        g.set_period(period)?;
        Ok(g)
    }

    /// (Ma): a mark implies marks above it in the same column.
    fn close_columns(&mut self) {
        for k in 0..=self.depth {
            let top = (0..=self.depth - k).rev().find(|&l| self.rows[l][k]);
            if let Some(h) = top {
                for l in 0..h {
                    self.rows[l][k] = true;
                }
            }
        }
    }

    /// Full grid: every position marked.
    pub fn all_ones(depth: usize) -> Self {
        MarkedGrid { depth, rows: (0..=depth).map(|l| vec![true; depth + 1 - l]).collect(), period: Some(1) }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn period(&self) -> Option<usize> {
        self.period
    }

    pub fn set_period(&mut self, p: Option<usize>) -> Result<()> {
        if let Some(p) = p {
            if p == 0 || p > self.depth || !self.column_full(p) {
                return Err(Error::parse(format!("column {p} is not fully marked")));
            }
        }
        self.period = p;
        Ok(())
    }

    pub fn get(&self, l: usize, k: usize) -> bool {
        self.rows[l][k]
    }

    /// Entry or None outside the triangle.
    pub fn try_get(&self, l: usize, k: usize) -> Option<bool> {
        if l + k <= self.depth {
            Some(self.rows[l][k])
        } else {
            None
        }
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn is_critical(&self) -> bool {
        (0..=self.depth).all(|l| self.rows[l][0])
    }

    pub fn column_full(&self, k: usize) -> bool {
        k <= self.depth && (0..=self.depth - k).all(|l| self.rows[l][k])
    }

    /// Highest marked row in column k.
    pub fn column_height(&self, k: usize) -> Option<usize> {
        if k > self.depth {
            return None;
        }
        (0..=self.depth - k).rev().find(|&l| self.rows[l][k])
    }

    /// Smallest p ≥ 1 with column p fully marked.
    pub fn full_column(&self) -> Option<usize> {
        (1..=self.depth).find(|&p| self.column_full(p))
    }

    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth > self.depth {
            return Err(Error::DepthBudgetExceeded(self.depth));
        }
        let rows = (0..=depth).map(|l| self.rows[l][..=depth - l].to_vec()).collect();
        let period = self.period.filter(|&p| p <= depth);
        Ok(MarkedGrid { depth, rows, period })
    }

    /// Same marks; the period annotation is ignored.
    pub fn same_marks(&self, other: &MarkedGrid) -> bool {
        self.rows == other.rows
    }

    /// Grid obtained by deleting column 0 (the grid of the next iterate), one
    /// level shallower.
    pub fn shift_left(&self) -> Result<Self> {
        if self.depth == 0 {
            return Err(Error::DepthBudgetExceeded(0));
        }
        let d = self.depth - 1;
        let rows = (0..=d).map(|l| self.rows[l][1..=d - l + 1].to_vec()).collect();
        Ok(MarkedGrid { depth: d, rows, period: None })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<u8>> = self.rows.iter().map(|r| r.iter().map(|&b| b as u8).collect()).collect();
        json!({"depth": self.depth, "rows": rows, "period": self.period})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::parse("grid must be a JSON object"))?;
        let depth = obj
            .get("depth")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("grid needs a nonnegative integer `depth`"))?;
        if depth > 4096 {
            return Err(Error::parse("grid depth too large"));
        }
        let rows_v = obj.get("rows").and_then(Value::as_array).ok_or_else(|| Error::parse("grid needs `rows`"))?;
        let mut rows = Vec::with_capacity(rows_v.len());
        for r in rows_v {
            let r = r.as_array().ok_or_else(|| Error::parse("each row must be an array"))?;
            let mut row = Vec::with_capacity(r.len());
            for b in r {
                match b.as_u64() {
                    Some(0) => row.push(false),
                    Some(1) => row.push(true),
                    _ => return Err(Error::parse("grid entries must be 0 or 1")),
                }
            }
            rows.push(row);
        }
        if rows.len() as u64 != depth + 1 {
            return Err(Error::parse(format!("depth {depth} needs {} rows, found {}", depth + 1, rows.len())));
        }
        let period = match obj.get("period") {
            None | Some(Value::Null) => None,
            Some(p) => Some(p.as_u64().ok_or_else(|| Error::parse("`period` must be an integer or null"))? as usize),
        };
        Self::from_rows(rows, period)
    }
}

impl std::fmt::Display for MarkedGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (l, r) in self.rows.iter().enumerate().rev() {
            let line: String = r.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "{l:>3} {line}")?;
        }
        Ok(())
    }
}

/// Checks (Ma)–(Md) with the grid serving as its own critical grid.
pub fn check_admissible(g: &MarkedGrid) -> Result<()> {
    check_admissible_against(g, g)
}

/// Checks (Ma)–(Md) for the grid `g` of a point, with `c` the critical grid.
/// The first violated position in row-major order is reported.
pub fn check_admissible_against(g: &MarkedGrid, c: &MarkedGrid) -> Result<()> {
    let n = g.depth.min(c.depth);
    let m = |l: usize, k: usize| g.rows[l][k];
    let cm = |l: usize, k: usize| c.rows[l][k];
    let mut found: Option<(usize, usize, Rule)> = None;
    let mut note = |l: usize, k: usize, r: Rule| {
        let cand = (l, k, r as u8);
        if found.is_none_or(|(a, b, rr)| cand < (a, b, rr as u8)) {
            found = Some((l, k, r));
        }
    };
    for l in 0..=n {
        for k in 0..=n - l {
            if !m(l, k) {
                continue;
            }
            // (Ma)
            for j in 0..l {
                if !m(j, k) {
                    note(j, k, Rule::Ma);
                }
            }
            // (Mb)
            for i in 0..=l {
                if m(l - i, k + i) != cm(l - i, i) {
                    note(l - i, k + i, Rule::Mb);
                }
            }
        }
    }
    // (Mc): with the marked critical position (ℓ + 1 − k, k) at row ≥ 1.
    for l in 1..n {
        for k in 1..=l {
            if l + 1 > n || !cm(l + 1 - k, k) || (1..k).any(|i| cm(l - i, i)) {
                continue;
            }
            for mm in 0..n - l {
                if m(l, mm) && !m(l + 1, mm) && m(l + 1 - k, mm + k) {
                    note(l + 1 - k, mm + k, Rule::Mc);
                }
            }
        }
    }
    // (Md)
    for l in 0..n {
        if l + 1 > n || cm(1, l) {
            continue;
        }
        for k in 0..n - l {
            if m(l, k) && !m(l + 1, k) && (1..l).all(|i| !m(l - i, k + i)) && !m(1, k + l) {
                note(1, k + l, Rule::Md);
            }
        }
    }
    match found {
        None => Ok(()),
        Some((row, col, rule)) => Err(Error::Violation { rule, row, col }),
    }
}

/// Moduli of the annuli around the point whose grid is `g`, and log-radii of
/// its nest: mod A_ℓ = 2^{−S_ℓ}·mod A₀ with S_ℓ = Σ_{i<ℓ} M_{ℓ−i,i}, and
/// log r_n = log r̂ − Σ_{ℓ≤n} mod A_ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridModuli {
    pub moduli: Vec<Rational>,
    /// log r_n (not the valuation radius ρ_n = −log r_n).
    pub log_radii: Vec<Rational>,
}

impl GridModuli {
    pub fn to_json(&self) -> Value {
        json!({
            "moduli": self.moduli.iter().map(fmt_rational).collect::<Vec<_>>(),
            "log_radii": self.log_radii.iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }
}

fn pow2_inv(s: usize) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1) << s)
}

/// Grid moduli in a slice with log R = 0, so log r̂ = mod A₀.
pub fn grid_moduli(g: &MarkedGrid, mod_a0: &Rational) -> GridModuli {
    grid_moduli_at(g, mod_a0, &Rational::from_integer(0.into()))
}

pub fn grid_moduli_at(g: &MarkedGrid, mod_a0: &Rational, log_capture: &Rational) -> GridModuli {
    let log_rhat = log_capture + mod_a0;
    let mut moduli = Vec::with_capacity(g.depth + 1);
    let mut log_radii = Vec::with_capacity(g.depth + 1);
    let mut acc = log_rhat.clone();
    for l in 0..=g.depth {
        let s = (0..l).filter(|&i| g.rows[l - i][i]).count();
        let m = mod_a0 * pow2_inv(s);
        acc -= &m;
        moduli.push(m);
        log_radii.push(acc.clone());
    }
    GridModuli { moduli, log_radii }
}

/// Σ_{ℓ≥0} mod A_ℓ(ω⁺) for a critical grid of period p, in closed form.
///
/// Columns 1..p−1 must have their top marks visible inside the grid; the
/// infinite grid is then M_{ℓ,k} = [ℓ ≤ h_{k mod p}].
pub fn periodic_modulus_sum(g: &MarkedGrid, p: usize, mod_a0: &Rational) -> Result<Rational> {
    if p == 0 || !g.is_critical() || !g.column_full(p) {
        return Err(Error::parse(format!("column {p} is not fully marked in a critical grid")));
    }
    let mut h: Vec<Option<usize>> = vec![None; p];
    for (r, slot) in h.iter_mut().enumerate().skip(1) {
        let top = g.column_height(r).unwrap_or(0);
        if top + r >= g.depth {
            return Err(Error::DepthBudgetExceeded(g.depth));
        }
        *slot = Some(top);
    }
    let marked = |l: usize, k: usize| h[k % p].is_none_or(|t| l <= t);
    let l0 = h.iter().flatten().max().copied().unwrap_or(0) + 1;
    let modulus = |l: usize| {
        let s = (0..l).filter(|&i| marked(l - i, i)).count();
        mod_a0 * pow2_inv(s)
    };
    let mut sum = Rational::from_integer(0.into());
    for l in 0..l0 {
        sum += modulus(l);
    }
    let two = Rational::from_integer(2.into());
    for j in 0..p {
        sum += modulus(l0 + j) * &two;
    }
    Ok(sum)
}
