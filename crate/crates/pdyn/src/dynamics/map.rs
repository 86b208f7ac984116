//! The cubic family in its two normal forms, capture radius and locus.

use serde_json::{json, Value};

use crate::balls::UltrametricBall;
use crate::coeff::rational::fmt_rational;
use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::puiseux::{PuiseuxSeries, SeriesPoly, Valuation};

fn ri(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone, Debug, PartialEq)]
pub enum CubicForm {
    /// ζ³ − 3α²ζ + β, critical points ±α.
    Phi { alpha: PuiseuxSeries, beta: PuiseuxSeries },
    /// α²(ζ − 1)²(ζ + 2) + ν, critical points ±1.
    Psi { alpha: PuiseuxSeries, nu: PuiseuxSeries },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicMap {
    form: CubicForm,
    poly: SeriesPoly,
}

impl CubicMap {
    pub fn phi(alpha: PuiseuxSeries, beta: PuiseuxSeries) -> Result<Self> {
        let a2 = alpha.mul(&alpha)?;
        let poly = SeriesPoly::new(vec![
            beta.clone(),
            a2.scale(&ri(-3)),
            PuiseuxSeries::zero(),
            PuiseuxSeries::one(),
        ]);
        Ok(CubicMap { form: CubicForm::Phi { alpha, beta }, poly })
    }

    pub fn psi(alpha: PuiseuxSeries, nu: PuiseuxSeries) -> Result<Self> {
        let a2 = alpha.mul(&alpha)?;
        if a2.is_exact_zero() {
            return Err(Error::indeterminate("the ψ form needs α ≠ 0"));
        }
        let poly = SeriesPoly::new(vec![
            a2.scale(&ri(2)).add(&nu)?,
            a2.scale(&ri(-3)),
            PuiseuxSeries::zero(),
            a2,
        ]);
        Ok(CubicMap { form: CubicForm::Psi { alpha, nu }, poly })
    }

    /// ψ_ν on the standard slice α = t^{-1}.
    pub fn psi_standard(nu: PuiseuxSeries) -> Result<Self> {
        Self::psi(PuiseuxSeries::t_pow(ri(-1)), nu)
    }

    pub fn form(&self) -> &CubicForm {
        &self.form
    }

    pub fn poly(&self) -> &SeriesPoly {
        &self.poly
    }

    pub fn alpha(&self) -> &PuiseuxSeries {
        match &self.form {
            CubicForm::Phi { alpha, .. } | CubicForm::Psi { alpha, .. } => alpha,
        }
    }

    pub fn omega_plus(&self) -> PuiseuxSeries {
        match &self.form {
            CubicForm::Phi { alpha, .. } => alpha.clone(),
            CubicForm::Psi { .. } => PuiseuxSeries::one(),
        }
    }

    pub fn omega_minus(&self) -> PuiseuxSeries {
        self.omega_plus().neg()
    }

    /// The other preimage of f(ω⁺): −2α, resp. −2.
    pub fn cocritical(&self) -> PuiseuxSeries {
        self.omega_plus().scale(&ri(-2))
    }

    pub fn eval(&self, z: &PuiseuxSeries) -> Result<PuiseuxSeries> {
        self.poly.eval(z)
    }

    /// (α, β) of the affinely conjugate φ form; for ψ this is β = αν + 2α³.
    pub fn phi_params(&self) -> Result<(PuiseuxSeries, PuiseuxSeries)> {
        match &self.form {
            CubicForm::Phi { alpha, beta } => Ok((alpha.clone(), beta.clone())),
            CubicForm::Psi { alpha, nu } => {
                let a3 = alpha.mul(alpha)?.mul(alpha)?;
                Ok((alpha.clone(), alpha.mul(nu)?.add(&a3.scale(&ri(2)))?))
            }
        }
    }

    pub fn to_phi(&self) -> Result<Self> {
        let (a, b) = self.phi_params()?;
        Self::phi(a, b)
    }

    /// The ψ form conjugate to this map via ζ ↦ αζ: ν = β/α − 2α².
    pub fn to_psi(&self, cap: Option<&Rational>) -> Result<Self> {
        match &self.form {
            CubicForm::Psi { .. } => Ok(self.clone()),
            CubicForm::Phi { alpha, beta } => {
                let a2 = alpha.mul(alpha)?;
                let nu = beta.div(alpha, cap)?.sub(&a2.scale(&ri(2)))?;
                Self::psi(alpha.clone(), nu)
            }
        }
    }

    /// Same polynomial with the roles of the critical points exchanged.
    pub fn swap_critical(&self) -> Result<Self> {
        match &self.form {
            CubicForm::Phi { alpha, beta } => Self::phi(alpha.neg(), beta.clone()),
            CubicForm::Psi { .. } => {
                let (a, b) = self.phi_params()?;
                Self::phi(a.neg(), b)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        use crate::puiseux::series_to_json;
        match &self.form {
            CubicForm::Phi { alpha, beta } => json!({"form": "phi", "alpha": series_to_json(alpha), "beta": series_to_json(beta)}),
            CubicForm::Psi { alpha, nu } => json!({"form": "psi", "alpha": series_to_json(alpha), "nu": series_to_json(nu)}),
        }
    }
}

/// log R_φ = max( −o(α_i/α_d)/(d − i), o(α_d)/(d − 1) ).
pub fn capture_radius(f: &CubicMap) -> Result<Rational> {
    let p = f.poly();
    let d = p.degree() as i64;
    let od = p.leading()?.val()?;
    let mut best = &od / ri(d - 1);
    for (i, c) in p.coeffs().iter().enumerate().take(d as usize) {
        match c.valuation()? {
            Valuation::PlusInfinity => continue,
            Valuation::Finite(v) => {
                let cand = -(v - &od) / ri(d - i as i64);
                if cand > best {
                    best = cand;
                }
            }
        }
    }
    Ok(best)
}

/// D₀ = {o(ζ) ≥ −log R_φ}.
pub fn level_zero_ball(f: &CubicMap) -> Result<UltrametricBall> {
    UltrametricBall::closed(PuiseuxSeries::zero(), -capture_radius(f)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Locus {
    C3,
    S3,
    Eplus,
    Eminus,
    EUnresolved(usize),
}

impl Locus {
    pub fn name(&self) -> String {
        match self {
            Locus::C3 => "C3".into(),
            Locus::S3 => "S3".into(),
            Locus::Eplus => "Eplus".into(),
            Locus::Eminus => "Eminus".into(),
            Locus::EUnresolved(_) => "EUnresolved".into(),
        }
    }
}

/// What happened to one critical orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitFate {
    /// f^n(ω) left D₀ at step n.
    Escaped(usize),
    /// f^p(ω) = ω exactly.
    Periodic(usize),
    /// Stayed in D₀ for the whole budget.
    Bounded(usize),
    /// The iterate was no longer known well enough to decide.
    Undetermined(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub locus: Locus,
    pub log_r: Rational,
    pub plus: OrbitFate,
    pub minus: OrbitFate,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        let fate = |o: &OrbitFate| match o {
            OrbitFate::Escaped(n) => json!({"escaped": n}),
            OrbitFate::Periodic(p) => json!({"periodic": p}),
            OrbitFate::Bounded(n) => json!({"bounded": n}),
            OrbitFate::Undetermined(n) => json!({"undetermined": n}),
        };
        let mut v = json!({
            "locus": self.locus.name(),
            "logR": fmt_rational(&self.log_r),
            "omega_plus": fate(&self.plus),
            "omega_minus": fate(&self.minus),
        });
        if let Locus::EUnresolved(d) = self.locus {
            v["depth"] = json!(d);
        }
        v
    }
}

fn orbit_fate(f: &CubicMap, w: &PuiseuxSeries, rho0: &Rational, budget: usize) -> Result<OrbitFate> {
    let mut z = w.clone();
    for n in 1..=budget {
        z = f.eval(&z)?;
        match z.terms().first() {
            Some((e, _)) if e < rho0 => return Ok(OrbitFate::Escaped(n)),
            Some(_) => {}
            None => {
                if z.precision().finite().is_some_and(|p| p < rho0) {
                    return Ok(OrbitFate::Undetermined(n));
                }
            }
        }
        if z.is_exact() && w.is_exact() && &z == w {
            return Ok(OrbitFate::Periodic(n));
        }
    }
    Ok(OrbitFate::Bounded(budget))
}

/// Locus of f: both critical orbits are followed for `depth_budget` steps.
pub fn classify(f: &CubicMap, depth_budget: usize) -> Result<Classification> {
    if depth_budget == 0 {
        return Err(Error::DepthBudgetExceeded(0));
    }
    let log_r = capture_radius(f)?;
    let (a, b) = f.phi_params()?;
    let oa = a.valuation()?;
    let ob = b.valuation()?;
    let zero = Valuation::Finite(Rational::from_integer(0.into()));
    let rho0 = -log_r.clone();
    let plus = orbit_fate(f, &f.omega_plus(), &rho0, depth_budget)?;
    let minus = orbit_fate(f, &f.omega_minus(), &rho0, depth_budget)?;
    if oa >= zero && ob >= zero {
        return Ok(Classification { locus: Locus::C3, log_r, plus, minus });
    }
    let cube_differs = match (&oa, &ob) {
        (Valuation::Finite(x), Valuation::Finite(y)) => x * ri(3) != *y,
        (Valuation::PlusInfinity, Valuation::PlusInfinity) => false,
        _ => true,
    };
    let escaped = |o: &OrbitFate| matches!(o, OrbitFate::Escaped(_));
    let locus = if cube_differs || (escaped(&plus) && escaped(&minus)) {
        Locus::S3
    } else if escaped(&minus) {
        Locus::Eplus
    } else if escaped(&plus) {
        Locus::Eminus
    } else {
        Locus::EUnresolved(depth_budget)
    };
    Ok(Classification { locus, log_r, plus, minus })
}
