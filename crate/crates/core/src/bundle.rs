//! Scenario parameters of the line bundle `E -> M` and the case analysis that
//! decides which branch of the vanishing argument applies.
//!
//! The geometry never appears explicitly. `M` is described by its dimension,
//! the image `nu*Z` of `omega` on `pi_2(M)`, the monotonicity constant `c` in
//! `c_1^{TM} = c*omega`, and the critical data of a Morse function `f`.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Index of a critical point inside [`BundleParams::morse`]. Critical points
/// are kept sorted by id, so index order is id order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CritIndex(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CritPoint {
    pub id: String,
    pub morse_index: i64,
    /// Critical value `f(q)`.
    pub value: Rational,
}

impl CritPoint {
    pub fn new(id: impl Into<String>, morse_index: i64, value: Rational) -> Self {
        CritPoint {
            id: id.into(),
            morse_index,
            value,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sphericity {
    /// `omega(pi_2(M)) = 0`; the sphere group is trivial.
    Aspherical,
    /// `omega(pi_2(M)) = nu*Z` and `c_1^{TM} = c*omega` on `pi_2(M)`.
    Spherical { nu: i64, c: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleParams {
    /// Real dimension of `M`.
    pub dim_m: i64,
    pub sphericity: Sphericity,
    /// Hypersurface level `tau`, `Sigma_tau = {pi r^2 = tau}`.
    pub tau: Rational,
    morse: Vec<CritPoint>,
}

impl BundleParams {
    pub fn new(
        dim_m: i64,
        sphericity: Sphericity,
        tau: Rational,
        mut morse: Vec<CritPoint>,
    ) -> Self {
        morse.sort_by(|a, b| a.id.cmp(&b.id));
        BundleParams {
            dim_m,
            sphericity,
            tau,
            morse,
        }
    }

    pub fn morse(&self) -> &[CritPoint] {
        &self.morse
    }

    pub fn crit(&self, idx: CritIndex) -> &CritPoint {
        &self.morse[idx.0 as usize]
    }

    pub fn crit_indices(&self) -> impl Iterator<Item = CritIndex> + '_ {
        (0..self.morse.len() as u32).map(CritIndex)
    }

    pub fn lookup(&self, id: &str) -> Result<CritIndex> {
        self.morse
            .iter()
            .position(|p| p.id == id)
            .map(|i| CritIndex(i as u32))
            .ok_or_else(|| Error::UnknownCritPoint(id.to_string()))
    }

    pub fn is_aspherical(&self) -> bool {
        matches!(self.sphericity, Sphericity::Aspherical)
    }

    /// `nu`, or 0 when aspherical.
    pub fn nu(&self) -> i64 {
        match self.sphericity {
            Sphericity::Aspherical => 0,
            Sphericity::Spherical { nu, .. } => nu,
        }
    }

    /// `c`, or `None` when aspherical.
    pub fn c(&self) -> Option<i64> {
        match self.sphericity {
            Sphericity::Aspherical => None,
            Sphericity::Spherical { c, .. } => Some(c),
        }
    }

    pub fn half_dim(&self) -> i64 {
        self.dim_m / 2
    }

    /// `omega(A)` for the sphere class with coordinate `a`.
    pub fn omega(&self, a: i64) -> i64 {
        self.nu() * a
    }

    /// `c_1^{TM}(A) = c*nu*a`.
    pub fn chern_m(&self, a: i64) -> i64 {
        self.c().unwrap_or(0) * self.nu() * a
    }

    /// `c_1^{TE}(A) = (c-1)*nu*a`.
    pub fn chern_e(&self, a: i64) -> i64 {
        match self.c() {
            Some(c) => (c - 1) * self.nu() * a,
            None => 0,
        }
    }

    pub fn min_value(&self) -> Rational {
        self.morse
            .iter()
            .map(|p| p.value)
            .min()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max_value(&self) -> Rational {
        self.morse
            .iter()
            .map(|p| p.value)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn min_morse_index(&self) -> i64 {
        self.morse.iter().map(|p| p.morse_index).min().unwrap_or(0)
    }

    pub fn max_morse_index(&self) -> i64 {
        self.morse.iter().map(|p| p.morse_index).max().unwrap_or(0)
    }

    /// Returns an error carrying the first violation unless the parameters
    /// are admissible.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate(self);
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidParams(v.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.detail.is_empty() {
            write!(f, "{}", self.rule)
        } else {
            write!(f, "{}: {}", self.rule, self.detail)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Hypotheses the engine relies on but cannot check.
    pub assumptions: Vec<&'static str>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

pub const ASSUMPTION_C2_SMALL: &str =
    "f is C^2-small (1-periodic orbits of X_f are its critical points); not checked";

pub fn validate(params: &BundleParams) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |rule: &'static str, detail: String| out.push(Violation { rule, detail });

    if params.dim_m < 0 {
        push("dim_M negative", format!("dim_M = {}", params.dim_m));
    }
    if params.dim_m % 2 != 0 {
        push("dim_M odd", format!("dim_M = {}", params.dim_m));
    }
    if params.tau <= Rational::zero() {
        push("tau not positive", format!("tau = {}", params.tau));
    }
    if let Sphericity::Spherical { nu, .. } = params.sphericity {
        if nu < 1 {
            push("nu not positive", format!("nu = {nu}"));
        }
    }
    if params.morse.is_empty() {
        push("no critical points", String::new());
    }
    for pair in params.morse.windows(2) {
        if pair[0].id == pair[1].id {
            push("duplicate critical point id", pair[0].id.clone());
        }
    }
    for p in &params.morse {
        if p.morse_index < 0 || p.morse_index > params.dim_m {
            push(
                "Morse index out of range",
                format!(
                    "{} has index {} outside [0, {}]",
                    p.id, p.morse_index, params.dim_m
                ),
            );
        }
        if p.value <= Rational::zero() || p.value >= int(1) {
            push(
                "critical value not in (0,1)",
                format!("f({}) = {}", p.id, p.value),
            );
        }
    }
    ValidationReport {
        violations: out,
        assumptions: vec![ASSUMPTION_C2_SMALL],
    }
}

/// Minimal Chern number `N_E = |c-1|*nu` of the total space.
pub fn minimal_chern_number(params: &BundleParams) -> Result<i64> {
    match params.sphericity {
        Sphericity::Aspherical => Err(Error::Aspherical("minimal Chern number")),
        Sphericity::Spherical { nu, c } => Ok((c - 1).abs() * nu),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemiPositiveClause {
    Aspherical,
    /// `c > 1`: the total space is monotone.
    Monotone,
    /// `c = 1`: `c_1^{TE}` vanishes on `pi_2`.
    ChernVanishes,
    /// `N_E >= dim E / 2 - 2`.
    MinimalChernBound,
}

impl SemiPositiveClause {
    pub fn describe(self) -> &'static str {
        match self {
            SemiPositiveClause::Aspherical => "aspherical",
            SemiPositiveClause::Monotone => "c>=1: monotone",
            SemiPositiveClause::ChernVanishes => "c>=1: c1 vanishes",
            SemiPositiveClause::MinimalChernBound => "N_E >= dim E/2 - 2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemiPositivity {
    pub holds: bool,
    /// The clause that certified semi-positivity, if any.
    pub clause: Option<SemiPositiveClause>,
}

impl SemiPositivity {
    pub fn reason(&self) -> &'static str {
        match self.clause {
            Some(c) => c.describe(),
            None => "no sufficient clause holds",
        }
    }
}

/// Sufficient criterion for semi-positivity of `(E, Omega)`. A `false` answer
/// means no clause certifies it, not that `E` is proven non-semi-positive.
pub fn is_semi_positive(params: &BundleParams) -> SemiPositivity {
    let clause = match params.sphericity {
        Sphericity::Aspherical => Some(SemiPositiveClause::Aspherical),
        Sphericity::Spherical { nu, c } => {
            let n_e = (c - 1).abs() * nu;
            let dim_e = params.dim_m + 2;
            // N_E >= dim_E/2 - 2, compared in doubled units.
            let chern_bound = 2 * n_e >= dim_e - 4;
            if c > 1 {
                Some(SemiPositiveClause::Monotone)
            } else if c == 1 {
                Some(SemiPositiveClause::ChernVanishes)
            } else if chern_bound {
                Some(SemiPositiveClause::MinimalChernBound)
            } else {
                None
            }
        }
    };
    SemiPositivity {
        holds: clause.is_some(),
        clause,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Aspherical,
    /// `c >= 1`, or `c = 0` with semi-positivity.
    CNonNegative,
    /// `2*c*nu <= -dim M`.
    CVeryNegative,
    NotApplicable,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Aspherical => "Aspherical",
            CaseTag::CNonNegative => "CNonNegative",
            CaseTag::CVeryNegative => "CVeryNegative",
            CaseTag::NotApplicable => "NotApplicable",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoremCase {
    pub tag: CaseTag,
    /// For `c >= 1`: whether `(c-1)*tau < 1`, the hypothesis under which
    /// action-finiteness and level-finiteness of chains coincide.
    pub action_lemma_holds: Option<bool>,
}

pub fn theorem_case(params: &BundleParams) -> TheoremCase {
    match params.sphericity {
        Sphericity::Aspherical => TheoremCase {
            tag: CaseTag::Aspherical,
            action_lemma_holds: None,
        },
        Sphericity::Spherical { nu, c } => {
            if c >= 1 {
                let lhs = int(c - 1) * params.tau;
                TheoremCase {
                    tag: CaseTag::CNonNegative,
                    action_lemma_holds: Some(lhs < int(1)),
                }
            } else if c == 0 && is_semi_positive(params).holds {
                TheoremCase {
                    tag: CaseTag::CNonNegative,
                    action_lemma_holds: None,
                }
            } else if 2 * c * nu <= -params.dim_m {
                TheoremCase {
                    tag: CaseTag::CVeryNegative,
                    action_lemma_holds: None,
                }
            } else {
                TheoremCase {
                    tag: CaseTag::NotApplicable,
                    action_lemma_holds: None,
                }
            }
        }
    }
}
