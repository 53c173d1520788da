//! The filtered differential `d = d_0 + d_1 + ...`.
//!
//! `d_0` is built in: it counts cylinders inside the fibres over critical
//! points of `f`, and on generators it is
//!
//! ```text
//! d_0 (q, n, a, -) = (q, n-1, a, +),    d_0 (q, n, a, +) = 0.
//! ```
//!
//! The higher pieces `d_i`, `i >= 1`, count Floer trajectories and cannot be
//! computed here. They arrive as an external table of entries
//! `(i, source, target)`, each standing for its whole orbit under the
//! Novikov shift. [`load_table`] checks every entry against the structural
//! rules and then checks `d^2 = 0` on the window where a non-zero composite
//! could appear.

use std::collections::BTreeMap;
use std::fmt;

use crate::bundle::{theorem_case, BundleParams, CaseTag, TheoremCase};
use crate::chain::{toggle, xor_into, Chain, Terms, Truncated};
use crate::error::{Error, Result};
use crate::generator::{
    action, canonical_cmp, canonical_sort, grading, level, Generator, OrbitKey, Sign,
};

pub use crate::chain::split_by_level;

/// `d_0` on a single generator.
pub fn d0_generator(g: &Generator) -> Option<Generator> {
    match g.sign {
        Sign::Minus => Some(g.with_cover(g.cover - 1).with_sign(Sign::Plus)),
        Sign::Plus => None,
    }
}

/// The unique generator whose `d_0` is `g` (for `g` a plus generator).
pub fn d0_preimage(g: &Generator) -> Option<Generator> {
    match g.sign {
        Sign::Plus => Some(g.with_cover(g.cover + 1).with_sign(Sign::Minus)),
        Sign::Minus => None,
    }
}

pub fn d0_terms(terms: &Terms) -> Terms {
    let mut out = Terms::new();
    xor_into(&mut out, terms.iter().filter_map(d0_generator));
    out
}

/// `d_0 x`. Every term loses exactly `tau` of action, and so does the
/// floor; use [`Chain::truncate`] to cut back to the floor of `x`.
pub fn apply_d0(params: &BundleParams, x: &Chain) -> Chain {
    Chain::new(
        params,
        x.degree().offset(-2),
        x.floor() - params.tau,
        d0_terms(x.terms()),
    )
    .expect("d0 lowers grading by one and action by tau")
}

/// Termwise inverse of `d_0` on a `d_0`-closed chain: every `(q,n,a,+)`
/// becomes `(q,n+1,a,-)`. Actions go up by exactly `tau`, and so does the
/// floor.
pub fn d0_primitive(params: &BundleParams, x: &Chain) -> Result<Chain> {
    if let Some(bad) = x.terms().iter().find(|g| g.sign == Sign::Minus) {
        return Err(Error::NotD0Closed(bad.display(params).to_string()));
    }
    Chain::new(
        params,
        x.degree().offset(2),
        x.floor() + params.tau,
        x.terms().iter().filter_map(d0_preimage),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HigherDifferentialEntry {
    /// Filtration drop.
    pub i: i64,
    pub source: Generator,
    pub target: Generator,
}

impl HigherDifferentialEntry {
    pub fn new(i: i64, source: Generator, target: Generator) -> Self {
        HigherDifferentialEntry { i, source, target }
    }

    /// Representative of the shift orbit with `source.sphere = 0`.
    pub fn normalized(&self) -> Self {
        let a0 = -self.source.sphere;
        HigherDifferentialEntry {
            i: self.i,
            source: self.source.shifted(a0),
            target: self.target.shifted(a0),
        }
    }

    pub fn display<'a>(&'a self, params: &'a BundleParams) -> EntryDisplay<'a> {
        EntryDisplay {
            entry: self,
            params,
        }
    }
}

pub struct EntryDisplay<'a> {
    entry: &'a HigherDifferentialEntry,
    params: &'a BundleParams,
}

impl fmt::Display for EntryDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d{} {} -> {}",
            self.entry.i,
            self.entry.source.display(self.params),
            self.entry.target.display(self.params)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    GradingDrop,
    LevelDrop,
    ActionMonotone,
    ClassPreservation,
    LengthCutoff,
    ShiftEquivariance,
    SquareZero,
}

impl Rule {
    pub const ENTRY_RULES: [Rule; 6] = [
        Rule::GradingDrop,
        Rule::LevelDrop,
        Rule::ActionMonotone,
        Rule::ClassPreservation,
        Rule::LengthCutoff,
        Rule::ShiftEquivariance,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::GradingDrop => "grading-drop",
            Rule::LevelDrop => "level-drop",
            Rule::ActionMonotone => "action-monotone",
            Rule::ClassPreservation => "class-preservation",
            Rule::LengthCutoff => "length-cutoff",
            Rule::ShiftEquivariance => "shift-equivariance",
            Rule::SquareZero => "square-zero",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            Rule::GradingDrop => "d lowers mu by exactly 1",
            Rule::LevelDrop => "d_i maps level l to level l-i with i >= 1",
            Rule::ActionMonotone => "action never increases from source to target",
            Rule::ClassPreservation => {
                "2c*nu <= -dim M: trajectories keep the sphere class (A = B)"
            }
            Rule::LengthCutoff => "c = 0: d_i = 0 for i >= dim M + 1",
            Rule::ShiftEquivariance => {
                "one entry per Novikov shift orbit; trivial classes when aspherical"
            }
            Rule::SquareZero => "sum_j d_j d_(i-j) = 0",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleViolation {
    /// Index into the submitted entry list; `None` for window checks.
    pub entry: Option<usize>,
    pub rule: Rule,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableReport {
    pub violations: Vec<RuleViolation>,
}

impl TableReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn rules_for(&self, entry: usize) -> Vec<Rule> {
        self.violations
            .iter()
            .filter(|v| v.entry == Some(entry))
            .map(|v| v.rule)
            .collect()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            match v.entry {
                Some(i) => write!(f, "entry {}: ", i + 1)?,
                None => write!(f, "window: ")?,
            }
            write!(f, "{} [{}] {}", v.rule.id(), v.rule.anchor(), v.detail)?;
        }
        Ok(())
    }
}

/// `d_0` plus a validated table of higher pieces.
#[derive(Clone, Debug)]
pub struct FilteredDifferential {
    params: BundleParams,
    case: TheoremCase,
    /// Source orbit -> (drop, target at source sphere 0).
    table: BTreeMap<OrbitKey, Vec<(i64, Generator)>>,
    entries: Vec<HigherDifferentialEntry>,
    window: usize,
}

impl FilteredDifferential {
    /// The differential `d = d_0`.
    pub fn d0_only(params: &BundleParams) -> Self {
        FilteredDifferential {
            params: params.clone(),
            case: theorem_case(params),
            table: BTreeMap::new(),
            entries: Vec::new(),
            window: 0,
        }
    }

    pub fn params(&self) -> &BundleParams {
        &self.params
    }

    pub fn case(&self) -> TheoremCase {
        self.case
    }

    /// Normalized entries in canonical order.
    pub fn entries(&self) -> &[HigherDifferentialEntry] {
        &self.entries
    }

    /// Number of generators on which `d^2 = 0` was checked.
    pub fn window_size(&self) -> usize {
        self.window
    }

    fn higher_of(&self, g: &Generator) -> impl Iterator<Item = (i64, Generator)> + '_ {
        let a0 = g.sphere;
        self.table
            .get(&g.orbit())
            .into_iter()
            .flatten()
            .map(move |&(i, t)| (i, t.shifted(a0)))
    }

    /// `d_i` on a finite set of generators.
    pub fn component_terms(&self, i: i64, terms: &Terms) -> Terms {
        if i == 0 {
            return d0_terms(terms);
        }
        let mut out = Terms::new();
        for g in terms {
            for (j, t) in self.higher_of(g) {
                if j == i {
                    toggle(&mut out, t);
                }
            }
        }
        out
    }

    /// `(d - d_0)` on a finite set of generators.
    pub fn higher_terms(&self, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for g in terms {
            for (_, t) in self.higher_of(g) {
                toggle(&mut out, t);
            }
        }
        out
    }

    /// Exact `d` on a finite set of generators.
    pub fn boundary_terms(&self, terms: &Terms) -> Terms {
        let mut out = d0_terms(terms);
        xor_into(&mut out, self.higher_terms(terms));
        out
    }

    /// Largest filtration drop present in the table.
    pub fn max_drop(&self) -> i64 {
        self.entries.iter().map(|e| e.i).max().unwrap_or(0)
    }
}

fn check_entry(
    params: &BundleParams,
    case: TheoremCase,
    e: &HigherDifferentialEntry,
) -> Vec<(Rule, String)> {
    let mut out = Vec::new();
    let (s, t) = (&e.source, &e.target);
    let (ds, dt) = (grading(params, s), grading(params, t));
    if dt.twice_mu() != ds.twice_mu() - 2 {
        out.push((
            Rule::GradingDrop,
            format!("doubled degrees {} -> {}", ds, dt),
        ));
    }
    let (ls, lt) = (level(params, s), level(params, t));
    if e.i < 1 || ls - lt != e.i {
        out.push((
            Rule::LevelDrop,
            format!("i = {} but levels {} -> {}", e.i, ls, lt),
        ));
    }
    let (as_, at) = (action(params, s), action(params, t));
    if at > as_ {
        out.push((Rule::ActionMonotone, format!("actions {} -> {}", as_, at)));
    }
    if case.tag == CaseTag::CVeryNegative && s.sphere != t.sphere {
        out.push((
            Rule::ClassPreservation,
            format!("sphere classes {} -> {}", s.sphere, t.sphere),
        ));
    }
    if params.c() == Some(0) && e.i > params.dim_m {
        out.push((
            Rule::LengthCutoff,
            format!("i = {} > dim M = {}", e.i, params.dim_m),
        ));
    }
    if params.is_aspherical() && (s.sphere != 0 || t.sphere != 0) {
        out.push((
            Rule::ShiftEquivariance,
            format!(
                "sphere classes {} -> {} in an aspherical scenario",
                s.sphere, t.sphere
            ),
        ));
    }
    out
}

/// Validates a table of higher differentials and assembles `d`.
///
/// Every violated rule of every entry is reported. Only a table with no
/// entry violations reaches the `d^2 = 0` window check.
pub fn load_table(
    params: &BundleParams,
    entries: &[HigherDifferentialEntry],
) -> Result<FilteredDifferential> {
    params.ensure_valid()?;
    let case = theorem_case(params);
    let mut report = TableReport::default();
    let mut seen: BTreeMap<HigherDifferentialEntry, usize> = BTreeMap::new();

    for (idx, e) in entries.iter().enumerate() {
        for (rule, detail) in check_entry(params, case, e) {
            report.violations.push(RuleViolation {
                entry: Some(idx),
                rule,
                detail: format!("{}: {}", e.display(params), detail),
            });
        }
        let norm = e.normalized();
        if let Some(&first) = seen.get(&norm) {
            report.violations.push(RuleViolation {
                entry: Some(idx),
                rule: Rule::ShiftEquivariance,
                detail: format!(
                    "{}: same shift orbit as entry {}",
                    e.display(params),
                    first + 1
                ),
            });
        } else {
            seen.insert(norm, idx);
        }
    }
    if !report.is_clean() {
        return Err(Error::TableRejected(report));
    }

    let mut normalized: Vec<HigherDifferentialEntry> = seen.into_keys().collect();
    normalized.sort_by(|x, y| {
        canonical_cmp(params, &x.source, &y.source)
            .then_with(|| canonical_cmp(params, &x.target, &y.target))
    });
    let mut table: BTreeMap<OrbitKey, Vec<(i64, Generator)>> = BTreeMap::new();
    for e in &normalized {
        table
            .entry(e.source.orbit())
            .or_default()
            .push((e.i, e.target));
    }

    let mut d = FilteredDifferential {
        params: params.clone(),
        case,
        table,
        entries: normalized,
        window: 0,
    };
    let window = square_zero_window(&d);
    d.window = window.len();
    for w in window {
        let once: Terms = std::iter::once(w).collect();
        let twice = d.boundary_terms(&d.boundary_terms(&once));
        if !twice.is_empty() {
            let mut bad: Vec<Generator> = twice.into_iter().collect();
            canonical_sort(params, &mut bad);
            let shown: Vec<String> = bad.iter().map(|g| g.display(params).to_string()).collect();
            report.violations.push(RuleViolation {
                entry: None,
                rule: Rule::SquareZero,
                detail: format!("d^2 {} = {}", w.display(params), shown.join(" + ")),
            });
        }
    }
    if !report.is_clean() {
        return Err(Error::TableRejected(report));
    }
    Ok(d)
}

/// Orbit representatives `w` for which `d^2 w` can be non-zero: the table's
/// sources and the `d_0`-preimages of plus sources. Everywhere else
/// `d^2 = d_0^2 = 0`.
fn square_zero_window(d: &FilteredDifferential) -> Vec<Generator> {
    let mut out = Terms::new();
    for key in d.table.keys() {
        let src = key.at(0);
        out.insert(src);
        if let Some(pre) = d0_preimage(&src) {
            out.insert(pre);
        }
    }
    let mut v: Vec<_> = out.into_iter().collect();
    canonical_sort(&d.params, &mut v);
    v
}

/// `d x`, truncated at the floor of `x` with the cut terms reported.
pub fn apply_total(d: &FilteredDifferential, x: &Chain) -> Truncated {
    Chain::truncating(
        &d.params,
        x.degree().offset(-2),
        x.floor(),
        d.boundary_terms(x.terms()),
    )
    .expect("validated entries lower the grading by exactly one")
}
