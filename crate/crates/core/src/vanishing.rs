//! Primitives of closed chains.
//!
//! Given `xi` with `d xi = 0`, [`find_primitive`] builds `theta` with
//! `d theta = xi` by descending through the filtration levels. At each level
//! `l` the remainder
//!
//! ```text
//! r_l = xi_l + sum_{i >= 1} d_i theta_{l+i}
//! ```
//!
//! is `d_0`-closed, so `theta_l = d0_primitive(r_l)` solves the level-`l`
//! part. The answer is then checked by direct evaluation.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::bounds;
use crate::bundle::{BundleParams, CaseTag, TheoremCase};
use crate::chain::{split_by_class, toggle, xor_into, Chain, Terms, Truncated};
use crate::differential::{d0_preimage, FilteredDifferential};
use crate::error::{Error, Result};
use crate::generator::{action, canonical_sort, enumerate, level, Generator, Grading, Sign, Slice};
use crate::rational::Rational;

/// Number of sphere classes below `l_min` scanned when certifying a level
/// bound with `c >= 1`.
pub const CERTIFIED_CLASSES: i64 = 16;

/// `l(xi)`: the top filtration level of `xi`.
pub fn level_ceiling(params: &BundleParams, x: &Chain) -> Result<i64> {
    match params.c() {
        Some(0) => return Ok(params.half_dim()),
        Some(c) if c < 0 => {
            return Err(Error::NotApplicable(
                "levels are unbounded above for c < 0".into(),
            ))
        }
        _ => {}
    }
    match x.terms().iter().map(|g| level(params, g)).max() {
        Some(l) => Ok(l),
        None if params.is_aspherical() => Ok(params.half_dim()),
        None => Err(Error::NotApplicable(
            "the zero chain has no top level".into(),
        )),
    }
}

/// A lower bound on the level of generators of a given degree above an
/// action floor, together with the window on which it was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelBound {
    pub degree: Grading,
    pub floor: Rational,
    pub l_min: i64,
    /// Levels scanned by `enumerate` for generators below `l_min`.
    pub window: (i64, i64),
    pub certified: bool,
}

pub fn level_floor(params: &BundleParams, degree: Grading, floor: Rational) -> Result<LevelBound> {
    let half = params.half_dim();
    let (l_min, span) = match params.c() {
        None | Some(0) => (-half, params.dim_m + 2),
        Some(c) if c >= 1 => (
            bounds::min_level(params, degree, floor)?,
            2 * c * params.nu() * CERTIFIED_CLASSES + params.dim_m,
        ),
        Some(_) => {
            return Err(Error::NotApplicable(
                "levels are unbounded below for c < 0".into(),
            ))
        }
    };
    let window = (l_min - span, l_min - 1);
    let below = enumerate(params, &Slice::new(degree, floor, window))?;
    Ok(LevelBound {
        degree,
        floor,
        l_min,
        window,
        certified: below.is_empty(),
    })
}

/// Key of one piece `theta_l` (per sphere class in the very negative case).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartKey {
    pub class: Option<i64>,
    pub level: i64,
}

/// Levels visited by one run of the induction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelRun {
    pub class: Option<i64>,
    pub top: i64,
    pub stop: i64,
    /// Lowest level at which a non-zero remainder was solved.
    pub lowest_solved: Option<i64>,
}

/// `|A(z) - A(w)| <= C` over pairs with `z` in `theta`, `w` in `xi` and
/// `w` a term of `d z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapCertificate {
    pub constant: Rational,
    pub pairs: usize,
    pub max_gap: Option<Rational>,
    pub holds: bool,
}

/// Term counts per sphere class against `dim M / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassBoundCertificate {
    pub bound: i64,
    pub max_xi_terms: usize,
    pub max_theta_terms: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveResult {
    pub case: TheoremCase,
    pub parts: BTreeMap<PartKey, Chain>,
    pub runs: Vec<LevelRun>,
    pub theta: Chain,
    pub residual: Chain,
    /// Terms of the constructed `theta` below the floor of `xi`.
    pub dropped: Vec<Generator>,
    /// Terms of `d theta + xi` below the floor of `xi`.
    pub residual_dropped: Vec<Generator>,
    pub level_bounds: Vec<LevelBound>,
    pub gap: Option<GapCertificate>,
    pub class_bound: Option<ClassBoundCertificate>,
}

impl PrimitiveResult {
    pub fn is_success(&self) -> bool {
        self.residual.is_empty()
    }

    pub fn gap_constant(&self) -> Option<Rational> {
        self.gap.map(|g| g.constant)
    }
}

/// `tau/2 * dim M + max f - min f`.
pub fn gap_constant(params: &BundleParams) -> Rational {
    params.tau * Rational::new(params.dim_m, 2) + params.max_value() - params.min_value()
}

struct Induction {
    parts: BTreeMap<i64, Terms>,
    lowest_solved: Option<i64>,
}

fn induct(d: &FilteredDifferential, xi: &Terms, top: i64, stop: i64) -> Result<Induction> {
    let params = d.params();
    let mut pending: BTreeMap<i64, Terms> = BTreeMap::new();
    for &g in xi {
        pending.entry(level(params, &g)).or_default().insert(g);
    }
    let mut parts = BTreeMap::new();
    let mut lowest_solved = None;
    let mut l = top;
    while l >= stop {
        pending.retain(|_, t| !t.is_empty());
        match pending.range(..=l).next_back() {
            Some((&next, _)) => l = next,
            None => break,
        }
        if l < stop {
            break;
        }
        let r = pending.remove(&l).unwrap_or_default();
        let mut bad: Vec<Generator> = r
            .iter()
            .copied()
            .filter(|g| g.sign == Sign::Minus)
            .collect();
        if !bad.is_empty() {
            canonical_sort(params, &mut bad);
            let shown: Vec<String> = bad.iter().map(|g| g.display(params).to_string()).collect();
            return Err(Error::InductionInconsistent {
                level: l,
                terms: shown.join(", "),
            });
        }
        let theta: Terms = r.iter().filter_map(d0_preimage).collect();
        for t in d.higher_terms(&theta) {
            toggle(pending.entry(level(params, &t)).or_default(), t);
        }
        parts.insert(l, theta);
        lowest_solved = Some(l);
        l -= 1;
    }
    Ok(Induction {
        parts,
        lowest_solved,
    })
}

fn not_closed(params: &BundleParams, xi: &Chain, boundary: Terms) -> Error {
    let floor = boundary
        .iter()
        .map(|g| action(params, g))
        .min()
        .map_or(xi.floor(), |m| m.min(xi.floor()));
    let chain = Chain::truncating(params, xi.degree().offset(-2), floor, boundary)
        .expect("d lowers the grading by exactly one")
        .chain;
    Error::NotClosed { boundary: chain }
}

/// Builds `theta` with `d theta = xi` above the floor of `xi`.
///
/// `xi` must be an exact cycle of `d`. The construction is exact; terms of
/// `theta` that fall below the floor are cut and reported.
pub fn find_primitive(d: &FilteredDifferential, xi: &Chain) -> Result<PrimitiveResult> {
    let params = d.params();
    let case = d.case();
    if case.tag == CaseTag::NotApplicable {
        return Err(Error::NotApplicable(format!(
            "case {} for this bundle",
            case.tag
        )));
    }
    let boundary = d.boundary_terms(xi.terms());
    if !boundary.is_empty() {
        return Err(not_closed(params, xi, boundary));
    }
    let theta_degree = xi.degree().offset(2);
    let floor = xi.floor();

    let mut parts: BTreeMap<PartKey, Terms> = BTreeMap::new();
    let mut runs = Vec::new();
    let mut level_bounds = Vec::new();
    let mut gap = None;
    let mut class_bound = None;

    if case.tag == CaseTag::CVeryNegative {
        let half = params.half_dim();
        let mut pairs = 0;
        let mut max_gap: Option<Rational> = None;
        let mut max_xi = 0;
        let mut max_theta = 0;
        for (a, xi_a) in split_by_class(xi) {
            let base = 2 * params.chern_m(a);
            let top = level_ceiling_in_class(params, &xi_a).unwrap_or(base + half);
            let stop = base - half;
            let run = induct(d, xi_a.terms(), top, stop)?;
            runs.push(LevelRun {
                class: Some(a),
                top,
                stop,
                lowest_solved: run.lowest_solved,
            });
            let mut theta_a = Terms::new();
            for (l, t) in run.parts {
                xor_into(&mut theta_a, t.iter().copied());
                parts.insert(
                    PartKey {
                        class: Some(a),
                        level: l,
                    },
                    t,
                );
            }
            max_xi = max_xi.max(xi_a.len());
            max_theta = max_theta.max(theta_a.len());
            for z in &theta_a {
                let az = action(params, z);
                let once: Terms = std::iter::once(*z).collect();
                for w in d.boundary_terms(&once) {
                    if xi_a.contains(&w) {
                        let g = (az - action(params, &w)).abs();
                        pairs += 1;
                        max_gap = Some(max_gap.map_or(g, |m| m.max(g)));
                    }
                }
            }
        }
        let constant = gap_constant(params);
        gap = Some(GapCertificate {
            constant,
            pairs,
            max_gap,
            holds: max_gap.is_none_or(|m| m <= constant),
        });
        class_bound = Some(ClassBoundCertificate {
            bound: half,
            max_xi_terms: max_xi,
            max_theta_terms: max_theta,
            holds: max_xi as i64 <= half,
        });
    } else if !xi.is_empty() || params.c() == Some(0) {
        let top = level_ceiling(params, xi)?;
        let stop = match params.c() {
            Some(c) if c >= 1 => {
                let lower = level_floor(params, xi.degree(), floor)?;
                let upper = level_floor(params, theta_degree, floor)?;
                let stop = lower.l_min.min(upper.l_min);
                level_bounds.push(lower);
                level_bounds.push(upper);
                stop
            }
            _ => -params.half_dim(),
        };
        let run = induct(d, xi.terms(), top, stop)?;
        runs.push(LevelRun {
            class: None,
            top,
            stop,
            lowest_solved: run.lowest_solved,
        });
        for (l, t) in run.parts {
            parts.insert(
                PartKey {
                    class: None,
                    level: l,
                },
                t,
            );
        }
    }

    let mut all = Terms::new();
    let mut kept_parts = BTreeMap::new();
    for (key, t) in parts {
        xor_into(&mut all, t.iter().copied());
        let part = Chain::truncating(params, theta_degree, floor, t)
            .expect("d0 preimages raise the grading by exactly one")
            .chain;
        if !part.is_empty() {
            kept_parts.insert(key, part);
        }
    }
    let Truncated {
        chain: theta,
        dropped,
    } = Chain::truncating(params, theta_degree, floor, all)
        .expect("d0 preimages raise the grading by exactly one");
    let Truncated {
        chain: residual,
        dropped: residual_dropped,
    } = verify_primitive(d, xi, &theta)?;

    Ok(PrimitiveResult {
        case,
        parts: kept_parts,
        runs,
        theta,
        residual,
        dropped,
        residual_dropped,
        level_bounds,
        gap,
        class_bound,
    })
}

fn level_ceiling_in_class(params: &BundleParams, x: &Chain) -> Option<i64> {
    x.terms().iter().map(|g| level(params, g)).max()
}

/// `d theta + xi`, truncated at the floor of `xi`.
pub fn verify_primitive(d: &FilteredDifferential, xi: &Chain, theta: &Chain) -> Result<Truncated> {
    if theta.degree() != xi.degree().offset(2) {
        return Err(Error::DegreeMismatch {
            left: theta.degree().twice_mu(),
            right: xi.degree().twice_mu() + 2,
        });
    }
    let mut terms = d.boundary_terms(theta.terms());
    xor_into(&mut terms, xi.terms().iter().copied());
    Chain::truncating(d.params(), xi.degree(), xi.floor(), terms)
}

/// Smallest action among the terms of a chain, if any.
pub fn min_action(params: &BundleParams, x: &Chain) -> Option<Rational> {
    x.terms().iter().map(|g| action(params, g)).min()
}

/// Whether every term of `theta` has action at least `floor + tau`.
pub fn action_raised(params: &BundleParams, theta: &Chain, floor: Rational) -> bool {
    min_action(params, theta).is_none_or(|m| m >= floor + params.tau)
}
