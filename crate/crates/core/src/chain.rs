//! Z/2 Novikov chains represented by action truncation.
//!
//! A [`Chain`] is a homogeneous chain together with a floor `kappa`: its
//! term set is exact above `kappa` and says nothing below. Since the
//! differential never increases action, everything below a floor spans a
//! subcomplex and arithmetic "modulo terms below the floor" is well defined.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::bounds;
use crate::bundle::BundleParams;
use crate::error::{Error, Result};
use crate::generator::{self, action, canonical_sort, grading, level, Generator, Grading};
use crate::rational::{int, Rational};

/// Finite-support Z/2 set of generators. Addition is symmetric difference.
pub type Terms = BTreeSet<Generator>;

/// `acc += g` over Z/2.
pub fn toggle(acc: &mut Terms, g: Generator) {
    if !acc.remove(&g) {
        acc.insert(g);
    }
}

pub fn xor_into(acc: &mut Terms, other: impl IntoIterator<Item = Generator>) {
    for g in other {
        toggle(acc, g);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    degree: Grading,
    floor: Rational,
    terms: Terms,
}

/// A chain together with the terms that were cut off below its floor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncated {
    pub chain: Chain,
    pub dropped: Vec<Generator>,
}

impl Truncated {
    pub fn exact(chain: Chain) -> Self {
        Truncated {
            chain,
            dropped: Vec::new(),
        }
    }
}

impl Chain {
    pub fn zero(degree: Grading, floor: Rational) -> Self {
        Chain {
            degree,
            floor,
            terms: Terms::new(),
        }
    }

    /// Checked constructor: every term must have the chain's degree and an
    /// action at least `floor`. Repeated terms cancel in pairs.
    pub fn new(
        params: &BundleParams,
        degree: Grading,
        floor: Rational,
        terms: impl IntoIterator<Item = Generator>,
    ) -> Result<Self> {
        let mut set = Terms::new();
        xor_into(&mut set, terms);
        for g in &set {
            check_term(params, degree, floor, g)?;
        }
        Ok(Chain {
            degree,
            floor,
            terms: set,
        })
    }

    /// Builds a chain from terms of the right degree, dropping (and
    /// reporting) those below the floor.
    pub fn truncating(
        params: &BundleParams,
        degree: Grading,
        floor: Rational,
        terms: Terms,
    ) -> Result<Truncated> {
        let mut kept = Terms::new();
        let mut dropped = Vec::new();
        for g in terms {
            let d = grading(params, &g);
            if d != degree {
                return Err(Error::TermDegree {
                    generator: g.display(params).to_string(),
                    found: d.twice_mu(),
                    expected: degree.twice_mu(),
                });
            }
            if action(params, &g) < floor {
                dropped.push(g);
            } else {
                kept.insert(g);
            }
        }
        canonical_sort(params, &mut dropped);
        Ok(Truncated {
            chain: Chain {
                degree,
                floor,
                terms: kept,
            },
            dropped,
        })
    }

    /// Chain of a single generator, floored at its own action.
    pub fn single(params: &BundleParams, g: Generator) -> Self {
        Chain {
            degree: grading(params, &g),
            floor: action(params, &g),
            terms: std::iter::once(g).collect(),
        }
    }

    pub fn degree(&self) -> Grading {
        self.degree
    }

    pub fn floor(&self) -> Rational {
        self.floor
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.terms.contains(g)
    }

    /// Terms in canonical order.
    pub fn sorted_terms(&self, params: &BundleParams) -> Vec<Generator> {
        let mut v: Vec<_> = self.terms.iter().copied().collect();
        canonical_sort(params, &mut v);
        v
    }

    pub fn display<'a>(&'a self, params: &'a BundleParams) -> ChainDisplay<'a> {
        ChainDisplay {
            chain: self,
            params,
        }
    }

    /// Same terms, raised floor; terms now below it are dropped.
    pub fn truncate(&self, params: &BundleParams, kappa: Rational) -> Truncated {
        let floor = kappa.max(self.floor);
        let mut kept = Terms::new();
        let mut dropped = Vec::new();
        for &g in &self.terms {
            if action(params, &g) < floor {
                dropped.push(g);
            } else {
                kept.insert(g);
            }
        }
        canonical_sort(params, &mut dropped);
        Truncated {
            chain: Chain {
                degree: self.degree,
                floor,
                terms: kept,
            },
            dropped,
        }
    }
}

fn check_term(
    params: &BundleParams,
    degree: Grading,
    floor: Rational,
    g: &Generator,
) -> Result<()> {
    let d = grading(params, g);
    if d != degree {
        return Err(Error::TermDegree {
            generator: g.display(params).to_string(),
            found: d.twice_mu(),
            expected: degree.twice_mu(),
        });
    }
    let a = action(params, g);
    if a < floor {
        return Err(Error::TermBelowFloor {
            generator: g.display(params).to_string(),
            action: a.to_string(),
            floor: floor.to_string(),
        });
    }
    Ok(())
}

pub struct ChainDisplay<'a> {
    chain: &'a Chain,
    params: &'a BundleParams,
}

impl fmt::Display for ChainDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.chain.sorted_terms(self.params);
        if terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|g| g.display(self.params).to_string())
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `x + y` over Z/2 at the coarser of the two floors.
pub fn add(params: &BundleParams, x: &Chain, y: &Chain) -> Result<Truncated> {
    if x.degree != y.degree {
        return Err(Error::DegreeMismatch {
            left: x.degree.twice_mu(),
            right: y.degree.twice_mu(),
        });
    }
    let floor = x.floor.max(y.floor);
    let mut terms = x.terms.clone();
    xor_into(&mut terms, y.terms.iter().copied());
    Chain::truncating(params, x.degree, floor, terms)
}

/// Action of `e^{A_0}`: every capping class moves by `a0`.
pub fn scalar_shift(params: &BundleParams, x: &Chain, a0: i64) -> Result<Chain> {
    if params.is_aspherical() && a0 != 0 {
        return Err(Error::NonzeroSphereAspherical(a0));
    }
    Ok(Chain {
        degree: x.degree.offset(4 * params.chern_e(a0)),
        floor: x.floor + int(params.omega(a0)),
        terms: x.terms.iter().map(|g| g.shifted(a0)).collect(),
    })
}

/// Finite Z/2 combination `sum n_A e^A` of sphere classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NovikovScalar {
    support: BTreeSet<i64>,
}

impl NovikovScalar {
    pub fn monomial(a: i64) -> Self {
        NovikovScalar {
            support: std::iter::once(a).collect(),
        }
    }

    pub fn from_support(support: impl IntoIterator<Item = i64>) -> Self {
        let mut s = BTreeSet::new();
        for a in support {
            if !s.remove(&a) {
                s.insert(a);
            }
        }
        NovikovScalar { support: s }
    }

    pub fn support(&self) -> &BTreeSet<i64> {
        &self.support
    }

    pub fn add(&self, other: &Self) -> Self {
        NovikovScalar {
            support: self
                .support
                .symmetric_difference(&other.support)
                .copied()
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        NovikovScalar::from_support(
            self.support
                .iter()
                .flat_map(|a| other.support.iter().map(move |b| a + b)),
        )
    }

    /// Module action on a chain. Shifting changes the degree by
    /// `4c_1^{TE}(A)` doubled units, so the result is graded.
    pub fn act(&self, params: &BundleParams, x: &Chain) -> Result<BTreeMap<Grading, Chain>> {
        let mut out: BTreeMap<Grading, Chain> = BTreeMap::new();
        for &a in &self.support {
            let shifted = scalar_shift(params, x, a)?;
            match out.remove(&shifted.degree) {
                None => {
                    out.insert(shifted.degree, shifted);
                }
                Some(prev) => {
                    let sum = add(params, &prev, &shifted)?.chain;
                    out.insert(sum.degree, sum);
                }
            }
        }
        Ok(out)
    }
}

/// Level-side view of a Novikov finiteness certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelView {
    pub probe_level: i64,
    /// Terms at level `>= probe_level`.
    pub above_level: usize,
    /// Level below which no term of action `>= probe` can sit.
    pub level_bound: i64,
    /// Action below which no term of level `>= probe_level` can sit.
    pub action_bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovCertificate {
    pub probe: Rational,
    /// Terms with action `>= probe`.
    pub above_action: usize,
    pub level_view: Option<LevelView>,
    /// Both finiteness views agree on this chain.
    pub consistent: bool,
}

/// Counts terms above an action probe; in the case `c >= 1` with
/// `(c-1)tau < 1` additionally counts terms above a level probe and checks
/// that the action and level views bound each other.
pub fn check_novikov_window(
    params: &BundleParams,
    x: &Chain,
    probe: Rational,
    level_probe: Option<i64>,
) -> Result<NovikovCertificate> {
    if probe < x.floor {
        return Err(Error::ProbeBelowFloor {
            probe: probe.to_string(),
            floor: x.floor.to_string(),
        });
    }
    let above_action: Vec<&Generator> = x
        .terms
        .iter()
        .filter(|g| action(params, g) >= probe)
        .collect();

    let lemma_applies = matches!(params.c(), Some(c) if c >= 1)
        && int(params.c().unwrap_or(0) - 1) * params.tau < int(1);
    let mut consistent = true;
    let level_view = match level_probe {
        Some(probe_level) if lemma_applies => {
            let level_bound = bounds::min_level(params, x.degree, probe)?;
            let action_bound = bounds::min_action(params, x.degree, probe_level)?;
            let above_level: Vec<&Generator> = x
                .terms
                .iter()
                .filter(|g| level(params, g) >= probe_level)
                .collect();
            consistent &= above_action.iter().all(|g| level(params, g) >= level_bound);
            consistent &= above_level
                .iter()
                .all(|g| action(params, g) >= action_bound);
            Some(LevelView {
                probe_level,
                above_level: above_level.len(),
                level_bound,
                action_bound,
            })
        }
        Some(probe_level) => {
            let above_level = x
                .terms
                .iter()
                .filter(|g| level(params, g) >= probe_level)
                .count();
            Some(LevelView {
                probe_level,
                above_level,
                level_bound: i64::MIN,
                action_bound: Rational::zero(),
            })
        }
        None => None,
    };
    Ok(NovikovCertificate {
        probe,
        above_action: above_action.len(),
        level_view,
        consistent,
    })
}

/// Partition by filtration level.
pub fn split_by_level(params: &BundleParams, x: &Chain) -> BTreeMap<i64, Chain> {
    let mut out: BTreeMap<i64, Chain> = BTreeMap::new();
    for &g in &x.terms {
        out.entry(generator::level(params, &g))
            .or_insert_with(|| Chain::zero(x.degree, x.floor))
            .terms
            .insert(g);
    }
    out
}

/// Partition by sphere class.
pub fn split_by_class(x: &Chain) -> BTreeMap<i64, Chain> {
    let mut out: BTreeMap<i64, Chain> = BTreeMap::new();
    for &g in &x.terms {
        out.entry(g.sphere)
            .or_insert_with(|| Chain::zero(x.degree, x.floor))
            .terms
            .insert(g);
    }
    out
}
