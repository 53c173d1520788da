//! Seeded random fixtures: admissible differential tables, chains and
//! boundaries.
//!
//! A table is produced by conjugating `d_0` with `I + N`, where `N` links
//! generators of equal degree to generators of strictly lower level and no
//! larger action. When no generator is both a source and a target of `N`,
//! `N^2 = 0`, so `d = (I + N) d_0 (I + N)` squares to zero and
//! `d - d_0 = N d_0 + d_0 N + N d_0 N` satisfies every entry rule. The
//! entries still go through [`load_table`].

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundle::{theorem_case, BundleParams, CaseTag};
use crate::chain::{toggle, Chain, Terms};
use crate::differential::{
    d0_generator, d0_preimage, d0_terms, load_table, FilteredDifferential, HigherDifferentialEntry,
};
use crate::error::{Error, Result};
use crate::generator::{action, enumerate, level, Generator, Grading, OrbitKey, Slice};
use crate::rational::Rational;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomTableSpec {
    /// Number of links of `N` to draw.
    pub links: usize,
    /// Inclusive range of doubled degrees to sample from.
    pub degrees: (i64, i64),
    pub levels: (i64, i64),
    pub floor: Rational,
    pub ceiling: Rational,
}

/// Every generator of the spec's window, grouped by degree.
pub fn window_pool(params: &BundleParams, spec: &RandomTableSpec) -> Result<Vec<Vec<Generator>>> {
    let (lo, hi) = spec.degrees;
    let mut pool = Vec::new();
    for k in lo..=hi {
        if k.rem_euclid(2) == 0 {
            continue;
        }
        let slice =
            Slice::new(Grading::new(k)?, spec.floor, spec.levels).with_ceiling(spec.ceiling);
        let gens = enumerate(params, &slice)?;
        if gens.len() >= 2 {
            pool.push(gens);
        }
    }
    Ok(pool)
}

/// `N` on shift orbits: domain orbit -> targets at source sphere 0.
#[derive(Clone, Debug, Default)]
struct Perturbation {
    links: BTreeMap<OrbitKey, Terms>,
    images: BTreeSet<OrbitKey>,
}

impl Perturbation {
    fn apply(&self, g: &Generator) -> Terms {
        self.links
            .get(&g.orbit())
            .into_iter()
            .flatten()
            .map(|t| t.shifted(g.sphere))
            .collect()
    }

    fn apply_all(&self, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for g in terms {
            for t in self.apply(g) {
                toggle(&mut out, t);
            }
        }
        out
    }

    fn admits(&self, g: &Generator, h: &Generator) -> bool {
        g.orbit() != h.orbit()
            && !self.images.contains(&g.orbit())
            && !self.links.contains_key(&h.orbit())
    }

    fn insert(&mut self, g: &Generator, h: &Generator) {
        let rel = h.shifted(-g.sphere);
        toggle(self.links.entry(g.orbit()).or_default(), rel);
        self.images.insert(h.orbit());
    }
}

/// Entries of `d - d_0` for `d = (I + N) d_0 (I + N)`.
fn conjugated_entries(params: &BundleParams, n: &Perturbation) -> Vec<HigherDifferentialEntry> {
    let mut sources = Terms::new();
    for key in n.links.keys() {
        let s = key.at(0);
        sources.insert(s);
        if let Some(pre) = d0_preimage(&s) {
            sources.insert(pre);
        }
    }
    let mut out = Vec::new();
    for s in sources {
        let one: Terms = std::iter::once(s).collect();
        let d0s: Terms = d0_generator(&s).into_iter().collect();
        let mut t = n.apply_all(&d0s);
        let ns = n.apply_all(&one);
        for g in d0_terms(&ns) {
            toggle(&mut t, g);
        }
        for g in n.apply_all(&d0_terms(&ns)) {
            toggle(&mut t, g);
        }
        for target in t {
            let i = level(params, &s) - level(params, &target);
            out.push(HigherDifferentialEntry::new(i, s, target));
        }
    }
    out
}

/// A random table accepted by [`load_table`].
///
/// Rejected entries are dropped one at a time in canonical order until the
/// table loads; with the conjugation construction this loop does not run.
pub fn random_admissible_table(
    params: &BundleParams,
    spec: &RandomTableSpec,
    seed: u64,
) -> Result<FilteredDifferential> {
    let mut rng = rng_from_seed(seed);
    let pool = window_pool(params, spec)?;
    let very_negative = theorem_case(params).tag == CaseTag::CVeryNegative;
    let mut n = Perturbation::default();
    let mut drawn = 0;
    let attempts = spec.links * 20;
    for _ in 0..attempts {
        if drawn >= spec.links || pool.is_empty() {
            break;
        }
        let gens = pool.choose(&mut rng).expect("pool is non-empty");
        let g = *gens
            .choose(&mut rng)
            .expect("every degree has two generators");
        let candidates: Vec<&Generator> = gens
            .iter()
            .filter(|h| {
                level(params, h) < level(params, &g)
                    && action(params, h) <= action(params, &g)
                    && (!very_negative || h.sphere == g.sphere)
                    && n.admits(&g, h)
            })
            .collect();
        if let Some(&&h) = candidates.choose(&mut rng) {
            n.insert(&g, &h);
            drawn += 1;
        }
    }
    let mut entries = conjugated_entries(params, &n);
    loop {
        match load_table(params, &entries) {
            Ok(d) => return Ok(d),
            Err(Error::TableRejected(report)) => {
                let offending: BTreeSet<usize> =
                    report.violations.iter().filter_map(|v| v.entry).collect();
                match offending.iter().next() {
                    Some(&first) => {
                        entries.remove(first);
                    }
                    None => {
                        entries.pop();
                    }
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// `size` distinct random generators of the slice.
pub fn random_chain<R: Rng>(
    params: &BundleParams,
    rng: &mut R,
    slice: &Slice,
    size: usize,
) -> Result<Chain> {
    let gens = enumerate(params, slice)?;
    let picked: Vec<Generator> = gens
        .choose_multiple(rng, size.min(gens.len()))
        .copied()
        .collect();
    Chain::new(params, slice.degree, slice.floor, picked)
}

/// A random `eta` of the slice and its exact boundary `xi = d eta`. The
/// floor of `xi` is lowered to its smallest action so no term is lost.
pub fn random_boundary<R: Rng>(
    d: &FilteredDifferential,
    rng: &mut R,
    slice: &Slice,
    size: usize,
) -> Result<(Chain, Chain)> {
    let params = d.params();
    let eta = random_chain(params, rng, slice, size)?;
    let terms = d.boundary_terms(eta.terms());
    let floor = terms
        .iter()
        .map(|g| action(params, g))
        .min()
        .map_or(slice.floor, |m| m.min(slice.floor));
    let xi = Chain::new(params, slice.degree.offset(-2), floor, terms)?;
    Ok((eta, xi))
}
