mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rfh_core::bundle::{BundleParams, CritIndex};
use rfh_core::chain::{add, check_novikov_window, split_by_level, Chain};
use rfh_core::differential::{apply_d0, apply_total, d0_primitive, FilteredDifferential};
use rfh_core::generator::{action, enumerate, grading, level, Generator, Grading, Sign, Slice};
use rfh_core::random::{random_admissible_table, random_boundary, random_chain, RandomTableSpec};
use rfh_core::rational::int;
use rfh_core::vanishing::{action_raised, find_primitive, verify_primitive};

fn scenarios() -> Vec<BundleParams> {
    vec![
        common::cp1(),
        common::aspherical4(),
        common::very_negative(),
        common::c0(),
        common::c1(),
    ]
}

fn spherical_scenarios() -> Vec<BundleParams> {
    vec![
        common::cp1(),
        common::very_negative(),
        common::c0(),
        common::c1(),
    ]
}

fn spec(p: &BundleParams) -> RandomTableSpec {
    let levels = match p.c() {
        None | Some(0) => (-p.half_dim(), p.half_dim()),
        _ => (-12, 12),
    };
    RandomTableSpec {
        links: 8,
        degrees: (-9, 9),
        levels,
        floor: int(-6),
        ceiling: int(6),
    }
}

fn slice(p: &BundleParams, k: i64) -> Slice {
    let s = spec(p);
    Slice::new(Grading::new(k).unwrap(), s.floor, s.levels).with_ceiling(s.ceiling)
}

fn sign(plus: bool) -> Sign {
    if plus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn generator(p: &BundleParams, base: usize, n: i64, a: i64, plus: bool) -> Generator {
    let base = CritIndex((base % p.morse().len()) as u32);
    let a = if p.is_aspherical() { 0 } else { a };
    Generator::new(base, n, a, sign(plus))
}

fn table(p: &BundleParams, seed: u64) -> FilteredDifferential {
    random_admissible_table(p, &spec(p), seed).unwrap()
}

fn odd() -> impl Strategy<Value = i64> {
    (-4i64..5).prop_map(|k| 2 * k + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_moves_action_degree_and_level(
        s in 0usize..4, base in 0usize..2, n in -20i64..20, a in -20i64..20,
        plus: bool, a0 in -6i64..6,
    ) {
        let p = &spherical_scenarios()[s];
        let (nu, c) = (p.nu(), p.c().unwrap());
        let g = generator(p, base, n, a, plus);
        let h = g.shifted(a0);
        prop_assert_eq!(action(p, &h) - action(p, &g), int(nu * a0));
        prop_assert_eq!(grading(p, &h).twice_mu() - grading(p, &g).twice_mu(), 4 * (c - 1) * nu * a0);
        prop_assert_eq!(level(p, &h) - level(p, &g), 2 * c * nu * a0);
    }

    #[test]
    fn cover_step_raises_action_by_tau(
        s in 0usize..5, base in 0usize..5, n in -20i64..20, a in -20i64..20, plus: bool,
    ) {
        let p = &scenarios()[s];
        let g = generator(p, base, n, a, plus);
        prop_assert_eq!(action(p, &g.with_cover(n + 1)) - action(p, &g), p.tau);
        prop_assert_eq!(grading(p, &g.with_cover(n + 1)).twice_mu() - grading(p, &g).twice_mu(), 4);
    }

    #[test]
    fn enumerate_matches_brute_force(s in 0usize..5, k in odd(), floor in -6i64..3, width in 0i64..6) {
        let p = &scenarios()[s];
        let slice = Slice::new(Grading::new(k).unwrap(), int(floor), (-12, 12)).with_ceiling(int(floor + width));
        let got: BTreeSet<Generator> = enumerate(p, &slice).unwrap().into_iter().collect();
        let mut want = BTreeSet::new();
        let spheres = if p.is_aspherical() { 0..=0 } else { -40..=40 };
        for base in p.crit_indices() {
            for a in spheres.clone() {
                for n in -60..=60 {
                    for sg in [Sign::Plus, Sign::Minus] {
                        let g = Generator::new(base, n, a, sg);
                        let act = action(p, &g);
                        let l = level(p, &g);
                        if grading(p, &g).twice_mu() == k
                            && act >= int(floor)
                            && act <= int(floor + width)
                            && (-12..=12).contains(&l)
                        {
                            want.insert(g);
                        }
                    }
                }
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn chain_addition_is_symmetric_difference(s in 0usize..5, k in odd(), seed: u64) {
        let p = &scenarios()[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_chain(p, &mut rng, &slice(p, k), 5).unwrap();
        let y = random_chain(p, &mut rng, &slice(p, k), 5).unwrap();
        let xy = add(p, &x, &y).unwrap().chain;
        prop_assert_eq!(&xy, &add(p, &y, &x).unwrap().chain);
        prop_assert!(add(p, &x, &x).unwrap().chain.is_empty());
        let want: BTreeSet<Generator> = x.terms().symmetric_difference(y.terms()).copied().collect();
        prop_assert_eq!(xy.terms(), &want);
    }

    #[test]
    fn split_by_level_partitions(s in 0usize..5, k in odd(), seed: u64) {
        let p = &scenarios()[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_chain(p, &mut rng, &slice(p, k), 8).unwrap();
        let parts = split_by_level(p, &x);
        let mut union = BTreeSet::new();
        for (l, part) in &parts {
            prop_assert!(!part.is_empty());
            for g in part.terms() {
                prop_assert_eq!(level(p, g), *l);
                prop_assert!(union.insert(*g));
            }
        }
        prop_assert_eq!(&union, x.terms());
    }

    #[test]
    fn d0_squares_to_zero_and_inverts_on_plus(s in 0usize..5, k in odd(), seed: u64) {
        let p = &scenarios()[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_chain(p, &mut rng, &slice(p, k), 8).unwrap();
        prop_assert!(apply_d0(p, &apply_d0(p, &x)).is_empty());
        let plus: Vec<Generator> = x.terms().iter().copied().filter(|g| g.sign == Sign::Plus).collect();
        let y = Chain::new(p, x.degree(), x.floor(), plus).unwrap();
        let back = apply_d0(p, &d0_primitive(p, &y).unwrap());
        prop_assert_eq!(back, y);
    }

    #[test]
    fn random_tables_square_to_zero(s in 0usize..5, k in odd(), seed in 0u64..200, cseed: u64) {
        let p = &scenarios()[s];
        let d = table(p, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(cseed);
        let x = random_chain(p, &mut rng, &slice(p, k), 6).unwrap();
        prop_assert!(d.boundary_terms(&d.boundary_terms(x.terms())).is_empty());
        let once = apply_total(&d, &x).chain;
        prop_assert!(apply_total(&d, &once).chain.is_empty());
    }

    #[test]
    fn random_tables_respect_filtrations(s in 0usize..5, k in odd(), seed in 0u64..200, cseed: u64) {
        let p = &scenarios()[s];
        let d = table(p, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(cseed);
        let x = random_chain(p, &mut rng, &slice(p, k), 6).unwrap();
        for g in x.terms() {
            let one = std::iter::once(*g).collect();
            for t in d.boundary_terms(&one) {
                prop_assert!(level(p, &t) <= level(p, g));
                prop_assert!(action(p, &t) <= action(p, g));
                prop_assert_eq!(grading(p, &t).twice_mu(), grading(p, g).twice_mu() - 2);
            }
        }
    }

    #[test]
    fn random_tables_are_shift_equivariant(s in 0usize..4, k in odd(), seed in 0u64..200, cseed: u64, a0 in -3i64..4) {
        let p = &spherical_scenarios()[s];
        let d = table(p, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(cseed);
        let x = random_chain(p, &mut rng, &slice(p, k), 6).unwrap();
        let shifted: BTreeSet<Generator> = x.terms().iter().map(|g| g.shifted(a0)).collect();
        let lhs = d.boundary_terms(&shifted);
        let rhs: BTreeSet<Generator> = d.boundary_terms(x.terms()).iter().map(|g| g.shifted(a0)).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn primitives_of_boundaries_verify(s in 0usize..5, k in odd(), seed in 0u64..200, cseed: u64, size in 1usize..6) {
        let p = &scenarios()[s];
        let d = table(p, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(cseed);
        let (_, xi) = random_boundary(&d, &mut rng, &slice(p, k), size).unwrap();
        let r = find_primitive(&d, &xi).unwrap();
        prop_assert!(r.is_success());
        prop_assert!(verify_primitive(&d, &xi, &r.theta).unwrap().chain.is_empty());
    }

    #[test]
    fn fiber_primitives_raise_action(s in 0usize..5, k in odd(), cseed: u64, size in 1usize..6) {
        let p = &scenarios()[s];
        let d = FilteredDifferential::d0_only(p);
        let mut rng = ChaCha8Rng::seed_from_u64(cseed);
        let (_, xi) = random_boundary(&d, &mut rng, &slice(p, k), size).unwrap();
        let r = find_primitive(&d, &xi).unwrap();
        prop_assert!(r.is_success());
        prop_assert!(action_raised(p, &r.theta, xi.floor()));
    }

    #[test]
    fn novikov_views_agree(s in 0usize..2, k in odd(), cseed: u64, probe in -6i64..6, level_probe in -12i64..12) {
        let p = [common::cp1(), common::c1()][s].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(cseed);
        let x = random_chain(&p, &mut rng, &slice(&p, k), 10).unwrap();
        let probe = int(probe).max(x.floor());
        let cert = check_novikov_window(&p, &x, probe, Some(level_probe)).unwrap();
        prop_assert!(cert.consistent);
    }
}
