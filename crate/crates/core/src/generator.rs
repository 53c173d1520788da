//! Critical points of the Rabinowitz action functional and their exact
//! action, index and filtration-level arithmetic.
//!
//! A generator `([v^n, A]^±, eta)` is stored as `(base, cover, sphere, sign)`:
//! `base` is the critical point `q` of `f` under the orbit, `cover` the
//! iterate `n`, `sphere` the coordinate `a` of the capping class `A` (with
//! `omega(A) = nu*a`) and `sign` picks the max/min of the auxiliary Morse
//! function on the critical circle. The Lagrange multiplier is always
//! `eta = n - f(q)` and is derived, never stored.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::bundle::{BundleParams, CritIndex};
use crate::error::{Error, Result};
use crate::rational::{ceil_int, floor_int, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub base: CritIndex,
    pub cover: i64,
    pub sphere: i64,
    pub sign: Sign,
}

impl Generator {
    pub fn new(base: CritIndex, cover: i64, sphere: i64, sign: Sign) -> Self {
        Generator {
            base,
            cover,
            sphere,
            sign,
        }
    }

    /// Builds a generator from a critical point id, rejecting unknown ids and
    /// non-trivial sphere classes in aspherical scenarios.
    pub fn resolve(
        params: &BundleParams,
        id: &str,
        cover: i64,
        sphere: i64,
        sign: Sign,
    ) -> Result<Self> {
        let base = params.lookup(id)?;
        if params.is_aspherical() && sphere != 0 {
            return Err(Error::NonzeroSphereAspherical(sphere));
        }
        Ok(Generator::new(base, cover, sphere, sign))
    }

    pub fn with_cover(self, cover: i64) -> Self {
        Generator { cover, ..self }
    }

    pub fn with_sign(self, sign: Sign) -> Self {
        Generator { sign, ..self }
    }

    pub fn shifted(self, a0: i64) -> Self {
        Generator {
            sphere: self.sphere + a0,
            ..self
        }
    }

    /// Key of the orbit under the Novikov shift `a -> a + a0`.
    pub fn orbit(self) -> OrbitKey {
        OrbitKey {
            base: self.base,
            cover: self.cover,
            sign: self.sign,
        }
    }

    pub fn display<'a>(&'a self, params: &'a BundleParams) -> GeneratorDisplay<'a> {
        GeneratorDisplay { g: self, params }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitKey {
    pub base: CritIndex,
    pub cover: i64,
    pub sign: Sign,
}

impl OrbitKey {
    pub fn at(self, sphere: i64) -> Generator {
        Generator::new(self.base, self.cover, sphere, self.sign)
    }
}

pub struct GeneratorDisplay<'a> {
    g: &'a Generator,
    params: &'a BundleParams,
}

impl fmt::Display for GeneratorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.params.crit(self.g.base).id,
            self.g.cover,
            self.g.sphere,
            self.g.sign.symbol()
        )
    }
}

/// Parses `(id,n,a,±)`. Both `-` and `−` are accepted for the minus sign.
pub fn parse_generator(params: &BundleParams, s: &str) -> std::result::Result<Generator, String> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| format!("generator `{s}` must be of the form (id,n,a,sign)"))?;
    let fields: Vec<&str> = inner.split(',').map(str::trim).collect();
    if fields.len() != 4 {
        return Err(format!("generator `{s}` must have four fields"));
    }
    let cover: i64 = fields[1]
        .parse()
        .map_err(|_| format!("invalid cover `{}` in `{s}`", fields[1]))?;
    let sphere: i64 = fields[2]
        .parse()
        .map_err(|_| format!("invalid sphere class `{}` in `{s}`", fields[2]))?;
    let sign = match fields[3] {
        "+" => Sign::Plus,
        "-" | "\u{2212}" => Sign::Minus,
        other => return Err(format!("invalid sign `{other}` in `{s}`")),
    };
    Generator::resolve(params, fields[0], cover, sphere, sign).map_err(|e| e.to_string())
}

/// Doubled half-integer grading: `twice_mu = 2*mu`, always odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grading(i64);

impl Grading {
    pub fn new(twice_mu: i64) -> Result<Self> {
        if twice_mu.rem_euclid(2) != 1 {
            return Err(Error::EvenDegree(twice_mu));
        }
        Ok(Grading(twice_mu))
    }

    pub fn twice_mu(self) -> i64 {
        self.0
    }

    /// Shift by `delta` doubled units; `delta` must be even.
    pub fn offset(self, delta: i64) -> Self {
        debug_assert!(delta % 2 == 0);
        Grading(self.0 + delta)
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjectedGenerator {
    pub base: CritIndex,
    pub sphere: i64,
    pub cz_m: i64,
}

/// `tau*n + omega(A) - (tau+1)*f(q)`.
pub fn action(params: &BundleParams, g: &Generator) -> Rational {
    let f = params.crit(g.base).value;
    params.tau * int(g.cover) + int(params.omega(g.sphere)) - (params.tau + int(1)) * f
}

/// Lagrange multiplier `eta = n - f(q)`.
pub fn eta(params: &BundleParams, g: &Generator) -> Rational {
    int(g.cover) - params.crit(g.base).value
}

/// Conley-Zehnder index of `v^n` with capping `d_v^n # A`: `2n + 2c_1^{TE}(A)`.
pub fn cz_index_e(params: &BundleParams, cover: i64, sphere: i64) -> i64 {
    2 * cover + 2 * params.chern_e(sphere)
}

/// Conley-Zehnder index `2cn` of a contractible iterate `v^n` with respect to
/// a capping disk inside the hypersurface.
pub fn cz_index_flat(params: &BundleParams, cover: i64) -> Result<i64> {
    match params.c() {
        None => Err(Error::Aspherical("every iterate is non-contractible")),
        Some(c) => {
            let nu = params.nu();
            if cover == 0 || cover % nu != 0 {
                return Err(Error::NotContractible { cover, nu });
            }
            Ok(2 * c * cover)
        }
    }
}

pub fn grading(params: &BundleParams, g: &Generator) -> Grading {
    let m = params.crit(g.base).morse_index;
    Grading(2 * cz_index_e(params, g.cover, g.sphere) - 2 * m + params.dim_m + g.sign.unit())
}

/// Filtration level `mu_CZ^M(Pi(g)) = -ind(q) + dim M/2 + 2c_1^{TM}(A)`.
pub fn level(params: &BundleParams, g: &Generator) -> i64 {
    -params.crit(g.base).morse_index + params.half_dim() + 2 * params.chern_m(g.sphere)
}

pub fn project(params: &BundleParams, g: &Generator) -> ProjectedGenerator {
    ProjectedGenerator {
        base: g.base,
        sphere: g.sphere,
        cz_m: level(params, g),
    }
}

/// Canonical order: level descending, action descending, then base id,
/// cover and sign ascending.
pub fn canonical_cmp(params: &BundleParams, x: &Generator, y: &Generator) -> Ordering {
    level(params, y)
        .cmp(&level(params, x))
        .then_with(|| action(params, y).cmp(&action(params, x)))
        .then_with(|| x.base.cmp(&y.base))
        .then_with(|| x.cover.cmp(&y.cover))
        .then_with(|| x.sign.cmp(&y.sign))
        .then_with(|| x.sphere.cmp(&y.sphere))
}

pub fn canonical_sort(params: &BundleParams, gens: &mut [Generator]) {
    gens.sort_by(|x, y| canonical_cmp(params, x, y));
}

/// A finite slice of the generator set: fixed degree, action at least
/// `floor` (and at most `ceiling` when given), level in `levels`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slice {
    pub degree: Grading,
    pub floor: Rational,
    pub levels: (i64, i64),
    pub ceiling: Option<Rational>,
}

impl Slice {
    pub fn new(degree: Grading, floor: Rational, levels: (i64, i64)) -> Self {
        Slice {
            degree,
            floor,
            levels,
            ceiling: None,
        }
    }

    pub fn with_ceiling(self, ceiling: Rational) -> Self {
        Slice {
            ceiling: Some(ceiling),
            ..self
        }
    }
}

/// Every generator in the slice, in canonical order.
///
/// Fails with [`Error::InfiniteSlice`] when the window does not bound the
/// sphere coordinate, which happens for `c = 0` without an action ceiling.
pub fn enumerate(params: &BundleParams, slice: &Slice) -> Result<Vec<Generator>> {
    let (lo, hi) = slice.levels;
    if lo > hi {
        return Ok(Vec::new());
    }
    let tau = params.tau;
    let nu = params.nu();
    let half = params.half_dim();
    let chern_e_unit = params.chern_e(1);
    let level_step = 2 * params.chern_m(1);
    // action as a function of a at fixed degree: const + slope * a
    let slope = int(nu) - tau * int(chern_e_unit);

    let mut out = Vec::new();
    for base in params.crit_indices() {
        let cp = params.crit(base);
        let m = cp.morse_index;
        for sign in [Sign::Plus, Sign::Minus] {
            // 4n = k_num - 4*chern_e(1)*a
            let k_num = slice.degree.twice_mu() + 2 * m - params.dim_m - sign.unit();
            let action_at_zero = tau * Rational::new(k_num, 4) - (tau + int(1)) * cp.value;

            let mut a_lo: Option<i64> = None;
            let mut a_hi: Option<i64> = None;
            let mut tighten = |lo: Option<i64>, hi: Option<i64>| {
                if let Some(l) = lo {
                    a_lo = Some(a_lo.map_or(l, |x: i64| x.max(l)));
                }
                if let Some(h) = hi {
                    a_hi = Some(a_hi.map_or(h, |x: i64| x.min(h)));
                }
            };

            if params.is_aspherical() {
                tighten(Some(0), Some(0));
            } else if level_step != 0 {
                let l = int(lo + m - half) / int(level_step);
                let h = int(hi + m - half) / int(level_step);
                let (l, h) = if level_step > 0 { (l, h) } else { (h, l) };
                tighten(Some(ceil_int(l)), Some(floor_int(h)));
            } else {
                let lev = -m + half;
                if lev < lo || lev > hi {
                    continue;
                }
            }
            if !slope.is_zero() {
                let from_floor = (slice.floor - action_at_zero) / slope;
                let from_ceiling = slice.ceiling.map(|c| (c - action_at_zero) / slope);
                if slope.is_positive() {
                    tighten(Some(ceil_int(from_floor)), from_ceiling.map(floor_int));
                } else {
                    tighten(from_ceiling.map(ceil_int), Some(floor_int(from_floor)));
                }
            }
            let (a_lo, a_hi) = match (a_lo, a_hi) {
                (Some(l), Some(h)) => (l, h),
                _ => {
                    return Err(Error::InfiniteSlice(format!(
                        "sphere coordinate unbounded for {} in degree {}; supply an action ceiling",
                        cp.id, slice.degree
                    )))
                }
            };
            for a in a_lo..=a_hi {
                let four_n = k_num - 4 * chern_e_unit * a;
                if four_n.rem_euclid(4) != 0 {
                    continue;
                }
                let g = Generator::new(base, four_n / 4, a, sign);
                let act = action(params, &g);
                let lev = level(params, &g);
                if act < slice.floor || lev < lo || lev > hi {
                    continue;
                }
                if matches!(slice.ceiling, Some(c) if act > c) {
                    continue;
                }
                debug_assert_eq!(grading(params, &g), slice.degree);
                out.push(g);
            }
        }
    }
    canonical_sort(params, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{CritPoint, Sphericity};
    use num_rational::Ratio;

    fn cp1() -> BundleParams {
        BundleParams::new(
            2,
            Sphericity::Spherical { nu: 1, c: 2 },
            Ratio::new(1, 2),
            vec![
                CritPoint::new("q0", 0, Ratio::new(1, 10)),
                CritPoint::new("q2", 2, Ratio::new(1, 5)),
            ],
        )
    }

    fn gen(p: &BundleParams, id: &str, n: i64, a: i64, s: Sign) -> Generator {
        Generator::resolve(p, id, n, a, s).unwrap()
    }

    #[test]
    fn action_values() {
        let p = cp1();
        assert_eq!(
            action(&p, &gen(&p, "q0", 1, 0, Sign::Minus)),
            Ratio::new(7, 20)
        );
        assert_eq!(
            action(&p, &gen(&p, "q0", 0, 0, Sign::Plus)),
            Ratio::new(-3, 20)
        );
        assert_eq!(
            action(&p, &gen(&p, "q0", 1, 1, Sign::Minus)),
            Ratio::new(27, 20)
        );
        assert_eq!(
            eta(&p, &gen(&p, "q0", 1, 0, Sign::Minus)),
            Ratio::new(9, 10)
        );
    }

    #[test]
    fn cz_indices() {
        let p = cp1();
        assert_eq!(cz_index_e(&p, 3, 0), 6);
        assert_eq!(cz_index_e(&p, 0, 0), 0);
        assert_eq!(cz_index_e(&p, 1, 1), 4);
        assert_eq!(cz_index_flat(&p, 1).unwrap(), 4);

        let mut q = cp1();
        q.sphericity = Sphericity::Spherical { nu: 3, c: 1 };
        assert_eq!(cz_index_flat(&q, 3).unwrap(), 6);
        q.sphericity = Sphericity::Spherical { nu: 2, c: 2 };
        assert!(matches!(
            cz_index_flat(&q, 1),
            Err(Error::NotContractible { cover: 1, nu: 2 })
        ));
        assert!(cz_index_flat(&q, 0).is_err());
    }

    #[test]
    fn gradings() {
        let p = cp1();
        assert_eq!(grading(&p, &gen(&p, "q0", 1, 0, Sign::Minus)).twice_mu(), 5);
        assert_eq!(grading(&p, &gen(&p, "q0", 0, 0, Sign::Plus)).twice_mu(), 3);
        assert_eq!(
            grading(&p, &gen(&p, "q2", 0, 0, Sign::Minus)).twice_mu(),
            -3
        );
        assert!(Grading::new(4).is_err());
        assert_eq!(Grading::new(-3).unwrap().twice_mu(), -3);
    }

    #[test]
    fn projections() {
        let p = cp1();
        let pr = project(&p, &gen(&p, "q0", 5, 0, Sign::Plus));
        assert_eq!((pr.sphere, pr.cz_m), (0, 1));
        let pr = project(&p, &gen(&p, "q0", 5, 1, Sign::Plus));
        assert_eq!((pr.sphere, pr.cz_m), (1, 5));

        let asph = BundleParams::new(
            4,
            Sphericity::Aspherical,
            int(1),
            vec![CritPoint::new("q", 3, Ratio::new(1, 2))],
        );
        let g = gen(&asph, "q", -2, 0, Sign::Minus);
        assert_eq!(project(&asph, &g).cz_m, -1);
    }

    #[test]
    fn aspherical_rejects_sphere_classes() {
        let asph = BundleParams::new(
            2,
            Sphericity::Aspherical,
            int(1),
            vec![CritPoint::new("q", 0, Ratio::new(1, 2))],
        );
        assert!(matches!(
            Generator::resolve(&asph, "q", 0, 1, Sign::Plus),
            Err(Error::NonzeroSphereAspherical(1))
        ));
        assert!(matches!(
            Generator::resolve(&asph, "r", 0, 0, Sign::Plus),
            Err(Error::UnknownCritPoint(_))
        ));
    }

    #[test]
    fn parse_and_display() {
        let p = cp1();
        let g = parse_generator(&p, "(q0, 1, 0, -)").unwrap();
        assert_eq!(g, gen(&p, "q0", 1, 0, Sign::Minus));
        assert_eq!(g.display(&p).to_string(), "(q0,1,0,-)");
        assert_eq!(
            parse_generator(&p, "(q2,0,-1,\u{2212})").unwrap().sign,
            Sign::Minus
        );
        assert!(parse_generator(&p, "(q0,1,0)").is_err());
        assert!(parse_generator(&p, "q0,1,0,+").is_err());
        assert!(parse_generator(&p, "(q9,1,0,+)").is_err());
    }

    #[test]
    fn enumerate_contains_known_generator_and_is_canonical() {
        let p = cp1();
        let slice = Slice::new(Grading::new(5).unwrap(), int(0), (-10, 10));
        let gens = enumerate(&p, &slice).unwrap();
        assert!(gens.contains(&gen(&p, "q0", 1, 0, Sign::Minus)));
        for w in gens.windows(2) {
            assert_eq!(canonical_cmp(&p, &w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn empty_window_is_empty() {
        let p = cp1();
        let slice = Slice::new(Grading::new(5).unwrap(), int(0), (3, 2));
        assert!(enumerate(&p, &slice).unwrap().is_empty());
    }

    #[test]
    fn c_zero_needs_a_ceiling() {
        let p = BundleParams::new(
            2,
            Sphericity::Spherical { nu: 1, c: 0 },
            Ratio::new(1, 2),
            vec![
                CritPoint::new("q0", 0, Ratio::new(1, 10)),
                CritPoint::new("q2", 2, Ratio::new(1, 5)),
            ],
        );
        let slice = Slice::new(Grading::new(3).unwrap(), int(0), (-5, 5));
        assert!(matches!(
            enumerate(&p, &slice),
            Err(Error::InfiniteSlice(_))
        ));
        let bounded = enumerate(&p, &slice.with_ceiling(int(10))).unwrap();
        assert!(!bounded.is_empty());
        assert!(bounded.iter().all(|g| action(&p, g) <= int(10)));
    }

    #[test]
    fn aspherical_slices_have_trivial_classes() {
        let p = BundleParams::new(
            4,
            Sphericity::Aspherical,
            Ratio::new(1, 3),
            vec![
                CritPoint::new("a", 0, Ratio::new(1, 7)),
                CritPoint::new("b", 2, Ratio::new(2, 7)),
                CritPoint::new("c", 4, Ratio::new(3, 7)),
            ],
        );
        for d in (-21..21).step_by(2) {
            let slice = Slice::new(Grading::new(d).unwrap(), int(-100), (-10, 10));
            let gens = enumerate(&p, &slice).unwrap();
            assert!(gens.iter().all(|g| g.sphere == 0));
            // one generator per critical point and degree
            assert_eq!(gens.len(), 3);
        }
    }
}
