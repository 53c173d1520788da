//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! [scenario]
//! name = cp1
//! seed = 42
//!
//! [bundle]
//! dim_M = 2
//! sphericity = spherical
//! nu = 1
//! c = 2
//! tau = 1/2
//! crit = q0 0 1/10
//! crit = q2 2 1/5
//!
//! [differentials]
//! d = 2 (q0,1,0,-) (q2,1,0,+)
//!
//! [cycles]
//! xi = chain degree=3 floor=-1 : (q0,0,0,+)
//! bd = boundary degree=3 floor=-1 : (q0,1,0,-)
//! rb = random-boundary degree=3 floor=-4 levels=-12:12 size=4
//! ```
//!
//! Degrees are doubled (`twice_mu`, odd). Instead of explicit `d` entries the
//! differentials section may hold a single line
//! `random = LINKS degrees=LO:HI levels=LO:HI floor=P/Q ceiling=P/Q`.
//! `boundary` cycles are `d` of the listed chain, which has degree
//! `degree + 2`; `random-boundary` cycles draw that chain from the
//! scenario seed. The term list follows a ` : ` separator.

use std::path::Path;

use crate::bundle::{BundleParams, CritPoint, Sphericity};
use crate::chain::Chain;
use crate::differential::{load_table, FilteredDifferential, HigherDifferentialEntry};
use crate::error::{Error, Result};
use crate::generator::{action, parse_generator, Generator, Grading, Slice};
use crate::random::{random_admissible_table, random_boundary, rng_from_seed, RandomTableSpec};
use crate::rational::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableSource {
    Explicit(Vec<HigherDifferentialEntry>),
    Random(RandomTableSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleKind {
    Chain(Vec<Generator>),
    Boundary(Vec<Generator>),
    RandomBoundary {
        levels: (i64, i64),
        ceiling: Option<Rational>,
        size: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSpec {
    pub name: String,
    pub line: usize,
    pub degree: Grading,
    pub floor: Rational,
    pub kind: CycleKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub params: BundleParams,
    pub table: TableSource,
    pub cycles: Vec<CycleSpec>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Scenario,
    Bundle,
    Differentials,
    Cycles,
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    value: &'a str,
}

fn parse_int<T: std::str::FromStr>(no: usize, what: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(no, format!("invalid {what} `{}`", s.trim())))
}

fn parse_rat(no: usize, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|m| Error::parse(no, m))
}

fn parse_range(no: usize, s: &str) -> Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::parse(no, format!("range `{s}` must be LO:HI")))?;
    Ok((
        parse_int(no, "range bound", lo)?,
        parse_int(no, "range bound", hi)?,
    ))
}

/// Splits `a=1 b=2` into pairs.
fn options(no: usize, s: &str) -> Result<Vec<(&str, &str)>> {
    s.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .ok_or_else(|| Error::parse(no, format!("expected key=value, got `{tok}`")))
        })
        .collect()
}

/// Parenthesised generators separated by whitespace or `+`; `0` is empty.
fn parse_terms(params: &BundleParams, no: usize, s: &str) -> Result<Vec<Generator>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    if rest == "0" {
        return Ok(out);
    }
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == '+');
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return Err(Error::parse(
                no,
                format!("expected a generator at `{rest}`"),
            ));
        }
        let end = rest
            .find(')')
            .ok_or_else(|| Error::parse(no, "unterminated generator"))?;
        out.push(parse_generator(params, &rest[..=end]).map_err(|m| Error::parse(no, m))?);
        rest = &rest[end + 1..];
    }
    Ok(out)
}

fn parse_bundle(lines: &[Line]) -> Result<BundleParams> {
    let mut dim = None;
    let mut sph: Option<(usize, String)> = None;
    let mut nu = None;
    let mut c = None;
    let mut tau = None;
    let mut crit = Vec::new();
    for l in lines {
        match l.key {
            "dim_M" => dim = Some(parse_int::<i64>(l.no, "dim_M", l.value)?),
            "sphericity" => sph = Some((l.no, l.value.to_string())),
            "nu" => nu = Some(parse_int::<i64>(l.no, "nu", l.value)?),
            "c" => c = Some(parse_int::<i64>(l.no, "c", l.value)?),
            "tau" => tau = Some(parse_rat(l.no, l.value)?),
            "crit" => {
                let f: Vec<&str> = l.value.split_whitespace().collect();
                if f.len() != 3 {
                    return Err(Error::parse(l.no, "crit needs `id index value`"));
                }
                crit.push(CritPoint::new(
                    f[0],
                    parse_int(l.no, "Morse index", f[1])?,
                    parse_rat(l.no, f[2])?,
                ));
            }
            other => return Err(Error::parse(l.no, format!("unknown bundle key `{other}`"))),
        }
    }
    let missing = |k: &str| Error::parse(0, format!("bundle section lacks `{k}`"));
    let sphericity = match sph.as_ref().map(|(n, s)| (*n, s.as_str())) {
        Some((_, "aspherical")) => {
            if nu.is_some() || c.is_some() {
                return Err(Error::parse(0, "aspherical bundle takes no `nu` or `c`"));
            }
            Sphericity::Aspherical
        }
        Some((_, "spherical")) | None => Sphericity::Spherical {
            nu: nu.ok_or_else(|| missing("nu"))?,
            c: c.ok_or_else(|| missing("c"))?,
        },
        Some((n, other)) => return Err(Error::parse(n, format!("unknown sphericity `{other}`"))),
    };
    Ok(BundleParams::new(
        dim.ok_or_else(|| missing("dim_M"))?,
        sphericity,
        tau.ok_or_else(|| missing("tau"))?,
        crit,
    ))
}

fn parse_table(params: &BundleParams, lines: &[Line]) -> Result<TableSource> {
    let mut entries = Vec::new();
    let mut random = None;
    for l in lines {
        match l.key {
            "d" => {
                let (i, rest) = l
                    .value
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::parse(l.no, "entry needs `i (source) (target)`"))?;
                let i: i64 = parse_int(l.no, "filtration drop", i)?;
                let gens = parse_terms(params, l.no, rest)?;
                if gens.len() != 2 {
                    return Err(Error::parse(
                        l.no,
                        "entry needs exactly a source and a target",
                    ));
                }
                entries.push(HigherDifferentialEntry::new(i, gens[0], gens[1]));
            }
            "random" => {
                let (n, rest) = l
                    .value
                    .split_once(char::is_whitespace)
                    .unwrap_or((l.value, ""));
                let mut spec = RandomTableSpec {
                    links: parse_int(l.no, "link count", n)?,
                    degrees: (-9, 9),
                    levels: (-12, 12),
                    floor: Rational::from_integer(-6),
                    ceiling: Rational::from_integer(6),
                };
                for (k, v) in options(l.no, rest)? {
                    match k {
                        "degrees" => spec.degrees = parse_range(l.no, v)?,
                        "levels" => spec.levels = parse_range(l.no, v)?,
                        "floor" => spec.floor = parse_rat(l.no, v)?,
                        "ceiling" => spec.ceiling = parse_rat(l.no, v)?,
                        other => {
                            return Err(Error::parse(l.no, format!("unknown option `{other}`")))
                        }
                    }
                }
                if random.replace(spec).is_some() {
                    return Err(Error::parse(l.no, "only one `random` line is allowed"));
                }
            }
            other => {
                return Err(Error::parse(
                    l.no,
                    format!("unknown differentials key `{other}`"),
                ))
            }
        }
    }
    match random {
        Some(spec) if entries.is_empty() => Ok(TableSource::Random(spec)),
        Some(_) => Err(Error::parse(
            lines.first().map_or(0, |l| l.no),
            "`random` cannot be combined with explicit entries",
        )),
        None => Ok(TableSource::Explicit(entries)),
    }
}

fn parse_cycle(params: &BundleParams, l: &Line) -> Result<CycleSpec> {
    let (head, terms) = match l.value.split_once(" : ") {
        Some((h, t)) => (h, Some(t)),
        None => match l.value.strip_suffix(" :") {
            Some(h) => (h, Some("")),
            None => (l.value, None),
        },
    };
    let (kind, rest) = head
        .trim()
        .split_once(char::is_whitespace)
        .unwrap_or((head.trim(), ""));
    let mut degree = None;
    let mut floor = None;
    let mut levels = None;
    let mut ceiling = None;
    let mut size = None;
    for (k, v) in options(l.no, rest)? {
        match k {
            "degree" => {
                let d: i64 = parse_int(l.no, "degree", v)?;
                degree = Some(Grading::new(d).map_err(|e| Error::parse(l.no, e.to_string()))?);
            }
            "floor" => floor = Some(parse_rat(l.no, v)?),
            "levels" => levels = Some(parse_range(l.no, v)?),
            "ceiling" => ceiling = Some(parse_rat(l.no, v)?),
            "size" => size = Some(parse_int(l.no, "size", v)?),
            other => return Err(Error::parse(l.no, format!("unknown option `{other}`"))),
        }
    }
    let degree = degree.ok_or_else(|| Error::parse(l.no, "cycle needs `degree=`"))?;
    let floor = floor.ok_or_else(|| Error::parse(l.no, "cycle needs `floor=`"))?;
    let need_terms = || {
        terms
            .map(|t| parse_terms(params, l.no, t))
            .unwrap_or_else(|| Err(Error::parse(l.no, "cycle needs `: terms`")))
    };
    let kind = match kind {
        "chain" => CycleKind::Chain(need_terms()?),
        "boundary" => CycleKind::Boundary(need_terms()?),
        "random-boundary" => CycleKind::RandomBoundary {
            levels: levels.ok_or_else(|| Error::parse(l.no, "random-boundary needs `levels=`"))?,
            ceiling,
            size: size.unwrap_or(4),
        },
        other => return Err(Error::parse(l.no, format!("unknown cycle kind `{other}`"))),
    };
    Ok(CycleSpec {
        name: l.key.to_string(),
        line: l.no,
        degree,
        floor,
        kind,
    })
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario> {
        let mut section = Section::None;
        let mut meta = Vec::new();
        let mut bundle = Vec::new();
        let mut diffs = Vec::new();
        let mut cycles = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = match name.trim() {
                    "scenario" => Section::Scenario,
                    "bundle" => Section::Bundle,
                    "differentials" => Section::Differentials,
                    "cycles" => Section::Cycles,
                    other => return Err(Error::parse(no, format!("unknown section `{other}`"))),
                };
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(no, "expected `key = value`"))?;
            let l = Line {
                no,
                key: key.trim(),
                value: value.trim(),
            };
            match section {
                Section::None => return Err(Error::parse(no, "line outside any section")),
                Section::Scenario => meta.push(l),
                Section::Bundle => bundle.push(l),
                Section::Differentials => diffs.push(l),
                Section::Cycles => cycles.push(l),
            }
        }

        let mut name = String::from("unnamed");
        let mut seed = 0u64;
        for l in &meta {
            match l.key {
                "name" => name = l.value.to_string(),
                "seed" => seed = parse_int(l.no, "seed", l.value)?,
                other => {
                    return Err(Error::parse(
                        l.no,
                        format!("unknown scenario key `{other}`"),
                    ))
                }
            }
        }
        let params = parse_bundle(&bundle)?;
        let table = parse_table(&params, &diffs)?;
        let cycles = cycles
            .iter()
            .map(|l| parse_cycle(&params, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scenario {
            name,
            seed,
            params,
            table,
            cycles,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        Scenario::parse(&std::fs::read_to_string(path)?)
    }

    /// Validated differential; random tables are drawn from `seed`.
    pub fn differential(&self, seed: u64) -> Result<FilteredDifferential> {
        match &self.table {
            TableSource::Explicit(entries) => load_table(&self.params, entries),
            TableSource::Random(spec) => random_admissible_table(&self.params, spec, seed),
        }
    }

    pub fn cycle_spec(&self, name: &str) -> Option<&CycleSpec> {
        self.cycles.iter().find(|c| c.name == name)
    }

    /// Materialises a named cycle; random cycles are drawn from `seed` and
    /// the cycle's position in the file.
    pub fn cycle(&self, d: &FilteredDifferential, name: &str, seed: u64) -> Result<Chain> {
        let (pos, spec) = self
            .cycles
            .iter()
            .enumerate()
            .find(|(_, c)| c.name == name)
            .ok_or_else(|| Error::parse(0, format!("no cycle named `{name}`")))?;
        let params = &self.params;
        match &spec.kind {
            CycleKind::Chain(terms) => {
                Chain::new(params, spec.degree, spec.floor, terms.iter().copied())
            }
            CycleKind::Boundary(terms) => {
                let eta = Chain::new(
                    params,
                    spec.degree.offset(2),
                    spec.floor,
                    terms.iter().copied(),
                )?;
                let xi = d.boundary_terms(eta.terms());
                let floor = xi
                    .iter()
                    .map(|g| action(params, g))
                    .min()
                    .map_or(spec.floor, |m| m.min(spec.floor));
                Chain::new(params, spec.degree, floor, xi)
            }
            CycleKind::RandomBoundary {
                levels,
                ceiling,
                size,
            } => {
                let mut rng = rng_from_seed(seed.wrapping_add(pos as u64 + 1));
                let mut slice = Slice::new(spec.degree.offset(2), spec.floor, *levels);
                if let Some(c) = ceiling {
                    slice = slice.with_ceiling(*c);
                }
                Ok(random_boundary(d, &mut rng, &slice, *size)?.1)
            }
        }
    }
}
