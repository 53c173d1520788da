//! Text reports behind the `rfh` binary. Every command is a pure function of
//! its inputs, so reports are byte-identical across runs.

use std::fmt::Write as _;

use crate::bundle::{
    is_semi_positive, minimal_chern_number, theorem_case, validate, CaseTag, Sphericity,
};
use crate::chain::{scalar_shift, split_by_level, Chain};
use crate::differential::{apply_d0, apply_total, d0_primitive, FilteredDifferential};
use crate::error::{Error, Result};
use crate::generator::{action, enumerate, eta, grading, level, Generator, Grading, Sign, Slice};
use crate::random::{random_boundary, random_chain, rng_from_seed, RandomTableSpec};
use crate::rational::{int, Rational};
use crate::scenario::{Scenario, TableSource};
use crate::vanishing::{find_primitive, level_floor, PrimitiveResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESIDUAL: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub code: i32,
}

impl Report {
    fn new(text: String, code: i32) -> Self {
        Report { text, code }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) => EXIT_PARSE,
        _ => EXIT_INVALID,
    }
}

/// Report for an error raised before a command could produce output.
pub fn error_report(e: &Error) -> Report {
    Report::new(format!("error: {e}\n"), exit_code(e))
}

fn list(params: &crate::bundle::BundleParams, gens: &[Generator]) -> String {
    if gens.is_empty() {
        return "none".into();
    }
    gens.iter()
        .map(|g| g.display(params).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn cmd_validate(scenario: &Scenario, seed: u64) -> Report {
    let params = &scenario.params;
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", scenario.name);
    let report = validate(params);
    for v in &report.violations {
        let _ = writeln!(out, "violation: {v}");
    }
    for a in &report.assumptions {
        let _ = writeln!(out, "assumption: {a}");
    }
    if !report.is_valid() {
        let _ = writeln!(out, "invalid; bundle parameters rejected");
        return Report::new(out, EXIT_INVALID);
    }
    let case = theorem_case(params);
    let sp = is_semi_positive(params);
    let _ = writeln!(out, "case: {}", case.tag);
    if let Some(holds) = case.action_lemma_holds {
        let _ = writeln!(
            out,
            "action/level lemma: {}",
            if holds { "holds" } else { "fails" }
        );
    }
    match scenario.differential(seed) {
        Ok(d) => {
            let _ = writeln!(
                out,
                "table: {} entries; d^2 = 0 on {} window generators",
                d.entries().len(),
                d.window_size()
            );
        }
        Err(Error::TableRejected(r)) => {
            let _ = writeln!(out, "{r}");
            let _ = writeln!(out, "invalid; differential table rejected");
            return Report::new(out, EXIT_INVALID);
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return Report::new(out, exit_code(&e));
        }
    }
    let sp_text = if sp.holds {
        format!("semi-positive ({})", sp.reason())
    } else {
        "not semi-positive".to_string()
    };
    let n_e = minimal_chern_number(params).map_or("n/a".to_string(), |n| n.to_string());
    let applicable = case.tag != CaseTag::NotApplicable;
    let _ = writeln!(
        out,
        "{}; case={}; {}; N_E={}",
        if applicable {
            "valid"
        } else {
            "valid (theorem not applicable)"
        },
        case.tag,
        sp_text,
        n_e
    );
    Report::new(out, EXIT_OK)
}

pub fn cmd_enumerate(
    scenario: &Scenario,
    degree: i64,
    floor: Rational,
    window: (i64, i64),
    ceiling: Option<Rational>,
) -> Result<Report> {
    let params = &scenario.params;
    let mut slice = Slice::new(Grading::new(degree)?, floor, window);
    if let Some(c) = ceiling {
        slice = slice.with_ceiling(c);
    }
    let gens = enumerate(params, &slice)?;
    let mut out = String::from("generator | action | twice_mu | level | eta\n");
    for g in &gens {
        let _ = writeln!(
            out,
            "{} | {} | {} | {} | {}",
            g.display(params),
            action(params, g),
            grading(params, g),
            level(params, g),
            eta(params, g)
        );
    }
    Ok(Report::new(out, EXIT_OK))
}

fn load(scenario: &Scenario, cycle: &str, seed: u64) -> Result<(FilteredDifferential, Chain)> {
    let d = scenario.differential(seed)?;
    let xi = scenario.cycle(&d, cycle, seed)?;
    Ok((d, xi))
}

pub fn cmd_diff(scenario: &Scenario, cycle: &str, seed: u64) -> Report {
    let (d, xi) = match load(scenario, cycle, seed) {
        Ok(v) => v,
        Err(e) => return error_report(&e),
    };
    let params = &scenario.params;
    let image = apply_total(&d, &xi);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} [degree {}, floor {}] = {}",
        cycle,
        xi.degree(),
        xi.floor(),
        xi.display(params)
    );
    let _ = writeln!(out, "d {} = {}", cycle, image.chain.display(params));
    for (l, part) in split_by_level(params, &image.chain).iter().rev() {
        let _ = writeln!(out, "  level {}: {}", l, part.display(params));
    }
    let _ = writeln!(out, "dropped below floor: {}", list(params, &image.dropped));
    Report::new(out, EXIT_OK)
}

fn write_primitive(out: &mut String, scenario: &Scenario, r: &PrimitiveResult) {
    let params = &scenario.params;
    for run in &r.runs {
        let class = run.class.map_or(String::new(), |a| format!("class {a}: "));
        let solved = run
            .lowest_solved
            .map_or("nothing to solve".to_string(), |l| {
                format!("lowest solved {l}")
            });
        let _ = writeln!(
            out,
            "run: {}levels {} down to {} ({})",
            class, run.top, run.stop, solved
        );
    }
    for (key, part) in r.parts.iter().rev() {
        let label = match key.class {
            Some(a) => format!("theta[a={}]_{}", a, key.level),
            None => format!("theta_{}", key.level),
        };
        let _ = writeln!(out, "{}: {}", label, part.display(params));
    }
    let _ = writeln!(out, "theta = {}", r.theta.display(params));
    let _ = writeln!(
        out,
        "theta dropped below floor: {}",
        list(params, &r.dropped)
    );
    for b in &r.level_bounds {
        let _ = writeln!(
            out,
            "level bound: degree {} floor {}: l_min = {} ({} on levels {}:{})",
            b.degree,
            b.floor,
            b.l_min,
            if b.certified {
                "certified"
            } else {
                "NOT certified"
            },
            b.window.0,
            b.window.1
        );
    }
    if let Some(g) = r.gap {
        let max = g.max_gap.map_or("none".to_string(), |m| m.to_string());
        let _ = writeln!(
            out,
            "gap constant: C = {}; max gap {} over {} pairs ({})",
            g.constant,
            max,
            g.pairs,
            if g.holds { "holds" } else { "fails" }
        );
    }
    if let Some(c) = r.class_bound {
        let _ = writeln!(
            out,
            "class bound: at most {} cycle terms and {} primitive terms per class vs dim M/2 = {} ({})",
            c.max_xi_terms,
            c.max_theta_terms,
            c.bound,
            if c.holds { "holds" } else { "fails" }
        );
    }
    let _ = writeln!(out, "residual = {}", r.residual.display(params));
    let _ = writeln!(
        out,
        "residual dropped below floor: {}",
        list(params, &r.residual_dropped)
    );
}

pub fn cmd_primitive(scenario: &Scenario, cycle: &str, seed: u64) -> Report {
    let (d, xi) = match load(scenario, cycle, seed) {
        Ok(v) => v,
        Err(e) => return error_report(&e),
    };
    let params = &scenario.params;
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {} (seed {})", scenario.name, seed);
    let _ = writeln!(out, "case: {}", d.case().tag);
    let _ = writeln!(out, "table: {} entries", d.entries().len());
    let _ = writeln!(
        out,
        "{} [degree {}, floor {}] = {}",
        cycle,
        xi.degree(),
        xi.floor(),
        xi.display(params)
    );
    match find_primitive(&d, &xi) {
        Ok(r) => {
            write_primitive(&mut out, scenario, &r);
            if r.is_success() {
                let _ = writeln!(out, "result: success");
                Report::new(out, EXIT_OK)
            } else {
                let _ = writeln!(out, "result: residual nonzero");
                Report::new(out, EXIT_RESIDUAL)
            }
        }
        Err(Error::NotClosed { boundary }) => {
            let _ = writeln!(out, "rejected: {cycle} is not closed");
            let _ = writeln!(out, "d {} = {}", cycle, boundary.display(params));
            Report::new(out, EXIT_INVALID)
        }
        Err(e) => {
            let _ = writeln!(out, "rejected: {e}");
            Report::new(out, exit_code(&e))
        }
    }
}

fn check_window(scenario: &Scenario) -> RandomTableSpec {
    match &scenario.table {
        TableSource::Random(spec) => *spec,
        TableSource::Explicit(_) => RandomTableSpec {
            links: 0,
            degrees: (-9, 9),
            levels: (-12, 12),
            floor: int(-6),
            ceiling: int(6),
        },
    }
}

fn check_line(out: &mut String, ok: bool, name: &str, detail: String) -> bool {
    let _ = writeln!(
        out,
        "{} {}: {}",
        if ok { "ok  " } else { "FAIL" },
        name,
        detail
    );
    ok
}

/// Runs the property suite on the scenario's window.
pub fn cmd_check(scenario: &Scenario, seed: u64) -> Report {
    let params = &scenario.params;
    let d = match scenario.differential(seed) {
        Ok(d) => d,
        Err(e) => return error_report(&e),
    };
    let w = check_window(scenario);
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {} (seed {})", scenario.name, seed);
    let mut all_ok = true;

    let mut gens = Vec::new();
    for k in w.degrees.0..=w.degrees.1 {
        if k.rem_euclid(2) == 0 {
            continue;
        }
        let slice =
            Slice::new(Grading::new(k).expect("odd"), w.floor, w.levels).with_ceiling(w.ceiling);
        match enumerate(params, &slice) {
            Ok(g) => gens.extend(g),
            Err(e) => return error_report(&e),
        }
    }
    let mut d0_ok = true;
    for g in &gens {
        let x = Chain::single(params, *g);
        d0_ok &= apply_d0(params, &apply_d0(params, &x)).is_empty();
        if g.sign == Sign::Plus {
            let back = d0_primitive(params, &x).map(|p| apply_d0(params, &p));
            d0_ok &= matches!(back, Ok(c) if c == x);
        }
    }
    all_ok &= check_line(
        &mut out,
        d0_ok,
        "d0",
        format!("d0 d0 = 0 and d0 prim = id on {} generators", gens.len()),
    );

    let mut rng = rng_from_seed(seed);
    let trials = 20;
    let mut sq_ok = true;
    let mut shift_ok = true;
    let mut prim_ok = true;
    let mut prim_err = None;
    for t in 0..trials {
        let k = 2 * (t as i64 % ((w.degrees.1 - w.degrees.0) / 2).max(1)) + w.degrees.0;
        let k = if k.rem_euclid(2) == 0 { k + 1 } else { k };
        let slice =
            Slice::new(Grading::new(k).expect("odd"), w.floor, w.levels).with_ceiling(w.ceiling);
        let x = match random_chain(params, &mut rng, &slice, 5) {
            Ok(x) => x,
            Err(e) => return error_report(&e),
        };
        let once = d.boundary_terms(x.terms());
        sq_ok &= d.boundary_terms(&once).is_empty();
        if let Sphericity::Spherical { .. } = params.sphericity {
            let a0 = 1 + (t as i64 % 3);
            let lhs = scalar_shift(params, &apply_total(&d, &x).chain, a0);
            let rhs = scalar_shift(params, &x, a0).map(|s| apply_total(&d, &s).chain);
            shift_ok &= matches!((lhs, rhs), (Ok(l), Ok(r)) if l.terms() == r.terms());
        }
        if d.case().tag != CaseTag::NotApplicable {
            match random_boundary(&d, &mut rng, &slice, 4)
                .and_then(|(_, xi)| find_primitive(&d, &xi))
            {
                Ok(r) => prim_ok &= r.is_success(),
                Err(e) => {
                    prim_ok = false;
                    prim_err.get_or_insert(e.to_string());
                }
            }
        }
    }
    all_ok &= check_line(
        &mut out,
        sq_ok,
        "d^2",
        format!("d d x = 0 on {trials} random chains"),
    );
    if let Sphericity::Spherical { .. } = params.sphericity {
        all_ok &= check_line(
            &mut out,
            shift_ok,
            "shift",
            format!("d commutes with Novikov shifts on {trials} random chains"),
        );
    }
    if d.case().tag != CaseTag::NotApplicable {
        let detail = match prim_err {
            Some(e) => format!("error: {e}"),
            None => format!("d theta = xi on {trials} random boundaries"),
        };
        all_ok &= check_line(&mut out, prim_ok, "primitive", detail);
    }
    let lemma = match params.c() {
        None | Some(0) => true,
        Some(c) => c >= 1 && int(c - 1) * params.tau < int(1),
    };
    if lemma {
        let mut certified = 0;
        let mut total = 0;
        for k in (w.degrees.0..=w.degrees.1).filter(|k| k.rem_euclid(2) == 1) {
            total += 1;
            if let Ok(b) = level_floor(params, Grading::new(k).expect("odd"), w.floor) {
                certified += b.certified as usize;
            }
        }
        all_ok &= check_line(
            &mut out,
            certified == total,
            "level bound",
            format!("{certified}/{total} degrees certified at floor {}", w.floor),
        );
    }
    let _ = writeln!(
        out,
        "{}",
        if all_ok {
            "all checks passed"
        } else {
            "some checks failed"
        }
    );
    Report::new(out, if all_ok { EXIT_OK } else { EXIT_RESIDUAL })
}
