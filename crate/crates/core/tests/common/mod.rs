#![allow(dead_code)]

use std::path::PathBuf;

use num_rational::Ratio;
use rfh_core::bundle::{BundleParams, CritPoint, Sphericity};
use rfh_core::Scenario;

pub fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

pub fn scenario(name: &str) -> Scenario {
    Scenario::load(scenario_dir().join(format!("{name}.scn"))).expect("golden scenario parses")
}

pub fn golden_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(scenario_dir())
        .expect("scenario directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            if p.extension()? != "scn" {
                return None;
            }
            Some(p.file_stem()?.to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

pub fn cp1() -> BundleParams {
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

pub fn aspherical4() -> BundleParams {
    BundleParams::new(
        4,
        Sphericity::Aspherical,
        Ratio::new(1, 3),
        vec![
            CritPoint::new("a0", 0, Ratio::new(1, 10)),
            CritPoint::new("b1", 1, Ratio::new(3, 10)),
            CritPoint::new("c2", 2, Ratio::new(1, 2)),
            CritPoint::new("d3", 3, Ratio::new(7, 10)),
            CritPoint::new("e4", 4, Ratio::new(9, 10)),
        ],
    )
}

pub fn very_negative() -> BundleParams {
    BundleParams::new(
        2,
        Sphericity::Spherical { nu: 1, c: -1 },
        Ratio::new(1, 4),
        vec![
            CritPoint::new("q0", 0, Ratio::new(1, 10)),
            CritPoint::new("q2", 2, Ratio::new(9, 10)),
        ],
    )
}

pub fn c0() -> BundleParams {
    BundleParams::new(
        2,
        Sphericity::Spherical { nu: 1, c: 0 },
        Ratio::new(1, 2),
        vec![
            CritPoint::new("q0", 0, Ratio::new(1, 10)),
            CritPoint::new("q2", 2, Ratio::new(1, 5)),
        ],
    )
}

pub fn c1() -> BundleParams {
    BundleParams::new(
        2,
        Sphericity::Spherical { nu: 2, c: 1 },
        Ratio::new(1, 2),
        vec![
            CritPoint::new("q0", 0, Ratio::new(1, 10)),
            CritPoint::new("q2", 2, Ratio::new(1, 5)),
        ],
    )
}
