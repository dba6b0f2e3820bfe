//! Pre-run diagnostics: geometry sanity and dipole-limit validity over every
//! evaluation point of a scenario.

use std::collections::BTreeMap;

use pointrad_core::greens::Environment;
use pointrad_core::materials::{dipole_validity, ParticleSpec, Verdict};
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::run::points;

/// Worst ratio of one dipole check across all evaluation points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub particle: usize,
    pub check: String,
    pub worst_ratio: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub geometry: Vec<String>,
    pub validity: Vec<CheckSummary>,
    pub verdict: Verdict,
}

impl Report {
    pub fn schema_error(message: String) -> Self {
        Report {
            schema: message,
            geometry: Vec::new(),
            validity: Vec::new(),
            verdict: Verdict::Fail,
        }
    }
}

fn check_geometry(env: &Environment, particles: &[ParticleSpec]) -> Vec<String> {
    let mut out = Vec::new();
    if let Err(e) = env.validate() {
        out.push(e.to_string());
    }
    for (i, p) in particles.iter().enumerate() {
        if let Err(e) = p.validate() {
            out.push(format!("particle {i}: {e}"));
        }
        if let Err(e) = env.check_point(&p.pos()) {
            out.push(format!("particle {i}: {e}"));
        }
    }
    if particles.len() == 2 && particles[0].pos() == particles[1].pos() {
        out.push("the two particles share a position".into());
    }
    out
}

/// Builds the report for a configuration that parsed.
pub fn report(cfg: &ScenarioConfig) -> Report {
    let mut geometry = Vec::new();
    let mut worst: BTreeMap<(usize, String), (f64, Verdict)> = BTreeMap::new();
    for pt in points(cfg) {
        for issue in check_geometry(&pt.environment, &pt.particles) {
            let msg = format!("{}: {issue}", pt.series);
            if !geometry.contains(&msg) {
                geometry.push(msg);
            }
        }
        for (i, p) in pt.particles.iter().enumerate() {
            let mut distances = Vec::new();
            if let Some(d) = pt.environment.distance_to_surface(&p.pos()) {
                distances.push(d);
            }
            for (j, q) in pt.particles.iter().enumerate() {
                if j != i {
                    distances.push((p.pos() - q.pos()).norm());
                }
            }
            for c in dipole_validity(p, &distances).checks {
                let name = if c.name.starts_with("radius/distance") {
                    "radius/distance".to_string()
                } else {
                    c.name
                };
                let entry = worst.entry((i, name)).or_insert((c.ratio, c.verdict));
                if c.ratio > entry.0 {
                    *entry = (c.ratio, c.verdict);
                }
            }
        }
    }
    let validity: Vec<CheckSummary> = worst
        .into_iter()
        .map(|((particle, check), (worst_ratio, verdict))| CheckSummary {
            particle,
            check,
            worst_ratio,
            verdict,
        })
        .collect();
    let mut verdict = validity.iter().map(|c| c.verdict).max().unwrap_or(Verdict::Pass);
    if !geometry.is_empty() {
        verdict = Verdict::Fail;
    }
    Report {
        schema: "ok".into(),
        geometry,
        validity,
        verdict,
    }
}
