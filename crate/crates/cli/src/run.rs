//! Scenario evaluation: expands a configuration into evaluation points and
//! computes one CSV row per point.

use std::time::Instant;

use pointrad_core::greens::Environment;
use pointrad_core::materials::ParticleSpec;
use pointrad_core::transport::{
    convergence_study, hr, hr_isolated_sphere, hr_vacuum, ht, ht_vacuum, QuadratureConfig, TransferResult,
};
use pointrad_core::Error;
use rayon::prelude::*;

use crate::config::{Mode, Quantity, ScenarioConfig, SweepParameter, SweepSpec};

/// Value of the leading CSV column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    None,
    Real(f64),
    Order(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Quadrature tolerance not met; the row holds the best estimate.
    AccuracyNotMet,
    /// Multipole sum hit its order cap; no value.
    LCapReached,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::AccuracyNotMet => "accuracy_not_met",
            Status::LCapReached => "l_cap_reached",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub series: String,
    pub parameter: Param,
    /// W.
    pub value: f64,
    /// Per particle volume (HR) or volume product (HT).
    pub normalized: f64,
    /// Vacuum value (HR, HT rows) or converged value (convergence rows), W.
    pub reference: f64,
    /// `value / reference`.
    pub ratio: f64,
    /// Estimated absolute quadrature error, W.
    pub error: f64,
    pub max_l: usize,
    pub wall_time: f64,
    pub status: Status,
}

/// One evaluation: particles and environment after applying the sweep value.
#[derive(Debug, Clone)]
pub struct Point {
    pub series: String,
    pub parameter: Param,
    pub particles: Vec<ParticleSpec>,
    pub environment: Environment,
}

fn set_radius(env: &mut Environment, r: f64) {
    match env {
        Environment::Sphere { radius, .. }
        | Environment::PointSphere { radius, .. }
        | Environment::MirrorCavity { radius, .. } => *radius = r,
        _ => {}
    }
}

fn center(env: &Environment) -> [f64; 3] {
    match *env {
        Environment::Sphere { center, .. }
        | Environment::PointSphere { center, .. }
        | Environment::MirrorCavity { center, .. } => center,
        _ => [0.0; 3],
    }
}

fn apply(sweep: &SweepSpec, value: f64, particles: &mut [ParticleSpec], env: &mut Environment) {
    match sweep.parameter {
        SweepParameter::SphereRadius => {
            set_radius(env, value);
            if let Some(gap) = sweep.gap {
                let c = center(env);
                particles[0].position = [c[0], c[1], c[2] - (value + gap)];
                particles[1].position = [c[0], c[1], c[2] + (value + gap)];
            }
        }
        SweepParameter::PlateDistance => particles[0].position[2] = value,
        SweepParameter::Separation => {
            let p = particles[0].position;
            particles[1].position = [p[0], p[1], p[2] + value];
        }
        SweepParameter::Temperature => particles[0].temperature = value,
    }
}

/// Evaluation points in output order: series-major, then grid order.
pub fn points(cfg: &ScenarioConfig) -> Vec<Point> {
    let mut out = Vec::new();
    for s in cfg.series() {
        match (&cfg.mode, &cfg.sweep) {
            (Mode::Sweep, Some(sweep)) => {
                for v in sweep.grid.points() {
                    let mut particles = cfg.particles.clone();
                    let mut environment = s.environment;
                    apply(sweep, v, &mut particles, &mut environment);
                    out.push(Point {
                        series: s.label.clone(),
                        parameter: Param::Real(v),
                        particles,
                        environment,
                    });
                }
            }
            _ => out.push(Point {
                series: s.label.clone(),
                parameter: Param::None,
                particles: cfg.particles.clone(),
                environment: s.environment,
            }),
        }
    }
    out
}

/// Value, error, order and status of an integral; accuracy shortfalls keep
/// the best estimate, other errors propagate.
fn settle(r: Result<TransferResult, Error>) -> Result<(f64, f64, usize, Status), Error> {
    match r {
        Ok(r) => Ok((r.power, r.error, r.max_l, Status::Ok)),
        Err(Error::Accuracy { estimate, error }) => Ok((estimate, error, 0, Status::AccuracyNotMet)),
        Err(Error::NonConvergence { .. }) => Ok((f64::NAN, f64::NAN, 0, Status::LCapReached)),
        Err(e) => Err(e),
    }
}

fn worse(a: Status, b: Status) -> Status {
    match (a, b) {
        (Status::LCapReached, _) | (_, Status::LCapReached) => Status::LCapReached,
        (Status::AccuracyNotMet, _) | (_, Status::AccuracyNotMet) => Status::AccuracyNotMet,
        _ => Status::Ok,
    }
}

fn evaluate(point: &Point, quantity: Quantity, quad: &QuadratureConfig) -> Result<Row, Error> {
    let started = Instant::now();
    let ps = &point.particles;
    let (result, reference, volume) = match quantity {
        Quantity::Hr => (
            hr(&ps[0], &point.environment, quad),
            hr_vacuum(&ps[0], quad),
            ps[0].volume(),
        ),
        Quantity::Ht => (
            ht(&ps[0], &ps[1], &point.environment, quad),
            ht_vacuum(&ps[0], &ps[1], quad),
            ps[0].volume() * ps[1].volume(),
        ),
    };
    let (value, error, max_l, status) = settle(result)?;
    let (reference, _, _, ref_status) = settle(reference)?;
    Ok(Row {
        series: point.series.clone(),
        parameter: point.parameter,
        value,
        normalized: value / volume,
        reference,
        ratio: value / reference,
        error,
        max_l,
        wall_time: started.elapsed().as_secs_f64(),
        status: worse(status, ref_status),
    })
}

fn convergence_rows(cfg: &ScenarioConfig, point: &Point) -> Result<Vec<Row>, Error> {
    let conv = cfg.convergence.as_ref().expect("validated convergence section");
    let started = Instant::now();
    let ps = &point.particles;
    let (points, full) = convergence_study(&ps[0], &ps[1], &point.environment, &conv.l_max, &cfg.quadrature)?;
    let volume = ps[0].volume() * ps[1].volume();
    let wall = started.elapsed().as_secs_f64();
    let mut rows: Vec<Row> = points
        .iter()
        .map(|p| Row {
            series: point.series.clone(),
            parameter: Param::Order(p.l_max),
            value: p.power,
            normalized: p.power / volume,
            reference: p.converged,
            ratio: p.normalized,
            error: full.error,
            max_l: p.l_max,
            wall_time: wall,
            status: Status::Ok,
        })
        .collect();
    if let (Some(l_iso), Environment::Sphere { radius, material, .. }) =
        (conv.isolated_sphere_l_max, point.environment)
    {
        let started = Instant::now();
        let iso = hr_isolated_sphere(radius, &material, ps[0].temperature, l_iso, &cfg.quadrature)?;
        let wall = started.elapsed().as_secs_f64();
        let volume = 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3);
        rows.extend(iso.partial.iter().enumerate().map(|(i, &v)| Row {
            series: format!("{}/isolated_sphere", point.series),
            parameter: Param::Order(i + 1),
            value: v,
            normalized: v / volume,
            reference: iso.total.power,
            ratio: v / iso.total.power,
            error: iso.total.error,
            max_l: i + 1,
            wall_time: wall,
            status: Status::Ok,
        }));
    }
    Ok(rows)
}

/// Evaluates every point concurrently; rows come back in point order.
pub fn execute(cfg: &ScenarioConfig) -> Result<Vec<Row>, Error> {
    let pts = points(cfg);
    if cfg.mode == Mode::Convergence {
        let per_series: Vec<Vec<Row>> = pts
            .iter()
            .map(|p| convergence_rows(cfg, p))
            .collect::<Result<_, _>>()?;
        return Ok(per_series.into_iter().flatten().collect());
    }
    let quantity = cfg.quantity();
    pts.par_iter().map(|p| evaluate(p, quantity, &cfg.quadrature)).collect()
}
