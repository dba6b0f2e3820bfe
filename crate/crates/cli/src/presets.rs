//! Built-in scenarios.

use pointrad_core::greens::Environment;
use pointrad_core::materials::{DielectricModel, ParticleSpec};
use pointrad_core::transport::QuadratureConfig;

use crate::config::{ConvergenceSpec, GridSpec, Mode, Quantity, ScenarioConfig, Series, Spacing, SweepParameter, SweepSpec};

/// Distance between particle and sphere surface.
pub const GAP: f64 = 1e-7;
/// Temperature of the emitting particle.
pub const T1: f64 = 300.0;
/// Particle radius; small enough that every dipole check passes at `GAP`.
pub const PARTICLE_RADIUS: f64 = 5e-9;
/// Particle radius for the plate sweep, which starts at 1e-8 m.
pub const PLATE_PARTICLE_RADIUS: f64 = 5e-10;

pub const NAMES: [(&str, &str); 3] = [
    (
        "fig-sphere",
        "HT between SiC particles across a SiC, mirror or gold sphere vs sphere radius, with vacuum baseline",
    ),
    ("fig-plate", "HR of a SiC particle vs distance from a mirror plate, relative to vacuum"),
    (
        "fig-convergence",
        "multipole partial sums of HT near a gold sphere (R = 1e-6 m) and isolated-sphere emission",
    ),
];

fn sic_particle(z: f64) -> ParticleSpec {
    ParticleSpec::new(DielectricModel::sic(), PARTICLE_RADIUS, [0.0, 0.0, z], T1)
}

fn sphere(radius: f64, material: DielectricModel) -> Environment {
    Environment::Sphere {
        radius,
        material,
        mu: 1.0,
        center: [0.0; 3],
    }
}

pub fn preset(name: &str) -> Option<ScenarioConfig> {
    let quadrature = QuadratureConfig::default();
    match name {
        "fig-sphere" => {
            let r0 = 1e-9;
            Some(ScenarioConfig {
                mode: Mode::Sweep,
                particles: vec![sic_particle(-(r0 + GAP)), sic_particle(r0 + GAP)],
                environment: Environment::Vacuum,
                series: [
                    ("sic", DielectricModel::sic()),
                    ("mirror", DielectricModel::Mirror),
                    ("gold", DielectricModel::gold()),
                ]
                .into_iter()
                .map(|(label, m)| Series {
                    label: label.into(),
                    environment: sphere(r0, m),
                })
                .collect(),
                quantity: Some(Quantity::Ht),
                sweep: Some(SweepSpec {
                    parameter: SweepParameter::SphereRadius,
                    grid: GridSpec {
                        spacing: Spacing::Log,
                        min: r0,
                        max: 3e-5,
                        count: 60,
                    },
                    gap: Some(GAP),
                }),
                convergence: None,
                quadrature,
                output: None,
            })
        }
        "fig-plate" => Some(ScenarioConfig {
            mode: Mode::Sweep,
            particles: vec![ParticleSpec {
                radius: PLATE_PARTICLE_RADIUS,
                ..sic_particle(1e-6)
            }],
            environment: Environment::Plate {
                material: DielectricModel::Mirror,
                mu: 1.0,
            },
            series: Vec::new(),
            quantity: Some(Quantity::Hr),
            sweep: Some(SweepSpec {
                parameter: SweepParameter::PlateDistance,
                grid: GridSpec {
                    spacing: Spacing::Log,
                    min: 1e-8,
                    max: 1e-3,
                    count: 200,
                },
                gap: None,
            }),
            convergence: None,
            quadrature,
            output: None,
        }),
        "fig-convergence" => {
            let r = 1e-6;
            Some(ScenarioConfig {
                mode: Mode::Convergence,
                particles: vec![sic_particle(-(r + GAP)), sic_particle(r + GAP)],
                environment: sphere(r, DielectricModel::gold()),
                series: Vec::new(),
                quantity: None,
                sweep: None,
                convergence: Some(ConvergenceSpec {
                    l_max: (0..=150).collect(),
                    isolated_sphere_l_max: Some(40),
                }),
                quadrature,
                output: None,
            })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for (name, _) in NAMES {
            let cfg = preset(name).unwrap();
            cfg.validate().unwrap();
            let text = serde_json::to_string(&cfg).unwrap();
            assert_eq!(ScenarioConfig::from_json(&text).unwrap(), cfg, "{name}");
        }
        assert!(preset("fig-unknown").is_none());
    }
}
