//! Scenario configuration: a JSON document in SI units (meters, kelvin, rad/s).

use std::path::{Path, PathBuf};

use pointrad_core::greens::Environment;
use pointrad_core::materials::ParticleSpec;
use pointrad_core::transport::QuadratureConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// What a scenario computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Heat radiation of the first particle.
    Hr,
    /// Heat transfer from the first particle to the second.
    Ht,
    /// `quantity` over a parameter grid.
    Sweep,
    /// Multipole truncation study near a sphere.
    Convergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Hr,
    Ht,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// Grid of `count` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub spacing: Spacing,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<(), String> {
        if self.count == 0 {
            return Err("grid count must be positive".into());
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        if self.count > 1 && self.min >= self.max {
            return Err(format!("grid must be strictly increasing, got [{}, {}]", self.min, self.max));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err("log grids need a positive minimum".into());
        }
        Ok(())
    }
}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Radius of the environment sphere, point sphere or cavity.
    SphereRadius,
    /// Height of the first particle above the plate (its z coordinate).
    PlateDistance,
    /// Distance of the second particle from the first along z.
    Separation,
    /// Temperature of the first particle.
    Temperature,
}

impl SweepParameter {
    pub fn column(&self) -> &'static str {
        match self {
            SweepParameter::SphereRadius => "sphere_radius_m",
            SweepParameter::PlateDistance => "plate_distance_m",
            SweepParameter::Separation => "separation_m",
            SweepParameter::Temperature => "temperature_k",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub grid: GridSpec,
    /// With `sphere_radius`: place the two particles on the z axis at
    /// distance `gap` from the surface on opposite sides of the sphere.
    #[serde(default)]
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    /// Truncation orders, strictly increasing.
    pub l_max: Vec<usize>,
    /// Also emit the isolated-sphere emission series up to this order.
    #[serde(default)]
    pub isolated_sphere_l_max: Option<usize>,
}

/// A labeled environment; sweeps evaluate every series on the same grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub label: String,
    pub environment: Environment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub particles: Vec<ParticleSpec>,
    #[serde(default = "vacuum")]
    pub environment: Environment,
    /// Overrides `environment` with several labeled environments.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<Series>,
    /// Sweep quantity; defaults to `hr` for one particle and `ht` for two.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSpec>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn vacuum() -> Environment {
    Environment::Vacuum
}

/// Configuration problems; all map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Labeled environments in evaluation order.
    pub fn series(&self) -> Vec<Series> {
        if self.series.is_empty() {
            vec![Series {
                label: "main".into(),
                environment: self.environment,
            }]
        } else {
            self.series.clone()
        }
    }

    pub fn quantity(&self) -> Quantity {
        match (self.mode, self.quantity) {
            (Mode::Hr, _) => Quantity::Hr,
            (Mode::Ht | Mode::Convergence, _) => Quantity::Ht,
            (Mode::Sweep, Some(q)) => q,
            (Mode::Sweep, None) if self.particles.len() == 1 => Quantity::Hr,
            (Mode::Sweep, None) => Quantity::Ht,
        }
    }

    /// Schema-level checks: field presence per mode, grid shape, particle count.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        let needed = match self.quantity() {
            Quantity::Hr => 1,
            Quantity::Ht => 2,
        };
        if self.particles.len() != needed {
            return bad(format!(
                "{:?} needs exactly {needed} particle(s), got {}",
                self.quantity(),
                self.particles.len()
            ));
        }
        for (i, p) in self.particles.iter().enumerate() {
            p.validate()
                .map_err(|e| ConfigError::Invalid(format!("particle {i}: {e}")))?;
        }
        for s in self.series() {
            s.environment
                .validate()
                .map_err(|e| ConfigError::Invalid(format!("environment '{}': {e}", s.label)))?;
        }
        let mut labels: Vec<&str> = self.series.iter().map(|s| s.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return bad("series labels must be unique".into());
        }
        self.quadrature.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        match self.mode {
            Mode::Sweep => {
                let Some(sweep) = &self.sweep else {
                    return bad("mode 'sweep' needs a 'sweep' section".into());
                };
                sweep.grid.validate().map_err(ConfigError::Invalid)?;
                self.validate_parameter(sweep)?;
            }
            Mode::Convergence => {
                let Some(conv) = &self.convergence else {
                    return bad("mode 'convergence' needs a 'convergence' section".into());
                };
                if conv.l_max.is_empty() || conv.l_max.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("convergence l_max grid must be non-empty and strictly increasing".into());
                }
                if conv.isolated_sphere_l_max == Some(0) {
                    return bad("isolated_sphere_l_max must be at least 1".into());
                }
                if self.series().iter().any(|s| !matches!(s.environment, Environment::Sphere { .. })) {
                    return bad("mode 'convergence' needs sphere environments".into());
                }
            }
            Mode::Hr | Mode::Ht => {
                if self.sweep.is_some() || self.convergence.is_some() {
                    return bad(format!("mode '{:?}' takes no sweep or convergence section", self.mode).to_lowercase());
                }
            }
        }
        if self.mode != Mode::Sweep && self.sweep.is_some() {
            return bad("'sweep' section is only valid in mode 'sweep'".into());
        }
        Ok(())
    }

    fn validate_parameter(&self, sweep: &SweepSpec) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        let grid = &sweep.grid;
        match sweep.parameter {
            SweepParameter::SphereRadius => {
                let ok = self.series().iter().all(|s| {
                    matches!(
                        s.environment,
                        Environment::Sphere { .. } | Environment::PointSphere { .. } | Environment::MirrorCavity { .. }
                    )
                });
                if !ok {
                    return bad("'sphere_radius' needs sphere, point-sphere or cavity environments");
                }
                if grid.min <= 0.0 {
                    return bad("sphere radii must be positive");
                }
                if let Some(gap) = sweep.gap {
                    if !(gap > 0.0) {
                        return bad("gap must be positive");
                    }
                    if self.particles.len() != 2 {
                        return bad("'gap' places two particles; use it with heat transfer");
                    }
                }
            }
            SweepParameter::PlateDistance => {
                if self.series().iter().any(|s| !matches!(s.environment, Environment::Plate { .. })) {
                    return bad("'plate_distance' needs plate environments");
                }
                if grid.min <= 0.0 {
                    return bad("plate distances must be positive");
                }
            }
            SweepParameter::Separation => {
                if self.particles.len() != 2 {
                    return bad("'separation' needs two particles");
                }
                if grid.min <= 0.0 {
                    return bad("separations must be positive");
                }
            }
            SweepParameter::Temperature => {
                if grid.min <= 0.0 {
                    return bad("temperatures must be positive");
                }
            }
        }
        if sweep.gap.is_some() && sweep.parameter != SweepParameter::SphereRadius {
            return bad("'gap' only applies to 'sphere_radius' sweeps");
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("configuration serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = GridSpec {
            spacing: Spacing::Log,
            min: 1e-9,
            max: 1e-3,
            count: 7,
        };
        let p = g.points();
        assert_eq!(p.len(), 7);
        assert!((p[3] / 1e-6 - 1.0).abs() < 1e-12);
        let lin = GridSpec {
            spacing: Spacing::Linear,
            min: 1.0,
            max: 2.0,
            count: 3,
        };
        assert_eq!(lin.points(), vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn rejects_decreasing_grid() {
        let text = r#"{
            "mode": "sweep",
            "particles": [{"material": {"model": "constant", "eps": [3.0, 0.1]}, "radius": 1e-8,
                           "position": [0, 0, 1e-6], "temperature": 300}],
            "environment": {"kind": "plate", "material": {"model": "mirror"}},
            "sweep": {"parameter": "plate_distance",
                      "grid": {"spacing": "log", "min": 1e-6, "max": 1e-7, "count": 5}}
        }"#;
        assert!(matches!(ScenarioConfig::from_json(text), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"mode": "hr", "particles": [], "colour": 1}"#;
        assert!(matches!(ScenarioConfig::from_json(text), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn hash_is_stable() {
        let a = crate::presets::preset("fig-plate").unwrap();
        let b = crate::presets::preset("fig-plate").unwrap();
        assert_eq!(a.hash(), b.hash());
        let mut c = a.clone();
        c.quadrature.rel_tol = 1e-7;
        assert_ne!(a.hash(), c.hash());
    }
}
