//! Flat `key = value` configuration with dotted keys.
//!
//! ```text
//! # comments start with '#'
//! grid.N = 1024
//! grid.L = 20
//! tol.intertwiner = 1e-6
//! rules.trivial_identity = on
//! seed = 17
//! ```

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::RuleFlags;
use crate::group::HaarGrid;
use crate::numerics::GridSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub unitarity: f64,
    pub plancherel: f64,
    pub rotation: f64,
    /// `W* W = I` and rotation invariance of isotropic Gaussians.
    pub rotation_inverse: f64,
    /// Fixed point and reflection identities of `V`.
    pub fourier: f64,
    /// Identities that hold up to roundoff only.
    pub trivial: f64,
    pub homomorphism: f64,
    pub gaussian: f64,
    pub central: f64,
    pub pd: f64,
    pub tensor: f64,
    pub intertwiner: f64,
    pub haar: f64,
    /// Error level treated as roundoff in refinement studies.
    pub floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-13,
            plancherel: 1e-12,
            rotation: 1e-8,
            rotation_inverse: 1e-6,
            fourier: 1e-8,
            trivial: 1e-12,
            homomorphism: 1e-10,
            gaussian: 1e-8,
            central: 1e-12,
            pd: 1e-8,
            tensor: 1e-12,
            intertwiner: 1e-6,
            haar: 1e-6,
            floor: 1e-13,
        }
    }
}

impl Tolerances {
    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "unitarity" => &mut self.unitarity,
            "plancherel" => &mut self.plancherel,
            "rotation" => &mut self.rotation,
            "rotation_inverse" => &mut self.rotation_inverse,
            "fourier" => &mut self.fourier,
            "trivial" => &mut self.trivial,
            "homomorphism" => &mut self.homomorphism,
            "gaussian" => &mut self.gaussian,
            "central" => &mut self.central,
            "pd" => &mut self.pd,
            "tensor" => &mut self.tensor,
            "intertwiner" => &mut self.intertwiner,
            "haar" => &mut self.haar,
            "floor" => &mut self.floor,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    /// Line grid for single-variable checks.
    pub grid: GridSpec,
    /// Plane grid for tensor products and the intertwiner.
    pub grid2: GridSpec,
    pub haar: HaarGrid,
    pub tol: Tolerances,
    pub rules: RuleFlags,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            grid: GridSpec { n: 1024, l: 20.0, dims: 1 },
            grid2: GridSpec { n: 256, l: 12.0, dims: 2 },
            haar: HaarGrid::default(),
            tol: Tolerances::default(),
            rules: RuleFlags::default(),
            seed: 20_240_917,
        }
    }
}

fn parse_switch(key: &str, value: &str) -> Result<bool> {
    match value {
        "on" | "true" | "1" | "yes" => Ok(true),
        "off" | "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected on/off, got `{value}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Config(format!("{key}: `{value}`: {e}")))
}

impl Config {
    /// Set one dotted key. Grid values are validated by [`Config::validate`].
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "grid.N" => self.grid.n = parse_num(key, value)?,
            "grid.L" => self.grid.l = parse_num(key, value)?,
            "grid2.N" => self.grid2.n = parse_num(key, value)?,
            "grid2.L" => self.grid2.l = parse_num(key, value)?,
            "haar.N" => self.haar.points = parse_num(key, value)?,
            "haar.L" => self.haar.half_width = parse_num(key, value)?,
            "rules.trivial_identity" => self.rules.trivial_identity = parse_switch(key, value)?,
            "rules.regular_absorbs" => self.rules.regular_absorbs = parse_switch(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            _ => {
                let slot = key
                    .strip_prefix("tol.")
                    .and_then(|name| self.tol.slot(name))
                    .ok_or_else(|| Error::Config(format!("unknown key `{key}`")))?;
                let v: f64 = parse_num(key, value)?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{key}: tolerance must be finite and nonnegative")));
                }
                *slot = v;
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            config.set(key.trim(), value)?;
        }
        config.validate()?;
        Ok(config)
    }

    /// Read `path`; a missing file gives the defaults when `required` is false.
    pub fn load(path: &Path, required: bool) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound && !required => Ok(Self::default()),
            Err(e) => Err(Error::Config(format!("{}: {e}", path.display()))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        GridSpec::new(self.grid.n, self.grid.l, 1).map_err(|e| Error::Config(format!("grid: {e}")))?;
        GridSpec::new(self.grid2.n, self.grid2.l, 2).map_err(|e| Error::Config(format!("grid2: {e}")))?;
        if self.haar.points < 2 || !(self.haar.half_width > 0.0 && self.haar.half_width.is_finite()) {
            return Err(Error::Config(format!("haar: invalid grid {:?}", self.haar)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!((c.grid.n, c.grid.l), (1024, 20.0));
        assert_eq!((c.grid2.n, c.grid2.l), (256, 12.0));
        assert_eq!(c.tol.intertwiner, 1e-6);
        assert!(c.rules.trivial_identity);
        c.validate().unwrap();
    }

    #[test]
    fn parse_and_override() {
        let c = Config::parse(
            "# sample\n grid.N = 64\ngrid.L=3 # narrow\n\ntol.intertwiner = 1e-5\nrules.trivial_identity = off\nseed = 9\n",
        )
        .unwrap();
        assert_eq!((c.grid.n, c.grid.l), (64, 3.0));
        assert_eq!(c.tol.intertwiner, 1e-5);
        assert!(!c.rules.trivial_identity);
        assert_eq!(c.seed, 9);
    }

    #[test]
    fn errors() {
        assert!(Config::parse("grid.M = 3").is_err());
        assert!(Config::parse("grid.N").is_err());
        assert!(Config::parse("grid.N = 100").is_err());
        assert!(Config::parse("tol.haar = -1").is_err());
        assert!(Config::parse("rules.regular_absorbs = maybe").is_err());
        assert!(Config::parse("seed = x").is_err());
    }

    #[test]
    fn missing_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("absent.conf");
        assert_eq!(Config::load(&path, false).unwrap(), Config::default());
        assert!(Config::load(&path, true).is_err());
        std::fs::write(&path, "haar.N = 32\n").unwrap();
        assert_eq!(Config::load(&path, true).unwrap().haar.points, 32);
    }
}
