//! Run configuration: defaults, a flat `key = value` file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::time_domain::{Truncation, DEFAULT_TAIL_EPS};

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "VISCOTUBE_CONFIG";

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn times(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::Config("grid needs at least one point".into()));
        }
        if !(self.t_min > 0.0 || (!self.log && self.t_min >= 0.0)) || !(self.t_max >= self.t_min) || !self.t_max.is_finite() {
            return Err(Error::Config(format!("invalid time grid [{}, {}]", self.t_min, self.t_max)));
        }
        if self.points == 1 {
            return Ok(vec![self.t_min]);
        }
        let n = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| {
                let f = k as f64 / n;
                if self.log {
                    10f64.powf(self.t_min.log10() + f * (self.t_max.log10() - self.t_min.log10()))
                } else {
                    self.t_min + f * (self.t_max - self.t_min)
                }
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tau: f64,
    pub g0: f64,
    pub j0: f64,
    /// Fixed term count; adaptive truncation when `None`.
    pub terms: Option<usize>,
    pub tail_eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub grid: GridSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tau: 1.0,
            g0: 1.0,
            j0: 1.0,
            terms: None,
            tail_eps: None,
            out: None,
            grid: GridSpec {
                t_min: 1e-3,
                t_max: 10.0,
                points: 400,
                log: false,
            },
        }
    }
}

/// Values that may override the defaults; `None` leaves a setting alone.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub tau: Option<f64>,
    pub g0: Option<f64>,
    pub j0: Option<f64>,
    pub terms: Option<usize>,
    pub tail_eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub log: Option<bool>,
}

impl Overrides {
    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", lineno + 1)))?;
            map.insert(key.trim().replace('-', "_").to_ascii_lowercase(), value.trim().to_string());
        }
        let mut o = Overrides::default();
        for (key, value) in &map {
            let bad = |e: &dyn std::fmt::Display| Error::Config(format!("config key '{key}': {e}"));
            let num = || value.parse::<f64>().map_err(|e| bad(&e));
            match key.as_str() {
                "tau" => o.tau = Some(num()?),
                "g0" => o.g0 = Some(num()?),
                "j0" => o.j0 = Some(num()?),
                "terms" => o.terms = Some(value.parse().map_err(|e| bad(&e))?),
                "tail_eps" => o.tail_eps = Some(num()?),
                "out" => o.out = Some(PathBuf::from(value)),
                "t_min" => o.t_min = Some(num()?),
                "t_max" => o.t_max = Some(num()?),
                "points" => o.points = Some(value.parse().map_err(|e| bad(&e))?),
                "log" => o.log = Some(value.parse().map_err(|e| bad(&e))?),
                other => return Err(Error::Config(format!("unknown config key '{other}'"))),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

impl RunConfig {
    /// Defaults, then the config file (if any), then `flags`.
    pub fn load(file: Option<&Path>, flags: &Overrides) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        if let Some(path) = file.map(Path::to_path_buf).or(env_path) {
            cfg.apply(&Overrides::from_file(&path)?)?;
        }
        cfg.apply(flags)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(v) = o.tau {
            self.tau = v;
        }
        // A lone initial value fixes the other as its reciprocal.
        match (o.g0, o.j0) {
            (Some(g), Some(j)) => {
                self.g0 = g;
                self.j0 = j;
            }
            (Some(g), None) => {
                self.g0 = g;
                self.j0 = 1.0 / g;
            }
            (None, Some(j)) => {
                self.j0 = j;
                self.g0 = 1.0 / j;
            }
            (None, None) => {}
        }
        if let Some(n) = o.terms {
            self.terms = Some(n);
        }
        if let Some(e) = o.tail_eps {
            self.tail_eps = Some(e);
        }
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        if let Some(v) = o.t_min {
            self.grid.t_min = v;
        }
        if let Some(v) = o.t_max {
            self.grid.t_max = v;
        }
        if let Some(v) = o.points {
            self.grid.points = v;
        }
        if let Some(v) = o.log {
            self.grid.log = v;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tau", self.tau), ("g0", self.g0), ("j0", self.j0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if (self.g0 * self.j0 - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "g0 * j0 must equal 1, got {} * {} = {}",
                self.g0,
                self.j0,
                self.g0 * self.j0
            )));
        }
        if self.terms == Some(0) {
            return Err(Error::Config("terms must be at least 1".into()));
        }
        if let Some(e) = self.tail_eps {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::Config(format!("tail-eps must be positive, got {e}")));
            }
        }
        Ok(())
    }

    /// Fixed terms if requested, otherwise the adaptive tail bound.
    pub fn truncation(&self) -> Truncation {
        match (self.terms, self.tail_eps) {
            (Some(n), _) => Truncation::Fixed(n),
            (None, eps) => Truncation::TailBound(eps.unwrap_or(DEFAULT_TAIL_EPS)),
        }
    }

    /// As [`truncation`](Self::truncation), but 100 fixed terms unless told otherwise.
    pub fn figure_truncation(&self) -> Truncation {
        match (self.terms, self.tail_eps) {
            (None, None) => Truncation::Fixed(100),
            _ => self.truncation(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_layer() {
        let file = Overrides::parse("# defaults\ntau = 2\ng0=4 # stiff\nlog = true\nt-max = 5\n").unwrap();
        let flags = Overrides {
            tau: Some(3.0),
            ..Default::default()
        };
        let mut cfg = RunConfig::default();
        cfg.apply(&file).unwrap();
        cfg.apply(&flags).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.tau, 3.0);
        assert_eq!(cfg.j0, 0.25);
        assert!(cfg.grid.log);
        assert_eq!(cfg.grid.t_max, 5.0);
    }

    #[test]
    fn reciprocal_scales_enforced() {
        let mut cfg = RunConfig::default();
        cfg.apply(&Overrides::parse("g0 = 2\nj0 = 1\n").unwrap()).unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        assert!(Overrides::parse("speed = 3").is_err());
        assert!(Overrides::parse("tau 3").is_err());
        assert!(Overrides::parse("tau = fast").is_err());
    }

    #[test]
    fn truncation_choice() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.truncation(), Truncation::TailBound(1e-10));
        assert_eq!(cfg.figure_truncation(), Truncation::Fixed(100));
        cfg.tail_eps = Some(1e-8);
        assert_eq!(cfg.figure_truncation(), Truncation::TailBound(1e-8));
        cfg.terms = Some(7);
        assert_eq!(cfg.truncation(), Truncation::Fixed(7));
    }

    #[test]
    fn grids() {
        let g = GridSpec { t_min: 1.0, t_max: 100.0, points: 3, log: true };
        let ts = g.times().unwrap();
        assert!((ts[1] - 10.0).abs() < 1e-12);
        let g = GridSpec { t_min: 0.0, t_max: 1.0, points: 5, log: false };
        assert_eq!(g.times().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = GridSpec { t_min: 0.0, t_max: 1.0, points: 5, log: true };
        assert!(g.times().is_err());
    }
}
