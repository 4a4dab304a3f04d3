//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Recognised keys are `p`, `q`, `n`,
//! `seed`, `samples`, `tol` (alias `eq_tol`), `theta_tol` and `pole_guard`.

use std::path::Path;

use crate::error::{EllError, Result};
use crate::numerics::Params;

/// Values read from a config file or the command line; unset fields keep their defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub eq_tol: Option<f64>,
    pub theta_tol: Option<f64>,
    pub pole_guard: Option<f64>,
}

impl Overrides {
    /// `self` with every field that is set in `top` replaced.
    pub fn overlay(&self, top: &Overrides) -> Overrides {
        Overrides {
            p: top.p.or(self.p),
            q: top.q.or(self.q),
            n: top.n.or(self.n),
            seed: top.seed.or(self.seed),
            samples: top.samples.or(self.samples),
            eq_tol: top.eq_tol.or(self.eq_tol),
            theta_tol: top.theta_tol.or(self.theta_tol),
            pole_guard: top.pole_guard.or(self.pole_guard),
        }
    }

    /// Applies the overrides to `base` and validates the result. `n` is not part of
    /// [`Params`] here: suites treat it as a restriction of their size loops.
    pub fn apply(&self, base: Params) -> Result<Params> {
        let prm = Params {
            p: self.p.unwrap_or(base.p),
            q: self.q.unwrap_or(base.q),
            seed: self.seed.unwrap_or(base.seed),
            samples: self.samples.unwrap_or(base.samples),
            eq_tol: self.eq_tol.unwrap_or(base.eq_tol),
            theta_tol: self.theta_tol.unwrap_or(base.theta_tol),
            pole_guard: self.pole_guard.unwrap_or(base.pole_guard),
            ..base
        };
        prm.validate()?;
        Ok(prm)
    }
}

fn value<T: std::str::FromStr>(key: &str, raw: &str, line: usize) -> Result<T> {
    raw.parse()
        .map_err(|_| EllError::Config(format!("line {line}: invalid value {raw:?} for {key}")))
}

/// Parses the text of a config file.
pub fn parse(text: &str) -> Result<Overrides> {
    let mut out = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, val) = trimmed.split_once('=').ok_or_else(|| {
            EllError::Config(format!("line {line}: expected key=value, got {trimmed:?}"))
        })?;
        let (key, val) = (key.trim(), val.trim());
        match key {
            "p" => out.p = Some(value(key, val, line)?),
            "q" => out.q = Some(value(key, val, line)?),
            "n" => out.n = Some(value(key, val, line)?),
            "seed" => out.seed = Some(value(key, val, line)?),
            "samples" => out.samples = Some(value(key, val, line)?),
            "tol" | "eq_tol" => out.eq_tol = Some(value(key, val, line)?),
            "theta_tol" => out.theta_tol = Some(value(key, val, line)?),
            "pole_guard" => out.pole_guard = Some(value(key, val, line)?),
            other => {
                return Err(EllError::Config(format!(
                    "line {line}: unknown key {other:?}"
                )))
            }
        }
    }
    Ok(out)
}

/// Reads and parses a config file.
pub fn load(path: &Path) -> Result<Overrides> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| EllError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_aliases() {
        let o = parse("# run\np = 0.2\n\nq=0.5\n n = 3 \nseed=7\nsamples=4\neq_tol=1e-9\ntheta_tol=1e-15\npole_guard=1e-3\n").unwrap();
        assert_eq!(o.p, Some(0.2));
        assert_eq!(o.q, Some(0.5));
        assert_eq!(o.n, Some(3));
        assert_eq!(o.seed, Some(7));
        assert_eq!(o.samples, Some(4));
        assert_eq!(o.eq_tol, Some(1e-9));
        assert_eq!(parse("tol = 2e-8").unwrap().eq_tol, Some(2e-8));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse("p 0.3").is_err());
        assert!(parse("p = abc").is_err());
        assert!(parse("colour = red").is_err());
        assert!(parse("n = -1").is_err());
    }

    #[test]
    fn later_layers_win_and_validation_applies() {
        let file = parse("p = 0.2\nq = 0.5").unwrap();
        let flags = Overrides {
            q: Some(0.4),
            ..Overrides::default()
        };
        let prm = file.overlay(&flags).apply(Params::default()).unwrap();
        assert_eq!((prm.p, prm.q), (0.2, 0.4));
        let bad = Overrides {
            p: Some(1.2),
            ..Overrides::default()
        };
        assert!(bad.apply(Params::default()).is_err());
    }
}
