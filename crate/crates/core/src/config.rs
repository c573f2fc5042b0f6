//! Experiment configuration: a flat `key = value` file with `#` comments.
//!
//! Lists are comma separated. `t` takes either explicit times or `log <t_min> <t_max> <points>`,
//! which expands to `0` followed by a log-spaced grid.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::entropy::{log_grid, FisherConfig};
use crate::ensembles::MalaConfig;
use crate::error::{Error, Result};
use crate::expr::{parse_expression, parse_word};
use crate::matrix::SmoothClip;
use crate::ncpoly::GenWord;
use crate::semigroups::{Convexity, PotentialSpec};
use crate::tracepoly::Necklace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerSource {
    /// MALA on the configured potential.
    Gibbs,
    /// Exact GUE draws with variance `variance`.
    Gue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowMode {
    /// Heat-potential Trotter scheme `R_{t,ℓ}V`.
    R,
    /// Expectation `T_{t,ℓ}u` of each requested trace word.
    T,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub potential: Option<String>,
    pub m: usize,
    pub n: Vec<usize>,
    pub t: Vec<f64>,
    pub count: usize,
    pub step: f64,
    pub burnin: usize,
    pub thinning: usize,
    pub chains: usize,
    pub seed: u64,
    pub words: Vec<GenWord>,
    pub convexity: Option<(f64, f64)>,
    pub cutoff: Option<f64>,
    pub ell: u32,
    pub x: Vec<f64>,
    pub mode: FlowMode,
    pub paths: usize,
    pub source: SamplerSource,
    pub variance: f64,
    pub inner_steps: usize,
    pub control_variate: bool,
    pub out: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "potential",
    "m",
    "n",
    "t",
    "count",
    "step",
    "burnin",
    "thinning",
    "chains",
    "seed",
    "words",
    "convexity",
    "cutoff",
    "ell",
    "x",
    "mode",
    "paths",
    "source",
    "variance",
    "inner_steps",
    "control_variate",
    "out",
];

fn cfg_err<T>(field: &str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Config { field: field.to_string(), msg: msg.into() })
}

fn scalar<T: std::str::FromStr>(field: &str, raw: &str) -> Result<T> {
    raw.trim().parse::<T>().or_else(|_| cfg_err(field, format!("cannot parse `{}`", raw.trim())))
}

fn list<T: std::str::FromStr>(field: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .enumerate()
        .map(|(i, item)| scalar(&format!("{field}[{i}]"), item))
        .collect()
}

fn positive<T: PartialOrd + Default + Copy>(field: &str, v: T) -> Result<T> {
    if v > T::default() {
        Ok(v)
    } else {
        cfg_err(field, "must be positive")
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return cfg_err(&format!("line {}", lineno + 1), "expected `key = value`");
            };
            let k = k.trim();
            if !KEYS.contains(&k) {
                return cfg_err(k, "unknown key");
            }
            if raw.insert(k.to_string(), v.trim().to_string()).is_some() {
                return cfg_err(k, "given more than once");
            }
        }
        let get = |k: &str| raw.get(k).map(String::as_str);

        let m: usize = get("m").map_or(Ok(1), |v| scalar("m", v))?;
        if !(1..=255).contains(&m) {
            return cfg_err("m", "must be between 1 and 255");
        }
        let seed = match get("seed") {
            Some(v) => scalar("seed", v)?,
            None => return cfg_err("seed", "a seed is required"),
        };
        let n: Vec<usize> = get("n").map_or(Ok(vec![8]), |v| list("n", v))?;
        for (i, &k) in n.iter().enumerate() {
            positive(&format!("n[{i}]"), k)?;
        }
        let t = match get("t") {
            None => vec![0.0],
            Some(v) if v.starts_with("log") => {
                let parts: Vec<&str> = v[3..].split_whitespace().collect();
                if parts.len() != 3 {
                    return cfg_err("t", "expected `log <t_min> <t_max> <points>`");
                }
                let lo: f64 = positive("t.t_min", scalar("t.t_min", parts[0])?)?;
                let hi: f64 = scalar("t.t_max", parts[1])?;
                if !(hi > lo) {
                    return cfg_err("t.t_max", "must exceed t_min");
                }
                let pts: usize = positive("t.points", scalar("t.points", parts[2])?)?;
                log_grid(lo, hi, pts)
            }
            Some(v) => {
                let ts: Vec<f64> = list("t", v)?;
                if ts.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
                    return cfg_err("t", "times must be finite and nonnegative");
                }
                if ts.windows(2).any(|w| !(w[1] > w[0])) {
                    return cfg_err("t", "times must be increasing");
                }
                ts
            }
        };
        let defaults = MalaConfig::new(1, seed);
        let count = positive("count", get("count").map_or(Ok(1000), |v| scalar("count", v))?)?;
        let step: f64 = positive("step", get("step").map_or(Ok(defaults.step), |v| scalar("step", v))?)?;
        let burnin = get("burnin").map_or(Ok(defaults.burnin), |v| scalar("burnin", v))?;
        let thinning = positive("thinning", get("thinning").map_or(Ok(defaults.thinning), |v| scalar("thinning", v))?)?;
        let chains = positive("chains", get("chains").map_or(Ok(defaults.chains), |v| scalar("chains", v))?)?;
        let words = match get("words") {
            None => Vec::new(),
            Some(v) => v
                .split(',')
                .enumerate()
                .map(|(i, w)| {
                    parse_word(w.trim(), m)
                        .map_err(|e| Error::Config { field: format!("words[{i}]"), msg: e.to_string() })
                })
                .collect::<Result<_>>()?,
        };
        let convexity = match get("convexity") {
            None => None,
            Some(v) => {
                let cv: Vec<f64> = list("convexity", v)?;
                if cv.len() != 2 || cv[0] < 0.0 || !(cv[0] <= cv[1]) {
                    return cfg_err("convexity", "expected `c, C` with 0 ≤ c ≤ C");
                }
                Some((cv[0], cv[1]))
            }
        };
        let cutoff = match get("cutoff") {
            None => None,
            Some(v) => Some(positive("cutoff", scalar::<f64>("cutoff", v)?)?),
        };
        let ell: u32 = get("ell").map_or(Ok(6), |v| scalar("ell", v))?;
        if ell > 20 {
            return cfg_err("ell", "must be at most 20");
        }
        let x: Vec<f64> = get("x").map_or(Ok(vec![0.0]), |v| list("x", v))?;
        let mode = match get("mode") {
            None | Some("R") | Some("r") => FlowMode::R,
            Some("T") | Some("t") => FlowMode::T,
            Some(other) => return cfg_err("mode", format!("expected `R` or `T`, got `{other}`")),
        };
        let paths = positive("paths", get("paths").map_or(Ok(1000), |v| scalar("paths", v))?)?;
        let source = match get("source") {
            None | Some("gibbs") => SamplerSource::Gibbs,
            Some("gue") => SamplerSource::Gue,
            Some(other) => return cfg_err("source", format!("expected `gibbs` or `gue`, got `{other}`")),
        };
        let variance = positive("variance", get("variance").map_or(Ok(1.0), |v| scalar("variance", v))?)?;
        let inner_steps = positive("inner_steps", get("inner_steps").map_or(Ok(40), |v| scalar("inner_steps", v))?)?;
        let control_variate = get("control_variate").map_or(Ok(true), |v| scalar("control_variate", v))?;
        let potential = get("potential").map(str::to_string);
        if let Some(p) = &potential {
            parse_expression(p, m).map_err(|e| Error::Config { field: "potential".into(), msg: e.to_string() })?;
        }
        Ok(ExperimentConfig {
            potential,
            m,
            n,
            t,
            count,
            step,
            burnin,
            thinning,
            chains,
            seed,
            words,
            convexity,
            cutoff,
            ell,
            x,
            mode,
            paths,
            source,
            variance,
            inner_steps,
            control_variate,
            out: get("out").map(PathBuf::from),
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec> {
        let Some(src) = &self.potential else {
            return cfg_err("potential", "required for this command");
        };
        let f = parse_expression(src, self.m)
            .map_err(|e| Error::Config { field: "potential".into(), msg: e.to_string() })?;
        let cutoff = self.cutoff.map(|radius| SmoothClip { radius });
        let convexity = self.convexity.map(|(c, big_c)| Convexity { c, big_c });
        PotentialSpec::from_trace_poly(f, cutoff, convexity)
            .map_err(|e| Error::Config { field: "potential".into(), msg: e.to_string() })
    }

    pub fn mala(&self) -> MalaConfig {
        MalaConfig {
            count: self.count,
            step: self.step,
            burnin: self.burnin,
            thinning: self.thinning,
            chains: self.chains,
            seed: self.seed,
        }
    }

    pub fn fisher(&self) -> FisherConfig {
        let mut cfg = FisherConfig::new(self.count, self.seed);
        cfg.outer = self.mala();
        cfg.inner_steps = self.inner_steps;
        cfg.control_variate = self.control_variate;
        cfg
    }

    /// Requested necklaces, defaulting to `X_j²` for each generator.
    pub fn necklaces(&self) -> Vec<Necklace> {
        if self.words.is_empty() {
            (0..self.m).map(|j| Necklace::new(&GenWord::new(vec![j as u8; 2]))).collect()
        } else {
            self.words.iter().map(Necklace::new).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let cfg = ExperimentConfig::parse(
            "# quartic\npotential = 0.5*tr(X1^2) + 0.1*tr(X1^4)\nseed = 3\nn = 8, 16\n\
             t = log 0.1 10 3\nconvexity = 1, 5\nwords = X1^2, X1^4\n",
        )
        .unwrap();
        assert_eq!(cfg.n, vec![8, 16]);
        assert_eq!(cfg.t.len(), 4);
        assert_eq!(cfg.words.len(), 2);
        let v = cfg.potential_spec().unwrap();
        assert_eq!(v.quad_coeff(), 1.0);
        assert_eq!(v.convexity().unwrap().big_c, 5.0);
    }

    #[test]
    fn errors_name_the_field() {
        let field = |text: &str| match ExperimentConfig::parse(text) {
            Err(Error::Config { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(field("n = 4"), "seed");
        assert_eq!(field("seed = 1\nn = 4, x"), "n[1]");
        assert_eq!(field("seed = 1\ncount = 0"), "count");
        assert_eq!(field("seed = 1\nbogus = 2"), "bogus");
        assert_eq!(field("seed = 1\npotential = tr(X2)"), "potential");
        assert_eq!(field("seed = 1\nt = 1, 0.5"), "t");
        assert_eq!(field("seed = 1\nwords = X1, Y"), "words[1]");
    }
}
