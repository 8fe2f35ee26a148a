//! Flat `key=value` simulation configs. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::NoiseModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    RandomDisjunct,
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub eta: u64,
    pub q: Vec<u64>,
    pub noise: Vec<NoiseModel>,
    pub trials: usize,
    pub iters: usize,
    pub damping: f64,
    pub code: CodeKind,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::ConfigError(msg.into())
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| bad(format!("`{key}`: cannot parse `{v}`")))
}

fn q_list(v: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in v.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u64, u64) = (num("q", a)?, num("q", b)?);
            if a > b {
                return Err(bad(format!("`q`: empty range {part}")));
            }
            out.extend(a..=b);
        } else {
            out.push(num("q", part)?);
        }
    }
    Ok(out)
}

fn noise_list(v: &str) -> Result<Vec<NoiseModel>> {
    v.split(',')
        .map(|pair| {
            let (p, n) = pair.split_once('/').ok_or_else(|| bad(format!("`noise`: expected gp/gn, found `{pair}`")))?;
            NoiseModel::new(num("noise", p)?, num("noise", n)?)
        })
        .collect()
}

impl SimConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| bad(format!("line {}: expected key=value", i + 1)))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(bad(format!("line {}: duplicate key `{}`", i + 1, k.trim())));
            }
        }
        let take = |k: &str| map.get(k).map(String::as_str);
        let need = |k: &str| take(k).ok_or_else(|| bad(format!("missing key `{k}`")));
        let known = ["seed", "n", "d", "m", "eta", "q", "noise", "trials", "iters", "damping", "code"];
        if let Some(k) = map.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(bad(format!("unknown key `{k}`")));
        }
        let code = match take("code").unwrap_or("random-disjunct") {
            "random-disjunct" => CodeKind::RandomDisjunct,
            "identity" => CodeKind::Identity,
            other => return Err(bad(format!("`code`: unknown code `{other}`"))),
        };
        let n: usize = num("n", need("n")?)?;
        let cfg = SimConfig {
            seed: take("seed").map_or(Ok(1), |v| num("seed", v))?,
            n,
            d: num("d", need("d")?)?,
            m: match code {
                CodeKind::Identity => take("m").map_or(Ok(n), |v| num("m", v))?,
                CodeKind::RandomDisjunct => num("m", need("m")?)?,
            },
            eta: num("eta", need("eta")?)?,
            q: q_list(need("q")?)?,
            noise: take("noise").map_or(Ok(vec![NoiseModel::noiseless()]), noise_list)?,
            trials: num("trials", need("trials")?)?,
            iters: take("iters").map_or(Ok(20), |v| num("iters", v))?,
            damping: take("damping").map_or(Ok(0.0), |v| num("damping", v))?,
            code,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if self.d == 0 || self.d > self.n {
            return Err(bad(format!("need 1 <= d <= n, got d={} n={}", self.d, self.n)));
        }
        if self.m == 0 || self.trials == 0 || self.iters == 0 || self.eta == 0 {
            return Err(bad("m, trials, iters and eta must be positive"));
        }
        if self.code == CodeKind::Identity && self.m != self.n {
            return Err(bad("identity code needs m = n"));
        }
        if self.q.iter().any(|&q| q < 2) {
            return Err(bad("every q must be at least 2"));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(bad("damping must lie in [0, 1)"));
        }
        Ok(())
    }
}
