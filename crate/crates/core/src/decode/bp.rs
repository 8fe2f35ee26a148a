use super::check_len;
use crate::error::{Error, Result};
use crate::model::{CodeMatrix, NoiseModel, Syndrome};

const LOG_CLAMP: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpConfig {
    pub max_iter: usize,
    /// Weight of the previous factor message, in `[0, 1)`.
    pub damping: f64,
    /// Prior probability of a subject being defective; `d / n` when unset.
    pub prior: Option<f64>,
    /// Stop early once no factor message moves by more than this.
    pub tol: Option<f64>,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig { max_iter: 20, damping: 0.0, prior: None, tol: None }
    }
}

/// Posterior estimates `P(w_i = 1 | z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginals {
    pub probs: Vec<f64>,
    pub iterations: usize,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(p: f64) -> f64 {
    (p.ln() - (1.0 - p).ln()).clamp(-LOG_CLAMP, LOG_CLAMP)
}

struct Factor {
    vars: Vec<usize>,
    coeffs: Vec<usize>,
    /// Sum ranges `[lo, hi)` and the probability of the observed level from each.
    ranges: Vec<(usize, usize, f64)>,
}

/// Distribution of `sum + c * w` for a belief with log-odds `x`, cut at `cap`.
/// Both weights come from the logistic function directly, so a saturated
/// belief never rounds the other outcome to exactly zero.
fn push(dist: &[f64], c: usize, x: f64, cap: usize) -> Vec<f64> {
    let (p0, p1) = (sigmoid(-x), sigmoid(x));
    let mut out = vec![0.0; cap];
    for (s, &v) in dist.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        out[s] += v * p0;
        if s + c < cap {
            out[s + c] += v * p1;
        }
    }
    out
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln sigmoid(x)`.
fn log_sigmoid(x: f64) -> f64 {
    if x > 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// [`push`] on log-probabilities.
fn push_log(dist: &[f64], c: usize, x: f64, cap: usize) -> Vec<f64> {
    let (l0, l1) = (log_sigmoid(-x), log_sigmoid(x));
    let mut out = vec![f64::NEG_INFINITY; cap];
    for (s, &v) in dist.iter().enumerate() {
        if v == f64::NEG_INFINITY {
            continue;
        }
        out[s] = log_add(out[s], v + l0);
        if s + c < cap {
            out[s + c] = log_add(out[s + c], v + l1);
        }
    }
    out
}

impl Factor {
    /// `incoming` holds variable-to-factor log-odds.
    fn messages(&self, incoming: &[f64], cap: usize) -> std::result::Result<Vec<f64>, ()> {
        let deg = self.vars.len();
        let mut suffix = vec![Vec::new(); deg + 1];
        let mut unit = vec![0.0; cap];
        unit[0] = 1.0;
        suffix[deg] = unit.clone();
        for k in (0..deg).rev() {
            suffix[k] = push(&suffix[k + 1], self.coeffs[k], incoming[k], cap);
        }
        let mut prefix = unit;
        let mut out = Vec::with_capacity(deg);
        let mut cdf = vec![0.0; cap + 1];
        for k in 0..deg {
            let rest = &suffix[k + 1];
            for s in 0..cap {
                cdf[s + 1] = cdf[s] + rest[s];
            }
            let below = |x: i64| -> f64 { cdf[x.clamp(0, cap as i64) as usize] };
            let mut val = [0.0f64; 2];
            for (b, slot) in val.iter_mut().enumerate() {
                let shift = (b * self.coeffs[k]) as i64;
                for (a, &pa) in prefix.iter().enumerate() {
                    if pa == 0.0 {
                        continue;
                    }
                    let base = a as i64 + shift;
                    let mut acc = 0.0;
                    for &(lo, hi, pr) in &self.ranges {
                        acc += pr * (below(hi as i64 - base) - below(lo as i64 - base));
                    }
                    *slot += pa * acc;
                }
            }
            if val[0] <= 0.0 && val[1] <= 0.0 {
                return Err(());
            }
            let l = if val[1] <= 0.0 {
                -LOG_CLAMP
            } else if val[0] <= 0.0 {
                LOG_CLAMP
            } else {
                (val[1].ln() - val[0].ln()).clamp(-LOG_CLAMP, LOG_CLAMP)
            };
            out.push(l);
            prefix = push(&prefix, self.coeffs[k], incoming[k], cap);
        }
        Ok(out)
    }

    /// Same messages computed on log-probabilities, for factors whose
    /// likelihoods underflow in [`Factor::messages`].
    fn messages_log(&self, incoming: &[f64], cap: usize) -> std::result::Result<Vec<f64>, ()> {
        let deg = self.vars.len();
        let mut unit = vec![f64::NEG_INFINITY; cap];
        unit[0] = 0.0;
        let mut suffix = vec![Vec::new(); deg + 1];
        suffix[deg] = unit.clone();
        for k in (0..deg).rev() {
            suffix[k] = push_log(&suffix[k + 1], self.coeffs[k], incoming[k], cap);
        }
        let ranges: Vec<(usize, usize, f64)> = self.ranges.iter().map(|&(lo, hi, p)| (lo, hi, p.ln())).collect();
        let mut prefix = unit;
        let mut out = Vec::with_capacity(deg);
        for k in 0..deg {
            let rest = &suffix[k + 1];
            let mut val = [f64::NEG_INFINITY; 2];
            for (b, slot) in val.iter_mut().enumerate() {
                let shift = b * self.coeffs[k];
                for (a, &pa) in prefix.iter().enumerate() {
                    if pa == f64::NEG_INFINITY {
                        continue;
                    }
                    for &(lo, hi, lp) in &ranges {
                        for total in lo.max(a + shift)..hi.min(cap) {
                            *slot = log_add(*slot, pa + lp + rest[total - a - shift]);
                        }
                    }
                }
            }
            if val == [f64::NEG_INFINITY; 2] {
                return Err(());
            }
            out.push((val[1] - val[0]).clamp(-LOG_CLAMP, LOG_CLAMP));
            prefix = push_log(&prefix, self.coeffs[k], incoming[k], cap);
        }
        Ok(out)
    }
}

/// Sum-product decoding with a flooding schedule. Messages are kept as
/// log-likelihood ratios.
pub fn bp_decode(c: &CodeMatrix, eta: &[u64], z: &Syndrome, d: usize, nm: &NoiseModel, cfg: &BpConfig) -> Result<Marginals> {
    check_len(z, c.rows())?;
    let (m, n) = (c.rows(), c.cols());
    if cfg.max_iter == 0 {
        return Err(Error::ConfigError("max_iter must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&cfg.damping) {
        return Err(Error::ConfigError(format!("damping {} is outside [0, 1)", cfg.damping)));
    }
    let prior = cfg.prior.unwrap_or(d as f64 / n as f64);
    if !(0.0..=1.0).contains(&prior) {
        return Err(Error::ConfigError(format!("prior {prior} is outside [0, 1]")));
    }
    let levels = eta.len() - 1;
    let cap = eta[levels] as usize;
    let lp = logit(prior);

    let mut factors = Vec::with_capacity(m);
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for t in 0..m {
        let zt = z.values()[t];
        if zt as usize >= levels {
            return Err(Error::EntryOutOfAlphabet { value: zt as u64, q: levels as u64 });
        }
        let ranges = (zt.saturating_sub(1)..=zt + 1)
            .filter(|&r| (r as usize) < levels)
            .map(|r| (eta[r as usize] as usize, eta[r as usize + 1] as usize, nm.transition(r, zt, levels)))
            .filter(|&(_, _, p)| p > 0.0)
            .collect();
        let mut vars = Vec::new();
        let mut coeffs = Vec::new();
        for (i, edge) in edges.iter_mut().enumerate().take(n) {
            let v = c.get(t, i);
            if v > 0 {
                edge.push((factors.len(), vars.len()));
                vars.push(i);
                coeffs.push(v as usize);
            }
        }
        factors.push(Factor { vars, coeffs, ranges });
    }

    let mut to_var: Vec<Vec<f64>> = factors.iter().map(|f| vec![0.0; f.vars.len()]).collect();
    let mut to_factor: Vec<Vec<f64>> = factors.iter().map(|f| vec![0.0; f.vars.len()]).collect();
    let mut iterations = 0;
    for _ in 0..cfg.max_iter {
        iterations += 1;
        let mut delta: f64 = 0.0;
        for (t, f) in factors.iter().enumerate() {
            let fresh = f
                .messages(&to_factor[t], cap)
                .or_else(|_| f.messages_log(&to_factor[t], cap))
                .map_err(|_| Error::NumericalUnderflow(t))?;
            for (old, new) in to_var[t].iter_mut().zip(fresh) {
                let next = (1.0 - cfg.damping) * new + cfg.damping * *old;
                delta = delta.max((next - *old).abs());
                *old = next;
            }
        }
        for list in &edges {
            let total: f64 = lp + list.iter().map(|&(t, k)| to_var[t][k]).sum::<f64>();
            for &(t, k) in list {
                to_factor[t][k] = (total - to_var[t][k]).clamp(-LOG_CLAMP, LOG_CLAMP);
            }
        }
        if cfg.tol.is_some_and(|tol| delta < tol) {
            break;
        }
    }
    let probs = edges.iter().map(|list| sigmoid(lp + list.iter().map(|&(t, k)| to_var[t][k]).sum::<f64>())).collect();
    Ok(Marginals { probs, iterations })
}
