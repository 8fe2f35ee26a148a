//! Monte Carlo error-rate sweeps for belief propagation.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use super::config::{CodeKind, SimConfig};
use crate::construct::{construct2, RowCount};
use crate::decode::{bp_decode, select_threshold, select_topd, BpConfig, Marginals};
use crate::error::{Error, Result};
use crate::model::{apply_noise, CodeMatrix, CodeParams, DefectiveSet};
use crate::rng::{derive_seed, rng_from_seed};

pub const CSV_HEADER: &str = "seed,n,m,d,q,eta,gamma_p,gamma_n,trials,iters,method,P_e,P_FN,P_FP";

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRow {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub q: u64,
    pub eta: Vec<u64>,
    pub gamma_p: f64,
    pub gamma_n: f64,
    pub trials: usize,
    pub iters: usize,
    pub method: &'static str,
    pub p_e: f64,
    pub p_fn: f64,
    pub p_fp: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    missed: usize,
    false_alarms: usize,
    declared: usize,
}

impl Tally {
    fn add(&mut self, truth: &DefectiveSet, guess: &DefectiveSet) {
        self.missed += truth.indices().iter().filter(|&&i| !guess.contains(i)).count();
        self.false_alarms += guess.indices().iter().filter(|&&i| !truth.contains(i)).count();
        self.declared += guess.len();
    }

    /// `(P_e, P_FN, P_FP)` over `trials` trials with `d` defectives each.
    fn rates(&self, trials: usize, d: usize) -> (f64, f64, f64) {
        let frac = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        (
            frac(self.missed + self.false_alarms, trials * d + self.declared),
            frac(self.missed, trials * d),
            frac(self.false_alarms, self.declared),
        )
    }
}

fn build_code(cfg: &SimConfig, q: u64, seed: u64) -> Result<(CodeMatrix, CodeParams)> {
    match cfg.code {
        CodeKind::RandomDisjunct => construct2(cfg.n, cfg.d, 0, q, cfg.eta, None, RowCount::Fixed(cfg.m), seed),
        CodeKind::Identity => {
            if cfg.eta > q - 1 {
                return Err(Error::AlphabetTooSmall { q_minus_1: q - 1, needed: cfg.eta });
            }
            let cols: Vec<Vec<u32>> =
                (0..cfg.n).map(|i| (0..cfg.n).map(|r| if r == i { (q - 1) as u32 } else { 0 }).collect()).collect();
            let c = CodeMatrix::from_columns(q, cfg.n, &cols)?;
            Ok((c, CodeParams::equidistant(q, cfg.eta, 1, cfg.d, 0)?))
        }
    }
}

/// Runs every `(q, noise)` point of the sweep. Trial `t` of point `k` draws its
/// defective set and noise from `derive_seed(seed, k, t)`, so noise settings
/// of one point see the same code and the same defective sets.
pub fn run_simulation(cfg: &SimConfig) -> Result<Vec<SimulationRow>> {
    let mut rows = Vec::new();
    for (k, &q) in cfg.q.iter().enumerate() {
        let (c, p) = build_code(cfg, q, derive_seed(cfg.seed, k as u64, u64::MAX))?;
        let levels = p.levels();
        let bp_cfg = BpConfig { max_iter: cfg.iters, damping: cfg.damping, ..BpConfig::default() };
        for nm in &cfg.noise {
            let tallies: Vec<(Tally, Tally)> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| -> Result<(Tally, Tally)> {
                    let mut rng = rng_from_seed(derive_seed(cfg.seed, k as u64, t as u64));
                    let truth = DefectiveSet::new(sample(&mut rng, cfg.n, cfg.d).into_vec(), cfg.n)?;
                    let noise_seed: u64 = rng.gen();
                    let y = c.syndrome(truth.indices(), &p.eta)?;
                    let z = apply_noise(&y, levels, nm, noise_seed);
                    let mg = match bp_decode(&c, &p.eta, &z, cfg.d, nm, &bp_cfg) {
                        Ok(mg) => mg,
                        Err(Error::NumericalUnderflow(_)) => {
                            Marginals { probs: vec![cfg.d as f64 / cfg.n as f64; cfg.n], iterations: 0 }
                        }
                        Err(e) => return Err(e),
                    };
                    let mut thr = Tally::default();
                    let mut top = Tally::default();
                    thr.add(&truth, &select_threshold(&mg));
                    top.add(&truth, &select_topd(&mg, cfg.d)?);
                    Ok((thr, top))
                })
                .collect::<Result<_>>()?;
            for (method, pick) in [("threshold", 0usize), ("top-d", 1)] {
                let mut sum = Tally::default();
                for pair in &tallies {
                    let t = if pick == 0 { pair.0 } else { pair.1 };
                    sum.missed += t.missed;
                    sum.false_alarms += t.false_alarms;
                    sum.declared += t.declared;
                }
                let (p_e, p_fn, p_fp) = sum.rates(cfg.trials, cfg.d);
                rows.push(SimulationRow {
                    seed: cfg.seed,
                    n: cfg.n,
                    m: c.rows(),
                    d: cfg.d,
                    q,
                    eta: p.eta.clone(),
                    gamma_p: nm.gamma_p,
                    gamma_n: nm.gamma_n,
                    trials: cfg.trials,
                    iters: cfg.iters,
                    method,
                    p_e,
                    p_fn,
                    p_fp,
                });
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SimulationRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in rows {
        let eta: Vec<String> = r.eta.iter().map(u64::to_string).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.seed,
            r.n,
            r.m,
            r.d,
            r.q,
            eta.join("|"),
            r.gamma_p,
            r.gamma_n,
            r.trials,
            r.iters,
            r.method,
            r.p_e,
            r.p_fn,
            r.p_fp
        )
        .unwrap();
    }
    out
}
