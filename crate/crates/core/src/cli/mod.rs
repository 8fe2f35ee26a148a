//! Command-line front end.

pub mod config;
pub mod io;
pub mod simulate;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::capacity::{alpha_profile, capacity_search};
use crate::construct::{
    construct1, construct2, construct3, construct4, construct5, construct6, construct7, construct9, concat_scales,
    ChainPolicy, ConcatSpec, LindstromSpec, RowCount,
};
use crate::decode::{
    bp_decode, decode_construct3, decode_construct9, decode_disjunct, decode_ml, select_threshold, select_topd,
    BpConfig,
};
use crate::error::{Error, Result};
use crate::model::{apply_noise, equidistant_thresholds, CodeMatrix, CodeParams, DefectiveSet, NoiseModel, Syndrome};
use crate::verify::{
    is_binary_disjunct_cgt, is_binary_separable_cgt, is_binary_separable_qgt, is_sq_disjunct, is_sq_separable, Verdict,
};

#[derive(Debug, Parser)]
#[command(name = "sqgt", version, about = "Semi-quantitative group testing codes")]
pub struct Cli {
    /// Master seed for every random choice; defaults to 1, or to the config file's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ScaleDisjunct,
    RandomDisjunct,
    ConcatDisjunct,
    ScaleSeparable,
    BoseChowla,
    ConcatSeparable,
    RandomBinary,
    Lindstrom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    SqDisjunct,
    SqSeparable,
    BinDisjunct,
    BinSepCgt,
    BinSepQgt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Disjunct,
    Concat,
    Lindstrom,
    Ml,
    Bp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Selection {
    Threshold,
    TopD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Chains {
    DropLargest,
    DropSmallest,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and write it in the text matrix format.
    Construct {
        #[arg(long, value_enum)]
        method: Method,
        /// Binary base matrix for the scaling and concatenation methods.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        e: usize,
        #[arg(long, default_value_t = 3)]
        q: u64,
        /// First threshold of an equidistant quantizer.
        #[arg(long, default_value_t = 2)]
        eta1: u64,
        /// Full threshold list, e.g. `0,2,3,5`; overrides `--eta1` where thresholds are free.
        #[arg(long, value_delimiter = ',')]
        eta: Option<Vec<u64>>,
        /// Index of the first threshold the stacked binary ensemble must resolve.
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        /// Fixed row count for random methods; otherwise the asymptotic formula is used.
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        multiplier: f64,
        #[arg(long, default_value_t = 3)]
        kappa: u32,
        #[arg(long, value_enum, default_value_t = Chains::DropLargest)]
        chains: Chains,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively check a property of a matrix file.
    Verify {
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long)]
        matrix: PathBuf,
        /// Overrides the file's upper set size.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        e: Option<usize>,
    },
    /// Print the (optionally noisy) test outcomes for a defective set.
    Encode {
        #[arg(long)]
        matrix: PathBuf,
        /// 1-based subject indices, e.g. `2,20`.
        #[arg(long, value_delimiter = ',')]
        defectives: Vec<usize>,
        #[arg(long, default_value_t = 0.0)]
        gamma_p: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_n: f64,
    },
    /// Recover the defective set from test outcomes.
    Decode {
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[arg(long)]
        matrix: PathBuf,
        /// Outcomes separated by spaces or commas.
        #[arg(long)]
        syndrome: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        gamma_p: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_n: f64,
        #[arg(long, default_value_t = 20)]
        iters: usize,
        #[arg(long, value_enum, default_value_t = Selection::TopD)]
        select: Selection,
        #[arg(long, value_enum, default_value_t = Chains::DropLargest)]
        chains: Chains,
    },
    /// Run a Monte Carlo sweep described by a key=value config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for the best input distribution and quantizer.
    Capacity {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: usize,
        #[arg(long = "Q")]
        levels: usize,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
    },
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::ConfigError(format!("--{name} is required for this method")))
}

fn load_base(path: Option<PathBuf>) -> Result<CodeMatrix> {
    Ok(io::read_matrix(&need(path, "base")?)?.0)
}

fn row_count(rows: Option<usize>, delta: f64, multiplier: f64) -> RowCount {
    rows.map_or(RowCount::Formula { delta, multiplier }, RowCount::Fixed)
}

fn policy(chains: Chains) -> ChainPolicy {
    match chains {
        Chains::DropLargest => ChainPolicy::DropLargest,
        Chains::DropSmallest => ChainPolicy::DropSmallest,
    }
}

fn parse_syndrome(text: &str) -> Result<Syndrome> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| {
            t.parse().map_err(|_| Error::ParseError { line: 1, column: i + 1, message: format!("bad outcome `{t}`") })
        })
        .collect::<Result<Vec<u32>>>()
        .map(Syndrome)
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// Rebuilds the concatenation metadata of a matrix produced by the concat methods.
fn concat_spec(c: &CodeMatrix, p: &CodeParams, d: usize) -> Result<ConcatSpec> {
    let eta = p.eta[1];
    let k = concat_scales(p.q, eta, d)?.len();
    if !c.cols().is_multiple_of(k) {
        return Err(Error::InconsistentSpec(format!("{} columns do not split into {k} blocks", c.cols())));
    }
    let nb = c.cols() / k;
    let cols: Vec<Vec<u32>> = (0..nb)
        .map(|j| c.column(j).iter().map(|&v| if v as u64 == eta { 1 } else { u32::from(v != 0) * 2 }).collect())
        .collect();
    let base = CodeMatrix::from_columns(2, c.rows(), &cols).map_err(|_| Error::NotBinary)?;
    let (rebuilt, spec, _) = construct3(&base, p.e, p.q, eta, d)?;
    if &rebuilt != c {
        return Err(Error::InconsistentSpec("matrix is not a concatenation of scaled copies".into()));
    }
    Ok(spec)
}

fn lindstrom_spec(c: &CodeMatrix, p: &CodeParams, chains: Chains) -> Result<LindstromSpec> {
    let kappa = (c.rows() + 1).trailing_zeros();
    if (1usize << kappa) != c.rows() + 1 {
        return Err(Error::InconsistentSpec(format!("{} rows is not 2^kappa - 1", c.rows())));
    }
    let (rebuilt, spec, _) = construct9(kappa, p.q, p.eta[1], &policy(chains), Some(c.cols()))?;
    if &rebuilt != c {
        return Err(Error::InconsistentSpec("matrix does not match the Lindstrom layout".into()));
    }
    Ok(spec)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs one command and returns the text to print plus the exit status.
pub fn execute(cli: Cli) -> Result<(String, i32)> {
    let seed = cli.seed.unwrap_or(1);
    match cli.command {
        Command::Construct {
            method,
            base,
            n,
            d,
            e,
            q,
            eta1,
            eta,
            alpha,
            rows,
            delta,
            multiplier,
            kappa,
            chains,
            out,
        } => {
            let eq = |u: usize| equidistant_thresholds(eta1, crate::model::min_equidistant_levels(q, eta1, u as u64));
            let (c, p) = match method {
                Method::ScaleDisjunct => construct1(&load_base(base)?, d, e, q, &eta.unwrap_or_else(|| eq(d)))?,
                Method::ScaleSeparable => construct4(&load_base(base)?, d, e, q, &eta.unwrap_or_else(|| eq(d)))?,
                Method::ConcatDisjunct => {
                    let (c, _, p) = construct3(&load_base(base)?, e, q, eta1, d)?;
                    (c, p)
                }
                Method::ConcatSeparable => {
                    let (c, _, p) = construct6(&load_base(base)?, e, q, eta1, d)?;
                    (c, p)
                }
                Method::RandomDisjunct => {
                    construct2(need(n, "n")?, d, e, q, eta1, None, row_count(rows, delta, multiplier), seed)?
                }
                Method::BoseChowla => {
                    let (c, p, _) = construct5(need(n, "n")?, d, q, eta1)?;
                    (c, p)
                }
                Method::RandomBinary => {
                    let eta = need(eta, "eta")?;
                    construct7(need(n, "n")?, d, e, &eta, alpha, row_count(rows, delta, multiplier), seed)?
                }
                Method::Lindstrom => {
                    let (c, _, p) = construct9(kappa, q, eta1, &policy(chains), n)?;
                    (c, p)
                }
            };
            let text = io::format_matrix(&c, &p);
            emit(&out, &text)?;
            let note = match out {
                Some(path) => format!("wrote {}x{} matrix to {}\n", c.rows(), c.cols(), path.display()),
                None => String::new(),
            };
            Ok((note, 0))
        }
        Command::Verify { property, matrix, d, l, e } => {
            let (c, mut p) = io::read_matrix(&matrix)?;
            if let Some(d) = d {
                p.u = d;
            }
            if let Some(l) = l {
                p.l = l;
            }
            if let Some(e) = e {
                p.e = e;
            }
            let verdict = match property {
                PropertyArg::SqDisjunct => is_sq_disjunct(&c, &p)?,
                PropertyArg::SqSeparable => is_sq_separable(&c, &p)?,
                PropertyArg::BinDisjunct => is_binary_disjunct_cgt(&c, p.u, p.e)?,
                PropertyArg::BinSepCgt => is_binary_separable_cgt(&c, p.u, p.e)?,
                PropertyArg::BinSepQgt => is_binary_separable_qgt(&c, p.u, p.e)?,
            };
            Ok(match verdict {
                Verdict::Pass => ("PASS\n".into(), 0),
                Verdict::Fail(w) => {
                    let sets: Vec<String> = w
                        .sets
                        .iter()
                        .map(|s| format!("{{{}}}", join(&s.iter().map(|i| i + 1).collect::<Vec<_>>(), ",")))
                        .collect();
                    (format!("FAIL {} sets={} detail={}\n", w.kind.name(), sets.join(" "), join(&w.detail, ",")), 1)
                }
            })
        }
        Command::Encode { matrix, defectives, gamma_p, gamma_n } => {
            let (c, p) = io::read_matrix(&matrix)?;
            let set = DefectiveSet::from_one_based(&defectives, c.cols())?;
            let y = c.syndrome(set.indices(), &p.eta)?;
            let nm = NoiseModel::new(gamma_p, gamma_n)?;
            let z = if nm.is_noiseless() { y } else { apply_noise(&y, p.levels(), &nm, seed) };
            Ok((format!("{}\n", join(z.values(), " ")), 0))
        }
        Command::Decode { algorithm, matrix, syndrome, d, l, gamma_p, gamma_n, iters, select, chains } => {
            let (c, p) = io::read_matrix(&matrix)?;
            let z = parse_syndrome(&syndrome)?;
            let d = d.unwrap_or(p.u);
            let nm = NoiseModel::new(gamma_p, gamma_n)?;
            let set = match algorithm {
                Algorithm::Disjunct => decode_disjunct(&c, &p, &z)?,
                Algorithm::Concat => decode_construct3(&concat_spec(&c, &p, d)?, &p, &z)?,
                Algorithm::Lindstrom => decode_construct9(&lindstrom_spec(&c, &p, chains)?, &z)?,
                Algorithm::Ml => decode_ml(&c, &p.eta, &z, l.unwrap_or(p.l), d, &nm)?,
                Algorithm::Bp => {
                    let cfg = BpConfig { max_iter: iters, ..BpConfig::default() };
                    let mg = bp_decode(&c, &p.eta, &z, d, &nm, &cfg)?;
                    match select {
                        Selection::Threshold => select_threshold(&mg),
                        Selection::TopD => select_topd(&mg, d)?,
                    }
                }
            };
            Ok((format!("{}\n", join(&set.one_based(), ",")), 0))
        }
        Command::Simulate { config, out } => {
            let mut cfg = config::SimConfig::parse(&std::fs::read_to_string(&config)?)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let csv = simulate::to_csv(&simulate::run_simulation(&cfg)?);
            match out {
                Some(path) => {
                    std::fs::write(&path, &csv)?;
                    Ok((String::new(), 0))
                }
                None => Ok((csv, 0)),
            }
        }
        Command::Capacity { d, q, levels, grid_step } => {
            let r = capacity_search(d, q, levels, grid_step)?;
            let profile = alpha_profile(&r.pt, d, &r.quant);
            Ok((
                format!(
                    "alpha={}\nP_T={}\neta={}\nI(i)/i={}\n",
                    r.alpha,
                    join(r.pt.probs(), ","),
                    join(r.quant.eta(), ","),
                    join(&profile, ",")
                ),
                0,
            ))
        }
    }
}

/// Caps the global thread pool when `SQGT_THREADS` is set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SQGT_THREADS") {
        let n: usize = v.parse().map_err(|_| Error::ConfigError(format!("SQGT_THREADS=`{v}` is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::ConfigError(e.to_string()))?;
    }
    Ok(())
}

/// Entry point shared by the binary: prints output or `error: <Name>: message`.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|_| execute(cli));
    match result {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            2
        }
    }
}
