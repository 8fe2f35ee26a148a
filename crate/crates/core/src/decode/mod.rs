//! Decoders for every construction, plus the brute-force ML oracle and
//! belief propagation.

mod bp;
mod concat;
mod disjunct;
mod lindstrom;
mod ml;
mod select;

pub use bp::{bp_decode, BpConfig, Marginals};
pub use concat::{decode_construct3, decompose, Decomposition};
pub use disjunct::decode_disjunct;
pub use lindstrom::decode_construct9;
pub use ml::{decode_ml, decode_ml_with_budget, log_likelihood};
pub use select::{select_threshold, select_topd};

use crate::error::{Error, Result};
use crate::model::Syndrome;

fn check_len(z: &Syndrome, m: usize) -> Result<()> {
    if z.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: z.len() });
    }
    Ok(())
}
