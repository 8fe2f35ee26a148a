use crate::error::{Error, Result};
use crate::model::{CodeMatrix, CodeParams};

/// A horizontal concatenation `[s_1 Cb, ..., s_K Cb]` of one binary base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcatSpec {
    pub base: CodeMatrix,
    pub d: usize,
    pub eta: u64,
    /// Block multipliers, `eta` included.
    pub scales: Vec<u64>,
}

impl ConcatSpec {
    pub fn blocks(&self) -> usize {
        self.scales.len()
    }

    /// Multiplier of block `j` in units of `eta`.
    pub fn weight(&self, j: usize) -> u64 {
        self.scales[j] / self.eta
    }

    pub fn base_columns(&self) -> usize {
        self.base.cols()
    }
}

/// Block multipliers `eta * (1 + d + ... + d^{j-1})` that fit in `q - 1`.
///
/// For `d = 1` this yields `eta, 2 eta, ..., floor((q-1)/eta) eta`.
pub fn concat_scales(q: u64, eta: u64, d: usize) -> Result<Vec<u64>> {
    if eta == 0 {
        return Err(Error::ThresholdNotIncreasing);
    }
    if d == 0 {
        return Err(Error::BadD { d, n: 0 });
    }
    let mut scales = Vec::new();
    let mut weight: u64 = 1;
    let mut power: u64 = 1;
    while let Some(scale) = weight.checked_mul(eta) {
        if scale > q.saturating_sub(1) {
            break;
        }
        scales.push(scale);
        power = match power.checked_mul(d as u64) {
            Some(p) => p,
            None => break,
        };
        weight = match weight.checked_add(power) {
            Some(w) => w,
            None => break,
        };
    }
    if scales.is_empty() {
        return Err(Error::AlphabetTooSmall { q_minus_1: q.saturating_sub(1), needed: eta });
    }
    Ok(scales)
}

fn concat(cb: &CodeMatrix, e: usize, q: u64, eta: u64, d: usize) -> Result<(CodeMatrix, ConcatSpec, CodeParams)> {
    if !cb.is_binary() {
        return Err(Error::NotBinary);
    }
    let scales = concat_scales(q, eta, d)?;
    let blocks: Vec<CodeMatrix> = scales.iter().map(|&s| cb.scaled(s, q)).collect::<Result<_>>()?;
    let c = CodeMatrix::hconcat(&blocks, q)?;
    let params = CodeParams::equidistant(q, eta, 1, d, e)?;
    let spec = ConcatSpec { base: cb.clone(), d, eta, scales };
    Ok((c, spec, params))
}

/// Concatenation of scaled copies of a binary `d`-disjunct base.
pub fn construct3(cb: &CodeMatrix, e: usize, q: u64, eta: u64, d: usize) -> Result<(CodeMatrix, ConcatSpec, CodeParams)> {
    concat(cb, e, q, eta, d)
}

/// Concatenation of scaled copies of a binary `d`-separable base.
pub fn construct6(cb: &CodeMatrix, e: usize, q: u64, eta: u64, d: usize) -> Result<(CodeMatrix, ConcatSpec, CodeParams)> {
    concat(cb, e, q, eta, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct1, construct4, fixtures};

    #[test]
    fn worked_example_matrix() {
        let (c, spec, _) = construct3(&fixtures::disjunct_base_9x12(), 0, 7, 2, 2).unwrap();
        assert_eq!(spec.scales, vec![2, 6]);
        assert_eq!(c, fixtures::concat_disjunct_9x24());
    }

    #[test]
    fn separable_worked_example_matrix() {
        let (c, spec, _) = construct6(&fixtures::separable_base_7x8(), 0, 7, 2, 2).unwrap();
        assert_eq!(spec.blocks(), 2);
        assert_eq!(c, fixtures::concat_separable_7x16());
    }

    #[test]
    fn single_block_reduces_to_scaling() {
        let cb = fixtures::disjunct_base_9x12();
        let (c, spec, p) = construct3(&cb, 0, 3, 2, 2).unwrap();
        assert_eq!(spec.blocks(), 1);
        assert_eq!(c, construct1(&cb, 2, 0, 3, &p.eta).unwrap().0);
        let sep = fixtures::separable_base_7x8();
        let (c6, _, p6) = construct6(&sep, 0, 3, 2, 2).unwrap();
        assert_eq!(c6, construct4(&sep, 2, 0, 3, &p6.eta).unwrap().0);
    }

    #[test]
    fn scales_match_log_formula() {
        for d in 2..6usize {
            for eta in 1..4u64 {
                for q in 2..200u64 {
                    let k_formula = (((q - 1) as f64 / eta as f64) * (d as f64 - 1.0) + 1.0).log(d as f64);
                    let k = k_formula.floor() as usize;
                    match concat_scales(q, eta, d) {
                        Ok(s) => {
                            let exact = (k_formula - k_formula.round()).abs() < 1e-9;
                            let k = if exact { k_formula.round() as usize } else { k };
                            assert_eq!(s.len(), k, "q={q} eta={eta} d={d}");
                        }
                        Err(_) => assert_eq!(k, 0),
                    }
                }
            }
        }
    }

    #[test]
    fn top_block_dominates_lower_blocks() {
        for d in 2..5usize {
            let s = concat_scales(200, 2, d).unwrap();
            for j in 1..s.len() {
                assert!(s[j] > d as u64 * s[j - 1]);
                assert!(s[j] > s[j - 1]);
            }
        }
    }

    #[test]
    fn unit_degree_uses_linear_scales() {
        assert_eq!(concat_scales(7, 2, 1).unwrap(), vec![2, 4, 6]);
    }
}
