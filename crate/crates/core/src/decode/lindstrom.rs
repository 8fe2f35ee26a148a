use super::check_len;
use crate::construct::LindstromSpec;
use crate::error::{Error, Result};
use crate::model::{DefectiveSet, Syndrome};

/// Recovers any defective set from a noiseless generalized Lindstrom output,
/// solving one block at a time from the last block down.
pub fn decode_construct9(spec: &LindstromSpec, z: &Syndrome) -> Result<DefectiveSet> {
    let m = spec.rows();
    check_len(z, m)?;
    let mut row_of = vec![usize::MAX; 1 << spec.kappa];
    for (j, &s) in spec.subsets.iter().enumerate() {
        row_of[s as usize] = j;
    }
    let mut residual: Vec<i64> = z.values().iter().map(|&v| v as i64).collect();
    let mut found = Vec::new();
    for i in (0..m).rev() {
        let s = spec.subsets[i];
        let mut a = 0i64;
        let mut sub = s;
        while sub != 0 {
            let sign = if sub.count_ones() % 2 == 1 { 1 } else { -1 };
            a += sign * residual[row_of[sub as usize]];
            sub = (sub - 1) & s;
        }
        if a < 0 {
            return Err(Error::NonBinaryResidue { block: i, residue: a });
        }
        let width = spec.widths[i];
        for (k, col) in spec.block_columns(i).enumerate() {
            let coeff = 1i64 << (width - 1 - k);
            if a >= coeff {
                a -= coeff;
                found.push(col);
                for (r, &v) in residual.iter_mut().zip(spec.base.column(col)) {
                    *r -= v as i64;
                }
            }
        }
        if a != 0 {
            return Err(Error::NonBinaryResidue { block: i, residue: a });
        }
    }
    if let Some(&r) = residual.iter().find(|&&r| r != 0) {
        return Err(Error::NonBinaryResidue { block: 0, residue: r });
    }
    DefectiveSet::new(found, spec.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct9, fixtures, ChainPolicy};
    use crate::rng::rng_from_seed;
    use rand::Rng;

    #[test]
    fn every_set_decodes_at_kappa_two() {
        for policy in [ChainPolicy::DropLargest, ChainPolicy::DropSmallest] {
            let (c, spec, p) = construct9(2, 3, 2, &policy, None).unwrap();
            let n = c.cols();
            let mut seen = std::collections::HashSet::new();
            for mask in 0u32..(1 << n) {
                let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let z = c.syndrome(&set, &p.eta).unwrap();
                assert!(seen.insert(z.clone()));
                assert_eq!(decode_construct9(&spec, &z).unwrap().indices(), &set[..]);
            }
        }
    }

    #[test]
    fn worked_example_random_sets() {
        let chains = ChainPolicy::Explicit(fixtures::lindstrom_example_chains());
        let (c, spec, p) = construct9(3, 9, 2, &chains, None).unwrap();
        let mut rng = rng_from_seed(1);
        for _ in 0..500 {
            let set: Vec<usize> = (0..26).filter(|_| rng.gen_bool(0.5)).collect();
            let z = c.syndrome(&set, &p.eta).unwrap();
            assert_eq!(decode_construct9(&spec, &z).unwrap().indices(), &set[..]);
        }
        let all: Vec<usize> = (0..26).collect();
        let z = c.syndrome(&all, &p.eta).unwrap();
        assert_eq!(decode_construct9(&spec, &z).unwrap().len(), 26);
        assert!(decode_construct9(&spec, &Syndrome::zeros(7)).unwrap().is_empty());
    }

    #[test]
    fn truncated_code_decodes() {
        let (c, spec, p) = construct9(4, 5, 1, &ChainPolicy::default(), Some(40)).unwrap();
        let mut rng = rng_from_seed(2);
        for _ in 0..300 {
            let set: Vec<usize> = (0..40).filter(|_| rng.gen_bool(0.4)).collect();
            let z = c.syndrome(&set, &p.eta).unwrap();
            assert_eq!(decode_construct9(&spec, &z).unwrap().indices(), &set[..]);
        }
    }

    #[test]
    fn corrupted_output_is_flagged() {
        let (_, spec, _) = construct9(3, 9, 2, &ChainPolicy::default(), None).unwrap();
        let z = Syndrome(vec![0, 0, 0, 0, 0, 0, 1]);
        assert!(matches!(decode_construct9(&spec, &z), Err(Error::NonBinaryResidue { .. })));
    }
}
