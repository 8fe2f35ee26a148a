use super::check_len;
use crate::error::Result;
use crate::model::{quantize, CodeMatrix, CodeParams, DefectiveSet, Syndrome};

/// Declares subject `i` defective when its own syndrome exceeds `z` in at
/// most `e` coordinates.
pub fn decode_disjunct(c: &CodeMatrix, p: &CodeParams, z: &Syndrome) -> Result<DefectiveSet> {
    check_len(z, c.rows())?;
    let mut lut = vec![0u32; c.max_entry() as usize + 1];
    for (v, slot) in lut.iter_mut().enumerate() {
        *slot = quantize(&p.eta, v as u64)?;
    }
    let found = (0..c.cols())
        .filter(|&i| {
            let misses = c.column(i).iter().zip(z.values()).filter(|&(&v, &zk)| lut[v as usize] > zk).count();
            misses <= p.e
        })
        .collect();
    DefectiveSet::new(found, c.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct1, fixtures};
    use crate::model::{equidistant_thresholds, CodeParams};
    use crate::rng::rng_from_seed;
    use rand::seq::index::sample;
    use rand::Rng;

    #[test]
    fn zero_syndrome_gives_empty_set() {
        let cb = fixtures::disjunct_base_9x12();
        let p = CodeParams::equidistant(2, 1, 1, 2, 0).unwrap();
        assert!(decode_disjunct(&cb, &p, &Syndrome::zeros(9)).unwrap().is_empty());
    }

    #[test]
    fn planted_sets_recovered() {
        let cb = fixtures::disjunct_base_9x12();
        let stacked = CodeMatrix::vstack(&[cb.clone(), cb.clone(), cb]).unwrap();
        let eta = equidistant_thresholds(2, 4);
        let (c, p) = construct1(&stacked, 2, 1, 3, &eta).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..200 {
            let k = rng.gen_range(0..=2);
            let set = DefectiveSet::new(sample(&mut rng, 12, k).into_vec(), 12).unwrap();
            let mut z = c.syndrome(set.indices(), &p.eta).unwrap();
            let row = rng.gen_range(0..z.len());
            z.0[row] = if z.0[row] == 0 { 1 } else { z.0[row] - 1 };
            assert_eq!(decode_disjunct(&c, &p, &z).unwrap(), set);
        }
    }

    #[test]
    fn length_checked() {
        let cb = fixtures::disjunct_base_9x12();
        let p = CodeParams::equidistant(2, 1, 1, 2, 0).unwrap();
        assert!(decode_disjunct(&cb, &p, &Syndrome::zeros(3)).is_err());
    }
}
