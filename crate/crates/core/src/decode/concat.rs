use super::{check_len, decode_disjunct};
use crate::construct::ConcatSpec;
use crate::error::{Error, Result};
use crate::model::{CodeParams, DefectiveSet, Syndrome};

/// Per-block syndromes recovered from a concatenated code's output.
///
/// `blocks[j]` is `y_{j+1}` and `remainders[j]` is `y'_{j+1}`, both in units
/// of `eta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub blocks: Vec<Syndrome>,
    pub remainders: Vec<Syndrome>,
}

fn check_spec(spec: &ConcatSpec) -> Result<()> {
    let mut expected = 1u64;
    let mut power = 1u64;
    for (j, &s) in spec.scales.iter().enumerate() {
        if s != expected.saturating_mul(spec.eta) {
            return Err(Error::InconsistentSpec(format!("block {j} has scale {s}, expected {}", expected * spec.eta)));
        }
        power = power.saturating_mul(spec.d as u64);
        expected = expected.saturating_add(power);
    }
    if spec.scales.is_empty() {
        return Err(Error::InconsistentSpec("no blocks".into()));
    }
    Ok(())
}

/// Splits `z` into block syndromes, top block first.
pub fn decompose(spec: &ConcatSpec, z: &Syndrome) -> Result<Decomposition> {
    check_spec(spec)?;
    check_len(z, spec.base.rows())?;
    let k = spec.blocks();
    let mut blocks = vec![Syndrome::zeros(z.len()); k];
    let mut remainders = vec![Syndrome::zeros(z.len()); k];
    let mut rest = z.clone();
    for j in (0..k).rev() {
        let w = spec.weight(j) as u32;
        remainders[j] = rest.clone();
        blocks[j] = Syndrome(rest.values().iter().map(|&v| v / w * w).collect());
        for (r, &b) in rest.0.iter_mut().zip(blocks[j].values()) {
            *r -= b;
        }
    }
    Ok(Decomposition { blocks, remainders })
}

/// Decomposes `z` and runs the disjunct decoder on every block.
pub fn decode_construct3(spec: &ConcatSpec, p: &CodeParams, z: &Syndrome) -> Result<DefectiveSet> {
    let parts = decompose(spec, z)?;
    let nb = spec.base_columns();
    let mut found = Vec::new();
    for (j, y) in parts.blocks.iter().enumerate() {
        let block = spec.base.scaled(spec.scales[j], p.q)?;
        let bp = CodeParams::equidistant(p.q, spec.eta, 1, spec.d, p.e)?;
        let local = decode_disjunct(&block, &bp, y)?;
        found.extend(local.indices().iter().map(|&i| i + j * nb));
    }
    DefectiveSet::new(found, nb * spec.blocks())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct3, construct6, fixtures};
    use crate::model::CodeMatrix;
    use crate::rng::rng_from_seed;
    use rand::seq::index::sample;
    use rand::Rng;

    fn worked() -> (CodeMatrix, ConcatSpec, CodeParams) {
        construct3(&fixtures::disjunct_base_9x12(), 0, 7, 2, 2).unwrap()
    }

    #[test]
    fn worked_example() {
        let (_, spec, p) = worked();
        let z = Syndrome(vec![3, 0, 1, 4, 0, 0, 0, 3, 1]);
        let parts = decompose(&spec, &z).unwrap();
        assert_eq!(parts.blocks[1].values(), &[3, 0, 0, 3, 0, 0, 0, 3, 0]);
        assert_eq!(parts.remainders[0].values(), &[0, 0, 1, 1, 0, 0, 0, 0, 1]);
        assert_eq!(parts.blocks[0].values(), &[0, 0, 1, 1, 0, 0, 0, 0, 1]);
        let set = decode_construct3(&spec, &p, &z).unwrap();
        assert_eq!(set.one_based(), vec![2, 20]);
    }

    #[test]
    fn printed_block_two_syndrome_still_points_at_s20() {
        let (_, spec, _) = worked();
        let block = spec.base.scaled(6, 7).unwrap();
        let bp = CodeParams::equidistant(7, 2, 1, 2, 0).unwrap();
        let y = Syndrome(vec![3, 0, 3, 3, 0, 0, 0, 3, 0]);
        let local = decode_disjunct(&block, &bp, &y).unwrap();
        assert_eq!(local.indices(), &[7]);
    }

    #[test]
    fn matches_syndrome_for_random_sets() {
        let builds = [
            construct3(&fixtures::disjunct_base_9x12(), 0, 29, 2, 2).unwrap(),
            construct6(&fixtures::separable_base_7x8(), 0, 29, 2, 2).unwrap(),
        ];
        for (c, spec, p) in builds {
            assert_eq!(spec.blocks(), 3);
            let mut rng = rng_from_seed(9);
            for _ in 0..200 {
                let k = rng.gen_range(0..=2);
                let set = DefectiveSet::new(sample(&mut rng, c.cols(), k).into_vec(), c.cols()).unwrap();
                let z = c.syndrome(set.indices(), &p.eta).unwrap();
                let parts = decompose(&spec, &z).unwrap();
                let nb = spec.base_columns();
                for j in 0..spec.blocks() {
                    let local: Vec<usize> =
                        set.indices().iter().filter(|&&i| i / nb == j).map(|&i| i % nb).collect();
                    let raw = spec.base.raw_sums(&local);
                    let expect: Vec<u32> = raw.iter().map(|&r| r as u32 * spec.weight(j) as u32).collect();
                    assert_eq!(parts.blocks[j].values(), &expect[..]);
                }
            }
        }
    }

    #[test]
    fn recovers_planted_sets() {
        let (c, spec, p) = worked();
        let mut rng = rng_from_seed(3);
        for _ in 0..200 {
            let k = rng.gen_range(0..=2);
            let set = DefectiveSet::new(sample(&mut rng, 24, k).into_vec(), 24).unwrap();
            let z = c.syndrome(set.indices(), &p.eta).unwrap();
            assert_eq!(decode_construct3(&spec, &p, &z).unwrap(), set);
        }
    }

    #[test]
    fn single_block_matches_disjunct_decoder() {
        let cb = fixtures::disjunct_base_9x12();
        let (c, spec, p) = construct3(&cb, 0, 3, 2, 2).unwrap();
        let mut rng = rng_from_seed(4);
        for _ in 0..50 {
            let z = Syndrome((0..9).map(|_| rng.gen_range(0..3)).collect());
            assert_eq!(decode_construct3(&spec, &p, &z).unwrap(), decode_disjunct(&c, &p, &z).unwrap());
        }
    }

    #[test]
    fn inconsistent_spec_rejected() {
        let (_, mut spec, p) = worked();
        spec.scales[1] = 4;
        assert!(matches!(decode_construct3(&spec, &p, &Syndrome::zeros(9)), Err(Error::InconsistentSpec(_))));
    }
}
