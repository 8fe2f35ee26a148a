use super::check_len;
use crate::combin::{count_subsets, subsets_by_size};
use crate::error::{Error, Result};
use crate::model::{quantize, CodeMatrix, DefectiveSet, NoiseModel, Syndrome};
use crate::verify::DEFAULT_BUDGET;

/// `ln P(z | set)`, or `None` when the set cannot produce `z`.
pub fn log_likelihood(c: &CodeMatrix, eta: &[u64], set: &[usize], z: &Syndrome, nm: &NoiseModel) -> Option<f64> {
    let levels = eta.len() - 1;
    let mut total = 0.0;
    for (s, &zk) in c.raw_sums(set).into_iter().zip(z.values()) {
        let y = quantize(eta, s).ok()?;
        let p = nm.transition(y, zk, levels);
        if p <= 0.0 {
            return None;
        }
        total += p.ln();
    }
    Some(total)
}

/// Exhaustive maximum-likelihood decoder over sets with sizes in `l..=u`.
/// Ties go to the set enumerated first (smaller, then colexicographic).
pub fn decode_ml(c: &CodeMatrix, eta: &[u64], z: &Syndrome, l: usize, u: usize, nm: &NoiseModel) -> Result<DefectiveSet> {
    decode_ml_with_budget(c, eta, z, l, u, nm, DEFAULT_BUDGET)
}

pub fn decode_ml_with_budget(
    c: &CodeMatrix,
    eta: &[u64],
    z: &Syndrome,
    l: usize,
    u: usize,
    nm: &NoiseModel,
    budget: u64,
) -> Result<DefectiveSet> {
    check_len(z, c.rows())?;
    if l > u {
        return Err(Error::BadRange { l, u });
    }
    let total = count_subsets(c.cols(), l, u);
    if total > budget as u128 {
        return Err(Error::ExplosionGuard { count: total, budget });
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for set in subsets_by_size(c.cols(), l, u) {
        if let Some(ll) = log_likelihood(c, eta, &set, z, nm) {
            if best.as_ref().is_none_or(|(b, _)| ll > *b) {
                best = Some((ll, set));
            }
        }
    }
    let (_, set) = best.ok_or(Error::NoConsistentSet)?;
    DefectiveSet::new(set, c.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::fixtures;
    use crate::model::CodeParams;
    use crate::rng::rng_from_seed;
    use rand::seq::index::sample;
    use rand::Rng;

    #[test]
    fn noiseless_separable_code_recovers_planted_set() {
        let c = fixtures::concat_separable_7x16();
        let p = CodeParams::equidistant(7, 2, 1, 2, 0).unwrap();
        let mut rng = rng_from_seed(8);
        for _ in 0..50 {
            let k = rng.gen_range(1..=2);
            let set = DefectiveSet::new(sample(&mut rng, 16, k).into_vec(), 16).unwrap();
            let z = c.syndrome(set.indices(), &p.eta).unwrap();
            assert_eq!(decode_ml(&c, &p.eta, &z, 1, 2, &NoiseModel::noiseless()).unwrap(), set);
        }
    }

    #[test]
    fn inconsistent_noiseless_output() {
        let c = fixtures::disjunct_base_9x12();
        let eta = [0, 1, 2, 3];
        let z = Syndrome(vec![2; 9]);
        assert_eq!(decode_ml(&c, &eta, &z, 1, 1, &NoiseModel::noiseless()), Err(Error::NoConsistentSet));
    }

    #[test]
    fn ties_go_to_first_set() {
        let c = CodeMatrix::from_rows(2, &[vec![1, 1, 1]]).unwrap();
        let z = Syndrome(vec![1]);
        let set = decode_ml(&c, &[0, 1, 2], &z, 1, 1, &NoiseModel::noiseless()).unwrap();
        assert_eq!(set.indices(), &[0]);
    }

    #[test]
    fn budget_enforced() {
        let c = fixtures::disjunct_base_9x12();
        let r = decode_ml_with_budget(&c, &[0, 1, 2, 3], &Syndrome::zeros(9), 0, 2, &NoiseModel::noiseless(), 10);
        assert!(matches!(r, Err(Error::ExplosionGuard { .. })));
    }
}
