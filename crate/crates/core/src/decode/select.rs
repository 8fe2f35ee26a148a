use super::Marginals;
use crate::error::{Error, Result};
use crate::model::DefectiveSet;

/// Subjects whose marginal is strictly above one half.
pub fn select_threshold(mg: &Marginals) -> DefectiveSet {
    let n = mg.probs.len();
    let chosen = (0..n).filter(|&i| mg.probs[i] > 0.5).collect();
    DefectiveSet::new(chosen, n).expect("indices in range")
}

/// The `d` largest marginals, smaller index first among ties.
pub fn select_topd(mg: &Marginals, d: usize) -> Result<DefectiveSet> {
    let n = mg.probs.len();
    if d > n {
        return Err(Error::BadD { d, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| mg.probs[b].total_cmp(&mg.probs[a]).then(a.cmp(&b)));
    order.truncate(d);
    DefectiveSet::new(order, n)
}
