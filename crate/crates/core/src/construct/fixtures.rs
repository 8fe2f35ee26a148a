//! Reference matrices for the worked examples.

use std::collections::BTreeMap;

use crate::model::CodeMatrix;

fn parse(q: u64, text: &str) -> CodeMatrix {
    let rows: Vec<Vec<u32>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(|t| t.parse().expect("fixture entry")).collect())
        .collect();
    CodeMatrix::from_rows(q, &rows).expect("fixture matrix")
}

/// Binary 2-disjunct base, 9 x 12.
pub fn disjunct_base_9x12() -> CodeMatrix {
    parse(
        2,
        "
        1 0 0 0 1 0 0 1 1 0 0 0
        1 0 0 0 0 1 1 0 0 1 0 0
        0 1 0 0 1 0 1 0 0 0 1 0
        0 1 0 0 0 1 0 1 0 0 0 1
        0 0 1 0 1 0 0 0 0 1 0 1
        0 0 1 0 0 1 0 0 1 0 1 0
        0 0 0 1 0 0 1 0 1 0 0 1
        0 0 0 1 0 0 0 1 0 1 1 0
        1 1 1 1 0 0 0 0 0 0 0 0
        ",
    )
}

/// Concatenation of the 9 x 12 base at q = 7, eta = 2.
pub fn concat_disjunct_9x24() -> CodeMatrix {
    parse(
        7,
        "
        2 0 0 0 2 0 0 2 2 0 0 0 6 0 0 0 6 0 0 6 6 0 0 0
        2 0 0 0 0 2 2 0 0 2 0 0 6 0 0 0 0 6 6 0 0 6 0 0
        0 2 0 0 2 0 2 0 0 0 2 0 0 6 0 0 6 0 6 0 0 0 6 0
        0 2 0 0 0 2 0 2 0 0 0 2 0 6 0 0 0 6 0 6 0 0 0 6
        0 0 2 0 2 0 0 0 0 2 0 2 0 0 6 0 6 0 0 0 0 6 0 6
        0 0 2 0 0 2 0 0 2 0 2 0 0 0 6 0 0 6 0 0 6 0 6 0
        0 0 0 2 0 0 2 0 2 0 0 2 0 0 0 6 0 0 6 0 6 0 0 6
        0 0 0 2 0 0 0 2 0 2 2 0 0 0 0 6 0 0 0 6 0 6 6 0
        2 2 2 2 0 0 0 0 0 0 0 0 6 6 6 6 0 0 0 0 0 0 0 0
        ",
    )
}

/// Binary 2-separable base, 7 x 8.
pub fn separable_base_7x8() -> CodeMatrix {
    parse(
        2,
        "
        1 1 0 0 0 0 0 0
        1 0 1 0 0 0 0 0
        0 1 0 1 0 1 0 0
        0 0 0 1 1 0 0 0
        0 0 1 0 1 0 1 0
        0 0 0 0 0 1 0 1
        0 0 0 0 0 0 1 1
        ",
    )
}

/// Concatenation of the 7 x 8 base at q = 7, eta = 2.
pub fn concat_separable_7x16() -> CodeMatrix {
    parse(
        7,
        "
        2 2 0 0 0 0 0 0 6 6 0 0 0 0 0 0
        2 0 2 0 0 0 0 0 6 0 6 0 0 0 0 0
        0 2 0 2 0 2 0 0 0 6 0 6 0 6 0 0
        0 0 0 2 2 0 0 0 0 0 0 6 6 0 0 0
        0 0 2 0 2 0 2 0 0 0 6 0 6 0 6 0
        0 0 0 0 0 2 0 2 0 0 0 0 0 6 0 6
        0 0 0 0 0 0 2 2 0 0 0 0 0 0 6 6
        ",
    )
}

/// Last block of the kappa = 3, q = 5, eta = 2 generalized Lindstrom code,
/// before scaling by eta.
pub fn lindstrom_block7() -> CodeMatrix {
    parse(
        9,
        "
        4 2 1 1 1
        4 2 1 1 0
        4 2 1 0 0
        0 0 0 0 0
        0 0 0 0 0
        0 0 0 0 0
        4 2 1 0 0
        ",
    )
}

/// Full kappa = 3, q = 5, eta = 2 generalized Lindstrom code before scaling.
pub fn lindstrom_7x26() -> CodeMatrix {
    parse(
        9,
        "
        4 2 1 0 0 0 0 0 0 4 2 1 1 4 2 1 0 0 0 0 0 4 2 1 1 1
        0 0 0 4 2 1 0 0 0 4 2 1 0 0 0 0 0 4 2 1 1 4 2 1 1 0
        0 0 0 0 0 0 4 2 1 0 0 0 0 4 2 1 1 4 2 1 0 4 2 1 0 0
        4 2 1 4 2 1 0 0 0 0 0 0 0 4 2 1 0 4 2 1 1 0 0 0 0 0
        4 2 1 0 0 0 4 2 1 4 2 1 1 0 0 0 0 4 2 1 0 0 0 0 0 0
        0 0 0 4 2 1 4 2 1 4 2 1 0 4 2 1 1 0 0 0 0 0 0 0 0 0
        4 2 1 4 2 1 4 2 1 0 0 0 0 0 0 0 0 0 0 0 0 4 2 1 0 0
        ",
    )
}

/// Chains `T_{i,k}` used by the kappa = 3 example, keyed by 0-based block.
/// Sets are bit masks with bit `b` standing for element `b + 1`.
pub fn lindstrom_example_chains() -> BTreeMap<usize, Vec<u32>> {
    let mut chains = BTreeMap::new();
    chains.insert(3, vec![0b001]);
    chains.insert(4, vec![0b100]);
    chains.insert(5, vec![0b010]);
    chains.insert(6, vec![0b011, 0b001]);
    chains
}
