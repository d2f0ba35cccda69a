//! Fixed inputs shared by the benchmarks in `benches/`.

use anosov_core::homology::{Configuration, H1Vector, NewLozengeData};

/// Two-new-adjacent configurations over every nonzero `s ∈ {0,1}^{2n}`.
pub fn two_new_corpus(n: u32, k: i64) -> Vec<Configuration> {
    let width = 2 * n as usize;
    let vectors: Vec<NewLozengeData> = (1u32..1 << width)
        .map(|bits| NewLozengeData::new((0..width).map(|b| (bits >> b) & 1).collect()).expect("nonzero"))
        .collect();
    let mut out = Vec::new();
    for s1 in &vectors {
        for s2 in &vectors {
            out.push(Configuration::two_new_adjacent(
                [None, Some(H1Vector::zero(n)), None],
                s1.clone(),
                s2.clone(),
                k,
            ));
        }
    }
    out
}
