//! Shared fixtures for the benchmarks.

use qcopy_core::{make_ensemble, InputEnsemble};

/// Overlaps spanning the basis-copying regime, the crossover and the near-parallel end.
pub const SAMPLE_OVERLAPS: [f64; 5] = [0.05, 0.2, 0.5, 0.8, 0.99];

pub fn ensembles() -> Vec<InputEnsemble> {
    SAMPLE_OVERLAPS
        .iter()
        .map(|&f| make_ensemble(f).expect("sample overlaps lie in [0, 1]"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let ens = ensembles();
        assert_eq!(ens.len(), SAMPLE_OVERLAPS.len());
        assert!(ens.iter().zip(SAMPLE_OVERLAPS).all(|(e, f)| e.f() == f));
    }
}
