//! Shared fixtures for the criterion benches.

use rank1::params::{ParameterSpec, Stage};
use rank1::words::FiniteWord;

pub fn stage(r: u32, s: &[u32]) -> Stage {
    Stage {
        r,
        spacer: FiniteWord::new(s),
    }
}

pub fn chacon() -> ParameterSpec {
    ParameterSpec::periodic(vec![stage(3, &[0, 1])]).unwrap()
}

pub fn mirror_chacon() -> ParameterSpec {
    ParameterSpec::periodic(vec![stage(3, &[1, 0])]).unwrap()
}

/// A heavier mixed-period spec for expansion and canonical-analysis benches.
pub fn mixed() -> ParameterSpec {
    ParameterSpec::new(
        vec![stage(2, &[3])],
        Some(vec![
            stage(3, &[0, 2]),
            stage(4, &[1, 0, 1]),
            stage(2, &[2]),
        ]),
    )
    .unwrap()
}
