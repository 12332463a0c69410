//! Fixtures shared by the benchmarks.

use polyface::{Matroid, RankVector, Subset, UniformSpec};

pub fn uniform(k: usize, n: usize) -> Matroid {
    Matroid::uniform(UniformSpec::full(k, n).expect("valid parameters")).expect("valid matroid")
}

/// `r_M + r_U` for `M = U_{k,n}` and the rank-one matroid on `{1, 2}`.
pub fn two_face_point(k: usize, n: usize) -> RankVector {
    let alpha = Subset::singleton(1).with(2);
    let u = Matroid::uniform(UniformSpec::new(1, alpha, n).expect("valid α")).expect("valid");
    uniform(k, n)
        .rank_vector()
        .add(&u.rank_vector())
        .expect("same ground set")
}
