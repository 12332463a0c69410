//! A fixed catalog of small matroids used for sweeps and tests.
//!
//! It contains every `U_{k,|α|}^{α,n}` with `n <= 6`, loop and parallel
//! extensions of `U_{2,3}` and `U_{2,4}`, and a few direct sums (which are
//! disconnected and serve as negative examples). Entries with identical rank
//! functions are listed once.

use std::collections::HashSet;

use crate::matroid::{Matroid, UniformSpec};
use crate::setfn::{GroundSet, Subset};

pub const MAX_CATALOG_N: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub matroid: Matroid,
}

fn uniform_name(k: usize, alpha: Subset, n: usize) -> String {
    if alpha.len() == n {
        format!("U_{{{k},{n}}}")
    } else {
        format!("U_{{{k},{}}}^{alpha}(n={n})", alpha.len())
    }
}

fn uniform(k: usize, n: usize) -> Matroid {
    Matroid::uniform(UniformSpec::full(k, n).expect("valid")).expect("valid")
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut raw: Vec<(String, Matroid)> = Vec::new();
    for n in 1..=MAX_CATALOG_N {
        let ground = GroundSet::new(n).expect("n <= 6");
        for alpha in ground.subsets().filter(|a| !a.is_empty()) {
            for k in 1..=alpha.len() {
                let spec = UniformSpec::new(k, alpha, n).expect("1 <= k <= |α|");
                raw.push((
                    uniform_name(k, alpha, n),
                    Matroid::uniform(spec).expect("valid"),
                ));
            }
        }
    }

    let u23 = uniform(2, 3);
    let u24 = uniform(2, 4);
    let extensions: Vec<(String, Matroid)> = vec![
        ("U_{2,3}+loop".into(), u23.with_loop().expect("n = 4")),
        (
            "U_{2,3}+parallel(1)".into(),
            u23.with_parallel(1).expect("n = 4"),
        ),
        (
            "U_{2,3}+parallel(1)+parallel(2)".into(),
            u23.with_parallel(1)
                .and_then(|m| m.with_parallel(2))
                .expect("n = 5"),
        ),
        (
            "U_{2,3}+parallel(1)+loop".into(),
            u23.with_parallel(1)
                .and_then(|m| m.with_loop())
                .expect("n = 5"),
        ),
        ("U_{2,4}+loop".into(), u24.with_loop().expect("n = 5")),
        (
            "U_{2,4}+parallel(1)".into(),
            u24.with_parallel(1).expect("n = 5"),
        ),
        (
            "U_{2,4}+parallel(1)+loop".into(),
            u24.with_parallel(1)
                .and_then(|m| m.with_loop())
                .expect("n = 6"),
        ),
        (
            "U_{2,3}+U_{1,1}".into(),
            u23.direct_sum(&uniform(1, 1)).expect("n = 4"),
        ),
        (
            "U_{2,3}+U_{2,3}".into(),
            u23.direct_sum(&u23).expect("n = 6"),
        ),
        (
            "U_{1,2}+U_{1,2}".into(),
            uniform(1, 2).direct_sum(&uniform(1, 2)).expect("n = 4"),
        ),
        (
            "U_{2,3}+U_{1,2}".into(),
            u23.direct_sum(&uniform(1, 2)).expect("n = 5"),
        ),
    ];
    raw.extend(extensions);

    let mut seen = HashSet::new();
    raw.into_iter()
        .filter(|(_, m)| seen.insert((m.n(), m.ranks().to_vec())))
        .map(|(name, matroid)| CatalogEntry { name, matroid })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_large_and_distinct() {
        let cat = catalog();
        assert!(cat.len() >= 60);
        let names: HashSet<&str> = cat.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), cat.len());
        assert!(cat
            .iter()
            .any(|e| !e.matroid.is_connected_after_loop_deletion()));
        assert!(cat.iter().all(|e| e.matroid.n() <= MAX_CATALOG_N));
    }

    #[test]
    fn catalog_is_deterministic() {
        assert_eq!(catalog(), catalog());
    }
}
