//! Matroids given by their rank functions.

use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::cone::enumerate_facets;
use crate::error::{Error, Result};
use crate::setfn::{check_permutation, permute_subset, GroundSet, RankVector, Subset};

/// Parameters of `U_{k,|α|}^{α,n}`: rank `min{k, |A ∩ α|}`, loops outside `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UniformSpec {
    k: usize,
    alpha: Subset,
    n: usize,
}

impl UniformSpec {
    pub fn new(k: usize, alpha: Subset, n: usize) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if !ground.contains(alpha) {
            return Err(Error::InvalidUniform(format!(
                "support {alpha} not inside 1..={n}"
            )));
        }
        if k < 1 || k > alpha.len() {
            return Err(Error::InvalidUniform(format!(
                "need 1 <= k <= |α|, got k = {k}, |α| = {}",
                alpha.len()
            )));
        }
        Ok(UniformSpec { k, alpha, n })
    }

    /// `U_{k,n}` on the full ground set.
    pub fn full(k: usize, n: usize) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        Self::new(k, ground.full(), n)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> Subset {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matroid {
    ground: GroundSet,
    ranks: Vec<u32>,
    circuits: Vec<Subset>,
}

impl Matroid {
    /// Validates `ranks` (indexed by mask) as a matroid rank function.
    pub fn from_ranks(n: usize, ranks: Vec<u32>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if ranks.len() != ground.num_subsets() {
            return Err(Error::Length {
                expected: ground.num_subsets(),
                found: ranks.len(),
            });
        }
        if ranks[0] != 0 {
            return Err(Error::NonZeroAtEmpty);
        }
        for a in ground.subsets() {
            let r = ranks[a.index()];
            if r as usize > a.len() {
                return Err(Error::NotMatroid(format!("rank({a}) = {r} exceeds |A|")));
            }
            // Unit increase along covering pairs.
            for e in ground.full().difference(a).elements() {
                let up = ranks[a.with(e).index()];
                if up < r || up > r + 1 {
                    return Err(Error::NotMatroid(format!(
                        "rank jumps from {r} at {a} to {up} at {}",
                        a.with(e)
                    )));
                }
            }
        }
        for f in enumerate_facets(ground) {
            let slack: i64 = f
                .terms(ground)
                .iter()
                .map(|&(a, c)| c * ranks[a.index()] as i64)
                .sum();
            if slack < 0 {
                return Err(Error::NotPolymatroid(f));
            }
        }
        let circuits = find_circuits(ground, &ranks);
        Ok(Matroid {
            ground,
            ranks,
            circuits,
        })
    }

    pub fn from_rank_vector(h: &RankVector) -> Result<Self> {
        let ranks = h
            .values()
            .iter()
            .map(|v| {
                if !v.is_integer() {
                    return Err(Error::NotMatroid(format!("non-integer rank {v}")));
                }
                v.to_integer()
                    .to_u32()
                    .ok_or_else(|| Error::NotMatroid(format!("rank {v} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ranks(h.n(), ranks)
    }

    pub fn uniform(spec: UniformSpec) -> Result<Self> {
        let ground = GroundSet::new(spec.n)?;
        let ranks = ground
            .subsets()
            .map(|a| a.intersection(spec.alpha).len().min(spec.k) as u32)
            .collect();
        Self::from_ranks(spec.n, ranks)
    }

    /// Rank function with `rank(A)` the size of a largest subset of `A`
    /// containing no member of `circuits`. Fails unless the family is exactly
    /// the circuit family of the resulting matroid.
    pub fn from_circuits(n: usize, circuits: &[Subset]) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        for &c in circuits {
            ground.check(c)?;
            if c.is_empty() {
                return Err(Error::CircuitAxioms("empty circuit".into()));
            }
        }
        let size = ground.num_subsets();
        let independent: Vec<bool> = (0..size as u32)
            .map(|m| !circuits.iter().any(|c| c.is_subset_of(Subset(m))))
            .collect();
        let mut ranks = vec![0u32; size];
        for a in ground.subsets().skip(1) {
            ranks[a.index()] = if independent[a.index()] {
                a.len() as u32
            } else {
                a.elements()
                    .map(|e| ranks[a.without(e).index()])
                    .max()
                    .unwrap_or(0)
            };
        }
        let m = Self::from_ranks(n, ranks)
            .map_err(|e| Error::CircuitAxioms(format!("induced rank function invalid: {e}")))?;
        let mut given: Vec<Subset> = circuits.to_vec();
        sort_canonical(&mut given);
        given.dedup();
        if given != m.circuits {
            return Err(Error::CircuitAxioms(format!(
                "circuits of the induced matroid are {}",
                format_family(&m.circuits)
            )));
        }
        Ok(m)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn rank(&self, a: Subset) -> u32 {
        self.ranks[a.index()]
    }

    pub fn full_rank(&self) -> u32 {
        self.rank(self.ground.full())
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn rank_vector(&self) -> RankVector {
        RankVector::new(
            self.n(),
            self.ranks
                .iter()
                .map(|&r| BigRational::from_integer(r.into()))
                .collect(),
        )
        .expect("matroid ranks form a valid rank vector")
    }

    /// Minimal dependent sets, ordered by size and then by mask.
    pub fn circuits(&self) -> &[Subset] {
        &self.circuits
    }

    pub fn loops(&self) -> Subset {
        let mut out = Subset::EMPTY;
        for e in 1..=self.n() {
            if self.rank(Subset::singleton(e)) == 0 {
                out = out.with(e);
            }
        }
        out
    }

    pub fn non_loops(&self) -> Subset {
        self.ground.full().difference(self.loops())
    }

    pub fn is_parallel(&self, e: usize, f: usize) -> bool {
        e != f
            && self.rank(Subset::singleton(e)) == 1
            && self.rank(Subset::singleton(f)) == 1
            && self.rank(Subset::singleton(e).with(f)) == 1
    }

    pub fn parallel_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for e in 1..=n {
            for f in e + 1..=n {
                if self.is_parallel(e, f) {
                    out.push((e, f));
                }
            }
        }
        out
    }

    /// Partition of the non-loop elements into parallel classes, each class
    /// listed by increasing smallest element.
    pub fn parallel_classes(&self) -> Vec<Subset> {
        let mut classes: Vec<Subset> = Vec::new();
        for e in self.non_loops().elements() {
            match classes
                .iter_mut()
                .find(|c| self.is_parallel(c.elements().next().unwrap(), e))
            {
                Some(c) => *c = c.with(e),
                None => classes.push(Subset::singleton(e)),
            }
        }
        classes
    }

    /// Every pair of distinct non-loop elements shares a circuit. Matroids
    /// with at most one non-loop element count as connected.
    pub fn is_connected_after_loop_deletion(&self) -> bool {
        let non_loops: Vec<usize> = self.non_loops().elements().collect();
        let big: Vec<Subset> = self
            .circuits
            .iter()
            .copied()
            .filter(|c| c.len() >= 2)
            .collect();
        for (idx, &e) in non_loops.iter().enumerate() {
            for &f in &non_loops[idx + 1..] {
                if !big.iter().any(|c| c.contains(e) && c.contains(f)) {
                    return false;
                }
            }
        }
        true
    }

    /// If deleting loops and keeping one element per parallel class leaves a
    /// uniform matroid `U_{k,m}`, returns `(k, m)`.
    pub fn simple_uniform_type(&self) -> Option<(usize, usize)> {
        let reps = self.representatives();
        let k = self.full_rank() as usize;
        let ok = reps
            .subsets()
            .all(|a| self.rank(a) as usize == a.len().min(k));
        ok.then_some((k, reps.len()))
    }

    /// Smallest element of each parallel class.
    pub fn representatives(&self) -> Subset {
        self.parallel_classes()
            .iter()
            .fold(Subset::EMPTY, |acc, c| {
                acc.with(c.elements().next().unwrap())
            })
    }

    pub fn restrict(&self, s: Subset) -> Result<Matroid> {
        let rv = self.rank_vector().restrict(s)?;
        Matroid::from_rank_vector(&rv)
    }

    /// Relabels elements: element `i` becomes `perm[i - 1]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Matroid> {
        check_permutation(perm, self.n())?;
        let mut ranks = vec![0u32; self.ranks.len()];
        for a in self.ground.subsets() {
            ranks[permute_subset(a, perm).index()] = self.rank(a);
        }
        Matroid::from_ranks(self.n(), ranks)
    }

    /// Adds a new element `n + 1` that is a loop.
    pub fn with_loop(&self) -> Result<Matroid> {
        let n = self.n() + 1;
        let g = GroundSet::new(n)?;
        let top = Subset::singleton(n);
        let ranks = g.subsets().map(|a| self.rank(a.difference(top))).collect();
        Matroid::from_ranks(n, ranks)
    }

    /// Adds a new element `n + 1` parallel to `source`.
    pub fn with_parallel(&self, source: usize) -> Result<Matroid> {
        if source == 0 || source > self.n() {
            return Err(Error::ElementOutOfRange {
                element: source,
                n: self.n(),
            });
        }
        if self.rank(Subset::singleton(source)) == 0 {
            return Err(Error::Invalid(format!("element {source} is a loop")));
        }
        let n = self.n() + 1;
        let g = GroundSet::new(n)?;
        let top = Subset::singleton(n);
        let ranks = g
            .subsets()
            .map(|a| {
                if a.contains(n) {
                    self.rank(a.difference(top).with(source))
                } else {
                    self.rank(a)
                }
            })
            .collect();
        Matroid::from_ranks(n, ranks)
    }

    /// Direct sum; elements of `other` are shifted by `self.n()`.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid> {
        let n = self.n() + other.n();
        let g = GroundSet::new(n)?;
        let shift = self.n();
        let low = self.ground.full();
        let ranks = g
            .subsets()
            .map(|a| self.rank(a.intersection(low)) + other.rank(Subset(a.0 >> shift)))
            .collect();
        Matroid::from_ranks(n, ranks)
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "matroid on {} elements, rank {}, circuits {}",
            self.n(),
            self.full_rank(),
            format_family(&self.circuits)
        )
    }
}

pub fn format_family(family: &[Subset]) -> String {
    let parts: Vec<String> = family.iter().map(Subset::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn sort_canonical(family: &mut [Subset]) {
    family.sort_by_key(|c| (c.len(), c.mask()));
}

/// Enumerates subsets by increasing size, skipping supersets of circuits
/// already found; every dependent survivor is then minimal.
fn find_circuits(ground: GroundSet, ranks: &[u32]) -> Vec<Subset> {
    let mut by_size: Vec<Subset> = ground.subsets().skip(1).collect();
    sort_canonical(&mut by_size);
    let mut circuits: Vec<Subset> = Vec::new();
    for a in by_size {
        if circuits.iter().any(|c| c.is_subset_of(a)) {
            continue;
        }
        if (ranks[a.index()] as usize) < a.len() {
            circuits.push(a);
        }
    }
    circuits
}

/// Neither circuit family contains the other. Both matroids must be distinct,
/// connected after loop deletion, and of rank at least one.
pub fn circuit_noncontainment_check(m1: &Matroid, m2: &Matroid) -> Result<bool> {
    if m1.ground != m2.ground {
        return Err(Error::GroundSetMismatch(m1.n(), m2.n()));
    }
    if m1 == m2 {
        return Err(Error::NotDistinct);
    }
    for (m, name) in [(m1, "first matroid"), (m2, "second matroid")] {
        if m.full_rank() == 0 || !m.is_connected_after_loop_deletion() {
            return Err(Error::NotExtreme(name));
        }
    }
    let contains = |big: &[Subset], small: &[Subset]| small.iter().all(|c| big.contains(c));
    Ok(!contains(&m2.circuits, &m1.circuits) && !contains(&m1.circuits, &m2.circuits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> Subset {
        Subset::from_elements(e.iter().copied()).unwrap()
    }

    fn uniform(k: usize, alpha: &[usize], n: usize) -> Matroid {
        Matroid::uniform(UniformSpec::new(k, set(alpha), n).unwrap()).unwrap()
    }

    /// Minimal dependent sets by exhaustive search over all subsets.
    fn brute_force_circuits(m: &Matroid) -> Vec<Subset> {
        let dependent = |a: Subset| (m.rank(a) as usize) < a.len();
        let mut out: Vec<Subset> = m
            .ground()
            .subsets()
            .filter(|&a| dependent(a) && a.elements().all(|e| !dependent(a.without(e))))
            .collect();
        sort_canonical(&mut out);
        out
    }

    #[test]
    fn uniform_examples() {
        let u12 = uniform(1, &[1, 2], 3);
        assert_eq!(u12.rank(set(&[1, 2])), 1);
        assert_eq!(u12.rank(set(&[3])), 0);
        assert_eq!(uniform(2, &[1, 2, 3], 3).full_rank(), 2);
        let u11 = uniform(1, &[2], 3);
        assert_eq!(u11.rank(set(&[2])), 1);
        assert_eq!(u11.rank(set(&[1, 3])), 0);
        assert!(UniformSpec::new(0, set(&[1]), 2).is_err());
        assert!(UniformSpec::new(3, set(&[1, 2]), 2).is_err());
        assert!(UniformSpec::new(1, set(&[3]), 2).is_err());
    }

    #[test]
    fn circuit_examples() {
        assert_eq!(uniform(2, &[1, 2, 3], 3).circuits(), &[set(&[1, 2, 3])]);
        let u12 = uniform(1, &[1, 2], 3);
        assert_eq!(u12.circuits(), &[set(&[3]), set(&[1, 2])]);
        assert_eq!(u12.circuits(), brute_force_circuits(&u12).as_slice());
        let u25 = uniform(2, &[1, 2, 3, 4, 5], 5);
        assert_eq!(u25.circuits().len(), 10);
        assert!(u25.circuits().iter().all(|c| c.len() == 3));
    }

    #[test]
    fn circuits_match_brute_force_on_extensions() {
        let base = uniform(2, &[1, 2, 3, 4], 4);
        let ext = base.with_parallel(2).unwrap().with_loop().unwrap();
        assert_eq!(ext.circuits(), brute_force_circuits(&ext).as_slice());
        let sum = uniform(2, &[1, 2, 3], 3)
            .direct_sum(&uniform(1, &[1, 2], 2))
            .unwrap();
        assert_eq!(sum.circuits(), brute_force_circuits(&sum).as_slice());
    }

    #[test]
    fn rank_from_circuits_examples() {
        let m = Matroid::from_circuits(3, &[set(&[1, 2, 3])]).unwrap();
        assert_eq!(m, uniform(2, &[1, 2, 3], 3));
        let m = Matroid::from_circuits(3, &[set(&[3])]).unwrap();
        for a in m.ground().subsets() {
            assert_eq!(m.rank(a) as usize, a.without(3).len());
        }
        let free = Matroid::from_circuits(2, &[]).unwrap();
        assert!(free
            .ground()
            .subsets()
            .all(|a| free.rank(a) as usize == a.len()));
    }

    #[test]
    fn rank_from_circuits_rejects_non_circuit_families() {
        // {12} and {13} force {23} by circuit elimination
        let err = Matroid::from_circuits(3, &[set(&[1, 2]), set(&[1, 3])]).unwrap_err();
        assert!(matches!(err, Error::CircuitAxioms(_)));
        // {1} and {1,2} are comparable
        assert!(Matroid::from_circuits(2, &[set(&[1]), set(&[1, 2])]).is_err());
    }

    #[test]
    fn loops_and_parallel_examples() {
        let u12 = uniform(1, &[1, 2], 3);
        assert_eq!(u12.loops(), set(&[3]));
        assert_eq!(u12.parallel_pairs(), vec![(1, 2)]);
        let u23 = uniform(2, &[1, 2, 3], 3);
        assert_eq!(u23.loops(), Subset::EMPTY);
        assert!(u23.parallel_pairs().is_empty());
        assert_eq!(
            uniform(1, &[1, 2, 3], 3).parallel_pairs(),
            vec![(1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(
            uniform(2, &[1, 2, 3], 3)
                .with_parallel(1)
                .unwrap()
                .parallel_classes(),
            vec![set(&[1, 4]), set(&[2]), set(&[3])]
        );
    }

    #[test]
    fn connectivity_examples() {
        assert!(uniform(2, &[1, 2, 3, 4], 4).is_connected_after_loop_deletion());
        let free = Matroid::from_circuits(2, &[]).unwrap();
        assert!(!free.is_connected_after_loop_deletion());
        assert!(uniform(1, &[3], 4).is_connected_after_loop_deletion());
        let sum = uniform(2, &[1, 2, 3], 3)
            .direct_sum(&uniform(2, &[1, 2, 3], 3))
            .unwrap();
        assert!(!sum.is_connected_after_loop_deletion());
    }

    #[test]
    fn noncontainment_examples() {
        let u23 = uniform(2, &[1, 2, 3], 3);
        let u12 = uniform(1, &[1, 2], 3);
        assert!(circuit_noncontainment_check(&u23, &u12).unwrap());
        assert_eq!(
            circuit_noncontainment_check(&u23, &u23),
            Err(Error::NotDistinct)
        );
        let u24 = uniform(2, &[1, 2, 3, 4], 4);
        let u34 = uniform(3, &[1, 2, 3, 4], 4);
        assert!(circuit_noncontainment_check(&u24, &u34).unwrap());
        let free = Matroid::from_circuits(3, &[]).unwrap();
        assert!(circuit_noncontainment_check(&u23, &free).is_err());
    }

    #[test]
    fn simple_uniform_type_sees_through_loops_and_copies() {
        let m = uniform(2, &[1, 2, 3, 4], 4)
            .with_parallel(3)
            .unwrap()
            .with_loop()
            .unwrap();
        assert_eq!(m.simple_uniform_type(), Some((2, 4)));
        let copies = uniform(1, &[1, 2], 2)
            .direct_sum(&uniform(1, &[1, 2], 2))
            .unwrap();
        assert_eq!(copies.simple_uniform_type(), Some((2, 2)));
        let sum = uniform(2, &[1, 2, 3], 3)
            .direct_sum(&uniform(1, &[1], 1))
            .unwrap();
        assert_eq!(sum.simple_uniform_type(), None);
    }

    #[test]
    fn from_ranks_rejects_non_matroids() {
        assert!(matches!(
            Matroid::from_ranks(2, vec![0, 1, 1, 3]),
            Err(Error::NotMatroid(_))
        ));
        // h = (0, 1, 1, 2) on 2 elements with h(12) = 1 is fine (U_{1,2})
        assert!(Matroid::from_ranks(2, vec![0, 1, 1, 1]).is_ok());
        // rank 2 on a singleton
        assert!(Matroid::from_ranks(1, vec![0, 2]).is_err());
    }

    #[test]
    fn permute_relabels() {
        let m = uniform(1, &[1, 2], 3).permute(&[2, 3, 1]).unwrap();
        assert_eq!(m, uniform(1, &[2, 3], 3));
    }
}
