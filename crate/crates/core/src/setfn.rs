//! Set functions on `2^{1..n}`.
//!
//! [`RankVector`] holds exact rational values and is used for polymatroids and
//! matroid rank functions. [`EntropyVector`] is its floating-point twin for
//! entropies measured in nats.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cone::{enumerate_facets, FacetId};
use crate::error::{Error, Result};
use crate::TOLERANCE;

pub const MAX_ELEMENTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ELEMENTS {
            return Err(Error::GroundSetSize(n));
        }
        Ok(GroundSet { n })
    }

    pub fn size(self) -> usize {
        self.n
    }

    pub fn num_subsets(self) -> usize {
        1 << self.n
    }

    pub fn full(self) -> Subset {
        Subset((1u32 << self.n) - 1)
    }

    pub fn contains(self, s: Subset) -> bool {
        (s.0 as usize) < self.num_subsets()
    }

    pub fn check(self, s: Subset) -> Result<Subset> {
        if self.contains(s) {
            Ok(s)
        } else {
            Err(Error::SubsetOutOfRange {
                mask: s.0,
                n: self.n,
            })
        }
    }

    /// All subsets in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        (0..self.num_subsets() as u32).map(Subset)
    }
}

/// A subset of the ground set; element `i` (1-based) is bit `i - 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn singleton(element: usize) -> Subset {
        debug_assert!((1..=MAX_ELEMENTS).contains(&element));
        Subset(1 << (element - 1))
    }

    /// Builds a subset from 1-based element labels.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Subset> {
        let mut mask = 0u32;
        for e in elements {
            if e == 0 || e > MAX_ELEMENTS {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    n: MAX_ELEMENTS,
                });
            }
            mask |= 1 << (e - 1);
        }
        Ok(Subset(mask))
    }

    pub fn contains(self, element: usize) -> bool {
        element >= 1 && self.0 & (1 << (element - 1)) != 0
    }

    pub fn with(self, element: usize) -> Subset {
        Subset(self.0 | 1 << (element - 1))
    }

    pub fn without(self, element: usize) -> Subset {
        Subset(self.0 & !(1 << (element - 1)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |b| mask & (1 << b) != 0).map(|b| b + 1)
    }

    /// Largest element, if any.
    pub fn max_element(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(32 - self.0.leading_zeros() as usize)
        }
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(Subset(cur))
        })
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, e) in self.elements().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Maps `A ⊆ S` to its relabeled mask inside the ground set `S`, where the
/// elements of `S` become `1..|S|` in increasing order.
pub(crate) fn compress(a: Subset, s: Subset) -> Subset {
    let mut out = 0u32;
    for (pos, e) in s.elements().enumerate() {
        if a.contains(e) {
            out |= 1 << pos;
        }
    }
    Subset(out)
}

/// Inverse of [`compress`].
pub(crate) fn expand(a: Subset, s: Subset) -> Subset {
    let mut out = 0u32;
    for (pos, e) in s.elements().enumerate() {
        if a.0 & (1 << pos) != 0 {
            out |= 1 << (e - 1);
        }
    }
    Subset(out)
}

/// Applies `perm` (1-based: element `i` becomes `perm[i - 1]`) to a subset.
pub fn permute_subset(a: Subset, perm: &[usize]) -> Subset {
    let mut out = 0u32;
    for e in a.elements() {
        out |= 1 << (perm[e - 1] - 1);
    }
    Subset(out)
}

/// An exact set function `h: 2^{N_n} -> Q` with `h(∅) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankVector {
    ground: GroundSet,
    values: Vec<BigRational>,
}

impl RankVector {
    pub fn new(n: usize, values: Vec<BigRational>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if values.len() != ground.num_subsets() {
            return Err(Error::Length {
                expected: ground.num_subsets(),
                found: values.len(),
            });
        }
        if !values[0].is_zero() {
            return Err(Error::NonZeroAtEmpty);
        }
        Ok(RankVector { ground, values })
    }

    pub fn from_integers(n: usize, values: &[i64]) -> Result<Self> {
        Self::new(
            n,
            values
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn from_fn(ground: GroundSet, f: impl Fn(Subset) -> BigRational) -> Result<Self> {
        Self::new(ground.size(), ground.subsets().map(f).collect())
    }

    pub fn zero(ground: GroundSet) -> Self {
        RankVector {
            ground,
            values: vec![BigRational::zero(); ground.num_subsets()],
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn evaluate(&self, a: Subset) -> Result<&BigRational> {
        self.ground.check(a)?;
        Ok(&self.values[a.index()])
    }

    /// Unchecked lookup; `a` must lie inside the ground set.
    pub fn get(&self, a: Subset) -> &BigRational {
        &self.values[a.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> RankVector {
        RankVector {
            ground: self.ground,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &RankVector) -> Result<RankVector> {
        self.same_ground(other)?;
        Ok(RankVector {
            ground: self.ground,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn same_ground(&self, other: &RankVector) -> Result<()> {
        if self.ground != other.ground {
            return Err(Error::GroundSetMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    /// First violated elemental inequality in canonical facet order.
    pub fn first_violation(&self) -> Option<FacetId> {
        enumerate_facets(self.ground)
            .into_iter()
            .find(|f| f.slack(self).is_negative())
    }

    pub fn is_polymatroid(&self) -> bool {
        self.first_violation().is_none()
    }

    /// True iff all entries are integers with gcd 1.
    pub fn is_integer_minimal(&self) -> bool {
        if !self.values.iter().all(|v| v.is_integer()) {
            return false;
        }
        let g = self
            .values
            .iter()
            .fold(BigInt::zero(), |g, v| g.gcd(v.numer()));
        g.is_one()
    }

    pub fn is_modular(&self) -> bool {
        self.ground.subsets().all(|a| {
            let sum: BigRational = a
                .elements()
                .map(|e| self.get(Subset::singleton(e)).clone())
                .sum();
            &sum == self.get(a)
        })
    }

    pub fn is_tight(&self) -> bool {
        let full = self.ground.full();
        (1..=self.n()).all(|i| self.get(full) == self.get(full.without(i)))
    }

    /// Restriction to `s`, relabeled so that the elements of `s` become
    /// `1..|s|` in increasing order.
    pub fn restrict(&self, s: Subset) -> Result<RankVector> {
        self.ground.check(s)?;
        let sub = GroundSet::new(s.len())?;
        RankVector::from_fn(sub, |a| self.get(expand(a, s)).clone())
    }

    /// Relabels elements: element `i` becomes `perm[i - 1]`.
    pub fn permute(&self, perm: &[usize]) -> Result<RankVector> {
        check_permutation(perm, self.n())?;
        let mut values = vec![BigRational::zero(); self.values.len()];
        for a in self.ground.subsets() {
            values[permute_subset(a, perm).index()] = self.get(a).clone();
        }
        RankVector::new(self.n(), values)
    }

    pub fn to_entropy(&self) -> EntropyVector {
        EntropyVector {
            ground: self.ground,
            values: self
                .values
                .iter()
                .map(|v| v.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::Invalid(format!(
            "permutation of length {}",
            perm.len()
        )));
    }
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::Invalid(format!("not a permutation: {perm:?}")));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

impl fmt::Display for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Real-valued set function, in nats.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyVector {
    ground: GroundSet,
    values: Vec<f64>,
}

impl EntropyVector {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if values.len() != ground.num_subsets() {
            return Err(Error::Length {
                expected: ground.num_subsets(),
                found: values.len(),
            });
        }
        if values[0].abs() > TOLERANCE {
            return Err(Error::NonZeroAtEmpty);
        }
        Ok(EntropyVector { ground, values })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, a: Subset) -> f64 {
        self.values[a.index()]
    }

    pub fn evaluate(&self, a: Subset) -> Result<f64> {
        self.ground.check(a)?;
        Ok(self.values[a.index()])
    }

    /// First elemental inequality violated by more than `tol`.
    pub fn first_violation(&self, tol: f64) -> Option<FacetId> {
        enumerate_facets(self.ground)
            .into_iter()
            .find(|f| f.slack_f64(self) < -tol)
    }

    pub fn is_polymatroid(&self, tol: f64) -> bool {
        self.first_violation(tol).is_none()
    }

    pub fn restrict(&self, s: Subset) -> Result<EntropyVector> {
        self.ground.check(s)?;
        let sub = GroundSet::new(s.len())?;
        Ok(EntropyVector {
            ground: sub,
            values: sub.subsets().map(|a| self.get(expand(a, s))).collect(),
        })
    }

    pub fn add(&self, other: &EntropyVector) -> Result<EntropyVector> {
        if self.ground != other.ground {
            return Err(Error::GroundSetMismatch(self.n(), other.n()));
        }
        Ok(EntropyVector {
            ground: self.ground,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Largest entrywise deviation together with the subset attaining it.
    pub fn max_deviation(&self, other: &EntropyVector) -> Result<(Subset, f64)> {
        if self.ground != other.ground {
            return Err(Error::GroundSetMismatch(self.n(), other.n()));
        }
        let mut worst = (Subset::EMPTY, 0.0f64);
        for a in self.ground.subsets() {
            let d = (self.get(a) - other.get(a)).abs();
            if d > worst.1 || d.is_nan() {
                worst = (a, d);
            }
        }
        Ok(worst)
    }
}

/// Pointwise `a·h1 + b·h2` as a real-valued vector.
pub fn combine(a: f64, h1: &RankVector, b: f64, h2: &RankVector) -> Result<EntropyVector> {
    if h1.ground != h2.ground {
        return Err(Error::GroundSetMismatch(h1.n(), h2.n()));
    }
    if a < 0.0 || b < 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::Invalid(format!(
            "coefficients must be finite and nonnegative (a = {a}, b = {b})"
        )));
    }
    let x = h1.to_entropy();
    let y = h2.to_entropy();
    Ok(EntropyVector {
        ground: h1.ground,
        values: x
            .values
            .iter()
            .zip(&y.values)
            .map(|(p, q)| a * p + b * q)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{Matroid, UniformSpec};

    fn uniform(k: usize, alpha: &[usize], n: usize) -> RankVector {
        let spec =
            UniformSpec::new(k, Subset::from_elements(alpha.iter().copied()).unwrap(), n).unwrap();
        Matroid::uniform(spec).unwrap().rank_vector()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn subset_iteration() {
        let s = Subset::from_elements([1, 3]).unwrap();
        let subs: Vec<u32> = s.subsets().map(Subset::mask).collect();
        assert_eq!(subs, vec![0, 1, 4, 5]);
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.max_element(), Some(3));
        assert_eq!(Subset::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn evaluate_examples() {
        let u23 = uniform(2, &[1, 2, 3], 3);
        let a = Subset::from_elements([1, 2]).unwrap();
        assert_eq!(u23.evaluate(a).unwrap(), &q(2));
        assert_eq!(u23.evaluate(Subset::EMPTY).unwrap(), &q(0));
        let u12 = uniform(1, &[1, 2], 3);
        assert_eq!(u12.evaluate(Subset::singleton(3)).unwrap(), &q(0));
        assert!(matches!(
            u23.evaluate(Subset(8)),
            Err(Error::SubsetOutOfRange { .. })
        ));
    }

    #[test]
    fn polymatroid_examples() {
        let modular = RankVector::from_integers(3, &[0, 1, 1, 2, 1, 2, 2, 3]).unwrap();
        assert!(modular.is_polymatroid());
        let broken = RankVector::from_integers(2, &[0, 1, 1, 3]).unwrap();
        assert_eq!(
            broken.first_violation(),
            Some(FacetId::Submodular {
                i: 1,
                j: 2,
                k: Subset::EMPTY
            })
        );
        assert!(uniform(2, &[1, 2, 3], 3).is_polymatroid());
    }

    #[test]
    fn non_monotone_reports_top_facet_first() {
        // h(12) < h(1): F(2) is the first violated facet in canonical order
        let h = RankVector::from_integers(2, &[0, 2, 1, 1]).unwrap();
        assert_eq!(h.first_violation(), Some(FacetId::MonotoneAtTop { i: 2 }));
    }

    #[test]
    fn integer_minimal_examples() {
        let u23 = uniform(2, &[1, 2, 3], 3);
        assert!(u23.is_integer_minimal());
        assert!(!u23.scale(&q(2)).is_integer_minimal());
        assert!(uniform(1, &[2], 3).is_integer_minimal());
        assert!(!RankVector::zero(GroundSet::new(3).unwrap()).is_integer_minimal());
        let half = u23.scale(&BigRational::new(1.into(), 2.into()));
        assert!(!half.is_integer_minimal());
    }

    #[test]
    fn modular_and_tight_examples() {
        assert!(uniform(1, &[2], 4).is_modular());
        assert!(uniform(2, &[1, 2, 3], 3).is_tight());
        let u12 = uniform(1, &[1, 2], 3);
        assert!(!u12.is_modular());
        // h(123) = h(12) = h(13) = h(23) = 1, so every F(i) is tight
        assert!(u12.is_tight());
    }

    #[test]
    fn combine_examples() {
        let u23 = uniform(2, &[1, 2, 3], 3);
        let u12 = uniform(1, &[1, 2], 3);
        assert_eq!(combine(1.0, &u23, 0.0, &u12).unwrap(), u23.to_entropy());
        assert!(combine(0.0, &u23, 0.0, &u12)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
        let ln2 = std::f64::consts::LN_2;
        let c = combine(ln2, &u23, 0.3, &u12).unwrap();
        assert!((c.get(Subset::singleton(1)) - (ln2 + 0.3)).abs() < 1e-15);
        let other = uniform(1, &[1], 2);
        assert!(matches!(
            combine(1.0, &u23, 1.0, &other),
            Err(Error::GroundSetMismatch(3, 2))
        ));
    }

    #[test]
    fn restrict_examples() {
        let u24 = uniform(2, &[1, 2, 3, 4], 4);
        let s = Subset::from_elements([1, 2, 3]).unwrap();
        assert_eq!(u24.restrict(s).unwrap(), uniform(2, &[1, 2, 3], 3));
        let u12 = uniform(1, &[1, 2], 3);
        let s = Subset::from_elements([2, 3]).unwrap();
        assert_eq!(u12.restrict(s).unwrap(), uniform(1, &[1], 2));
        let full = u12.ground().full();
        assert_eq!(u12.restrict(full).unwrap(), u12);
    }

    #[test]
    fn rejects_malformed_vectors() {
        assert!(matches!(
            RankVector::from_integers(2, &[0, 1, 1]),
            Err(Error::Length { .. })
        ));
        assert!(matches!(
            RankVector::from_integers(1, &[1, 1]),
            Err(Error::NonZeroAtEmpty)
        ));
        assert!(matches!(
            RankVector::from_integers(17, &[0]),
            Err(Error::GroundSetSize(17))
        ));
    }

    #[test]
    fn permute_moves_values() {
        let u12 = uniform(1, &[1, 2], 3);
        let p = u12.permute(&[3, 2, 1]).unwrap();
        assert_eq!(p, uniform(1, &[2, 3], 3));
        assert!(u12.permute(&[1, 1, 2]).is_err());
    }
}
