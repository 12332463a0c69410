//! Joint distributions over finite alphabets and their entropy vectors.
//!
//! Masses are exact rationals; entropies are accumulated in `f64` (nats) in
//! the deterministic order of the outcome map, so repeated evaluation gives
//! bit-identical results.

mod certificate;
mod construct;
mod support;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::setfn::{EntropyVector, GroundSet, Subset};

pub use certificate::{
    certify_point, check_face_membership, designated_coordinate, matus_boundary_dist, Certificate,
    FacePoint,
};
pub use construct::{
    has_uniform_construction, rank_one_dist, realize_matroid, search_orthogonal_array,
    two_level_masses, uniform_matroid_dist, SearchOutcome, DEFAULT_SEARCH_BUDGET,
};
pub use support::{
    support_graph_diagnostic, support_graph_diagnostic_on, ComponentReport, SupportGraphReport,
};

pub type Outcome = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    alphabets: Vec<u32>,
    pmf: BTreeMap<Outcome, BigRational>,
}

impl JointDistribution {
    /// Validates positivity, normalization and alphabet bounds. Repeated
    /// outcomes are rejected.
    pub fn new<I>(alphabets: Vec<u32>, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Outcome, BigRational)>,
    {
        GroundSet::new(alphabets.len())
            .map_err(|_| Error::InvalidDistribution(format!("{} coordinates", alphabets.len())))?;
        if let Some(i) = alphabets.iter().position(|&a| a == 0) {
            return Err(Error::InvalidDistribution(format!(
                "coordinate {} has an empty alphabet",
                i + 1
            )));
        }
        let mut pmf = BTreeMap::new();
        let mut total = BigRational::zero();
        for (x, p) in masses {
            if x.len() != alphabets.len() {
                return Err(Error::InvalidDistribution(format!(
                    "outcome {x:?} has {} coordinates, expected {}",
                    x.len(),
                    alphabets.len()
                )));
            }
            if let Some(i) = x.iter().zip(&alphabets).position(|(s, a)| s >= a) {
                return Err(Error::InvalidDistribution(format!(
                    "symbol {} of outcome {x:?} outside alphabet of size {}",
                    x[i], alphabets[i]
                )));
            }
            if !p.is_positive() {
                return Err(Error::InvalidDistribution(format!(
                    "mass {p} of outcome {x:?} is not positive"
                )));
            }
            total += &p;
            if pmf.insert(x.clone(), p).is_some() {
                return Err(Error::InvalidDistribution(format!(
                    "outcome {x:?} repeated"
                )));
            }
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(JointDistribution { alphabets, pmf })
    }

    /// Uniform distribution on the given support.
    pub fn uniform_on(alphabets: Vec<u32>, support: Vec<Outcome>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let p = BigRational::new(1.into(), support.len().into());
        Self::new(alphabets, support.into_iter().map(|x| (x, p.clone())))
    }

    pub fn n(&self) -> usize {
        self.alphabets.len()
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.n()).expect("validated on construction")
    }

    pub fn alphabets(&self) -> &[u32] {
        &self.alphabets
    }

    pub fn pmf(&self) -> &BTreeMap<Outcome, BigRational> {
        &self.pmf
    }

    pub fn support_size(&self) -> usize {
        self.pmf.len()
    }

    /// Exact marginal masses of the coordinates in `s`, in increasing order.
    pub fn marginal_masses(&self, s: Subset) -> BTreeMap<Outcome, BigRational> {
        let coords: Vec<usize> = s.elements().map(|e| e - 1).collect();
        let mut out: BTreeMap<Outcome, BigRational> = BTreeMap::new();
        for (x, p) in &self.pmf {
            let key: Outcome = coords.iter().map(|&c| x[c]).collect();
            *out.entry(key).or_insert_with(BigRational::zero) += p;
        }
        out
    }

    pub fn marginal(&self, s: Subset) -> Result<JointDistribution> {
        self.ground().check(s)?;
        if s.is_empty() {
            return Err(Error::Invalid(
                "marginal over an empty coordinate set".into(),
            ));
        }
        Ok(JointDistribution {
            alphabets: s.elements().map(|e| self.alphabets[e - 1]).collect(),
            pmf: self.marginal_masses(s),
        })
    }

    /// `H(X_A)` in nats.
    pub fn entropy_of(&self, s: Subset) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        let h: f64 = self
            .marginal_masses(s)
            .values()
            .map(|p| {
                let p = p.to_f64().unwrap_or(0.0);
                if p > 0.0 {
                    -p * p.ln()
                } else {
                    0.0
                }
            })
            .sum();
        // tiny negative round-off on deterministic coordinates
        h.max(0.0)
    }

    pub fn entropy_vector(&self) -> EntropyVector {
        let ground = self.ground();
        let values = ground.subsets().map(|a| self.entropy_of(a)).collect();
        EntropyVector::new(ground.size(), values).expect("entropy at ∅ is zero")
    }

    /// Independent coupling, coordinate by coordinate: symbol `(s, t)` of
    /// coordinate `i` is encoded as `s·|𝒳'_i| + t`.
    pub fn product(&self, other: &JointDistribution) -> Result<JointDistribution> {
        if self.n() != other.n() {
            return Err(Error::GroundSetMismatch(self.n(), other.n()));
        }
        let alphabets: Vec<u32> = self
            .alphabets
            .iter()
            .zip(&other.alphabets)
            .map(|(a, b)| a.checked_mul(*b))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidDistribution("product alphabet overflows".into()))?;
        let mut pmf = BTreeMap::new();
        for (x, p) in &self.pmf {
            for (y, q) in &other.pmf {
                let z: Outcome = x
                    .iter()
                    .zip(y)
                    .zip(&other.alphabets)
                    .map(|((s, t), b)| s * b + t)
                    .collect();
                pmf.insert(z, p * q);
            }
        }
        Ok(JointDistribution { alphabets, pmf })
    }

    /// Inserts a constant coordinate so that it becomes coordinate
    /// `position` (1-based, `1..=n+1`).
    pub fn add_loop(&self, position: usize) -> Result<JointDistribution> {
        if position == 0 || position > self.n() + 1 {
            return Err(Error::Invalid(format!(
                "loop position {position} outside 1..={}",
                self.n() + 1
            )));
        }
        GroundSet::new(self.n() + 1)?;
        let idx = position - 1;
        let mut alphabets = self.alphabets.clone();
        alphabets.insert(idx, 1);
        let pmf = self
            .pmf
            .iter()
            .map(|(x, p)| {
                let mut y = x.clone();
                y.insert(idx, 0);
                (y, p.clone())
            })
            .collect();
        Ok(JointDistribution { alphabets, pmf })
    }

    /// Appends an exact copy of coordinate `source` (1-based).
    pub fn parallel_extend(&self, source: usize) -> Result<JointDistribution> {
        if source == 0 || source > self.n() {
            return Err(Error::Invalid(format!(
                "source coordinate {source} outside 1..={}",
                self.n()
            )));
        }
        GroundSet::new(self.n() + 1)?;
        let mut alphabets = self.alphabets.clone();
        alphabets.push(self.alphabets[source - 1]);
        let pmf = self
            .pmf
            .iter()
            .map(|(x, p)| {
                let mut y = x.clone();
                y.push(x[source - 1]);
                (y, p.clone())
            })
            .collect();
        Ok(JointDistribution { alphabets, pmf })
    }

    /// Distinct symbols taken by coordinate `c` (1-based) on the support.
    pub fn used_symbols(&self, c: usize) -> Vec<u32> {
        let mut s: Vec<u32> = self.pmf.keys().map(|x| x[c - 1]).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Replaces the masses while keeping the support.
    pub(crate) fn reweighted<F>(&self, f: F) -> Result<JointDistribution>
    where
        F: Fn(&Outcome) -> BigRational,
    {
        JointDistribution::new(
            self.alphabets.clone(),
            self.pmf.keys().map(|x| (x.clone(), f(x))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn set(e: &[usize]) -> Subset {
        Subset::from_elements(e.iter().copied()).unwrap()
    }

    pub(crate) fn parity_triple() -> JointDistribution {
        let support = (0..2)
            .flat_map(|a| (0..2).map(move |b| vec![a, b, a ^ b]))
            .collect();
        JointDistribution::uniform_on(vec![2, 2, 2], support).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn independent_bits() {
        let d = JointDistribution::uniform_on(
            vec![2, 2],
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        )
        .unwrap();
        assert!(close(
            d.entropy_vector().values(),
            &[0.0, LN_2, LN_2, 2.0 * LN_2]
        ));
    }

    #[test]
    fn copied_bit() {
        let d = JointDistribution::uniform_on(vec![2, 2], vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert!(close(d.entropy_vector().values(), &[0.0, LN_2, LN_2, LN_2]));
    }

    #[test]
    fn parity_triple_entropy() {
        let h = parity_triple().entropy_vector();
        let expected: Vec<f64> = (0..8u32)
            .map(|m| LN_2 * (m.count_ones().min(2)) as f64)
            .collect();
        assert!(close(h.values(), &expected));
    }

    #[test]
    fn marginal_examples() {
        let d = parity_triple();
        let m = d.marginal(set(&[1, 2])).unwrap();
        assert_eq!(m.support_size(), 4);
        assert!(m.pmf().values().all(|p| *p == r(1, 4)));
        assert_eq!(d.marginal(d.ground().full()).unwrap(), d);
        assert!(d.marginal(Subset::EMPTY).is_err());
    }

    #[test]
    fn product_marginal_recovers_factor() {
        let d1 = JointDistribution::uniform_on(vec![2, 3], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let d2 = JointDistribution::uniform_on(vec![1, 1], vec![vec![0, 0]]).unwrap();
        let p = d1.product(&d2).unwrap();
        assert_eq!(p, d1);
        assert!(d1.product(&parity_triple()).is_err());
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(JointDistribution::new(vec![2], vec![(vec![0], r(1, 2))]).is_err());
        assert!(JointDistribution::new(vec![2], vec![(vec![2], r(1, 1))]).is_err());
        assert!(
            JointDistribution::new(vec![2], vec![(vec![0], r(1, 1)), (vec![1], r(0, 1))]).is_err()
        );
        assert!(JointDistribution::new(vec![2], vec![(vec![0, 0], r(1, 1))]).is_err());
        assert!(JointDistribution::new(vec![0], vec![]).is_err());
        assert!(
            JointDistribution::new(vec![2], vec![(vec![0], r(1, 2)), (vec![0], r(1, 2))]).is_err()
        );
    }

    #[test]
    fn add_loop_and_parallel_extend() {
        let d = parity_triple();
        let l = d.add_loop(4).unwrap();
        let h = l.entropy_vector();
        for a in l.ground().subsets() {
            let expected = LN_2 * a.without(4).len().min(2) as f64;
            assert!((h.get(a) - expected).abs() < 1e-12);
        }
        assert_eq!(l.marginal(set(&[1, 2, 3])).unwrap(), d);
        assert_eq!(d.add_loop(1).unwrap().marginal(set(&[2, 3, 4])).unwrap(), d);
        assert!(d.add_loop(5).is_err());

        let single =
            JointDistribution::uniform_on(vec![3], vec![vec![0], vec![1], vec![2]]).unwrap();
        let pe = single.parallel_extend(1).unwrap();
        let ln3 = 3f64.ln();
        assert!(close(pe.entropy_vector().values(), &[0.0, ln3, ln3, ln3]));
        assert!(single.parallel_extend(2).is_err());
    }

    #[test]
    fn entropy_evaluation_is_deterministic() {
        let d = parity_triple().product(&parity_triple()).unwrap();
        let a = d.entropy_vector();
        let b = d.entropy_vector();
        assert_eq!(
            a.values().iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.values().iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }
}
