//! The Shannon cone as the intersection of the elemental half-spaces.
//!
//! Every point of a polyhedral cone lies in the relative interior of the
//! smallest face containing it, and that face is cut out by the inequalities
//! that are tight at the point. Its dimension is therefore the nullity of the
//! tight equality system, which [`minimal_face_dim`] computes exactly.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::setfn::{EntropyVector, GroundSet, RankVector, Subset};

/// One elemental inequality.
///
/// The derived ordering (all `F(i)` first, then `F(i;j|K)` by `i`, `j` and
/// the mask of `K`) is the canonical facet order used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FacetId {
    /// `h(N) - h(N \ i) >= 0`
    MonotoneAtTop { i: usize },
    /// `h(K ∪ i) + h(K ∪ j) - h(K) - h(K ∪ ij) >= 0`, with `i < j`.
    Submodular { i: usize, j: usize, k: Subset },
}

impl FacetId {
    /// Signed terms `(subset, ±1)` of the slack expression.
    pub fn terms(&self, ground: GroundSet) -> [(Subset, i64); 4] {
        match *self {
            FacetId::MonotoneAtTop { i } => {
                let full = ground.full();
                [
                    (full, 1),
                    (full.without(i), -1),
                    (Subset::EMPTY, 0),
                    (Subset::EMPTY, 0),
                ]
            }
            FacetId::Submodular { i, j, k } => [
                (k.with(i), 1),
                (k.with(j), 1),
                (k, -1),
                (k.with(i).with(j), -1),
            ],
        }
    }

    pub fn slack(&self, h: &RankVector) -> BigRational {
        self.terms(h.ground()).iter().filter(|(_, c)| *c != 0).fold(
            BigRational::zero(),
            |acc, &(a, c)| {
                if c > 0 {
                    acc + h.get(a)
                } else {
                    acc - h.get(a)
                }
            },
        )
    }

    pub fn slack_f64(&self, h: &EntropyVector) -> f64 {
        self.terms(h.ground())
            .iter()
            .map(|&(a, c)| c as f64 * h.get(a))
            .sum()
    }

    /// Coefficient row over the non-empty subsets (column `mask - 1`).
    pub fn row(&self, ground: GroundSet) -> Vec<(usize, i64)> {
        self.terms(ground)
            .into_iter()
            .filter(|&(a, c)| c != 0 && !a.is_empty())
            .map(|(a, c)| (a.index() - 1, c))
            .collect()
    }

    pub fn is_valid_for(&self, ground: GroundSet) -> bool {
        let n = ground.size();
        match *self {
            FacetId::MonotoneAtTop { i } => (1..=n).contains(&i),
            FacetId::Submodular { i, j, k } => {
                i >= 1 && i < j && j <= n && ground.contains(k) && !k.contains(i) && !k.contains(j)
            }
        }
    }
}

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetId::MonotoneAtTop { i } => write!(f, "F({i})"),
            FacetId::Submodular { i, j, k } => {
                write!(f, "F({i};{j}|")?;
                for (idx, e) in k.elements().enumerate() {
                    if idx > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for FacetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed facet id {s:?}"));
        let inner = s
            .trim()
            .strip_prefix("F(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match inner.split_once(';') {
            None => Ok(FacetId::MonotoneAtTop { i: num(inner)? }),
            Some((i, rest)) => {
                let (j, k) = rest.split_once('|').ok_or_else(bad)?;
                let k = if k.trim().is_empty() {
                    Subset::EMPTY
                } else {
                    Subset::from_elements(k.split(',').map(num).collect::<Result<Vec<_>>>()?)?
                };
                let (i, j) = (num(i)?, num(j)?);
                if i >= j || k.contains(i) || k.contains(j) {
                    return Err(bad());
                }
                Ok(FacetId::Submodular { i, j, k })
            }
        }
    }
}

impl Serialize for FacetId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FacetId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All elemental inequalities on `n` elements, in canonical order.
pub fn enumerate_facets(ground: GroundSet) -> Vec<FacetId> {
    let n = ground.size();
    let mut out: Vec<FacetId> = (1..=n).map(|i| FacetId::MonotoneAtTop { i }).collect();
    for i in 1..=n {
        for j in i + 1..=n {
            let rest = ground.full().without(i).without(j);
            out.extend(rest.subsets().map(|k| FacetId::Submodular { i, j, k }));
        }
    }
    out
}

/// `n + C(n,2)·2^{n-2}`.
pub fn facet_count(n: usize) -> usize {
    if n < 2 {
        return n;
    }
    n + n * (n - 1) / 2 * (1 << (n - 2))
}

pub fn slack(h: &RankVector, f: FacetId) -> Result<BigRational> {
    if !f.is_valid_for(h.ground()) {
        return Err(Error::Invalid(format!(
            "{f} is not a facet for n = {}",
            h.n()
        )));
    }
    Ok(f.slack(h))
}

/// The facets containing a polymatroid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightSet {
    pub facets: Vec<FacetId>,
}

impl TightSet {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, f: &FacetId) -> bool {
        self.facets.binary_search(f).is_ok()
    }
}

pub fn tight_set(h: &RankVector) -> Result<TightSet> {
    let mut facets = Vec::new();
    for f in enumerate_facets(h.ground()) {
        let s = f.slack(h);
        if s.is_negative() {
            return Err(Error::NotPolymatroid(f));
        }
        if s.is_zero() {
            facets.push(f);
        }
    }
    Ok(TightSet { facets })
}

/// Dimension of the smallest face of the Shannon cone containing `h`.
pub fn minimal_face_dim(h: &RankVector) -> Result<usize> {
    let tight = tight_set(h)?;
    let ground = h.ground();
    let ncols = ground.num_subsets() - 1;
    let mut basis = EchelonBasis::new(ncols);
    // A nonzero point always survives in the null space.
    let cap = if h.is_zero() { ncols } else { ncols - 1 };
    for f in &tight.facets {
        if basis.rank() == cap {
            break;
        }
        basis.insert_small(&f.row(ground));
    }
    Ok(ncols - basis.rank())
}

pub fn is_extreme_ray(h: &RankVector) -> Result<bool> {
    if h.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(minimal_face_dim(h)? == 1)
}

/// True iff `h1` and `h2` are proportional (including either being zero).
pub fn proportional(h1: &RankVector, h2: &RankVector) -> bool {
    // h1 ∥ h2  ⇔  h1(A)·h2(B) = h1(B)·h2(A) for all A, B; enough to compare
    // against one nonzero coordinate of h1.
    let Some(p) = h1.values().iter().position(|v| !v.is_zero()) else {
        return true;
    };
    let (x, y) = (&h1.values()[p], &h2.values()[p]);
    h1.values()
        .iter()
        .zip(h2.values())
        .all(|(a, b)| a * y == b * x)
}

/// Whether `h1` and `h2` span a 2-dimensional face of the Shannon cone.
pub fn is_two_face(h1: &RankVector, h2: &RankVector) -> Result<bool> {
    if h1.ground() != h2.ground() {
        return Err(Error::GroundSetMismatch(h1.n(), h2.n()));
    }
    if let Some(f) = h1.first_violation().or_else(|| h2.first_violation()) {
        return Err(Error::NotPolymatroid(f));
    }
    if !is_extreme_ray(h1)? {
        return Err(Error::NotExtreme("first vector"));
    }
    if !is_extreme_ray(h2)? {
        return Err(Error::NotExtreme("second vector"));
    }
    if proportional(h1, h2) {
        return Err(Error::Proportional);
    }
    let sum = h1.add(h2)?;
    if let Some(f) = sum.first_violation() {
        return Err(Error::NotPolymatroid(f));
    }
    Ok(minimal_face_dim(&sum)? == 2)
}

/// Extreme rays are modular or tight.
pub fn modular_or_tight_check(h: &RankVector) -> Result<bool> {
    if !is_extreme_ray(h)? {
        return Err(Error::NotExtreme("input"));
    }
    Ok(h.is_modular() || h.is_tight())
}
