//! Certificates: explicit distributions for points `a·r_M + b·r_U` of a
//! 2-dimensional face, where `U = U_{1,|α|}^{α,n}`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::construct::{rank_one_dist, realize_matroid, two_level_masses};
use super::JointDistribution;
use crate::error::{Error, Result};
use crate::matroid::{Matroid, UniformSpec};
use crate::setfn::{combine, EntropyVector, RankVector, Subset};
use crate::TOLERANCE;

/// Masses below this are treated as absent when padding a point.
const NEGLIGIBLE: f64 = 1e-12;

/// Coordinates `(a, b)` of `a·r_1 + b·r_2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FacePoint {
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub matroid: Matroid,
    pub alpha: Subset,
    pub v: u32,
    pub point: FacePoint,
    pub distribution: JointDistribution,
    pub residual: f64,
}

impl Certificate {
    pub fn target(&self) -> Result<EntropyVector> {
        let u = rank_one_vector(&self.matroid, self.alpha)?;
        combine(self.point.a, &self.matroid.rank_vector(), self.point.b, &u)
    }

    /// Recomputes the residual from the distribution. Fails when it exceeds
    /// the tolerance; otherwise returns it.
    pub fn verify(&self) -> Result<f64> {
        if self.distribution.n() != self.matroid.n() {
            return Err(Error::GroundSetMismatch(
                self.distribution.n(),
                self.matroid.n(),
            ));
        }
        let (_, residual) = self
            .distribution
            .entropy_vector()
            .max_deviation(&self.target()?)?;
        if residual > TOLERANCE {
            return Err(Error::Residual(residual));
        }
        Ok(residual)
    }
}

fn rank_one_vector(m: &Matroid, alpha: Subset) -> Result<RankVector> {
    Ok(Matroid::uniform(UniformSpec::new(1, alpha, m.n())?)?.rank_vector())
}

/// The coordinate whose marginal is reshaped in the boundary construction:
/// the largest non-loop outside `α`, falling back to the largest non-loop.
pub fn designated_coordinate(m: &Matroid, alpha: Subset) -> Option<usize> {
    let non_loops = m.non_loops();
    non_loops
        .difference(alpha)
        .max_element()
        .or_else(|| non_loops.max_element())
}

/// A distribution with entropy vector `a·r_M + (ln v - a)·r_U` for
/// `0 < a <= ln v`.
///
/// Starts from the uniform realization of `ln v·r_M` and replaces the uniform
/// law of the designated coordinate `X_d` by a two-level law `q` of entropy
/// `a`, keeping the conditional law given `X_d` uniform. This yields the
/// requested vector when `M` has rank 2; other inputs are caught by the
/// residual check.
pub fn matus_boundary_dist(
    m: &Matroid,
    alpha: Subset,
    v: u32,
    a: f64,
) -> Result<JointDistribution> {
    m.ground().check(alpha)?;
    let lnv = (v as f64).ln();
    if !(a > 0.0 && a <= lnv + TOLERANCE) {
        return Err(Error::AOutOfRange {
            a,
            reason: format!("boundary points need 0 < a <= ln {v}"),
        });
    }
    let base = realize_matroid(m, v)?;
    if (a - lnv).abs() <= NEGLIGIBLE {
        return Ok(base);
    }
    let d = designated_coordinate(m, alpha)
        .ok_or_else(|| Error::NoConstruction("boundary point of a rank-zero matroid".into()))?;
    let symbols = base.used_symbols(d);
    let masses = two_level_masses(symbols.len() as u32, a)?;
    let mut q: BTreeMap<u32, BigRational> = symbols.iter().copied().zip(masses).collect();
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for x in base.pmf().keys() {
        *counts.entry(x[d - 1]).or_default() += 1;
    }
    for (s, p) in q.iter_mut() {
        *p = &*p / BigRational::from_integer(counts[s].into());
    }
    let dist = base.reweighted(|x| q.get(&x[d - 1]).cloned().unwrap_or_else(BigRational::zero))?;
    let target = combine(a, &m.rank_vector(), lnv - a, &rank_one_vector(m, alpha)?)?;
    let (_, residual) = dist.entropy_vector().max_deviation(&target)?;
    if residual > TOLERANCE {
        return Err(Error::Residual(residual));
    }
    Ok(dist)
}

/// Builds and checks a distribution for the point `a·r_M + b·r_U`.
///
/// * rank-one `M`: any `a > 0`, `b >= 0`;
/// * `a = ln v` (within tolerance): the uniform realization over `v`
///   symbols, padded with a copy variable of entropy `b`;
/// * `ln(v-1) < a < ln v` and `a + b >= ln v`: the boundary construction,
///   padded with a copy variable of entropy `a + b - ln v`.
///
/// In the lattice case the recorded point has `a` snapped to `ln v`.
pub fn certify_point(m: &Matroid, alpha: Subset, v: u32, a: f64, b: f64) -> Result<Certificate> {
    let n = m.n();
    m.ground().check(alpha)?;
    if alpha.is_empty() {
        return Err(Error::Invalid("α must be non-empty".into()));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::AOutOfRange {
            a,
            reason: "a must be positive".into(),
        });
    }
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::Invalid(format!("b = {b} must be non-negative")));
    }
    if v < 2 {
        return Err(Error::Invalid(format!("alphabet size {v} < 2")));
    }
    let lnv = (v as f64).ln();
    let pad = |dist: JointDistribution, extra: f64| -> Result<JointDistribution> {
        if extra > NEGLIGIBLE {
            dist.product(&rank_one_dist(alpha, n, extra)?)
        } else {
            Ok(dist)
        }
    };
    let (point, dist) = match m.full_rank() {
        0 => return Err(Error::Invalid("rank-zero matroid".into())),
        1 => (
            FacePoint { a, b },
            pad(rank_one_dist(m.non_loops(), n, a)?, b)?,
        ),
        _ if (a - lnv).abs() <= TOLERANCE => {
            (FacePoint { a: lnv, b }, pad(realize_matroid(m, v)?, b)?)
        }
        _ if a < lnv && a > ((v - 1) as f64).ln() => {
            let extra = b - (lnv - a);
            if extra < -TOLERANCE {
                return Err(Error::AOutOfRange {
                    a,
                    reason: format!("({a}, {b}) lies below the boundary a + b = ln {v}"),
                });
            }
            (
                FacePoint { a, b },
                pad(matus_boundary_dist(m, alpha, v, a)?, extra)?,
            )
        }
        _ => {
            return Err(Error::AOutOfRange {
                a,
                reason: format!("a must equal ln {v} or lie in (ln {}, ln {v})", v - 1),
            })
        }
    };
    let mut cert = Certificate {
        matroid: m.clone(),
        alpha,
        v,
        point,
        distribution: dist,
        residual: f64::INFINITY,
    };
    cert.residual = cert.verify()?;
    Ok(cert)
}

/// Recovers `(a, b)` with `h = a·r1 + b·r2`, using the first pair of subsets
/// (in mask order) on which `r1`, `r2` are independent.
pub fn check_face_membership(
    h: &EntropyVector,
    r1: &RankVector,
    r2: &RankVector,
) -> Result<FacePoint> {
    if h.ground() != r1.ground() {
        return Err(Error::GroundSetMismatch(h.n(), r1.n()));
    }
    if r1.ground() != r2.ground() {
        return Err(Error::GroundSetMismatch(r1.n(), r2.n()));
    }
    let subsets: Vec<Subset> = h.ground().subsets().collect();
    let pair = subsets.iter().enumerate().find_map(|(i, &x)| {
        subsets[i + 1..].iter().find_map(|&y| {
            let det = r1.get(x) * r2.get(y) - r1.get(y) * r2.get(x);
            (!det.is_zero()).then_some((x, y))
        })
    });
    let (x, y) = pair.ok_or(Error::Dependent)?;
    let f = |r: &RankVector, s: Subset| r.get(s).to_f64().unwrap_or(f64::NAN);
    let det = f(r1, x) * f(r2, y) - f(r1, y) * f(r2, x);
    let a = (h.get(x) * f(r2, y) - h.get(y) * f(r2, x)) / det;
    let b = (f(r1, x) * h.get(y) - f(r1, y) * h.get(x)) / det;
    let mut worst = (Subset::EMPTY, 0.0f64);
    for s in h.ground().subsets() {
        let r = (h.get(s) - a * f(r1, s) - b * f(r2, s)).abs();
        if r > worst.1 {
            worst = (s, r);
        }
    }
    if worst.1 > TOLERANCE {
        return Err(Error::NotOnFace {
            subset: worst.0.to_string(),
            residual: worst.1,
        });
    }
    Ok(FacePoint { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: usize, alpha: &[usize], n: usize) -> Matroid {
        let alpha = Subset::from_elements(alpha.iter().copied()).unwrap();
        Matroid::uniform(UniformSpec::new(k, alpha, n).unwrap()).unwrap()
    }

    fn set(e: &[usize]) -> Subset {
        Subset::from_elements(e.iter().copied()).unwrap()
    }

    #[test]
    fn boundary_points_of_u23() {
        let m = u(2, &[1, 2, 3], 3);
        let alpha = set(&[1, 2]);
        for v in 2..=4u32 {
            let lnv = (v as f64).ln();
            let lo = ((v - 1) as f64).ln();
            for frac in [0.1, 0.5, 0.9] {
                let a = lo + frac * (lnv - lo);
                let d = matus_boundary_dist(&m, alpha, v, a).unwrap();
                let pt = check_face_membership(
                    &d.entropy_vector(),
                    &m.rank_vector(),
                    &u(1, &[1, 2], 3).rank_vector(),
                )
                .unwrap();
                assert!((pt.a - a).abs() < 1e-9);
                assert!((pt.b - (lnv - a)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn designated_coordinate_prefers_outside_alpha() {
        let m = u(2, &[1, 2, 3, 4], 4);
        assert_eq!(designated_coordinate(&m, set(&[1, 2, 3])), Some(4));
        assert_eq!(designated_coordinate(&m, set(&[2, 3, 4])), Some(1));
        assert_eq!(designated_coordinate(&m, set(&[1, 2, 3, 4])), Some(4));
    }

    #[test]
    fn certify_lattice_and_padded_points() {
        let m = u(2, &[1, 2, 3], 3);
        let alpha = set(&[1, 2]);
        let c = certify_point(&m, alpha, 2, 2f64.ln(), 0.0).unwrap();
        assert_eq!(c.distribution.support_size(), 4);
        assert!(c.residual < 1e-9);
        let c = certify_point(&m, alpha, 3, 3f64.ln(), 0.7).unwrap();
        assert!(c.verify().is_ok());
        let a = 0.5 * (2f64.ln() + 3f64.ln());
        let c = certify_point(&m, alpha, 3, a, 3f64.ln() - a + 0.25).unwrap();
        assert!(c.residual < 1e-9);
    }

    #[test]
    fn certify_rejects_points_outside_the_region() {
        let m = u(2, &[1, 2, 3], 3);
        let alpha = set(&[1, 2]);
        let a = 0.5 * (2f64.ln() + 3f64.ln());
        assert!(matches!(
            certify_point(&m, alpha, 3, a, 0.0),
            Err(Error::AOutOfRange { .. })
        ));
        assert!(matches!(
            certify_point(&m, alpha, 3, 0.3, 2.0),
            Err(Error::AOutOfRange { .. })
        ));
        assert!(certify_point(&m, alpha, 3, -1.0, 0.0).is_err());
        assert!(certify_point(&m, alpha, 3, 3f64.ln(), -0.1).is_err());
    }

    #[test]
    fn certify_rank_one() {
        let m = u(1, &[1, 2], 3);
        let c = certify_point(&m, set(&[2, 3]), 2, 0.37, 1.1).unwrap();
        assert!(c.residual < 1e-9);
    }

    #[test]
    fn face_membership_errors() {
        let r1 = u(2, &[1, 2, 3], 3).rank_vector();
        let r2 = u(1, &[1, 2], 3).rank_vector();
        let h = combine(0.4, &r1, 0.9, &r2).unwrap();
        let pt = check_face_membership(&h, &r1, &r2).unwrap();
        assert!((pt.a - 0.4).abs() < 1e-12 && (pt.b - 0.9).abs() < 1e-12);
        assert_eq!(check_face_membership(&h, &r1, &r1), Err(Error::Dependent));
        let free = u(3, &[1, 2, 3], 3).rank_vector();
        let h = combine(1.0, &free, 0.0, &r2).unwrap();
        assert!(matches!(
            check_face_membership(&h, &r1, &r2),
            Err(Error::NotOnFace { .. })
        ));
    }
}
