//! Classification of the 2-dimensional faces spanned by a connected matroid
//! `M` and the rank-one matroid `U = U_{1,|α|}^{α,n}`.
//!
//! The entropic points of such a face fall into four shapes: every point is
//! entropic, the staircase regions bounded by `a + b = ln v`, only the
//! lattice lines `a = ln v`, or none at all. The shape is decided circuit by
//! circuit from the restriction of the pair to each circuit of `M`.

mod chi;
mod region;

use std::fmt;

use serde::Serialize;

use crate::cone::{is_two_face, minimal_face_dim};
use crate::entropy::{certify_point, Certificate};
use crate::error::{Error, Result};
use crate::matroid::{Matroid, UniformSpec};
use crate::setfn::{compress, Subset};

pub use chi::{Chi, ChiOracle, ChiRule, ChiView, PROBE_RANGE};
pub use region::{region_boundary_data, region_membership, regions_to_csv, Region, RegionPiece};

/// Circuits larger than this are not re-analysed as faces of their own.
const MAX_RESTRICTED_DIM_CIRCUIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceType {
    AllEntropic,
    Matus,
    ChenYeung,
    NonEntropic,
    Uncovered,
}

impl FaceType {
    pub fn as_str(self) -> &'static str {
        match self {
            FaceType::AllEntropic => "all-entropic",
            FaceType::Matus => "matus",
            FaceType::ChenYeung => "chen-yeung",
            FaceType::NonEntropic => "non-entropic",
            FaceType::Uncovered => "uncovered",
        }
    }
}

impl fmt::Display for FaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Type of the face obtained by restricting the pair to a circuit with `m`
/// elements, `t` of which lie in `α`.
pub fn restricted_pair_type(m: usize, t: usize) -> Result<FaceType> {
    if m < 2 || t > m {
        return Err(Error::InvalidPair { m, t });
    }
    Ok(match (m, t) {
        (2, _) => FaceType::AllEntropic,
        (m, t) if t == m => FaceType::AllEntropic,
        (3, 2) => FaceType::Matus,
        _ => FaceType::ChenYeung,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CircuitAnalysis {
    pub circuit: Vec<usize>,
    pub m: usize,
    pub t: usize,
    pub restricted_type: FaceType,
    /// Minimal face dimension of the restricted sum, for small circuits.
    pub restricted_face_dim: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LoopConditions {
    /// No loop of `M` lies in `α`.
    pub m_loops_in_u_loops: bool,
    /// Every element outside `α` is a loop of `M`.
    pub u_loops_in_m_loops: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChiProbe {
    pub v: u32,
    pub chi: Chi,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FaceReport {
    pub face_type: FaceType,
    pub two_face: bool,
    pub matroid: String,
    pub alpha: Vec<usize>,
    pub rank: u32,
    pub circuit_analysis: Vec<CircuitAnalysis>,
    pub loop_conditions: LoopConditions,
    pub chi: Vec<ChiProbe>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub certificates: Vec<Certificate>,
}

fn rank_one(alpha: Subset, n: usize) -> Result<Matroid> {
    Matroid::uniform(UniformSpec::new(1, alpha, n)?)
}

fn analyse_circuit(m: &Matroid, alpha: Subset, c: Subset) -> Result<CircuitAnalysis> {
    let t = c.intersection(alpha).len();
    let restricted_face_dim = if c.len() <= MAX_RESTRICTED_DIM_CIRCUIT {
        let rm = m.rank_vector().restrict(c)?;
        let local = compress(c.intersection(alpha), c);
        let sum = if local.is_empty() {
            rm
        } else {
            rm.add(&rank_one(local, c.len())?.rank_vector())?
        };
        Some(minimal_face_dim(&sum)?)
    } else {
        None
    };
    Ok(CircuitAnalysis {
        circuit: c.elements().collect(),
        m: c.len(),
        t,
        restricted_type: restricted_pair_type(c.len(), t)?,
        restricted_face_dim,
    })
}

/// Classifies the face spanned by `r_M` and `r_U`, `U = U_{1,|α|}^{α,n}`.
///
/// Fails when `α` is empty or out of range, when `M` is not connected after
/// deleting loops (so `r_M` is not extreme), or when the two rank vectors
/// are proportional.
pub fn classify_face(m: &Matroid, alpha: Subset, chi: &ChiOracle) -> Result<FaceReport> {
    let n = m.n();
    m.ground().check(alpha)?;
    if alpha.is_empty() {
        return Err(Error::Invalid("α must be non-empty".into()));
    }
    if m.full_rank() == 0 || !m.is_connected_after_loop_deletion() {
        return Err(Error::NotExtreme("matroid"));
    }
    let u = rank_one(alpha, n)?;
    let two_face = is_two_face(&m.rank_vector(), &u.rank_vector())?;

    let loops = m.loops();
    let outside = m.ground().full().difference(alpha);
    let loop_conditions = LoopConditions {
        m_loops_in_u_loops: loops.intersection(alpha).is_empty(),
        u_loops_in_m_loops: outside.is_subset_of(loops),
    };
    let circuit_analysis = m
        .circuits()
        .iter()
        .filter(|c| c.len() >= 2)
        .map(|&c| analyse_circuit(m, alpha, c))
        .collect::<Result<Vec<_>>>()?;

    let view = chi.view(m);
    let probes: Vec<ChiProbe> = view
        .probe()
        .into_iter()
        .map(|(v, chi)| ChiProbe { v, chi })
        .collect();
    let mut notes = Vec::new();

    let face_type = if !two_face {
        let sum = m.rank_vector().add(&u.rank_vector())?;
        notes.push(format!(
            "not a 2-dimensional face: the sum lies on a face of dimension {}",
            minimal_face_dim(&sum)?
        ));
        FaceType::Uncovered
    } else if m.full_rank() == 1 {
        FaceType::AllEntropic
    } else if !probes.iter().any(|p| p.chi == Chi::Member) {
        let (lo, hi) = (PROBE_RANGE.start(), PROBE_RANGE.end());
        if probes.iter().all(|p| p.chi == Chi::NonMember) {
            notes.push(format!(
                "non-entropic given that χ_M has no member in {lo}..={hi}"
            ));
            FaceType::NonEntropic
        } else {
            notes.push(format!(
                "χ_M undetermined over {lo}..={hi}: no member found"
            ));
            FaceType::Uncovered
        }
    } else {
        circuit_type(&circuit_analysis, loop_conditions, &mut notes)
    };

    for c in &circuit_analysis {
        if matches!(c.restricted_face_dim, Some(d) if d != 2) && c.t > 0 && c.t < c.m {
            notes.push(format!(
                "restriction to circuit {} spans a face of dimension {}",
                Subset::from_elements(c.circuit.iter().copied())?,
                c.restricted_face_dim.unwrap_or_default()
            ));
        }
    }

    let certificates = if matches!(face_type, FaceType::NonEntropic | FaceType::Uncovered) {
        Vec::new()
    } else {
        collect_certificates(m, alpha, face_type, &view, &mut notes)
    };

    Ok(FaceReport {
        face_type,
        two_face,
        matroid: m.to_string(),
        alpha: alpha.elements().collect(),
        rank: m.full_rank(),
        circuit_analysis,
        loop_conditions,
        chi: probes,
        notes,
        certificates,
    })
}

fn circuit_type(
    circuits: &[CircuitAnalysis],
    loops: LoopConditions,
    notes: &mut Vec<String>,
) -> FaceType {
    if circuits
        .iter()
        .any(|c| c.restricted_type == FaceType::ChenYeung)
    {
        return FaceType::ChenYeung;
    }
    let matus = circuits
        .iter()
        .filter(|c| c.restricted_type == FaceType::Matus)
        .count();
    if matus == 0 {
        return FaceType::AllEntropic;
    }
    if matus > 1 {
        notes.push(format!("{matus} circuits restrict to the staircase type"));
    }
    if loops.m_loops_in_u_loops {
        FaceType::Matus
    } else {
        notes.push("a loop of M lies in α: only lattice points survive".into());
        FaceType::ChenYeung
    }
}

fn collect_certificates(
    m: &Matroid,
    alpha: Subset,
    face_type: FaceType,
    view: &ChiView<'_>,
    notes: &mut Vec<String>,
) -> Vec<Certificate> {
    let mut out = Vec::new();
    let mut push = |label: &str, res: Result<Certificate>| match res {
        Ok(c) => out.push(c),
        Err(e) => notes.push(format!("{label} certificate unavailable: {e}")),
    };
    if m.full_rank() == 1 {
        push("interior", certify_point(m, alpha, 2, 1.0, 1.0));
        return out;
    }
    let Some(v) = view.smallest_member() else {
        return out;
    };
    let lnv = (v as f64).ln();
    push("ray", certify_point(m, alpha, v, lnv, 0.0));
    if face_type == FaceType::Matus {
        let a = 0.5 * (((v - 1) as f64).ln() + lnv);
        push("boundary", certify_point(m, alpha, v, a, lnv - a));
    }
    out
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
    fn restricted_pairs() {
        assert_eq!(restricted_pair_type(3, 2).unwrap(), FaceType::Matus);
        assert_eq!(restricted_pair_type(4, 3).unwrap(), FaceType::ChenYeung);
        assert_eq!(restricted_pair_type(3, 1).unwrap(), FaceType::ChenYeung);
        assert_eq!(restricted_pair_type(2, 1).unwrap(), FaceType::AllEntropic);
        assert_eq!(restricted_pair_type(5, 5).unwrap(), FaceType::AllEntropic);
        assert_eq!(
            restricted_pair_type(1, 0),
            Err(Error::InvalidPair { m: 1, t: 0 })
        );
        assert!(restricted_pair_type(3, 4).is_err());
    }

    #[test]
    fn classic_faces() {
        let chi = ChiOracle::new();
        let r = classify_face(&u(2, &[1, 2, 3], 3), set(&[1, 2]), &chi).unwrap();
        assert_eq!(r.face_type, FaceType::Matus);
        assert!(r.two_face);
        assert_eq!(r.certificates.len(), 2);
        let r = classify_face(&u(2, &[1, 2, 3], 3), set(&[1]), &chi).unwrap();
        assert_eq!(r.face_type, FaceType::ChenYeung);
        let r = classify_face(&u(2, &[1, 2, 3, 4], 4), set(&[1, 2, 3]), &chi).unwrap();
        assert_eq!(r.face_type, FaceType::Matus);
        let r = classify_face(&u(2, &[1, 2, 3, 4], 4), set(&[1, 2]), &chi).unwrap();
        assert_eq!(r.face_type, FaceType::ChenYeung);
    }

    #[test]
    fn loop_in_alpha_downgrades_to_lattice() {
        let chi = ChiOracle::new();
        let m = u(2, &[1, 2, 3], 4);
        let r = classify_face(&m, set(&[1, 2, 4]), &chi).unwrap();
        assert!(!r.loop_conditions.m_loops_in_u_loops);
        if r.two_face {
            assert_eq!(r.face_type, FaceType::ChenYeung);
        }
    }

    #[test]
    fn rejects_disconnected_and_proportional() {
        let chi = ChiOracle::new();
        let sum = u(1, &[1, 2], 2).direct_sum(&u(1, &[1, 2], 2)).unwrap();
        assert_eq!(
            classify_face(&sum, set(&[1]), &chi),
            Err(Error::NotExtreme("matroid"))
        );
        assert_eq!(
            classify_face(&u(1, &[1, 2], 3), set(&[1, 2]), &chi),
            Err(Error::Proportional)
        );
        assert!(classify_face(&u(2, &[1, 2, 3], 3), Subset::EMPTY, &chi).is_err());
    }
}
