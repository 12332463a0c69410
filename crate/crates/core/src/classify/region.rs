//! Entropic region of a classified face in the `(a, b)` coordinates of
//! `a·r_M + b·r_U`.

use std::fmt::Write as _;

use serde::Serialize;

use super::chi::{Chi, ChiView};
use super::FaceType;
use crate::error::{Error, Result};
use crate::TOLERANCE;

/// Largest alphabet size a region query may reach.
const MAX_V: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Entropic,
    NonEntropic,
    Unknown,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Entropic => "entropic",
            Region::NonEntropic => "non-entropic",
            Region::Unknown => "unknown",
        }
    }
}

/// Alphabet size `v` with `|a - ln v| <= TOLERANCE`, if any.
fn lattice_v(a: f64) -> Option<u32> {
    let v = a.exp().round();
    (v >= 2.0 && (a - v.ln()).abs() <= TOLERANCE).then_some(v as u32)
}

/// Smallest `v` with `ln v >= a`, snapping to `ln v` within tolerance.
fn ceil_v(a: f64) -> Result<u32> {
    if let Some(v) = lattice_v(a) {
        return Ok(v);
    }
    let v = a.exp().ceil().max(2.0);
    if v > MAX_V as f64 {
        return Err(Error::AOutOfRange {
            a,
            reason: format!("alphabet sizes above {MAX_V} are not examined"),
        });
    }
    Ok(v as u32)
}

fn from_chi(c: Chi) -> Region {
    match c {
        Chi::Member => Region::Entropic,
        Chi::NonMember | Chi::Unknown => Region::Unknown,
    }
}

/// Lattice rule: `(a, b)` can only be entropic when `a = ln v`.
fn lattice_rule(chi: &ChiView<'_>, a: f64) -> Region {
    match lattice_v(a) {
        Some(v) => from_chi(chi.member(v)),
        None => Region::NonEntropic,
    }
}

/// Whether `a·r_M + b·r_U` is entropic for a face of the given type.
///
/// `Unknown` is returned wherever the answer depends on a value of `χ_M`
/// that is not known to be a member.
pub fn region_membership(face_type: FaceType, chi: &ChiView<'_>, a: f64, b: f64) -> Result<Region> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::AOutOfRange {
            a,
            reason: "a must be positive".into(),
        });
    }
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::Invalid(format!("b = {b} must be non-negative")));
    }
    Ok(match face_type {
        FaceType::NonEntropic => Region::NonEntropic,
        FaceType::Uncovered => Region::Unknown,
        FaceType::AllEntropic => {
            if b > TOLERANCE || chi.rank_one() {
                Region::Entropic
            } else {
                lattice_rule(chi, a)
            }
        }
        FaceType::ChenYeung => lattice_rule(chi, a),
        FaceType::Matus => {
            if let Some(v) = lattice_v(a) {
                from_chi(chi.member(v))
            } else {
                let v = ceil_v(a)?;
                if a + b < (v as f64).ln() - TOLERANCE {
                    Region::NonEntropic
                } else {
                    from_chi(chi.member(v))
                }
            }
        }
    })
}

/// One drawable piece of a region: a segment from `(x1, y1)` to `(x2, y2)`.
///
/// `kind` is one of `strip` (entropic strip above a staircase step or the
/// whole face), `ray` (entropic vertical ray), `staircase` (boundary segment
/// `a + b = ln v`) and `gap` (undetermined strip or ray).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionPiece {
    pub label: String,
    pub kind: &'static str,
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

/// Boundary data for `0 < a <= a_max`.
pub fn region_boundary_data(
    face_type: FaceType,
    chi: &ChiView<'_>,
    a_max: f64,
) -> Result<Vec<RegionPiece>> {
    if !(a_max.is_finite() && a_max > 0.0) {
        return Err(Error::AOutOfRange {
            a: a_max,
            reason: "a_max must be positive".into(),
        });
    }
    let top = ceil_v(a_max)?;
    let piece = |label: String, kind, x1, y1, x2, y2| RegionPiece {
        label,
        kind,
        x1,
        y1,
        x2,
        y2,
    };
    let mut out = Vec::new();
    match face_type {
        FaceType::NonEntropic => {}
        FaceType::Uncovered => out.push(piece("uncovered".into(), "gap", 0.0, 0.0, a_max, 0.0)),
        FaceType::AllEntropic => out.push(piece("all".into(), "strip", 0.0, 0.0, a_max, 0.0)),
        FaceType::ChenYeung => {
            for v in 2..=top {
                let x = (v as f64).ln();
                if x > a_max + TOLERANCE {
                    break;
                }
                let kind = if chi.member(v) == Chi::Member {
                    "ray"
                } else {
                    "gap"
                };
                out.push(piece(format!("v={v}"), kind, x, 0.0, x, a_max));
            }
        }
        FaceType::Matus => {
            for v in 2..=top {
                let lnv = (v as f64).ln();
                let x1 = ((v - 1) as f64).ln();
                let x2 = lnv.min(a_max);
                let (y1, y2) = (lnv - x1, lnv - x2);
                out.push(piece(format!("v={v}"), "staircase", x1, y1, x2, y2));
                let kind = if chi.member(v) == Chi::Member {
                    "strip"
                } else {
                    "gap"
                };
                out.push(piece(format!("v={v}"), kind, x1, y1, x2, y2));
            }
        }
    }
    Ok(out)
}

/// CSV with header `label,kind,x1,y1,x2,y2`.
pub fn regions_to_csv(pieces: &[RegionPiece]) -> String {
    let mut s = String::from("label,kind,x1,y1,x2,y2\n");
    for p in pieces {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            p.label, p.kind, p.x1, p.y1, p.x2, p.y2
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::ChiOracle;
    use crate::matroid::{Matroid, UniformSpec};

    fn full(k: usize, n: usize) -> Matroid {
        Matroid::uniform(UniformSpec::full(k, n).unwrap()).unwrap()
    }

    #[test]
    fn matus_staircase_for_u23() {
        let oracle = ChiOracle::new();
        let m = full(2, 3);
        let chi = oracle.view(&m);
        let a = 0.5 * (2f64.ln() + 3f64.ln());
        let ln3 = 3f64.ln();
        assert_eq!(
            region_membership(FaceType::Matus, &chi, a, ln3 - a + 0.01).unwrap(),
            Region::Entropic
        );
        assert_eq!(
            region_membership(FaceType::Matus, &chi, a, ln3 - a - 0.01).unwrap(),
            Region::NonEntropic
        );
        assert_eq!(
            region_membership(FaceType::Matus, &chi, 2f64.ln(), 0.0).unwrap(),
            Region::Entropic
        );
    }

    #[test]
    fn lattice_only_for_chen_yeung() {
        let oracle = ChiOracle::new();
        let m = full(2, 4);
        let chi = oracle.view(&m);
        assert_eq!(
            region_membership(FaceType::ChenYeung, &chi, 3f64.ln(), 1.0).unwrap(),
            Region::Entropic
        );
        assert_eq!(
            region_membership(FaceType::ChenYeung, &chi, 2f64.ln(), 1.0).unwrap(),
            Region::Unknown
        );
        assert_eq!(
            region_membership(FaceType::ChenYeung, &chi, 1.2, 1.0).unwrap(),
            Region::NonEntropic
        );
    }

    #[test]
    fn invalid_points() {
        let oracle = ChiOracle::new();
        let m = full(2, 3);
        let chi = oracle.view(&m);
        assert!(region_membership(FaceType::Matus, &chi, 0.0, 1.0).is_err());
        assert!(region_membership(FaceType::Matus, &chi, 1.0, -1.0).is_err());
        assert!(region_boundary_data(FaceType::Matus, &chi, f64::NAN).is_err());
    }

    #[test]
    fn boundary_gaps_follow_chi() {
        let oracle = ChiOracle::new();
        let m = full(2, 4);
        let chi = oracle.view(&m);
        let pieces = region_boundary_data(FaceType::Matus, &chi, 16f64.ln()).unwrap();
        let gaps: Vec<&str> = pieces
            .iter()
            .filter(|p| p.kind == "gap")
            .map(|p| p.label.as_str())
            .collect();
        assert_eq!(gaps, ["v=2", "v=6"]);
        assert_eq!(pieces.len(), 30);
        let csv = regions_to_csv(&pieces);
        assert!(csv.starts_with("label,kind,x1,y1,x2,y2\nv=2,staircase,0,"));
    }
}
