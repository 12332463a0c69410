//! JSON file formats.
//!
//! * rank vector: `{"n": 3, "values": ["0", "1", ..., "1/2"]}`, values in
//!   mask order as integers or rational strings;
//! * entropy vector: `{"n": 3, "values": [0.0, 0.69, ...]}`;
//! * matroid: `{"n": 3, "circuits": [[1, 2, 3]]}` and/or
//!   `{"n": 3, "ranks": [0, 1, ...]}` (both must agree when given);
//! * distribution: `{"alphabets": [2, 2], "pmf": [{"x": [0, 1], "p": "1/2"}]}`;
//! * certificate: matroid, `alpha`, `v`, `point`, `residual` and
//!   `distribution`.
//!
//! Every loader re-validates what it reads.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::entropy::{Certificate, FacePoint, JointDistribution};
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::setfn::{EntropyVector, RankVector, Subset};

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

impl RawRational {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            RawRational::Int(i) => Ok(BigRational::from_integer((*i).into())),
            RawRational::Text(s) => parse_rational(s),
        }
    }
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSetFunction {
    n: usize,
    #[serde(default)]
    values: Option<Vec<RawRational>>,
    #[serde(default)]
    circuits: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    ranks: Option<Vec<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntropy {
    n: usize,
    values: Vec<f64>,
}

fn matroid_from_raw(raw: &RawSetFunction) -> Result<Matroid> {
    let from_circuits = raw
        .circuits
        .as_ref()
        .map(|cs| {
            let cs = cs
                .iter()
                .map(|c| {
                    if let Some(&e) = c.iter().find(|&&e| e == 0 || e > raw.n) {
                        return Err(Error::ElementOutOfRange {
                            element: e,
                            n: raw.n,
                        });
                    }
                    Subset::from_elements(c.iter().copied())
                })
                .collect::<Result<Vec<_>>>()?;
            Matroid::from_circuits(raw.n, &cs)
        })
        .transpose()?;
    let from_ranks = raw
        .ranks
        .as_ref()
        .map(|r| Matroid::from_ranks(raw.n, r.clone()))
        .transpose()?;
    match (from_circuits, from_ranks) {
        (Some(a), Some(b)) if a != b => Err(Error::Invalid(
            "circuits and ranks describe different matroids".into(),
        )),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => match &raw.values {
            Some(_) => Matroid::from_rank_vector(&rank_vector_from_raw(raw)?),
            None => Err(Error::Parse(
                "expected \"circuits\", \"ranks\" or \"values\"".into(),
            )),
        },
    }
}

fn rank_vector_from_raw(raw: &RawSetFunction) -> Result<RankVector> {
    match &raw.values {
        Some(values) => {
            let values = values
                .iter()
                .map(RawRational::to_rational)
                .collect::<Result<Vec<_>>>()?;
            RankVector::new(raw.n, values)
        }
        None => Ok(matroid_from_raw(raw)?.rank_vector()),
    }
}

/// Reads a rank vector, or the rank function of a matroid file.
pub fn parse_rank_vector(text: &str) -> Result<RankVector> {
    let raw: RawSetFunction = serde_json::from_str(text).map_err(parse_err)?;
    rank_vector_from_raw(&raw)
}

/// Reads a matroid, or a rank-vector file holding a matroid rank function.
pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let raw: RawSetFunction = serde_json::from_str(text).map_err(parse_err)?;
    matroid_from_raw(&raw)
}

pub fn parse_entropy_vector(text: &str) -> Result<EntropyVector> {
    let raw: RawEntropy = serde_json::from_str(text).map_err(parse_err)?;
    EntropyVector::new(raw.n, raw.values)
}

pub fn rank_vector_to_json(h: &RankVector) -> Value {
    serde_json::json!({
        "n": h.n(),
        "values": h.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}

pub fn entropy_vector_to_json(h: &EntropyVector) -> Value {
    serde_json::json!({ "n": h.n(), "values": h.values() })
}

pub fn matroid_to_json(m: &Matroid) -> Value {
    serde_json::json!({
        "n": m.n(),
        "ranks": m.ranks(),
        "circuits": m
            .circuits()
            .iter()
            .map(|c| c.elements().collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutcome {
    x: Vec<u32>,
    p: RawRational,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    alphabets: Vec<u32>,
    pmf: Vec<RawOutcome>,
}

fn distribution_from_raw(raw: &RawDistribution) -> Result<JointDistribution> {
    let masses = raw
        .pmf
        .iter()
        .map(|o| Ok((o.x.clone(), o.p.to_rational()?)))
        .collect::<Result<Vec<_>>>()?;
    JointDistribution::new(raw.alphabets.clone(), masses)
}

fn distribution_to_raw(d: &JointDistribution) -> RawDistribution {
    RawDistribution {
        alphabets: d.alphabets().to_vec(),
        pmf: d
            .pmf()
            .iter()
            .map(|(x, p)| RawOutcome {
                x: x.clone(),
                p: RawRational::Text(p.to_string()),
            })
            .collect(),
    }
}

pub fn parse_distribution(text: &str) -> Result<JointDistribution> {
    let raw: RawDistribution = serde_json::from_str(text).map_err(parse_err)?;
    distribution_from_raw(&raw)
}

pub fn distribution_to_json(d: &JointDistribution) -> Value {
    serde_json::to_value(distribution_to_raw(d)).expect("plain data")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    a: f64,
    b: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    matroid: RawSetFunction,
    alpha: Vec<usize>,
    v: u32,
    point: RawPoint,
    residual: f64,
    distribution: RawDistribution,
}

pub fn certificate_to_json(c: &Certificate) -> Value {
    serde_json::json!({
        "matroid": matroid_to_json(&c.matroid),
        "alpha": c.alpha.elements().collect::<Vec<_>>(),
        "v": c.v,
        "point": RawPoint { a: c.point.a, b: c.point.b },
        "residual": c.residual,
        "distribution": distribution_to_raw(&c.distribution),
    })
}

/// Reads a certificate and recomputes its residual from the distribution.
/// The stored residual is replaced by the recomputed one.
pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let raw: RawCertificate = serde_json::from_str(text).map_err(parse_err)?;
    let matroid = matroid_from_raw(&raw.matroid)?;
    let n = matroid.n();
    if let Some(&e) = raw.alpha.iter().find(|&&e| e == 0 || e > n) {
        return Err(Error::ElementOutOfRange { element: e, n });
    }
    let mut cert = Certificate {
        alpha: Subset::from_elements(raw.alpha.iter().copied())?,
        matroid,
        v: raw.v,
        point: FacePoint {
            a: raw.point.a,
            b: raw.point.b,
        },
        distribution: distribution_from_raw(&raw.distribution)?,
        residual: raw.residual,
    };
    if cert.alpha.is_empty() {
        return Err(Error::Invalid("α must be non-empty".into()));
    }
    cert.residual = cert.verify()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::certify_point;
    use crate::matroid::UniformSpec;

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("3/6").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            parse_rational(" -2 ").unwrap(),
            BigRational::from_integer((-2).into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rank_vector_round_trip() {
        let h = parse_rank_vector(r#"{"n": 2, "values": [0, "1/2", "1", 1]}"#).unwrap();
        assert_eq!(
            parse_rank_vector(&rank_vector_to_json(&h).to_string()).unwrap(),
            h
        );
        assert!(matches!(
            parse_rank_vector(r#"{"n": 2, "values": [0, 1, 1]}"#),
            Err(Error::Length { .. })
        ));
        assert!(matches!(parse_rank_vector("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn matroid_formats_agree() {
        let m = parse_matroid(r#"{"n": 3, "circuits": [[1, 2, 3]]}"#).unwrap();
        let again = parse_matroid(&matroid_to_json(&m).to_string()).unwrap();
        assert_eq!(m, again);
        let via_values = parse_matroid(r#"{"n": 3, "values": [0,1,1,2,1,2,2,2]}"#).unwrap();
        assert_eq!(m, via_values);
        assert!(
            parse_matroid(r#"{"n": 3, "circuits": [[1, 2]], "ranks": [0,1,1,2,1,2,2,2]}"#).is_err()
        );
        assert!(matches!(
            parse_matroid(r#"{"n": 3, "circuits": [[1, 4]]}"#),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn certificate_round_trip() {
        let m = Matroid::uniform(UniformSpec::full(2, 3).unwrap()).unwrap();
        let alpha = Subset::from_elements([1, 2]).unwrap();
        let a = 0.5 * (2f64.ln() + 3f64.ln());
        let c = certify_point(&m, alpha, 3, a, 3f64.ln() - a).unwrap();
        let text = certificate_to_json(&c).to_string();
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back.distribution, c.distribution);
        assert_eq!(back.point, c.point);
        let tampered = text.replace(&format!("\"a\":{}", c.point.a), "\"a\":0.5");
        assert!(matches!(
            parse_certificate(&tampered),
            Err(Error::Residual(_))
        ));
    }

    #[test]
    fn distribution_rejections() {
        assert!(matches!(
            parse_distribution(r#"{"alphabets": [2], "pmf": [{"x": [0], "p": "1/2"}]}"#),
            Err(Error::InvalidDistribution(_))
        ));
        let d = parse_distribution(
            r#"{"alphabets": [2], "pmf": [{"x": [0], "p": "1/2"}, {"x": [1], "p": "1/2"}]}"#,
        )
        .unwrap();
        assert_eq!(
            parse_distribution(&distribution_to_json(&d).to_string()).unwrap(),
            d
        );
    }
}
