//! Property suites over the built-in catalog.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use polyface::catalog::{catalog, CatalogEntry};
use polyface::cone::{modular_or_tight_check, proportional};
use polyface::entropy::realize_matroid;
use polyface::matroid::circuit_noncontainment_check;
use polyface::{
    classify_face, is_extreme_ray, minimal_face_dim, region_membership, Chi, ChiOracle, Error,
    Matroid, Region, Subset, UniformSpec,
};

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub suite: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, if any.
    pub first_failure: Option<String>,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn finish(self, suite: &'static str) -> SweepRow {
        SweepRow {
            suite,
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

type Suite = fn(&[CatalogEntry]) -> Tally;

fn connected(cat: &[CatalogEntry]) -> impl Iterator<Item = &CatalogEntry> {
    cat.iter()
        .filter(|e| e.matroid.is_connected_after_loop_deletion())
}

fn small_alphas(n: usize, singletons: bool) -> Vec<Subset> {
    let mut out: Vec<Subset> = Vec::new();
    if singletons {
        out.extend((1..=n).map(Subset::singleton));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Subset::singleton(i).with(j));
        }
    }
    out
}

fn rank_one(alpha: Subset, n: usize) -> Matroid {
    Matroid::uniform(UniformSpec::new(1, alpha, n).expect("non-empty α")).expect("valid")
}

fn extreme_iff_connected(cat: &[CatalogEntry]) -> Tally {
    let mut t = Tally::default();
    for e in cat {
        let ok = is_extreme_ray(&e.matroid.rank_vector())
            .map(|x| x == e.matroid.is_connected_after_loop_deletion())
            .unwrap_or(false);
        t.record(ok, || e.name.clone());
    }
    t
}

fn modular_or_tight(cat: &[CatalogEntry]) -> Tally {
    let mut t = Tally::default();
    for e in connected(cat) {
        let ok = modular_or_tight_check(&e.matroid.rank_vector()).unwrap_or(false);
        t.record(ok, || e.name.clone());
    }
    t
}

fn rank_one_faces(cat: &[CatalogEntry]) -> Tally {
    let mut t = Tally::default();
    for e in connected(cat) {
        let n = e.matroid.n();
        let rm = e.matroid.rank_vector();
        for alpha in small_alphas(n, n <= 5) {
            let ru = rank_one(alpha, n).rank_vector();
            if proportional(&rm, &ru) {
                continue;
            }
            let dim = rm.add(&ru).and_then(|h| minimal_face_dim(&h));
            t.record(dim == Ok(2), || {
                format!("{} with α = {alpha}: {dim:?}", e.name)
            });
        }
    }
    t
}

fn circuit_noncontainment(cat: &[CatalogEntry]) -> Tally {
    let mut t = Tally::default();
    let conn: Vec<&CatalogEntry> = connected(cat).collect();
    for (i, a) in conn.iter().enumerate() {
        for b in conn[i + 1..]
            .iter()
            .filter(|b| b.matroid.n() == a.matroid.n())
        {
            let ok = circuit_noncontainment_check(&a.matroid, &b.matroid).unwrap_or(false);
            t.record(ok, || format!("{} vs {}", a.name, b.name));
        }
    }
    t
}

fn circuits_round_trip(cat: &[CatalogEntry]) -> Tally {
    let mut t = Tally::default();
    for e in cat {
        let m = &e.matroid;
        let ok = Matroid::from_circuits(m.n(), m.circuits()).as_ref() == Ok(m);
        t.record(ok, || e.name.clone());
    }
    t
}

fn uniform_constructions(cat: &[CatalogEntry]) -> Tally {
    let mut t = Tally::default();
    let chi = ChiOracle::new();
    for e in cat.iter().filter(|e| e.matroid.n() <= 5) {
        for v in 2..=4u32 {
            if chi.query(&e.matroid, v) != Chi::Member {
                continue;
            }
            let lnv = (v as f64).ln();
            let residual = realize_matroid(&e.matroid, v).map(|d| {
                let h = d.entropy_vector();
                h.ground()
                    .subsets()
                    .map(|a| (h.get(a) - lnv * e.matroid.rank(a) as f64).abs())
                    .fold(0.0, f64::max)
            });
            let ok = matches!(residual, Ok(r) if r < polyface::TOLERANCE);
            t.record(ok, || format!("{}, v = {v}: {residual:?}", e.name));
        }
    }
    t
}

fn certificates_consistent(cat: &[CatalogEntry]) -> Tally {
    let mut t = Tally::default();
    let chi = ChiOracle::new();
    for e in connected(cat).filter(|e| e.matroid.n() <= 4) {
        let m = &e.matroid;
        for alpha in small_alphas(m.n(), true) {
            let report = match classify_face(m, alpha, &chi) {
                Ok(r) => r,
                Err(Error::Proportional) => continue,
                Err(err) => {
                    t.record(false, || format!("{} with α = {alpha}: {err}", e.name));
                    continue;
                }
            };
            let view = chi.view(m);
            for c in &report.certificates {
                let ok = c.verify().is_ok()
                    && region_membership(report.face_type, &view, c.point.a, c.point.b)
                        .map(|r| r != Region::NonEntropic)
                        .unwrap_or(false);
                t.record(ok, || {
                    format!(
                        "{} with α = {alpha} at ({}, {})",
                        e.name, c.point.a, c.point.b
                    )
                });
            }
        }
    }
    t
}

pub fn sweep_catalog() -> Vec<SweepRow> {
    let cat = catalog();
    let suites: Vec<(&'static str, Suite)> = vec![
        ("certificates-consistent", certificates_consistent),
        ("circuit-noncontainment", circuit_noncontainment),
        ("circuits-round-trip", circuits_round_trip),
        ("extreme-iff-connected", extreme_iff_connected),
        ("modular-or-tight", modular_or_tight),
        ("rank-one-faces", rank_one_faces),
        ("uniform-constructions", uniform_constructions),
    ];
    let mut rows: Vec<SweepRow> = suites
        .par_iter()
        .map(|(name, suite)| suite(&cat).finish(name))
        .collect();
    rows.sort_by_key(|r| r.suite);
    rows
}

pub fn to_text(rows: &[SweepRow]) -> String {
    let width = rows.iter().map(|r| r.suite.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in rows {
        let status = if r.passed() { "pass" } else { "FAIL" };
        let _ = write!(
            s,
            "{status}  {:<width$}  {}/{}",
            r.suite,
            r.cases - r.failures,
            r.cases
        );
        if let Some(f) = &r.first_failure {
            let _ = write!(s, "  first failure: {f}");
        }
        s.push('\n');
    }
    s
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("suite,cases,failures,status\n");
    for r in rows {
        let status = if r.passed() { "pass" } else { "fail" };
        let _ = writeln!(s, "{},{},{},{status}", r.suite, r.cases, r.failures);
    }
    s
}
