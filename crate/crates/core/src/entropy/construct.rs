//! Explicit distributions whose entropy vectors are multiples of matroid
//! rank functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{JointDistribution, Outcome};
use crate::error::{Error, Result};
use crate::gf::{prime_power_factors, GaloisField};
use crate::matroid::Matroid;
use crate::setfn::{GroundSet, Subset};

/// Node budget for the orthogonal-array search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

/// Largest non-prime-power alphabet handed directly to the search.
const DIRECT_SEARCH_MAX: u32 = 6;

/// Largest support size any construction will materialize.
const MAX_SUPPORT: u64 = 1 << 20;

const BISECTION_TOL: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;

/// A uniform distribution on `v^k` points with entropy vector
/// `ln v · min{k, |A|}`.
///
/// * `k = 1`: one uniform symbol copied `n` times.
/// * `k = n`: independent uniform symbols.
/// * `k = n - 1`: `n - 1` independent symbols and their sum mod `v`.
/// * otherwise: for each prime-power factor `q` of `v`, a (doubly extended)
///   Reed–Solomon code over GF(q) when `n <= q + 1`, or an orthogonal-array
///   search when `k = 2`; the factors are combined by independent coupling.
pub fn uniform_matroid_dist(k: usize, n: usize, v: u32) -> Result<JointDistribution> {
    GroundSet::new(n)?;
    if k == 0 || k > n {
        return Err(Error::InvalidUniform(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    if v < 2 {
        return Err(Error::Invalid(format!("alphabet size {v} < 2")));
    }
    if (v as u64)
        .checked_pow(k as u32)
        .is_none_or(|s| s > MAX_SUPPORT)
    {
        return Err(Error::NoConstruction(format!(
            "U_{{{k},{n}}} with v = {v}: support too large"
        )));
    }
    let support = if k == 1 {
        (0..v).map(|s| vec![s; n]).collect()
    } else if k == n {
        all_tuples(n, v)
    } else if k == n - 1 {
        all_tuples(n - 1, v)
            .into_iter()
            .map(|mut x| {
                let s = x.iter().fold(0u32, |acc, &c| (acc + c) % v);
                x.push(s);
                x
            })
            .collect()
    } else {
        return mds_by_factors(k, n, v);
    };
    JointDistribution::uniform_on(vec![v; n], support)
}

/// Whether [`uniform_matroid_dist`] succeeds. The closed-form cases are
/// answered without building the support.
pub fn has_uniform_construction(k: usize, n: usize, v: u32) -> bool {
    if k == 0 || k > n || v < 2 || GroundSet::new(n).is_err() {
        return false;
    }
    if (v as u64)
        .checked_pow(k as u32)
        .is_none_or(|s| s > MAX_SUPPORT)
    {
        return false;
    }
    if k == 1 || k + 1 >= n || prime_power_factors(v).iter().all(|&q| n <= q as usize + 1) {
        return true;
    }
    uniform_matroid_dist(k, n, v).is_ok()
}

fn mds_by_factors(k: usize, n: usize, v: u32) -> Result<JointDistribution> {
    let factors = prime_power_factors(v);
    let mut parts = Vec::with_capacity(factors.len());
    for &q in &factors {
        match mds_code(k, n, q) {
            Some(code) => parts.push(JointDistribution::uniform_on(vec![q; n], code)?),
            None => break,
        }
    }
    if parts.len() == factors.len() {
        let mut it = parts.into_iter();
        let first = it.next().expect("v >= 2 has a factor");
        return it.try_fold(first, |acc, d| acc.product(&d));
    }
    if k == 2 && factors.len() > 1 && v <= DIRECT_SEARCH_MAX {
        if let SearchOutcome::Found(code) = search_orthogonal_array(n, v, DEFAULT_SEARCH_BUDGET) {
            return JointDistribution::uniform_on(vec![v; n], code);
        }
    }
    Err(Error::NoConstruction(format!(
        "U_{{{k},{n}}} over an alphabet of size {v}"
    )))
}

/// MDS code of dimension `k` and length `n` over GF(q), if one is at hand.
fn mds_code(k: usize, n: usize, q: u32) -> Option<Vec<Outcome>> {
    if n <= q as usize + 1 {
        return reed_solomon(k, n, q);
    }
    if k == 2 {
        if let SearchOutcome::Found(code) = search_orthogonal_array(n, q, DEFAULT_SEARCH_BUDGET) {
            return Some(code);
        }
    }
    None
}

/// Evaluations of all polynomials of degree `< k` at `min(n, q)` field
/// points, plus the leading coefficient as coordinate `q + 1` when
/// `n = q + 1`.
fn reed_solomon(k: usize, n: usize, q: u32) -> Option<Vec<Outcome>> {
    let field = GaloisField::new(q)?;
    if n > q as usize + 1 || k == 0 || k > n {
        return None;
    }
    let code = all_tuples(k, q)
        .into_iter()
        .map(|msg| {
            (0..n)
                .map(|i| {
                    if i < q as usize {
                        let x = i as u32;
                        msg.iter().enumerate().fold(0, |acc, (j, &c)| {
                            field.add(acc, field.mul(c, field.pow(x, j)))
                        })
                    } else {
                        msg[k - 1]
                    }
                })
                .collect()
        })
        .collect();
    Some(code)
}

/// All `v^len` tuples in lexicographic order.
fn all_tuples(len: usize, v: u32) -> Vec<Outcome> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|x| {
                (0..v).map(move |s| {
                    let mut y = x.clone();
                    y.push(s);
                    y
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Codewords of an orthogonal array of strength 2.
    Found(Vec<Outcome>),
    /// The search space was exhausted: no such array exists.
    Exhausted,
    BudgetExceeded,
}

/// Backtracking search for `n - 2` mutually orthogonal Latin squares of
/// order `v`, returned as the `v^2` codewords `(r, c, L_1(r,c), ...)`.
///
/// The first row of every square is fixed to the identity; relabeling the
/// symbols of one square preserves orthogonality, so this loses nothing.
pub fn search_orthogonal_array(n: usize, v: u32, budget: u64) -> SearchOutcome {
    if n < 2 || v < 2 {
        return SearchOutcome::Exhausted;
    }
    let squares = n - 2;
    let order = v as usize;
    let mut state = MolsSearch {
        order,
        squares,
        cells: vec![vec![usize::MAX; order * order]; squares],
        row_used: vec![vec![false; order * order]; squares],
        col_used: vec![vec![false; order * order]; squares],
        pair_used: vec![vec![false; order * order]; squares * squares],
        nodes: 0,
        budget,
    };
    for s in 0..squares {
        for c in 0..order {
            state.place(s, 0, c, c);
        }
    }
    match state.fill(order * squares) {
        Some(true) => {
            let code = (0..order)
                .flat_map(|r| (0..order).map(move |c| (r, c)))
                .map(|(r, c)| {
                    let mut x = vec![r as u32, c as u32];
                    x.extend((0..squares).map(|s| state.cells[s][r * order + c] as u32));
                    x
                })
                .collect();
            SearchOutcome::Found(code)
        }
        Some(false) => SearchOutcome::Exhausted,
        None => SearchOutcome::BudgetExceeded,
    }
}

struct MolsSearch {
    order: usize,
    squares: usize,
    cells: Vec<Vec<usize>>,
    row_used: Vec<Vec<bool>>,
    col_used: Vec<Vec<bool>>,
    pair_used: Vec<Vec<bool>>,
    nodes: u64,
    budget: u64,
}

impl MolsSearch {
    fn can_place(&self, s: usize, r: usize, c: usize, x: usize) -> bool {
        let o = self.order;
        if self.row_used[s][r * o + x] || self.col_used[s][c * o + x] {
            return false;
        }
        (0..s).all(|t| !self.pair_used[t * self.squares + s][self.cells[t][r * o + c] * o + x])
    }

    fn place(&mut self, s: usize, r: usize, c: usize, x: usize) {
        let o = self.order;
        self.cells[s][r * o + c] = x;
        self.row_used[s][r * o + x] = true;
        self.col_used[s][c * o + x] = true;
        for t in 0..s {
            let y = self.cells[t][r * o + c];
            self.pair_used[t * self.squares + s][y * o + x] = true;
        }
    }

    fn unplace(&mut self, s: usize, r: usize, c: usize) {
        let o = self.order;
        let x = self.cells[s][r * o + c];
        for t in 0..s {
            let y = self.cells[t][r * o + c];
            self.pair_used[t * self.squares + s][y * o + x] = false;
        }
        self.row_used[s][r * o + x] = false;
        self.col_used[s][c * o + x] = false;
        self.cells[s][r * o + c] = usize::MAX;
    }

    /// `Some(true)` on success, `Some(false)` when exhausted, `None` when
    /// the budget ran out. `pos` indexes (cell, square) pairs row-major.
    fn fill(&mut self, pos: usize) -> Option<bool> {
        let o = self.order;
        if self.squares == 0 || pos == o * o * self.squares {
            return Some(true);
        }
        let cell = pos / self.squares;
        let s = pos % self.squares;
        let (r, c) = (cell / o, cell % o);
        for x in 0..o {
            if !self.can_place(s, r, c, x) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.place(s, r, c, x);
            let res = self.fill(pos + 1);
            if res != Some(false) {
                return res;
            }
            self.unplace(s, r, c);
        }
        Some(false)
    }
}

/// Support of a uniform distribution realizing `ln v · r_M`, when the
/// simplification of `M` is uniform and a construction for it is available.
/// Loops become constant coordinates and parallel elements exact copies.
pub fn realize_matroid(m: &Matroid, v: u32) -> Result<JointDistribution> {
    let n = m.n();
    if m.full_rank() == 0 {
        return JointDistribution::uniform_on(vec![1; n], vec![vec![0; n]]);
    }
    let (k, count) = m.simple_uniform_type().ok_or_else(|| {
        Error::NoConstruction("matroid whose simplification is not uniform".into())
    })?;
    let base = uniform_matroid_dist(k, count, v)?;
    let classes = m.parallel_classes();
    let class_of = |e: usize| classes.iter().position(|c| c.contains(e));
    let alphabets = (1..=n)
        .map(|e| class_of(e).map_or(1, |c| base.alphabets()[c]))
        .collect();
    let support = base
        .pmf()
        .keys()
        .map(|x| (1..=n).map(|e| class_of(e).map_or(0, |c| x[c])).collect())
        .collect();
    JointDistribution::uniform_on(alphabets, support)
}

fn binary_entropy_two_level(p: f64, w: u32) -> f64 {
    let rest = 1.0 - p;
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.ln();
    }
    if rest > 0.0 {
        h -= rest * (rest / (w - 1) as f64).ln();
    }
    h
}

/// Masses `(p, (1-p)/(w-1), ..., (1-p)/(w-1))` with entropy `target`, found
/// by bisection on `p ∈ [1/w, 1]`. Zero masses are dropped, so the result
/// may be shorter than `w` only when `target = 0`.
pub fn two_level_masses(w: u32, target: f64) -> Result<Vec<BigRational>> {
    if w < 2 {
        return Err(Error::Invalid(format!("alphabet size {w} < 2")));
    }
    let cap = (w as f64).ln();
    if !(0.0..=cap + BISECTION_TOL).contains(&target) {
        return Err(Error::AOutOfRange {
            a: target,
            reason: format!("entropy must lie in [0, ln {w}]"),
        });
    }
    if target >= cap - BISECTION_TOL {
        return Ok(vec![BigRational::new(1.into(), w.into()); w as usize]);
    }
    if target == 0.0 {
        return Ok(vec![BigRational::one()]);
    }
    let (mut lo, mut hi) = (1.0 / w as f64, 1.0);
    let mut p = 0.5 * (lo + hi);
    for _ in 0..BISECTION_MAX_ITER {
        p = 0.5 * (lo + hi);
        let h = binary_entropy_two_level(p, w);
        if (h - target).abs() <= BISECTION_TOL {
            break;
        }
        if h > target {
            lo = p;
        } else {
            hi = p;
        }
    }
    let p = BigRational::from_float(p).expect("finite");
    let rest = (BigRational::one() - &p) / BigRational::from_integer(BigInt::from(w - 1));
    let mut out = vec![p];
    if !rest.is_zero() {
        out.extend(std::iter::repeat_n(rest, w as usize - 1));
    }
    Ok(out)
}

/// A distribution with entropy vector `b · r_U` for `U = U_{1,|α|}^{α,n}`:
/// one variable of entropy `b`, copied onto every coordinate of `α`.
pub fn rank_one_dist(alpha: Subset, n: usize, b: f64) -> Result<JointDistribution> {
    let ground = GroundSet::new(n)?;
    ground.check(alpha)?;
    if alpha.is_empty() {
        return Err(Error::Invalid(
            "empty support for a rank-one variable".into(),
        ));
    }
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::Invalid(format!("entropy {b} must be positive")));
    }
    let mut w = 2u32;
    while ((w as f64).ln()) < b - BISECTION_TOL {
        w += 1;
    }
    let masses = two_level_masses(w, b)?;
    let alphabets = (1..=n)
        .map(|e| if alpha.contains(e) { w } else { 1 })
        .collect();
    let pairs = masses.into_iter().enumerate().map(|(s, p)| {
        let x = (1..=n)
            .map(|e| if alpha.contains(e) { s as u32 } else { 0 })
            .collect();
        (x, p)
    });
    JointDistribution::new(alphabets, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::UniformSpec;

    fn assert_realizes(d: &JointDistribution, k: usize, v: u32) {
        let lnv = (v as f64).ln();
        let h = d.entropy_vector();
        for a in h.ground().subsets() {
            let expected = lnv * a.len().min(k) as f64;
            assert!(
                (h.get(a) - expected).abs() < 1e-9,
                "A = {a}: {} vs {expected}",
                h.get(a)
            );
        }
    }

    #[test]
    fn parity_construction() {
        let d = uniform_matroid_dist(2, 3, 2).unwrap();
        assert_eq!(d.support_size(), 4);
        assert!(d.pmf().keys().all(|x| x[2] == (x[0] + x[1]) % 2));
        assert_realizes(&d, 2, 2);
    }

    #[test]
    fn copies_construction() {
        let d = uniform_matroid_dist(1, 4, 3).unwrap();
        assert_eq!(d.support_size(), 3);
        assert_realizes(&d, 1, 3);
    }

    #[test]
    fn reed_solomon_constructions() {
        for (k, n, v) in [
            (2, 4, 3),
            (2, 4, 4),
            (2, 5, 4),
            (3, 5, 4),
            (2, 6, 5),
            (3, 6, 7),
        ] {
            let d = uniform_matroid_dist(k, n, v).unwrap();
            assert_eq!(d.support_size() as u64, (v as u64).pow(k as u32));
            assert_realizes(&d, k, v);
        }
    }

    #[test]
    fn composite_alphabets_use_products() {
        let d = uniform_matroid_dist(2, 4, 12).unwrap();
        assert_realizes(&d, 2, 12);
    }

    #[test]
    fn no_construction_cases() {
        assert!(matches!(
            uniform_matroid_dist(2, 4, 2),
            Err(Error::NoConstruction(_))
        ));
        assert!(matches!(
            uniform_matroid_dist(2, 4, 10),
            Err(Error::NoConstruction(_))
        ));
        assert!(uniform_matroid_dist(0, 3, 2).is_err());
        assert!(uniform_matroid_dist(4, 3, 2).is_err());
        assert!(uniform_matroid_dist(1, 3, 1).is_err());
    }

    #[test]
    fn orthogonal_array_search() {
        assert_eq!(
            search_orthogonal_array(4, 2, DEFAULT_SEARCH_BUDGET),
            SearchOutcome::Exhausted
        );
        assert_eq!(
            search_orthogonal_array(5, 3, DEFAULT_SEARCH_BUDGET),
            SearchOutcome::Exhausted
        );
        let SearchOutcome::Found(code) = search_orthogonal_array(4, 3, DEFAULT_SEARCH_BUDGET)
        else {
            panic!("two orthogonal Latin squares of order 3 exist");
        };
        let d = JointDistribution::uniform_on(vec![3; 4], code).unwrap();
        assert_realizes(&d, 2, 3);
        let SearchOutcome::Found(code) = search_orthogonal_array(5, 4, DEFAULT_SEARCH_BUDGET)
        else {
            panic!("three MOLS of order 4 exist");
        };
        assert_realizes(
            &JointDistribution::uniform_on(vec![4; 5], code).unwrap(),
            2,
            4,
        );
        assert_eq!(
            search_orthogonal_array(4, 6, 10_000),
            SearchOutcome::BudgetExceeded
        );
    }

    #[test]
    fn realize_with_loops_and_copies() {
        let m = Matroid::uniform(UniformSpec::full(2, 3).unwrap())
            .unwrap()
            .with_parallel(3)
            .unwrap()
            .with_loop()
            .unwrap();
        let d = realize_matroid(&m, 3).unwrap();
        let h = d.entropy_vector();
        let ln3 = 3f64.ln();
        for a in m.ground().subsets() {
            assert!((h.get(a) - ln3 * m.rank(a) as f64).abs() < 1e-9);
        }
        let sum = Matroid::uniform(UniformSpec::full(2, 3).unwrap())
            .unwrap()
            .direct_sum(&Matroid::uniform(UniformSpec::full(1, 1).unwrap()).unwrap())
            .unwrap();
        assert!(matches!(
            realize_matroid(&sum, 2),
            Err(Error::NoConstruction(_))
        ));
    }

    #[test]
    fn two_level_hits_target() {
        for (w, target) in [(2u32, 0.4), (3, 0.9), (4, 1.2), (2, 0.01)] {
            let masses = two_level_masses(w, target).unwrap();
            let h: f64 = masses
                .iter()
                .map(|p| {
                    let p: f64 = num_traits::ToPrimitive::to_f64(p).unwrap();
                    -p * p.ln()
                })
                .sum();
            assert!((h - target).abs() < 1e-11, "w = {w}: {h} vs {target}");
            let total: BigRational = masses.iter().cloned().sum();
            assert!(total.is_one());
        }
        assert!(two_level_masses(2, 0.8).is_err());
        assert_eq!(two_level_masses(3, 3f64.ln()).unwrap().len(), 3);
    }

    #[test]
    fn rank_one_variable() {
        let alpha = Subset::from_elements([1, 3]).unwrap();
        let d = rank_one_dist(alpha, 3, 1.5).unwrap();
        let h = d.entropy_vector();
        for a in h.ground().subsets() {
            let expected = if a.intersection(alpha).is_empty() {
                0.0
            } else {
                1.5
            };
            assert!((h.get(a) - expected).abs() < 1e-11);
        }
        assert!(rank_one_dist(alpha, 3, 0.0).is_err());
    }
}
