//! The characteristic set `χ_M`: the alphabet sizes `v` for which
//! `ln v · r_M` is entropic.

use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::Mutex;

use serde::Serialize;

use crate::entropy::{has_uniform_construction, search_orthogonal_array, SearchOutcome};
use crate::matroid::Matroid;

/// Alphabet sizes examined when a decision depends on all of `χ_M`.
pub const PROBE_RANGE: RangeInclusive<u32> = 2..=16;

/// Budget for the exhaustive orthogonal-array search behind `NonMember`
/// answers.
const NON_MEMBER_SEARCH_BUDGET: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chi {
    Member,
    NonMember,
    Unknown,
}

impl Chi {
    pub fn as_str(self) -> &'static str {
        match self {
            Chi::Member => "member",
            Chi::NonMember => "non-member",
            Chi::Unknown => "unknown",
        }
    }
}

/// A rule answering `Some(_)` for the matroids and alphabet sizes it knows
/// about.
pub type ChiRule = Box<dyn Fn(&Matroid, u32) -> Option<Chi> + Send + Sync>;

/// Membership oracle for `χ_M`.
///
/// Queries are answered by, in order: user rules, the built-in table keyed
/// by the simple uniform type of `M`, an explicit construction (which gives
/// `Member`), and for rank-two uniform types an exhaustive search for the
/// corresponding orthogonal array (whose failure gives `NonMember`).
/// Anything else is `Unknown`. Answers are cached per oracle.
pub struct ChiOracle {
    rules: Vec<ChiRule>,
    cache: Mutex<HashMap<(Vec<u32>, u32), Chi>>,
}

impl Default for ChiOracle {
    fn default() -> Self {
        ChiOracle::new()
    }
}

impl std::fmt::Debug for ChiOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChiOracle")
            .field("rules", &self.rules.len())
            .finish()
    }
}

impl ChiOracle {
    pub fn new() -> Self {
        ChiOracle {
            rules: Vec::new(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Adds a rule consulted before the built-in ones.
    pub fn with_rule<F>(mut self, rule: F) -> Self
    where
        F: Fn(&Matroid, u32) -> Option<Chi> + Send + Sync + 'static,
    {
        self.rules.push(Box::new(rule));
        self.cache.get_mut().expect("not poisoned").clear();
        self
    }

    pub fn query(&self, m: &Matroid, v: u32) -> Chi {
        let key = (m.ranks().to_vec(), v);
        if let Some(&c) = self.cache.lock().expect("not poisoned").get(&key) {
            return c;
        }
        let answer = self.compute(m, v);
        self.cache.lock().expect("not poisoned").insert(key, answer);
        answer
    }

    fn compute(&self, m: &Matroid, v: u32) -> Chi {
        if let Some(c) = self.rules.iter().find_map(|r| r(m, v)) {
            return c;
        }
        if v < 2 {
            return Chi::NonMember;
        }
        if m.full_rank() <= 1 {
            return Chi::Member;
        }
        let Some((k, count)) = m.simple_uniform_type() else {
            return Chi::Unknown;
        };
        if let Some(c) = table(k, count, v) {
            return c;
        }
        if has_uniform_construction(k, count, v) {
            return Chi::Member;
        }
        if k == 2 {
            if let SearchOutcome::Exhausted =
                search_orthogonal_array(count, v, NON_MEMBER_SEARCH_BUDGET)
            {
                return Chi::NonMember;
            }
        }
        Chi::Unknown
    }

    pub fn view<'a>(&'a self, matroid: &'a Matroid) -> ChiView<'a> {
        ChiView {
            oracle: self,
            matroid,
        }
    }
}

/// Known answers for `U_{k,m}`.
fn table(k: usize, m: usize, v: u32) -> Option<Chi> {
    match (k, m) {
        (1, _) => Some(Chi::Member),
        (k, m) if k + 1 >= m => Some(Chi::Member),
        (2, 4) => Some(if v >= 3 && v != 6 {
            Chi::Member
        } else {
            Chi::NonMember
        }),
        // At most v - 1 mutually orthogonal Latin squares of order v.
        (2, m) if m > v as usize + 1 => Some(Chi::NonMember),
        _ => None,
    }
}

/// `χ_M` for one fixed matroid.
#[derive(Clone, Copy, Debug)]
pub struct ChiView<'a> {
    oracle: &'a ChiOracle,
    matroid: &'a Matroid,
}

impl<'a> ChiView<'a> {
    pub fn matroid(&self) -> &'a Matroid {
        self.matroid
    }

    pub fn member(&self, v: u32) -> Chi {
        self.oracle.query(self.matroid, v)
    }

    pub fn rank_one(&self) -> bool {
        self.matroid.full_rank() == 1
    }

    /// Answers over [`PROBE_RANGE`].
    pub fn probe(&self) -> Vec<(u32, Chi)> {
        PROBE_RANGE.map(|v| (v, self.member(v))).collect()
    }

    /// Smallest member in [`PROBE_RANGE`].
    pub fn smallest_member(&self) -> Option<u32> {
        PROBE_RANGE.clone().find(|&v| self.member(v) == Chi::Member)
    }
}
