//! Balanced presentations, their occurrence sets and abelianization.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::snf;
use crate::word::{Letter, Sign, Word};

/// `d` generators and exactly `d` relators over them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PresentationRepr", into = "PresentationRepr")]
pub struct BalancedPresentation {
    relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct PresentationRepr {
    d: usize,
    relators: Vec<Word>,
}

impl TryFrom<PresentationRepr> for BalancedPresentation {
    type Error = FormatError;

    fn try_from(r: PresentationRepr) -> Result<Self, FormatError> {
        if r.relators.len() != r.d {
            return Err(FormatError::Presentation(format!(
                "d = {} but {} relators given",
                r.d,
                r.relators.len()
            )));
        }
        BalancedPresentation::new(r.relators)
    }
}

impl From<BalancedPresentation> for PresentationRepr {
    fn from(p: BalancedPresentation) -> Self {
        PresentationRepr { d: p.d(), relators: p.relators }
    }
}

impl BalancedPresentation {
    /// The generator count is the relator count; every letter must name one
    /// of those generators.
    pub fn new(relators: Vec<Word>) -> Result<BalancedPresentation, FormatError> {
        let d = relators.len();
        for (j, r) in relators.iter().enumerate() {
            if r.max_generator() > d {
                return Err(FormatError::Presentation(format!(
                    "relator {} uses generator {} but d = {}",
                    j + 1,
                    r.max_generator(),
                    d
                )));
            }
        }
        Ok(BalancedPresentation { relators })
    }

    pub fn parse(relators: &[&str]) -> Result<BalancedPresentation, FormatError> {
        let words = relators
            .iter()
            .map(|s| Word::parse(s).map_err(|e| FormatError::Presentation(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        BalancedPresentation::new(words)
    }

    pub fn d(&self) -> usize {
        self.relators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Relator `j` (1-based).
    pub fn relator(&self, j: usize) -> &Word {
        &self.relators[j - 1]
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub(crate) fn from_words_unchecked(relators: Vec<Word>) -> BalancedPresentation {
        BalancedPresentation { relators }
    }

    /// Every relator is a single letter and those letters use each generator
    /// once: the (stabilized) trivial presentation up to relabeling.
    pub fn is_trivial_up_to_relabeling(&self) -> bool {
        let mut seen = vec![false; self.d()];
        self.relators.iter().all(|r| {
            r.len() == 1 && !std::mem::replace(&mut seen[r.at(1).generator - 1], true)
        })
    }
}

impl fmt::Display for BalancedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self
            .relators
            .iter()
            .map(|w| w.format_alpha().unwrap_or_else(|| w.format()))
            .map(|s| if s.is_empty() { "1".to_string() } else { s })
            .collect();
        write!(f, "<{} | {}>", self.d(), words.join(", "))
    }
}

/// `positive[i-1][j-1]` is the ascending set of positions `k` where the
/// `k`-th letter of relator `j` is generator `i`; `negative` likewise for
/// its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceSets {
    pub positive: Vec<Vec<Vec<usize>>>,
    pub negative: Vec<Vec<Vec<usize>>>,
}

impl OccurrenceSets {
    pub fn empty(d: usize) -> OccurrenceSets {
        OccurrenceSets { positive: vec![vec![Vec::new(); d]; d], negative: vec![vec![Vec::new(); d]; d] }
    }

    pub fn d(&self) -> usize {
        self.positive.len()
    }

    /// Positions of generator `i` with `sign` in relator `j` (1-based indices).
    pub fn get(&self, sign: Sign, i: usize, j: usize) -> &[usize] {
        match sign {
            Sign::Pos => &self.positive[i - 1][j - 1],
            Sign::Neg => &self.negative[i - 1][j - 1],
        }
    }

    pub fn get_mut(&mut self, sign: Sign, i: usize, j: usize) -> &mut Vec<usize> {
        match sign {
            Sign::Pos => &mut self.positive[i - 1][j - 1],
            Sign::Neg => &mut self.negative[i - 1][j - 1],
        }
    }

    pub fn sort(&mut self) {
        for table in [&mut self.positive, &mut self.negative] {
            for row in table.iter_mut() {
                for set in row.iter_mut() {
                    set.sort_unstable();
                }
            }
        }
    }
}

pub fn occurrence_sets(p: &BalancedPresentation) -> OccurrenceSets {
    let mut sets = OccurrenceSets::empty(p.d());
    for (j, r) in p.relators().iter().enumerate() {
        for (k, &Letter { generator, sign }) in r.letters().iter().enumerate() {
            sets.get_mut(sign, generator, j + 1).push(k + 1);
        }
    }
    sets
}

/// Entry `(i, j)` is the exponent sum of generator `i` in relator `j`.
pub fn abelianization_matrix(p: &BalancedPresentation) -> Vec<Vec<i64>> {
    let d = p.d();
    let mut m = vec![vec![0i64; d]; d];
    for (j, r) in p.relators().iter().enumerate() {
        for (i, s) in r.exponent_sums(d).into_iter().enumerate() {
            m[i][j] = s;
        }
    }
    m
}

/// Invariant factors of the abelianization matrix.
pub fn abelian_invariants(p: &BalancedPresentation) -> Vec<i64> {
    snf::smith_normal_form(&abelianization_matrix(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pres(r: &[&str]) -> BalancedPresentation {
        BalancedPresentation::parse(r).unwrap()
    }

    // independent scan: test each position against each (generator, sign)
    fn scan(p: &BalancedPresentation, i: usize, j: usize, sign: Sign) -> Vec<usize> {
        let r = p.relator(j);
        (1..=r.len()).filter(|&k| r.at(k) == Letter::new(i, sign)).collect()
    }

    #[test]
    fn occurrence_examples() {
        let s = occurrence_sets(&pres(&["a"]));
        assert_eq!(s.get(Sign::Pos, 1, 1), &[1]);
        assert!(s.get(Sign::Neg, 1, 1).is_empty());

        let s = occurrence_sets(&pres(&["aa"]));
        assert_eq!(s.get(Sign::Pos, 1, 1), &[1, 2]);
        assert!(s.get(Sign::Neg, 1, 1).is_empty());

        let p = pres(&["aB", "b"]);
        let s = occurrence_sets(&p);
        assert!(s.get(Sign::Pos, 2, 1).is_empty());
        assert_eq!(s.get(Sign::Neg, 2, 1), &[2]);
        assert_eq!(s.get(Sign::Pos, 2, 2), &[1]);
        for i in 1..=2 {
            for j in 1..=2 {
                for sign in [Sign::Pos, Sign::Neg] {
                    assert_eq!(s.get(sign, i, j), scan(&p, i, j, sign).as_slice());
                }
            }
        }
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(abelianization_matrix(&pres(&["a"])), vec![vec![1]]);
        assert_eq!(abelianization_matrix(&pres(&["aa"])), vec![vec![2]]);
        assert_eq!(
            abelianization_matrix(&pres(&["abAB", "b"])),
            vec![vec![0, 0], vec![0, 1]]
        );
        assert_eq!(abelian_invariants(&pres(&["abAB", "b"])), vec![1, 0]);
    }

    #[test]
    fn rejects_out_of_range_generators() {
        assert!(BalancedPresentation::parse(&["b"]).is_err());
        let json = r#"{"d": 2, "relators": [[1]]}"#;
        assert!(serde_json::from_str::<BalancedPresentation>(json).is_err());
    }

    #[test]
    fn json_accepts_alphabetic_relators() {
        let p: BalancedPresentation =
            serde_json::from_str(r#"{"d": 2, "relators": ["aB", [2]]}"#).unwrap();
        assert_eq!(p, pres(&["aB", "b"]));
        let back = serde_json::to_string(&p).unwrap();
        assert_eq!(back, r#"{"d":2,"relators":[[1,-2],[2]]}"#);
    }

    #[test]
    fn trivial_up_to_relabeling() {
        assert!(pres(&["a"]).is_trivial_up_to_relabeling());
        assert!(pres(&["b", "A"]).is_trivial_up_to_relabeling());
        assert!(!pres(&["a", "a"]).is_trivial_up_to_relabeling());
        assert!(!pres(&["aa"]).is_trivial_up_to_relabeling());
    }

    fn arb_presentation() -> impl Strategy<Value = BalancedPresentation> {
        (1usize..=4).prop_flat_map(|d| {
            proptest::collection::vec(
                proptest::collection::vec((1..=d, any::<bool>()), 0..8),
                d,
            )
            .prop_map(|rels| {
                let words = rels
                    .into_iter()
                    .map(|r| Word(r.into_iter().map(|(g, s)| Letter::new(g, if s { Sign::Pos } else { Sign::Neg })).collect()))
                    .collect();
                BalancedPresentation::new(words).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn occurrence_sets_partition_positions(p in arb_presentation()) {
            let s = occurrence_sets(&p);
            let m = abelianization_matrix(&p);
            for j in 1..=p.d() {
                let mut all: Vec<usize> = (1..=p.d())
                    .flat_map(|i| s.get(Sign::Pos, i, j).iter().chain(s.get(Sign::Neg, i, j)).copied())
                    .collect();
                all.sort_unstable();
                prop_assert_eq!(all, (1..=p.relator(j).len()).collect::<Vec<_>>());
                for i in 1..=p.d() {
                    prop_assert_eq!(
                        m[i - 1][j - 1],
                        s.get(Sign::Pos, i, j).len() as i64 - s.get(Sign::Neg, i, j).len() as i64
                    );
                    let expected = scan(&p, i, j, Sign::Pos);
                    prop_assert_eq!(s.get(Sign::Pos, i, j), expected.as_slice());
                }
            }
        }
    }
}
