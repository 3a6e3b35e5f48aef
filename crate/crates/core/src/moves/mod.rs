//! The five AC-moves acting on dual pairs, each together with its dual.
//!
//! `apply_move` works on a tagged copy of the pair: every letter of `P` and
//! its partner letter in `P*` carry one shared id. The moves rewrite the two
//! sides as plain letter sequences and the new correspondence family is read
//! back from the ids. [`lemma`] derives the same result by index arithmetic.

pub mod lemma;
pub mod walk;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::dual_pair::{CorrespondenceFamily, DualPair, MapKind};
use crate::error::{MoveError, ParseError};
use crate::presentation::BalancedPresentation;
use crate::word::{Letter, Sign, Word};

pub use walk::random_walk;

/// One AC-move. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AcMove {
    /// `b_i -> b_i b_j`, `i != j`.
    Move1 { i: usize, j: usize },
    /// `b_i -> b_i^-1`.
    Move2 { i: usize },
    /// `b_i -> b_i g g^-1` with `g = a_j^sign`.
    Move3 { i: usize, j: usize, sign: Sign },
    /// New generator `a_{d+1}` with relator `a_{d+1}`.
    Move4Add,
    /// Drop generator `d` when it is an isolated stabilization.
    Move4Remove,
    /// `b_i' g g^-1 -> b_i'` with `g = a_j^sign`.
    Move5 { i: usize, j: usize, sign: Sign },
}

impl AcMove {
    /// Every parameter choice at rank `d`, in a fixed order.
    pub fn all(d: usize) -> Vec<AcMove> {
        let mut out = Vec::new();
        for i in 1..=d {
            for j in 1..=d {
                if i != j {
                    out.push(AcMove::Move1 { i, j });
                }
            }
        }
        for i in 1..=d {
            out.push(AcMove::Move2 { i });
        }
        for i in 1..=d {
            for j in 1..=d {
                for sign in [Sign::Pos, Sign::Neg] {
                    out.push(AcMove::Move3 { i, j, sign });
                }
            }
        }
        out.push(AcMove::Move4Add);
        out.push(AcMove::Move4Remove);
        for i in 1..=d {
            for j in 1..=d {
                for sign in [Sign::Pos, Sign::Neg] {
                    out.push(AcMove::Move5 { i, j, sign });
                }
            }
        }
        out
    }

    /// The move number 1..=5.
    pub fn kind(&self) -> u8 {
        match self {
            AcMove::Move1 { .. } => 1,
            AcMove::Move2 { .. } => 2,
            AcMove::Move3 { .. } => 3,
            AcMove::Move4Add | AcMove::Move4Remove => 4,
            AcMove::Move5 { .. } => 5,
        }
    }
}

impl fmt::Display for AcMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AcMove::Move1 { i, j } => write!(f, "m1 {i} {j}"),
            AcMove::Move2 { i } => write!(f, "m2 {i}"),
            AcMove::Move3 { i, j, sign } => write!(f, "m3 {i} {j} {}", sign.symbol()),
            AcMove::Move4Add => f.write_str("m4+"),
            AcMove::Move4Remove => f.write_str("m4-"),
            AcMove::Move5 { i, j, sign } => write!(f, "m5 {i} {j} {}", sign.symbol()),
        }
    }
}

impl FromStr for AcMove {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<AcMove, ParseError> {
        let bad = || ParseError::Move(s.to_string());
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let index = |t: &str| t.parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(bad);
        let sign = |t: &str| match t {
            "+" => Ok(Sign::Pos),
            "-" => Ok(Sign::Neg),
            _ => Err(bad()),
        };
        match tokens.as_slice() {
            ["m1", i, j] => Ok(AcMove::Move1 { i: index(i)?, j: index(j)? }),
            ["m2", i] => Ok(AcMove::Move2 { i: index(i)? }),
            ["m3", i, j, s] => Ok(AcMove::Move3 { i: index(i)?, j: index(j)?, sign: sign(s)? }),
            ["m4+"] | ["m4", "+"] => Ok(AcMove::Move4Add),
            ["m4-"] | ["m4", "-"] => Ok(AcMove::Move4Remove),
            ["m5", i, j, s] => Ok(AcMove::Move5 { i: index(i)?, j: index(j)?, sign: sign(s)? }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for AcMove {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AcMove {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<AcMove, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn refuse(mv: AcMove, reason: impl Into<String>) -> MoveError {
    MoveError::Precondition { mv, reason: reason.into() }
}

/// Positions (in `a*_j`) of the partners of the last two letters of `b_i`,
/// provided `b_i` ends in `a_j^s a_j^-s`.
fn move5_sites(pair: &DualPair, i: usize, j: usize, sign: Sign) -> Result<(usize, usize), String> {
    let b = pair.p().relator(i);
    let n = b.len();
    if n < 2 || b.at(n - 1) != Letter::new(j, sign) || b.at(n) != Letter::new(j, sign.flip()) {
        return Err(format!("b_{i} does not end in the pair a_{j}^{0}1 a_{j}^{1}1", sign.symbol(), sign.flip().symbol()));
    }
    let (_, l1) = pair.dual_position(i, n - 1);
    let (_, l2) = pair.dual_position(i, n);
    Ok((l1, l2))
}

fn cyclically_adjacent(a: usize, b: usize, len: usize) -> bool {
    let (lo, hi) = (a.min(b), a.max(b));
    hi == lo + 1 || (lo == 1 && hi == len && len >= 2)
}

/// `Ok` when the move may be applied to `pair`.
pub fn check_preconditions(pair: &DualPair, mv: AcMove) -> Result<(), MoveError> {
    let d = pair.d();
    let in_range = |x: usize, name: &str| {
        if (1..=d).contains(&x) {
            Ok(())
        } else {
            Err(refuse(mv, format!("{name}={x} out of range 1..={d}")))
        }
    };
    match mv {
        AcMove::Move1 { i, j } => {
            if i == j {
                return Err(refuse(mv, "i=j forbidden"));
            }
            in_range(i, "i")?;
            in_range(j, "j")
        }
        AcMove::Move2 { i } => in_range(i, "i"),
        AcMove::Move3 { i, j, .. } => {
            in_range(i, "i")?;
            in_range(j, "j")
        }
        AcMove::Move4Add => Ok(()),
        AcMove::Move4Remove => {
            if d < 2 {
                return Err(refuse(mv, "cannot remove the only generator"));
            }
            if pair.p().relator(d) != &Word(vec![Letter::pos(d)]) {
                return Err(refuse(mv, format!("b_{d} is not a_{d}")));
            }
            if pair.pstar().relator(d) != &Word(vec![Letter::neg(d)]) {
                return Err(refuse(mv, format!("a*_{d} is not b*_{d}^-1")));
            }
            Ok(())
        }
        AcMove::Move5 { i, j, sign } => {
            in_range(i, "i")?;
            in_range(j, "j")?;
            let (l1, l2) = move5_sites(pair, i, j, sign).map_err(|r| refuse(mv, r))?;
            if !cyclically_adjacent(l1, l2, pair.pstar().relator(j).len()) {
                return Err(refuse(mv, "dual letters not consecutive"));
            }
            Ok(())
        }
    }
}

type Tagged = Vec<Vec<(Letter, usize)>>;

struct TaggedPair {
    p: Tagged,
    pstar: Tagged,
    next_id: usize,
}

impl TaggedPair {
    fn new(pair: &DualPair) -> TaggedPair {
        let mut ids: Vec<Vec<usize>> = Vec::new();
        let mut next_id = 0;
        let p: Tagged = pair
            .p()
            .relators()
            .iter()
            .map(|r| {
                let row: Vec<usize> = (next_id..next_id + r.len()).collect();
                next_id += r.len();
                ids.push(row.clone());
                r.letters().iter().copied().zip(row).collect()
            })
            .collect();
        let links = pair.links();
        let pstar = pair
            .pstar()
            .relators()
            .iter()
            .zip(&links.to_primal)
            .map(|(r, partners)| {
                r.letters()
                    .iter()
                    .zip(partners)
                    .map(|(&letter, &(j, k))| (letter, ids[j - 1][k - 1]))
                    .collect()
            })
            .collect();
        TaggedPair { p, pstar, next_id }
    }

    fn fresh(&mut self) -> usize {
        self.next_id += 1;
        self.next_id - 1
    }

    fn into_pair(self) -> DualPair {
        let d = self.p.len();
        let words = |t: &Tagged| t.iter().map(|r| Word(r.iter().map(|&(l, _)| l).collect())).collect();
        let p = BalancedPresentation::from_words_unchecked(words(&self.p));
        let pstar = BalancedPresentation::from_words_unchecked(words(&self.pstar));
        let mut primal = vec![(0usize, 0usize, Letter::pos(1)); self.next_id];
        for (j, r) in self.p.iter().enumerate() {
            for (k, &(letter, id)) in r.iter().enumerate() {
                primal[id] = (j + 1, k + 1, letter);
            }
        }
        let mut family = CorrespondenceFamily::empty(d);
        for (i, r) in self.pstar.iter().enumerate() {
            for (l, &(_, id)) in r.iter().enumerate() {
                let (j, k, letter) = primal[id];
                family.map_mut(MapKind::for_sign(letter.sign), i + 1, j).insert(k, l + 1);
            }
        }
        DualPair::new_unchecked(p, pstar, family)
    }
}

/// Applies `mv` together with its dual move.
pub fn apply_move(pair: &DualPair, mv: AcMove) -> Result<DualPair, MoveError> {
    check_preconditions(pair, mv)?;
    let mut t = TaggedPair::new(pair);
    match mv {
        AcMove::Move1 { i, j } => {
            let copies = t.p[j - 1].clone();
            let mut twin = std::collections::HashMap::new();
            for (letter, id) in copies {
                let new = t.fresh();
                twin.insert(id, new);
                t.p[i - 1].push((letter, new));
            }
            for rel in t.pstar.iter_mut() {
                let mut out = Vec::with_capacity(rel.len());
                for &(letter, id) in rel.iter() {
                    if letter.generator != j {
                        out.push((letter, id));
                        continue;
                    }
                    let copy = (Letter::new(i, letter.sign), twin[&id]);
                    match letter.sign {
                        Sign::Pos => out.extend([(letter, id), copy]),
                        Sign::Neg => out.extend([copy, (letter, id)]),
                    }
                }
                *rel = out;
            }
        }
        AcMove::Move2 { i } => {
            let rel = &mut t.p[i - 1];
            rel.reverse();
            for entry in rel.iter_mut() {
                entry.0 = entry.0.inverse();
            }
            for rel in t.pstar.iter_mut() {
                for entry in rel.iter_mut().filter(|e| e.0.generator == i) {
                    entry.0 = entry.0.inverse();
                }
            }
        }
        AcMove::Move3 { i, j, sign } => {
            let (x, y) = (t.fresh(), t.fresh());
            t.p[i - 1].extend([(Letter::new(j, sign), x), (Letter::new(j, sign.flip()), y)]);
            // b*_i partners the inverse letter of the inserted pair
            let (pos_id, neg_id) = match sign {
                Sign::Pos => (y, x),
                Sign::Neg => (x, y),
            };
            t.pstar[j - 1].extend([(Letter::pos(i), pos_id), (Letter::neg(i), neg_id)]);
        }
        AcMove::Move4Add => {
            let d = t.p.len() + 1;
            let x = t.fresh();
            t.p.push(vec![(Letter::pos(d), x)]);
            t.pstar.push(vec![(Letter::neg(d), x)]);
        }
        AcMove::Move4Remove => {
            t.p.pop();
            t.pstar.pop();
        }
        AcMove::Move5 { i, j, .. } => {
            let rel = &mut t.p[i - 1];
            let (_, y) = rel.pop().expect("checked");
            let (_, x) = rel.pop().expect("checked");
            t.pstar[j - 1].retain(|&(_, id)| id != x && id != y);
        }
    }
    Ok(t.into_pair())
}

/// The single move undoing `mv` on `pair_before`.
///
/// Move3 and Move5 with equal parameters undo each other; Move5 followed by
/// Move3 restores the pair only when the removed dual letters were the last
/// two of `a*_j`.
pub fn inverse_move(mv: AcMove, pair_before: &DualPair) -> Result<AcMove, MoveError> {
    check_preconditions(pair_before, mv)?;
    match mv {
        AcMove::Move1 { .. } => Err(MoveError::NoSingleMoveInverse(mv)),
        AcMove::Move2 { i } => Ok(AcMove::Move2 { i }),
        AcMove::Move3 { i, j, sign } => Ok(AcMove::Move5 { i, j, sign }),
        AcMove::Move5 { i, j, sign } => Ok(AcMove::Move3 { i, j, sign }),
        AcMove::Move4Add => Ok(AcMove::Move4Remove),
        AcMove::Move4Remove => Ok(AcMove::Move4Add),
    }
}

/// A move log with the fingerprint of every intermediate pair
/// (`hashes.len() == moves.len() + 1`). Serialized as the list of literals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveSequence {
    pub moves: Vec<AcMove>,
    pub hashes: Vec<String>,
}

impl MoveSequence {
    pub fn start(pair: &DualPair) -> MoveSequence {
        MoveSequence { moves: Vec::new(), hashes: vec![snapshot_hash(pair)] }
    }

    pub fn push(&mut self, mv: AcMove, after: &DualPair) {
        self.moves.push(mv);
        self.hashes.push(snapshot_hash(after));
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Applies every move in order, recording hashes.
    pub fn replay(moves: &[AcMove], pair: &DualPair) -> Result<(MoveSequence, DualPair), MoveError> {
        let mut log = MoveSequence::start(pair);
        let mut cur = pair.clone();
        for &mv in moves {
            cur = apply_move(&cur, mv)?;
            log.push(mv, &cur);
        }
        Ok((log, cur))
    }
}

impl Serialize for MoveSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.moves.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MoveSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<MoveSequence, D::Error> {
        let moves = Vec::<AcMove>::deserialize(deserializer)?;
        Ok(MoveSequence { moves, hashes: Vec::new() })
    }
}

/// Hex SHA-256 of the pair's canonical JSON.
pub fn snapshot_hash(pair: &DualPair) -> String {
    hex::encode(Sha256::digest(pair.to_json().as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_pair::validate_dual_pair;
    use crate::presentation::abelian_invariants;

    fn valid(pair: &DualPair) -> bool {
        validate_dual_pair(pair.p(), pair.pstar(), pair.family()).is_ok()
    }

    fn pres(r: &[&str]) -> BalancedPresentation {
        BalancedPresentation::parse(r).unwrap()
    }

    #[test]
    fn literals_roundtrip() {
        for mv in AcMove::all(3) {
            assert_eq!(mv.to_string().parse::<AcMove>().unwrap(), mv);
        }
        assert!("m1 0 1".parse::<AcMove>().is_err());
        assert!("m3 1 2 *".parse::<AcMove>().is_err());
        assert!("m6".parse::<AcMove>().is_err());
        let json = serde_json::to_string(&vec![AcMove::Move4Add, AcMove::Move3 { i: 1, j: 1, sign: Sign::Neg }]).unwrap();
        assert_eq!(json, r#"["m4+","m3 1 1 -"]"#);
    }

    #[test]
    fn move3_on_trivial() {
        let out = apply_move(&DualPair::trivial(), AcMove::Move3 { i: 1, j: 1, sign: Sign::Pos }).unwrap();
        assert_eq!(out.p(), &pres(&["aaA"]));
        assert_eq!(out.pstar(), &pres(&["AaA"]));
        assert!(valid(&out));
        assert_eq!(out.family().map(MapKind::F, 1, 1).get(&2), Some(&3));
        assert_eq!(out.family().map(MapKind::FBar, 1, 1).get(&3), Some(&2));
    }

    #[test]
    fn move2_on_trivial() {
        let out = apply_move(&DualPair::trivial(), AcMove::Move2 { i: 1 }).unwrap();
        assert_eq!(out.p(), &pres(&["A"]));
        assert_eq!(out.pstar(), &pres(&["a"]));
        assert!(valid(&out));
    }

    #[test]
    fn move4_add_and_remove() {
        let out = apply_move(&DualPair::trivial(), AcMove::Move4Add).unwrap();
        assert_eq!(out.p(), &pres(&["a", "b"]));
        assert_eq!(out.pstar(), &pres(&["A", "B"]));
        assert!(valid(&out));
        let back = apply_move(&out, AcMove::Move4Remove).unwrap();
        assert_eq!(back, DualPair::trivial());
        assert!(apply_move(&DualPair::trivial(), AcMove::Move4Remove).is_err());
    }

    #[test]
    fn move1_rewrites_every_dual_occurrence() {
        let s = apply_move(&DualPair::trivial(), AcMove::Move4Add).unwrap();
        let out = apply_move(&s, AcMove::Move1 { i: 1, j: 2 }).unwrap();
        assert_eq!(out.p(), &pres(&["ab", "b"]));
        // a*_2 = b*_2^-1 becomes b*_1^-1 b*_2^-1
        assert_eq!(out.pstar(), &pres(&["A", "AB"]));
        assert!(valid(&out));
        assert_eq!(
            apply_move(&s, AcMove::Move1 { i: 1, j: 1 }),
            Err(MoveError::Precondition { mv: AcMove::Move1 { i: 1, j: 1 }, reason: "i=j forbidden".into() })
        );
    }

    #[test]
    fn move5_requires_adjacent_dual_letters() {
        let s = apply_move(&DualPair::trivial(), AcMove::Move4Add).unwrap();
        let m3 = AcMove::Move3 { i: 1, j: 2, sign: Sign::Pos };
        let m5 = AcMove::Move5 { i: 1, j: 2, sign: Sign::Pos };
        let three = apply_move(&s, m3).unwrap();
        assert_eq!(three.p(), &pres(&["abB", "b"]));
        assert!(check_preconditions(&three, m5).is_ok());
        assert_eq!(apply_move(&three, m5).unwrap(), s);

        // b_1 = a b B b B, a*_2 = B a A a A; swapping the partners of b_1[3]
        // and b_1[5] separates the dual letters of the final pair
        let twice = apply_move(&three, m3).unwrap();
        let scrambled = twice.swap_images(MapKind::FBar, 2, 1, 3, 5).unwrap();
        assert!(valid(&scrambled));
        let err = check_preconditions(&scrambled, m5).unwrap_err();
        assert_eq!(err, MoveError::Precondition { mv: m5, reason: "dual letters not consecutive".into() });
    }

    #[test]
    fn inverse_moves_roundtrip() {
        let z2 = DualPair::z2(false);
        for mv in [AcMove::Move2 { i: 1 }, AcMove::Move3 { i: 1, j: 1, sign: Sign::Neg }, AcMove::Move4Add] {
            let out = apply_move(&z2, mv).unwrap();
            let inv = inverse_move(mv, &z2).unwrap();
            assert_eq!(apply_move(&out, inv).unwrap(), z2, "{mv}");
        }
        let s = apply_move(&z2, AcMove::Move4Add).unwrap();
        assert_eq!(
            inverse_move(AcMove::Move1 { i: 1, j: 2 }, &s),
            Err(MoveError::NoSingleMoveInverse(AcMove::Move1 { i: 1, j: 2 }))
        );
    }

    #[test]
    fn moves_keep_validity_and_invariants() {
        let mut pair = DualPair::z2(true);
        let script = [
            "m4+", "m1 1 2", "m3 2 1 -", "m2 1", "m5 2 1 -", "m1 2 1", "m4+", "m1 3 1", "m3 1 3 +",
        ];
        for lit in script {
            let mv: AcMove = lit.parse().unwrap();
            let next = apply_move(&pair, mv).unwrap_or_else(|e| panic!("{e}"));
            assert!(valid(&next), "{lit}");
            let before: Vec<i64> = abelian_invariants(pair.p()).into_iter().filter(|&x| x != 1).collect();
            let after: Vec<i64> = abelian_invariants(next.p()).into_iter().filter(|&x| x != 1).collect();
            assert_eq!(before, after, "{lit}");
            pair = next;
        }
    }

    #[test]
    fn sequence_serializes_as_literals() {
        let (log, _) = MoveSequence::replay(&[AcMove::Move4Add, AcMove::Move1 { i: 2, j: 1 }], &DualPair::trivial()).unwrap();
        assert_eq!(log.hashes.len(), 3);
        assert_eq!(log.hashes[0], snapshot_hash(&DualPair::trivial()));
        let json = serde_json::to_string(&log).unwrap();
        assert_eq!(json, r#"["m4+","m1 2 1"]"#);
        let back: MoveSequence = serde_json::from_str(&json).unwrap();
        assert_eq!(back.moves, log.moves);
    }
}
