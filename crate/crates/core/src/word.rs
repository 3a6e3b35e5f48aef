//! Signed letters and unreduced words over a numbered generator alphabet.
//!
//! Words are never reduced implicitly: the dual moves insert and delete
//! explicit `g g^-1` pairs, and every position-set formula is stated on the
//! literal letter sequence. Positions are 1-based wherever they are exposed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Exponent of a letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// A generator (1-based) raised to `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(generator: usize, sign: Sign) -> Letter {
        assert!(generator >= 1, "generators are numbered from 1");
        Letter { generator, sign }
    }

    pub fn pos(generator: usize) -> Letter {
        Letter::new(generator, Sign::Pos)
    }

    pub fn neg(generator: usize) -> Letter {
        Letter::new(generator, Sign::Neg)
    }

    pub fn inverse(self) -> Letter {
        Letter { generator: self.generator, sign: self.sign.flip() }
    }

    /// Signed integer form: `g` or `-g`.
    pub fn to_int(self) -> i64 {
        self.generator as i64 * self.sign.as_i64()
    }

    pub fn from_int(v: i64) -> Option<Letter> {
        if v == 0 {
            return None;
        }
        let sign = if v > 0 { Sign::Pos } else { Sign::Neg };
        Some(Letter::new(v.unsigned_abs() as usize, sign))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_int())
    }
}

/// An ordered, possibly empty, letter sequence. Not freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_ints(ints: &[i64]) -> Option<Word> {
        ints.iter().map(|&v| Letter::from_int(v)).collect::<Option<Vec<_>>>().map(Word)
    }

    pub fn to_ints(&self) -> Vec<i64> {
        self.0.iter().map(|l| l.to_int()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letter at a 1-based position.
    pub fn at(&self, position: usize) -> Letter {
        self.0[position - 1]
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.generator).max().unwrap_or(0)
    }

    /// The formal inverse: reversed order, every exponent flipped.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Rotation starting at the 0-based offset `k`.
    pub fn rotated(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut letters = self.0[k..].to_vec();
        letters.extend_from_slice(&self.0[..k]);
        Word(letters)
    }

    /// Signed exponent sum of each generator `1..=d`.
    pub fn exponent_sums(&self, d: usize) -> Vec<i64> {
        let mut sums = vec![0; d];
        for l in &self.0 {
            if l.generator <= d {
                sums[l.generator - 1] += l.sign.as_i64();
            }
        }
        sums
    }

    /// Canonical signed-integer text: `"1 -2 1"`.
    pub fn format(&self) -> String {
        self.0.iter().map(|l| l.to_int().to_string()).collect::<Vec<_>>().join(" ")
    }

    /// Alphabetic text (`a..z` positive, `A..Z` inverse). `None` past 26 generators.
    pub fn format_alpha(&self) -> Option<String> {
        self.0
            .iter()
            .map(|l| {
                if l.generator > 26 {
                    return None;
                }
                let base = match l.sign {
                    Sign::Pos => b'a',
                    Sign::Neg => b'A',
                };
                Some((base + (l.generator - 1) as u8) as char)
            })
            .collect()
    }

    /// Parses either encoding. Text containing any ASCII letter is read
    /// alphabetically, anything else as whitespace/comma separated integers.
    pub fn parse(text: &str) -> Result<Word, ParseError> {
        if text.chars().any(|c| c.is_ascii_alphabetic()) {
            Word::parse_alpha(text)
        } else {
            Word::parse_ints(text)
        }
    }

    pub fn parse_ints(text: &str) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in text.split(|c: char| c.is_whitespace() || c == ',') {
            let here = offset;
            offset += token.len() + 1;
            if token.is_empty() {
                continue;
            }
            let value: i64 = token.parse().map_err(|_| ParseError::Token {
                position: here,
                token: token.to_string(),
            })?;
            let letter = Letter::from_int(value).ok_or_else(|| ParseError::Token {
                position: here,
                token: token.to_string(),
            })?;
            letters.push(letter);
        }
        Ok(Word(letters))
    }

    pub fn parse_alpha(text: &str) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        for (position, c) in text.char_indices() {
            if c.is_whitespace() {
                continue;
            }
            let letter = match c {
                'a'..='z' => Letter::pos((c as u8 - b'a') as usize + 1),
                'A'..='Z' => Letter::neg((c as u8 - b'A') as usize + 1),
                _ => return Err(ParseError::Token { position, token: c.to_string() }),
            };
            letters.push(letter);
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.format())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Word, ParseError> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_ints().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Ints(Vec<i64>),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Ints(ints) => Word::from_ints(&ints)
                .ok_or_else(|| serde::de::Error::custom("0 is not a letter")),
            Repr::Text(text) => Word::parse(&text).map_err(serde::de::Error::custom),
        }
    }
}

/// Cancels adjacent `x x^-1` pairs until none remain.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Free reduction followed by stripping cancelling first/last letters.
pub fn cyclic_reduce(w: &Word) -> Word {
    let mut letters = free_reduce(w).0;
    let mut start = 0;
    while letters.len() >= start + 2 && letters[start] == letters[letters.len() - 1].inverse() {
        letters.pop();
        start += 1;
    }
    Word(letters.split_off(start))
}

/// Lexicographically least rotation of a word, compared on integer form.
pub fn least_rotation(w: &Word) -> Word {
    (0..w.len().max(1))
        .map(|k| w.rotated(k))
        .min_by(|a, b| a.to_ints().cmp(&b.to_ints()))
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn parses_both_encodings() {
        let expected = Word(vec![Letter::pos(1), Letter::neg(2), Letter::pos(1)]);
        assert_eq!(w("1 -2 1"), expected);
        assert_eq!(w("aBa"), expected);
        assert_eq!(w(""), Word::empty());
        assert_eq!(w("1,-2, 1"), expected);
    }

    #[test]
    fn parse_reports_position() {
        assert_eq!(
            Word::parse("1 0 2"),
            Err(ParseError::Token { position: 2, token: "0".into() })
        );
        assert_eq!(
            Word::parse("ab?"),
            Err(ParseError::Token { position: 2, token: "?".into() })
        );
        assert!(Word::parse("1 x2").is_err());
    }

    #[test]
    fn free_reduction_examples() {
        assert_eq!(free_reduce(&w("aA")), Word::empty());
        assert_eq!(free_reduce(&w("abBa")), w("aa"));
        assert_eq!(free_reduce(&Word::empty()), Word::empty());
        assert_eq!(free_reduce(&w("abBAc")), w("c"));
    }

    #[test]
    fn cyclic_reduction_strips_conjugation() {
        assert_eq!(cyclic_reduce(&w("abA")), w("b"));
        assert_eq!(cyclic_reduce(&w("aA")), Word::empty());
        assert_eq!(cyclic_reduce(&w("abcBA")), w("c"));
    }

    #[test]
    fn inverse_reverses_and_flips() {
        assert_eq!(w("abC").inverse(), w("cBA"));
    }

    #[test]
    fn least_rotation_is_rotation_invariant() {
        let x = w("bAab");
        for k in 0..x.len() {
            assert_eq!(least_rotation(&x.rotated(k)), least_rotation(&x));
        }
    }

    proptest::proptest! {
        #[test]
        fn format_parse_roundtrip(ints in proptest::collection::vec(
            (1i64..=26, proptest::bool::ANY).prop_map(|(g, s)| if s { g } else { -g }), 0..40)) {
            let word = Word::from_ints(&ints).unwrap();
            proptest::prop_assert_eq!(Word::parse(&word.format()).unwrap(), word.clone());
            let alpha = word.format_alpha().unwrap();
            proptest::prop_assert_eq!(Word::parse_alpha(&alpha).unwrap(), word);
        }

        #[test]
        fn free_reduce_is_fixed_point(ints in proptest::collection::vec(
            (1i64..=3, proptest::bool::ANY).prop_map(|(g, s)| if s { g } else { -g }), 0..30)) {
            let word = Word::from_ints(&ints).unwrap();
            let reduced = free_reduce(&word);
            proptest::prop_assert!(reduced.0.windows(2).all(|p| p[0] != p[1].inverse()));
            proptest::prop_assert_eq!(free_reduce(&reduced), reduced.clone());
            proptest::prop_assert_eq!(reduced.exponent_sums(3), word.exponent_sums(3));
        }
    }

    use proptest::strategy::Strategy;
}
