//! Dual presentations tied together by a correspondence family.
//!
//! For `P = <a_1..a_d | b_1..b_d>` and `P* = <b*_1..b*_d | a*_1..a*_d>` the
//! family holds, for every generator `i` and relator `j`,
//!
//! * `f[i][j]`: positions of `a_i` in `b_j`  ->  positions of `b*_j^-1` in `a*_i`
//! * `fbar[i][j]`: positions of `a_i^-1` in `b_j`  ->  positions of `b*_j` in `a*_i`
//!
//! Indices are already aligned: generator `i` of `P` owns relator `i` of `P*`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::FormatError;
use crate::presentation::{occurrence_sets, BalancedPresentation};
use crate::word::{least_rotation, Letter, Sign};

pub type PositionMap = BTreeMap<usize, usize>;

/// Which half of the family a map belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    /// `f`: positive letters of `P` to inverse letters of `P*`.
    F,
    /// `fbar`: inverse letters of `P` to positive letters of `P*`.
    FBar,
}

impl MapKind {
    /// Sign of the primal letters in the domain.
    pub fn domain_sign(self) -> Sign {
        match self {
            MapKind::F => Sign::Pos,
            MapKind::FBar => Sign::Neg,
        }
    }

    pub fn for_sign(sign: Sign) -> MapKind {
        match sign {
            Sign::Pos => MapKind::F,
            Sign::Neg => MapKind::FBar,
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::F => "f",
            MapKind::FBar => "fbar",
        })
    }
}

/// Explicit position maps `f[i-1][j-1]` and `fbar[i-1][j-1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CorrespondenceFamily {
    pub f: Vec<Vec<PositionMap>>,
    pub fbar: Vec<Vec<PositionMap>>,
}

impl CorrespondenceFamily {
    pub fn empty(d: usize) -> CorrespondenceFamily {
        CorrespondenceFamily { f: vec![vec![PositionMap::new(); d]; d], fbar: vec![vec![PositionMap::new(); d]; d] }
    }

    pub fn d(&self) -> usize {
        self.f.len()
    }

    pub fn map(&self, kind: MapKind, i: usize, j: usize) -> &PositionMap {
        match kind {
            MapKind::F => &self.f[i - 1][j - 1],
            MapKind::FBar => &self.fbar[i - 1][j - 1],
        }
    }

    pub fn map_mut(&mut self, kind: MapKind, i: usize, j: usize) -> &mut PositionMap {
        match kind {
            MapKind::F => &mut self.f[i - 1][j - 1],
            MapKind::FBar => &mut self.fbar[i - 1][j - 1],
        }
    }
}

/// One failed condition of the duality definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Dimension { what: String },
    /// A letter of `b_j` has no image.
    Unmapped { map: MapKind, i: usize, j: usize, position: usize },
    /// A key that is not a matching letter of `b_j`.
    OutsideDomain { map: MapKind, i: usize, j: usize, position: usize },
    /// The image is not a correctly signed `b*_j` letter of `a*_i`.
    WrongTarget { map: MapKind, i: usize, j: usize, position: usize, image: usize },
    /// Two letters share one position of `a*_i`.
    DuplicateImage { i: usize, image: usize },
    /// A position of `a*_i` hit by no map.
    Uncovered { i: usize, position: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension { what } => write!(f, "dimension mismatch: {what}"),
            Violation::Unmapped { map, i, j, position } => {
                write!(f, "{map}[{i}][{j}] has no image for position {position}")
            }
            Violation::OutsideDomain { map, i, j, position } => {
                write!(f, "{map}[{i}][{j}] maps position {position}, which is not in its domain")
            }
            Violation::WrongTarget { map, i, j, position, image } => write!(
                f,
                "{map}[{i}][{j}] sends {position} to {image}, which is not an allowed letter of a*_{i}"
            ),
            Violation::DuplicateImage { i, image } => {
                write!(f, "position {image} of a*_{i} is hit twice")
            }
            Violation::Uncovered { i, position } => {
                write!(f, "position {position} of a*_{i} is not hit")
            }
        }
    }
}

/// Checks every condition; violations are collected, not short-circuited.
pub fn validate_dual_pair(
    p: &BalancedPresentation,
    pstar: &BalancedPresentation,
    family: &CorrespondenceFamily,
) -> Result<(), Vec<Violation>> {
    let d = p.d();
    let mut out = Vec::new();
    if pstar.d() != d {
        out.push(Violation::Dimension { what: format!("P has d = {d}, P* has d = {}", pstar.d()) });
    }
    for (name, table) in [("f", &family.f), ("fbar", &family.fbar)] {
        if table.len() != d || table.iter().any(|row| row.len() != d) {
            out.push(Violation::Dimension { what: format!("{name} is not {d}x{d}") });
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    let occ = occurrence_sets(p);
    let occ_star = occurrence_sets(pstar);
    for i in 1..=d {
        let len = pstar.relator(i).len();
        let mut hits = vec![0usize; len + 1];
        for j in 1..=d {
            for kind in [MapKind::F, MapKind::FBar] {
                let sign = kind.domain_sign();
                let domain = occ.get(sign, i, j);
                // target: positions of b*_j with the opposite sign in a*_i
                let target = occ_star.get(sign.flip(), j, i);
                let map = family.map(kind, i, j);
                for &k in domain {
                    if !map.contains_key(&k) {
                        out.push(Violation::Unmapped { map: kind, i, j, position: k });
                    }
                }
                for (&k, &l) in map {
                    if domain.binary_search(&k).is_err() {
                        out.push(Violation::OutsideDomain { map: kind, i, j, position: k });
                        continue;
                    }
                    if target.binary_search(&l).is_err() {
                        out.push(Violation::WrongTarget { map: kind, i, j, position: k, image: l });
                        continue;
                    }
                    hits[l] += 1;
                }
            }
        }
        for (l, &h) in hits.iter().enumerate().skip(1) {
            match h {
                0 => out.push(Violation::Uncovered { i, position: l }),
                1 => {}
                _ => out.push(Violation::DuplicateImage { i, image: l }),
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Reference to one letter of a relator of `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub relator: usize,
    pub position: usize,
    pub sign: Sign,
}

/// Letter-level links between `P` and `P*`, both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkTable {
    /// `to_dual[j-1][k-1]` = position in `a*_i` of the partner of `b_j[k]`,
    /// where `i` is the generator of that letter.
    pub to_dual: Vec<Vec<usize>>,
    /// `to_primal[i-1][l-1]` = `(j, k)` partner of `a*_i[l]`.
    pub to_primal: Vec<Vec<(usize, usize)>>,
}

/// A validated dual pair `(P, P*)_F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualPair {
    p: BalancedPresentation,
    pstar: BalancedPresentation,
    family: CorrespondenceFamily,
}

impl DualPair {
    pub fn new(
        p: BalancedPresentation,
        pstar: BalancedPresentation,
        family: CorrespondenceFamily,
    ) -> Result<DualPair, Vec<Violation>> {
        validate_dual_pair(&p, &pstar, &family)?;
        Ok(DualPair { p, pstar, family })
    }

    pub(crate) fn new_unchecked(
        p: BalancedPresentation,
        pstar: BalancedPresentation,
        family: CorrespondenceFamily,
    ) -> DualPair {
        DualPair { p, pstar, family }
    }

    /// `(<a | a>, <b | b^-1>)` with the only possible map.
    pub fn trivial() -> DualPair {
        let mut family = CorrespondenceFamily::empty(1);
        family.f[0][0].insert(1, 1);
        DualPair::new(
            BalancedPresentation::parse(&["a"]).unwrap(),
            BalancedPresentation::parse(&["A"]).unwrap(),
            family,
        )
        .expect("trivial pair is valid")
    }

    /// `(<a | a a>, <b | b^-1 b^-1>)`; `swapped` picks `f = {1->2, 2->1}`
    /// instead of the identity.
    pub fn z2(swapped: bool) -> DualPair {
        let mut family = CorrespondenceFamily::empty(1);
        if swapped {
            family.f[0][0].extend([(1, 2), (2, 1)]);
        } else {
            family.f[0][0].extend([(1, 1), (2, 2)]);
        }
        DualPair::new(
            BalancedPresentation::parse(&["aa"]).unwrap(),
            BalancedPresentation::parse(&["AA"]).unwrap(),
            family,
        )
        .expect("Z/2 pair is valid")
    }

    pub fn d(&self) -> usize {
        self.p.d()
    }

    pub fn p(&self) -> &BalancedPresentation {
        &self.p
    }

    pub fn pstar(&self) -> &BalancedPresentation {
        &self.pstar
    }

    pub fn family(&self) -> &CorrespondenceFamily {
        &self.family
    }

    pub fn into_parts(self) -> (BalancedPresentation, BalancedPresentation, CorrespondenceFamily) {
        (self.p, self.pstar, self.family)
    }

    /// Partner position in `a*_i` of the letter `b_j[k]` (with `i` its generator).
    pub fn dual_position(&self, j: usize, k: usize) -> (usize, usize) {
        let Letter { generator, sign } = self.p.relator(j).at(k);
        let l = self.family.map(MapKind::for_sign(sign), generator, j)[&k];
        (generator, l)
    }

    pub fn links(&self) -> LinkTable {
        let d = self.d();
        let mut to_dual: Vec<Vec<usize>> =
            self.p.relators().iter().map(|r| vec![0; r.len()]).collect();
        let mut to_primal: Vec<Vec<(usize, usize)>> =
            self.pstar.relators().iter().map(|r| vec![(0, 0); r.len()]).collect();
        for i in 1..=d {
            for j in 1..=d {
                for kind in [MapKind::F, MapKind::FBar] {
                    for (&k, &l) in self.family.map(kind, i, j) {
                        to_dual[j - 1][k - 1] = l;
                        to_primal[i - 1][l - 1] = (j, k);
                    }
                }
            }
        }
        LinkTable { to_dual, to_primal }
    }

    /// Occurrences of `a_i^{+-1}` across all relators, in the order of their
    /// partner positions in `a*_i` (read cyclically from position 1).
    pub fn cyclic_order(&self, i: usize) -> Vec<Occurrence> {
        let links = self.links();
        links.to_primal[i - 1]
            .iter()
            .map(|&(j, k)| Occurrence { relator: j, position: k, sign: self.p.relator(j).at(k).sign })
            .collect()
    }

    /// `(P*, P)` with every map inverted.
    pub fn transpose(&self) -> DualPair {
        let d = self.d();
        let mut family = CorrespondenceFamily::empty(d);
        for i in 1..=d {
            for j in 1..=d {
                let inv = |m: &PositionMap| m.iter().map(|(&k, &l)| (l, k)).collect::<PositionMap>();
                family.f[j - 1][i - 1] = inv(self.family.map(MapKind::FBar, i, j));
                family.fbar[j - 1][i - 1] = inv(self.family.map(MapKind::F, i, j));
            }
        }
        DualPair { p: self.pstar.clone(), pstar: self.p.clone(), family }
    }

    /// Composes one map with a transposition of two domain positions: the
    /// elementary re-choice of correspondence.
    pub fn swap_images(
        &self,
        kind: MapKind,
        i: usize,
        j: usize,
        k1: usize,
        k2: usize,
    ) -> Option<DualPair> {
        let mut family = self.family.clone();
        let map = family.map_mut(kind, i, j);
        let l1 = *map.get(&k1)?;
        let l2 = *map.get(&k2)?;
        map.insert(k1, l2);
        map.insert(k2, l1);
        Some(DualPair { p: self.p.clone(), pstar: self.pstar.clone(), family })
    }

    /// Stable 16-hex-digit digest of the full pair.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(&PairRepr::from(self)).expect("pair serializes");
        hex::encode(&Sha256::digest(&json)[..8])
    }

    /// Bucket key for deduplication: every relator of both presentations
    /// rotated to its least cyclic form. Pairs with equal keys still need a
    /// full comparison.
    pub fn canonical_key(&self) -> Vec<Vec<i64>> {
        self.p
            .relators()
            .iter()
            .chain(self.pstar.relators())
            .map(|w| least_rotation(w).to_ints())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PairRepr::from(self)).expect("pair serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&PairRepr::from(self)).expect("pair serializes")
    }

    pub fn from_json(text: &str) -> Result<DualPair, FormatError> {
        let repr: PairRepr = serde_json::from_str(text)?;
        repr.try_into()
    }
}

impl fmt::Display for DualPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P = {}, P* = {}", self.p, self.pstar)
    }
}

/// File form: `{"P": .., "Pstar": .., "f": [[[[k, l], ..], ..], ..], "fbar": ..}`.
#[derive(Serialize, Deserialize)]
pub struct PairRepr {
    #[serde(rename = "P")]
    pub p: BalancedPresentation,
    #[serde(rename = "Pstar")]
    pub pstar: BalancedPresentation,
    pub f: Vec<Vec<Vec<[usize; 2]>>>,
    pub fbar: Vec<Vec<Vec<[usize; 2]>>>,
}

impl From<&DualPair> for PairRepr {
    fn from(pair: &DualPair) -> PairRepr {
        let table = |t: &Vec<Vec<PositionMap>>| {
            t.iter()
                .map(|row| row.iter().map(|m| m.iter().map(|(&k, &l)| [k, l]).collect()).collect())
                .collect()
        };
        PairRepr {
            p: pair.p.clone(),
            pstar: pair.pstar.clone(),
            f: table(&pair.family.f),
            fbar: table(&pair.family.fbar),
        }
    }
}

impl TryFrom<PairRepr> for DualPair {
    type Error = FormatError;

    fn try_from(r: PairRepr) -> Result<DualPair, FormatError> {
        let table = |t: Vec<Vec<Vec<[usize; 2]>>>| -> Result<Vec<Vec<PositionMap>>, FormatError> {
            t.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|pairs| {
                            let mut m = PositionMap::new();
                            for [k, l] in pairs {
                                if m.insert(k, l).is_some() {
                                    return Err(FormatError::InvalidPair(vec![format!(
                                        "position {k} listed twice in one map"
                                    )]));
                                }
                            }
                            Ok(m)
                        })
                        .collect()
                })
                .collect()
        };
        let family = CorrespondenceFamily { f: table(r.f)?, fbar: table(r.fbar)? };
        DualPair::new(r.p, r.pstar, family).map_err(|v| {
            FormatError::InvalidPair(v.iter().map(ToString::to_string).collect())
        })
    }
}

/// Builds the word `a*_i` implied by a link table.
#[cfg(test)]
fn dual_word_from_links(
    p: &BalancedPresentation,
    to_primal: &[(usize, usize)],
) -> crate::word::Word {
    crate::word::Word(
        to_primal
            .iter()
            .map(|&(j, k)| Letter::new(j, p.relator(j).at(k).sign.flip()))
            .collect(),
    )
}
