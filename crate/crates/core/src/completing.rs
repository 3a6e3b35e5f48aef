//! Completing curves: closed curves disjoint from the alpha curves, stored
//! as the sequence of beta edges they cross, and the checks a set of them
//! must pass.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagram::{read_dual_pair, Basepoints, CombinatorialDiagram, CurveKind, Dart, UnionFind};
use crate::error::CurveError;
use crate::presentation::{abelianization_matrix, BalancedPresentation};
use crate::snf::SmithForm;
use crate::word::{cyclic_reduce, Letter, Sign, Word};

/// Crossing a beta edge. `Pos` goes from the left of the edge to its right
/// and reads `b*_j`; `Neg` goes right to left and reads `b*_j^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Crossing {
    pub edge: usize,
    #[serde(serialize_with = "ser_dir", deserialize_with = "de_dir")]
    pub dir: Sign,
}

fn ser_dir<S: Serializer>(dir: &Sign, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&dir.symbol())
}

fn de_dir<'de, D: Deserializer<'de>>(d: D) -> Result<Sign, D::Error> {
    match String::deserialize(d)?.as_str() {
        "+" => Ok(Sign::Pos),
        "-" => Ok(Sign::Neg),
        other => Err(serde::de::Error::custom(format!("dir must be \"+\" or \"-\", got {other:?}"))),
    }
}

impl Crossing {
    /// Dart whose face the curve enters.
    fn arrive(&self) -> Dart {
        2 * self.edge + usize::from(self.dir == Sign::Pos)
    }

    /// Dart whose face the curve leaves.
    fn leave(&self) -> Dart {
        self.arrive() ^ 1
    }
}

/// A closed curve in normal position. A curve with no crossings lies inside
/// `face`. The marked point sits on strand `marked`, the one leaving crossing
/// `marked`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "CurveRepr")]
pub struct SurfaceCurve {
    pub crossings: Vec<Crossing>,
    #[serde(default)]
    pub marked: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CurveRepr {
    Bare(Vec<Crossing>),
    Full {
        crossings: Vec<Crossing>,
        #[serde(default)]
        marked: usize,
        #[serde(default)]
        face: Option<usize>,
    },
}

impl From<CurveRepr> for SurfaceCurve {
    fn from(r: CurveRepr) -> SurfaceCurve {
        match r {
            CurveRepr::Bare(crossings) => SurfaceCurve { crossings, marked: 0, face: None },
            CurveRepr::Full { crossings, marked, face } => SurfaceCurve { crossings, marked, face },
        }
    }
}

impl SurfaceCurve {
    pub fn new(crossings: Vec<Crossing>) -> SurfaceCurve {
        SurfaceCurve { crossings, marked: 0, face: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompletingCurveSet {
    pub curves: Vec<SurfaceCurve>,
}

/// Word in the dual generators read along the curve.
pub fn relator_of_curve(diagram: &CombinatorialDiagram, curve: &SurfaceCurve) -> Word {
    Word(
        curve
            .crossings
            .iter()
            .map(|c| Letter::new(diagram.edges[c.edge].curve, c.dir))
            .collect(),
    )
}

/// The curve just left of `alpha_i`, crossing each beta next to the crossing.
/// Where it would enter a bigon and leave through the same beta edge, it is
/// pushed out of the bigon, so it reads `a*_i` with those pairs cancelled.
pub fn alpha_pushoff(diagram: &CombinatorialDiagram, i: usize) -> SurfaceCurve {
    let mut beta_in = vec![0; diagram.vertices.len()];
    let mut beta_out = vec![0; diagram.vertices.len()];
    for (e, edge) in diagram.edges.iter().enumerate() {
        if edge.kind == CurveKind::Beta {
            beta_out[edge.tail] = e;
            beta_in[edge.head] = e;
        }
    }
    let crossings = (1..=diagram.alpha_len(i))
        .map(|l| {
            let v = diagram.edges[diagram.alpha_edge(i, l)].tail;
            match diagram.vertices[v].sign {
                Sign::Pos => Crossing { edge: beta_in[v], dir: Sign::Neg },
                Sign::Neg => Crossing { edge: beta_out[v], dir: Sign::Pos },
            }
        })
        .collect::<Vec<Crossing>>();
    let mut kept: Vec<Crossing> = Vec::with_capacity(crossings.len());
    for c in crossings {
        match kept.last() {
            Some(top) if top.edge == c.edge && top.dir != c.dir => {
                kept.pop();
            }
            _ => kept.push(c),
        }
    }
    while kept.len() >= 2 {
        let (first, last) = (kept[0], kept[kept.len() - 1]);
        if first.edge != last.edge || first.dir == last.dir {
            break;
        }
        kept.pop();
        kept.remove(0);
    }
    let face = if kept.is_empty() {
        let dart = 2 * diagram.alpha_edge(i, 1);
        diagram.faces.iter().position(|f| f.darts.contains(&dart))
    } else {
        None
    };
    SurfaceCurve { crossings: kept, marked: 0, face }
}

/// Three-valued answer to "is this word trivial in the group".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Triviality {
    Trivial,
    Nontrivial,
    Unknown,
}

/// Words explored per bounded search.
const SEARCH_NODES: usize = 50_000;

/// Sound triviality test in `<generators | relators of pres>`: free
/// reduction, then an abelian obstruction, then a breadth-first search of
/// up to `depth` insertions of relator conjugates.
pub fn word_triviality(pres: &BalancedPresentation, w: &Word, depth: usize) -> Triviality {
    let start = cyclic_reduce(w);
    if start.is_empty() {
        return Triviality::Trivial;
    }
    let d = pres.d();
    let m = abelianization_matrix(pres);
    if SmithForm::new(&m, d).solve(&w.exponent_sums(d)).is_none() {
        return Triviality::Nontrivial;
    }
    let mut pieces: Vec<Word> = Vec::new();
    for r in pres.relators() {
        for base in [r.clone(), r.inverse()] {
            for k in 0..base.len() {
                let rot = base.rotated(k);
                if !pieces.contains(&rot) {
                    pieces.push(rot);
                }
            }
        }
    }
    let cap = start.len() + pieces.iter().map(Word::len).max().unwrap_or(0);
    let mut seen: HashSet<Word> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((cur, level)) = queue.pop_front() {
        if level == depth {
            continue;
        }
        for piece in &pieces {
            for p in 0..=cur.len() {
                let mut letters = cur.0[..p].to_vec();
                letters.extend_from_slice(&piece.0);
                letters.extend_from_slice(&cur.0[p..]);
                let next = cyclic_reduce(&Word(letters));
                if next.is_empty() {
                    return Triviality::Trivial;
                }
                if next.len() <= cap && seen.len() < SEARCH_NODES && seen.insert(next.clone()) {
                    queue.push_back((next, level + 1));
                }
            }
        }
    }
    Triviality::Unknown
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletingReport {
    /// Every crossing is on a beta edge.
    pub alpha_disjoint: bool,
    /// The curves are simple and pairwise disjoint.
    pub simple: bool,
    /// Every piece of the surface cut along alpha and completing curves is
    /// planar.
    pub sphere_condition: bool,
    /// Per component: pieces after cutting, and the count a planar cut needs.
    pub pieces: Vec<usize>,
    pub planar_pieces: Vec<usize>,
    pub relators: Vec<Word>,
    pub triviality: Vec<Triviality>,
    /// The marked point of each curve names an existing strand.
    pub arcs_ok: Vec<bool>,
}

impl CompletingReport {
    /// All conditions hold and every relator is known to be trivial.
    pub fn ok(&self) -> bool {
        self.alpha_disjoint
            && self.simple
            && self.sphere_condition
            && self.triviality.iter().all(|&t| t == Triviality::Trivial)
            && self.arcs_ok.iter().all(|&a| a)
    }
}

/// One strand of a curve inside a face, between two darts.
#[derive(Clone, Copy, Debug)]
struct Strand {
    face: usize,
    from: Dart,
    to: Dart,
}

fn malformed(curve: usize, reason: impl Into<String>) -> CurveError {
    CurveError::Malformed { curve, reason: reason.into() }
}

/// Strands of every curve, after structural checks.
fn strands(
    diagram: &CombinatorialDiagram,
    dart_faces: &[usize],
    set: &CompletingCurveSet,
) -> Result<Vec<Vec<Strand>>, CurveError> {
    let mut out = Vec::new();
    for (ci, curve) in set.curves.iter().enumerate() {
        let n = curve.crossings.len();
        if n == 0 {
            match curve.face {
                Some(f) if f < diagram.faces.len() => {}
                _ => return Err(malformed(ci, "a curve without crossings needs a valid face")),
            }
            out.push(Vec::new());
            continue;
        }
        for c in &curve.crossings {
            let Some(edge) = diagram.edges.get(c.edge) else {
                return Err(malformed(ci, format!("edge {} does not exist", c.edge)));
            };
            if edge.kind != CurveKind::Beta {
                return Err(malformed(ci, format!("edge {} is an alpha edge", c.edge)));
            }
        }
        let mut list = Vec::with_capacity(n);
        for t in 0..n {
            let from = curve.crossings[t].arrive();
            let to = curve.crossings[(t + 1) % n].leave();
            if dart_faces[from] != dart_faces[to] {
                return Err(malformed(ci, format!("crossings {t} and {} do not share a face", (t + 1) % n)));
            }
            if from == to {
                return Err(malformed(ci, format!("strand {t} returns through the edge it entered (not normal)")));
            }
            list.push(Strand { face: dart_faces[from], from, to });
        }
        out.push(list);
    }
    Ok(out)
}

/// Canonical cyclic form of an unoriented crossing sequence.
fn unoriented_key(seq: &[Crossing]) -> Vec<Crossing> {
    let rev: Vec<Crossing> = seq.iter().rev().map(|c| Crossing { edge: c.edge, dir: c.dir.flip() }).collect();
    let n = seq.len();
    let mut best: Option<Vec<Crossing>> = None;
    for s in [seq, rev.as_slice()] {
        for r in 0..n.max(1) {
            let mut k = s[r.min(n)..].to_vec();
            k.extend_from_slice(&s[..r.min(n)]);
            if best.as_ref().map_or(true, |b| k < *b) {
                best = Some(k);
            }
        }
    }
    best.unwrap_or_default()
}

/// Endpoint of a chord: a dart side and the index along it.
type End = (Dart, usize);

struct Arrangement {
    /// chord partner of every endpoint
    partner: BTreeMap<End, End>,
    /// endpoints per dart
    count: Vec<usize>,
}

/// Places the chords of each face without crossings, or reports the face
/// where two chord types interleave.
fn arrange(
    diagram: &CombinatorialDiagram,
    all: &[Vec<Strand>],
) -> Result<Arrangement, usize> {
    let mut side_of = vec![(0usize, 0usize); 2 * diagram.edges.len()];
    for (f, face) in diagram.faces.iter().enumerate() {
        for (s, &d) in face.darts.iter().enumerate() {
            side_of[d] = (f, s);
        }
    }
    // chord types per face as (side, side) with multiplicity
    let mut types: BTreeMap<usize, BTreeMap<(usize, usize), usize>> = BTreeMap::new();
    for st in all.iter().flatten() {
        let (a, b) = (side_of[st.from].1, side_of[st.to].1);
        *types.entry(st.face).or_default().entry((a.min(b), a.max(b))).or_default() += 1;
    }
    let mut partner = BTreeMap::new();
    let mut count = vec![0; 2 * diagram.edges.len()];
    for (&f, chords) in &types {
        let darts = &diagram.faces[f].darts;
        let m = darts.len();
        let keys: Vec<(usize, usize)> = chords.keys().copied().collect();
        for (x, &(a, b)) in keys.iter().enumerate() {
            for &(c, e) in &keys[x + 1..] {
                if [a, b].contains(&c) || [a, b].contains(&e) {
                    continue;
                }
                let inside = |p: usize| a < p && p < b;
                if inside(c) != inside(e) {
                    return Err(f);
                }
            }
        }
        // endpoints along each side, far chords first
        let mut on_side: Vec<Vec<(usize, (usize, usize), usize)>> = vec![Vec::new(); m];
        for (&(a, b), &mult) in chords {
            for copy in 0..mult {
                on_side[a].push(((b + m - a) % m, (a, b), copy));
                on_side[b].push(((a + m - b) % m, (a, b), copy));
            }
        }
        let mut slot: BTreeMap<((usize, usize), usize, usize), usize> = BTreeMap::new();
        for (s, list) in on_side.iter_mut().enumerate() {
            // descending distance; copies of one type on the lower side
            // ascending, on the upper side descending, so parallel chords nest
            list.sort_by(|x, y| {
                y.0.cmp(&x.0).then_with(|| {
                    if s == (x.1).0 {
                        x.2.cmp(&y.2)
                    } else {
                        y.2.cmp(&x.2)
                    }
                })
            });
            for (idx, &(_, ty, copy)) in list.iter().enumerate() {
                slot.insert((ty, copy, s), idx);
            }
            count[darts[s]] = list.len();
        }
        for (&(a, b), &mult) in chords {
            for copy in 0..mult {
                let ea = (darts[a], slot[&((a, b), copy, a)]);
                let eb = (darts[b], slot[&((a, b), copy, b)]);
                partner.insert(ea, eb);
                partner.insert(eb, ea);
            }
        }
    }
    Ok(Arrangement { partner, count })
}

/// Closed curves realized by an arrangement, as crossing sequences.
fn realize(diagram: &CombinatorialDiagram, arr: &Arrangement) -> Vec<Vec<Crossing>> {
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut curves = Vec::new();
    for e in 0..diagram.edges.len() {
        let c = arr.count[2 * e];
        for t in 0..c {
            if seen.contains(&(e, t)) {
                continue;
            }
            let mut seq = Vec::new();
            // stand on point (e, t) and step into the face right of e
            let (mut edge, mut pos, mut into) = (e, t, 2 * e + 1);
            loop {
                seen.insert((edge, pos));
                seq.push(Crossing { edge, dir: if into % 2 == 1 { Sign::Pos } else { Sign::Neg } });
                let here = if into % 2 == 0 { pos } else { arr.count[into] - 1 - pos };
                let (d2, i2) = arr.partner[&(into, here)];
                edge = d2 / 2;
                pos = if d2 % 2 == 0 { i2 } else { arr.count[d2] - 1 - i2 };
                into = d2 ^ 1;
                if (edge, pos) == (e, t) {
                    break;
                }
            }
            curves.push(seq);
        }
    }
    curves
}

/// Pieces of each component after cutting along every alpha curve and the
/// arranged chords.
fn count_pieces(diagram: &CombinatorialDiagram, arr: &Arrangement) -> Vec<usize> {
    // segment id per (face, index of the event it follows)
    let mut seg_base = Vec::with_capacity(diagram.faces.len());
    let mut total = 0;
    let mut events_of: Vec<Vec<End>> = Vec::new();
    for face in &diagram.faces {
        let events: Vec<End> = face
            .darts
            .iter()
            .flat_map(|&d| (0..arr.count[d]).map(move |i| (d, i)))
            .collect();
        seg_base.push(total);
        total += events.len().max(1);
        events_of.push(events);
    }
    let mut uf = UnionFind::new(total);
    let mut piece_of: BTreeMap<(Dart, usize), usize> = BTreeMap::new();
    for (f, face) in diagram.faces.iter().enumerate() {
        let events = &events_of[f];
        let n = events.len();
        let index: BTreeMap<End, usize> = events.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        // regions: follow a segment to the next event, cross its chord
        for k in 0..n {
            let next_event = events[(k + 1) % n];
            let across = index[&arr.partner[&next_event]];
            uf.union(seg_base[f] + k, seg_base[f] + across);
        }
        // boundary pieces of each dart, labelled by their segment
        let mut current = seg_base[f] + n.saturating_sub(1);
        for &d in &face.darts {
            for u in 0..=arr.count[d] {
                if u > 0 {
                    current = seg_base[f] + index[&(d, u - 1)];
                }
                piece_of.insert((d, u), current);
            }
        }
    }
    for (e, edge) in diagram.edges.iter().enumerate() {
        if edge.kind != CurveKind::Beta {
            continue;
        }
        let c = arr.count[2 * e];
        for u in 0..=c {
            uf.union(piece_of[&(2 * e, u)], piece_of[&(2 * e + 1, c - u)]);
        }
    }
    let mut roots = vec![BTreeSet::new(); diagram.components.len()];
    for (f, face) in diagram.faces.iter().enumerate() {
        for k in 0..events_of[f].len().max(1) {
            roots[face.component].insert(uf.find(seg_base[f] + k));
        }
    }
    roots.iter().map(BTreeSet::len).collect()
}

/// Checks a candidate set of completing curves. `depth` bounds the relator
/// search used for triviality.
pub fn check_completing(
    diagram: &CombinatorialDiagram,
    set: &CompletingCurveSet,
    depth: usize,
) -> Result<CompletingReport, CurveError> {
    let dart_faces = diagram.dart_faces();
    let all = strands(diagram, &dart_faces, set)?;
    let pstar = read_dual_pair(diagram, &Basepoints::canonical(diagram))
        .map_err(|e| malformed(0, format!("diagram unreadable: {e}")))?
        .pstar()
        .clone();
    let relators: Vec<Word> = set.curves.iter().map(|c| relator_of_curve(diagram, c)).collect();
    let triviality = relators.iter().map(|w| word_triviality(&pstar, w, depth)).collect();
    let arcs_ok = set.curves.iter().map(|c| c.marked < c.crossings.len().max(1)).collect();

    let ncomp = diagram.components.len();
    let mut curve_count = vec![0usize; ncomp];
    let mut extra_pieces = vec![0usize; ncomp];
    for (ci, curve) in set.curves.iter().enumerate() {
        let face = match all[ci].first() {
            Some(st) => st.face,
            None => curve.face.expect("checked"),
        };
        let c = diagram.faces[face].component;
        curve_count[c] += 1;
        if curve.crossings.is_empty() {
            // a disk cut out of one face
            extra_pieces[c] += 1;
        }
    }
    let planar_pieces: Vec<usize> = diagram
        .components
        .iter()
        .zip(&curve_count)
        .map(|(s, &k)| (s.alphas.len() + k + 1).saturating_sub(s.genus as usize))
        .collect();

    let (simple, pieces) = match arrange(diagram, &all) {
        Err(_) => (false, vec![0; ncomp]),
        Ok(arr) => {
            let mut want: Vec<Vec<Crossing>> = set
                .curves
                .iter()
                .filter(|c| !c.crossings.is_empty())
                .map(|c| unoriented_key(&c.crossings))
                .collect();
            let mut got: Vec<Vec<Crossing>> = realize(diagram, &arr).iter().map(|c| unoriented_key(c)).collect();
            want.sort();
            got.sort();
            let pieces: Vec<usize> = count_pieces(diagram, &arr).iter().zip(&extra_pieces).map(|(a, b)| a + b).collect();
            (want == got, pieces)
        }
    };
    let sphere_condition = simple && pieces == planar_pieces;
    Ok(CompletingReport {
        alpha_disjoint: true,
        simple,
        sphere_condition,
        pieces,
        planar_pieces,
        relators,
        triviality,
        arcs_ok,
    })
}
