//! Reading a dual pair off a diagram: walk each curve from a basepoint and
//! record the signed crossings.

use serde::{Deserialize, Serialize};

use crate::dual_pair::{CorrespondenceFamily, DualPair, MapKind};
use crate::error::DiagramError;
use crate::presentation::BalancedPresentation;
use crate::word::{Letter, Sign, Word};

use super::{build_diagram, CombinatorialDiagram, CurveKind};

/// Start edges: reading `beta_j` begins at the crossing at the head of
/// `beta[j-1]`, likewise for alpha.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basepoints {
    pub beta: Vec<usize>,
    pub alpha: Vec<usize>,
}

impl Basepoints {
    /// The edge closing each curve, just before its stored position 1.
    pub fn canonical(diagram: &CombinatorialDiagram) -> Basepoints {
        Basepoints {
            beta: (1..=diagram.d).map(|j| diagram.beta_edge(j, diagram.beta_len(j))).collect(),
            alpha: (1..=diagram.d).map(|i| diagram.alpha_edge(i, diagram.alpha_len(i))).collect(),
        }
    }
}

/// Crossing signs recovered from the faces alone: a crossing is positive
/// when alpha-out is the counter-clockwise neighbour of beta-out.
fn signs_from_faces(diagram: &CombinatorialDiagram) -> Result<Vec<Sign>, DiagramError> {
    let halves = 2 * diagram.edges.len();
    let mut cw_next = vec![usize::MAX; halves];
    for face in &diagram.faces {
        let n = face.darts.len();
        for t in 0..n {
            cw_next[face.darts[t] ^ 1] = face.darts[(t + 1) % n];
        }
    }
    let mut beta_out = vec![usize::MAX; diagram.vertices.len()];
    let mut alpha_out = vec![usize::MAX; diagram.vertices.len()];
    for (e, edge) in diagram.edges.iter().enumerate() {
        match edge.kind {
            CurveKind::Beta => beta_out[edge.tail] = 2 * e,
            CurveKind::Alpha => alpha_out[edge.tail] = 2 * e,
        }
    }
    (0..diagram.vertices.len())
        .map(|v| {
            let next = cw_next.get(alpha_out[v]).copied().unwrap_or(usize::MAX);
            if next == usize::MAX {
                return Err(DiagramError::Inconsistent(format!("no face corner at crossing {v}")));
            }
            Ok(if next == beta_out[v] { Sign::Pos } else { Sign::Neg })
        })
        .collect()
}

/// Crossings met walking a curve forward from the head of `start`.
fn walk(diagram: &CombinatorialDiagram, kind: CurveKind, start: usize) -> Result<Vec<usize>, DiagramError> {
    let edge = diagram.edges.get(start).ok_or_else(|| DiagramError::Inconsistent(format!("no edge {start}")))?;
    if edge.kind != kind {
        return Err(DiagramError::Inconsistent(format!("basepoint edge {start} lies on the wrong curve family")));
    }
    let mut out_edge = vec![usize::MAX; diagram.vertices.len()];
    for (e, ed) in diagram.edges.iter().enumerate() {
        if ed.kind == kind {
            out_edge[ed.tail] = e;
        }
    }
    let mut seq = Vec::new();
    let mut e = start;
    loop {
        let v = diagram.edges[e].head;
        seq.push(v);
        e = out_edge[v];
        if e == start {
            return Ok(seq);
        }
        if seq.len() > diagram.vertices.len() {
            return Err(DiagramError::Inconsistent("curve does not close".into()));
        }
    }
}

pub fn read_dual_pair(diagram: &CombinatorialDiagram, basepoints: &Basepoints) -> Result<DualPair, DiagramError> {
    let d = diagram.d;
    if basepoints.beta.len() != d || basepoints.alpha.len() != d {
        return Err(DiagramError::Inconsistent(format!("need {d} basepoints per curve family")));
    }
    let signs = signs_from_faces(diagram)?;
    let mut alpha_of = vec![0; diagram.vertices.len()];
    let mut beta_of = vec![0; diagram.vertices.len()];
    for e in &diagram.edges {
        match e.kind {
            CurveKind::Alpha => alpha_of[e.tail] = e.curve,
            CurveKind::Beta => beta_of[e.tail] = e.curve,
        }
    }
    let mut beta_pos = vec![0; diagram.vertices.len()];
    let mut relators = Vec::new();
    for (j, &start) in basepoints.beta.iter().enumerate() {
        let seq = walk(diagram, CurveKind::Beta, start)?;
        if diagram.edges[start].curve != j + 1 {
            return Err(DiagramError::Inconsistent(format!("basepoint {start} is not on beta_{}", j + 1)));
        }
        for (k, &v) in seq.iter().enumerate() {
            beta_pos[v] = k + 1;
        }
        relators.push(Word(seq.iter().map(|&v| Letter::new(alpha_of[v], signs[v])).collect()));
    }
    let mut family = CorrespondenceFamily::empty(d);
    let mut dual_relators = Vec::new();
    for (i, &start) in basepoints.alpha.iter().enumerate() {
        let seq = walk(diagram, CurveKind::Alpha, start)?;
        if diagram.edges[start].curve != i + 1 {
            return Err(DiagramError::Inconsistent(format!("basepoint {start} is not on alpha_{}", i + 1)));
        }
        for (l, &v) in seq.iter().enumerate() {
            family.map_mut(MapKind::for_sign(signs[v]), i + 1, beta_of[v]).insert(beta_pos[v], l + 1);
        }
        dual_relators.push(Word(seq.iter().map(|&v| Letter::new(beta_of[v], signs[v].flip())).collect()));
    }
    let p = BalancedPresentation::new(relators).map_err(|e| DiagramError::Inconsistent(e.to_string()))?;
    let pstar = BalancedPresentation::new(dual_relators).map_err(|e| DiagramError::Inconsistent(e.to_string()))?;
    DualPair::new(p, pstar, family).map_err(|v| {
        DiagramError::Inconsistent(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
    })
}

/// Builds the diagram, reads it back at canonical basepoints and reports the
/// first difference from `pair`.
pub fn roundtrip_check(pair: &DualPair) -> Result<(), String> {
    let diagram = build_diagram(pair).map_err(|e| e.to_string())?;
    let read = read_dual_pair(&diagram, &Basepoints::canonical(&diagram)).map_err(|e| e.to_string())?;
    if read == *pair {
        return Ok(());
    }
    for (name, a, b) in [("b", pair.p(), read.p()), ("a*", pair.pstar(), read.pstar())] {
        for j in 1..=pair.d() {
            let (x, y) = (a.relator(j), b.relator(j));
            if let Some(k) = (0..x.len().max(y.len())).find(|&k| x.0.get(k) != y.0.get(k)) {
                return Err(format!("{name}_{j} differs at letter {}: {x} vs {y}", k + 1));
            }
        }
    }
    for kind in [MapKind::F, MapKind::FBar] {
        for i in 1..=pair.d() {
            for j in 1..=pair.d() {
                let (x, y) = (pair.family().map(kind, i, j), read.family().map(kind, i, j));
                if x != y {
                    let k = x.iter().zip(y.iter()).find(|(a, b)| a != b).map_or(0, |(a, _)| *a.0);
                    return Err(format!("{kind}[{i}][{j}] differs at position {k}"));
                }
            }
        }
    }
    Err("pairs differ".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{apply_move, random_walk, AcMove};

    #[test]
    fn seeds_roundtrip() {
        for pair in [DualPair::trivial(), DualPair::z2(false), DualPair::z2(true)] {
            roundtrip_check(&pair).unwrap();
        }
        let g = build_diagram(&DualPair::trivial()).unwrap();
        assert_eq!(read_dual_pair(&g, &Basepoints::canonical(&g)).unwrap(), DualPair::trivial());
    }

    #[test]
    fn shifted_basepoint_rotates_the_relator() {
        let (_, pair) = random_walk(&DualPair::trivial(), 9, 20);
        let g = build_diagram(&pair).unwrap();
        let j = (1..=pair.d()).find(|&j| pair.p().relator(j).len() > 1).expect("a long relator");
        let mut bp = Basepoints::canonical(&g);
        bp.beta[j - 1] = g.beta_edge(j, 1);
        let read = read_dual_pair(&g, &bp).unwrap();
        let n = pair.p().relator(j).len();
        assert_eq!(read.p().relator(j), &pair.p().relator(j).rotated(1));
        assert_eq!(read.pstar(), pair.pstar());
        for i in 1..=pair.d() {
            for kind in [MapKind::F, MapKind::FBar] {
                for (&k, &l) in pair.family().map(kind, i, j) {
                    let shifted = if k == 1 { n } else { k - 1 };
                    assert_eq!(read.family().map(kind, i, j)[&shifted], l);
                }
            }
        }
    }

    #[test]
    fn reversing_beta_matches_move2() {
        let (_, pair) = random_walk(&DualPair::z2(false), 3, 15);
        let flipped = apply_move(&pair, AcMove::Move2 { i: 1 }).unwrap();
        roundtrip_check(&flipped).unwrap();
        let a = build_diagram(&pair).unwrap();
        let b = build_diagram(&flipped).unwrap();
        assert_eq!(a.unoriented_signature(), b.unoriented_signature());
    }
}
