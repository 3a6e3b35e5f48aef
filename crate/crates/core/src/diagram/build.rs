use std::collections::BTreeSet;

use crate::dual_pair::DualPair;
use crate::error::DiagramError;
use crate::word::Sign;

use super::{
    dart_edge, dart_forward, CombinatorialDiagram, ComponentSummary, CurveKind, Dart, Edge, Face,
    UnionFind, Vertex,
};

/// Builds the all-polygon diagram of a valid pair.
pub fn build_diagram(pair: &DualPair) -> Result<CombinatorialDiagram, DiagramError> {
    let d = pair.d();
    for j in 1..=d {
        if pair.p().relator(j).is_empty() {
            return Err(DiagramError::FreeCurve { kind: "beta", index: j });
        }
    }
    for i in 1..=d {
        if pair.pstar().relator(i).is_empty() {
            return Err(DiagramError::FreeCurve { kind: "alpha", index: i });
        }
    }
    let links = pair.links();
    let mut vertices = Vec::new();
    let mut vertex_at = Vec::new();
    for (j, r) in pair.p().relators().iter().enumerate() {
        let mut row = Vec::new();
        for (k, letter) in r.letters().iter().enumerate() {
            row.push(vertices.len());
            vertices.push(Vertex {
                alpha: letter.generator,
                beta: j + 1,
                beta_pos: k + 1,
                alpha_pos: links.to_dual[j][k],
                sign: letter.sign,
            });
        }
        vertex_at.push(row);
    }
    let mut edges = Vec::new();
    let mut beta_offsets = vec![0];
    for (j, row) in vertex_at.iter().enumerate() {
        let n = row.len();
        for k in 0..n {
            edges.push(Edge { kind: CurveKind::Beta, curve: j + 1, index: k + 1, tail: row[k], head: row[(k + 1) % n] });
        }
        beta_offsets.push(edges.len());
    }
    let mut alpha_offsets = vec![edges.len()];
    for (i, partners) in links.to_primal.iter().enumerate() {
        let m = partners.len();
        let at = |l: usize| {
            let (j, k) = partners[l % m];
            vertex_at[j - 1][k - 1]
        };
        for l in 0..m {
            edges.push(Edge { kind: CurveKind::Alpha, curve: i + 1, index: l + 1, tail: at(l), head: at(l + 1) });
        }
        alpha_offsets.push(edges.len());
    }

    let mut diagram = CombinatorialDiagram {
        d,
        vertices,
        edges,
        faces: Vec::new(),
        components: Vec::new(),
        vertex_component: Vec::new(),
        beta_offsets,
        alpha_offsets,
    };
    label_components(&mut diagram);
    diagram.faces = trace(&diagram)?;
    summarize(&mut diagram);
    Ok(diagram)
}

/// Counter-clockwise half-edges around every vertex.
pub(super) fn rotations(diagram: &CombinatorialDiagram) -> Result<Vec<[usize; 4]>, DiagramError> {
    const NONE: usize = usize::MAX;
    // beta-out, beta-in, alpha-out, alpha-in
    let mut ends = vec![[NONE; 4]; diagram.vertices.len()];
    for (e, edge) in diagram.edges.iter().enumerate() {
        let (out_slot, in_slot) = match edge.kind {
            CurveKind::Beta => (0, 1),
            CurveKind::Alpha => (2, 3),
        };
        for (v, slot, half) in [(edge.tail, out_slot, 2 * e), (edge.head, in_slot, 2 * e + 1)] {
            if ends[v][slot] != NONE {
                return Err(DiagramError::Inconsistent(format!("vertex {v} is not 4-valent")));
            }
            ends[v][slot] = half;
        }
    }
    let mut out = Vec::with_capacity(ends.len());
    for (v, [bo, bi, ao, ai]) in ends.into_iter().enumerate() {
        if [bo, bi, ao, ai].contains(&NONE) {
            return Err(DiagramError::Inconsistent(format!("vertex {v} is not 4-valent")));
        }
        out.push(match diagram.vertices[v].sign {
            Sign::Pos => [bo, ao, bi, ai],
            Sign::Neg => [bo, ai, bi, ao],
        });
    }
    Ok(out)
}

/// Face orbits of the rotation system, each checked to be a good sequence.
pub(super) fn trace(diagram: &CombinatorialDiagram) -> Result<Vec<Face>, DiagramError> {
    let rot = rotations(diagram)?;
    let halves = 2 * diagram.edges.len();
    let mut slot = vec![(0usize, 0usize); halves];
    for (v, r) in rot.iter().enumerate() {
        for (s, &h) in r.iter().enumerate() {
            slot[h] = (v, s);
        }
    }
    // arriving through the far end of a dart, leave by the clockwise neighbour
    let next = |dart: Dart| {
        let (v, s) = slot[dart ^ 1];
        rot[v][(s + 3) % 4]
    };
    let mut seen = vec![false; halves];
    let mut faces = Vec::new();
    let alpha_start = diagram.alpha_offsets[0];
    for start in 2 * alpha_start..halves {
        if seen[start] {
            continue;
        }
        let mut darts = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            darts.push(cur);
            cur = next(cur);
        }
        if cur != start {
            return Err(DiagramError::NonPolygonal(format!("corner orbit from dart {start} does not close")));
        }
        let epsilon = good_sequence_sign(diagram, &darts).ok_or_else(|| {
            DiagramError::NonPolygonal(format!("corner signs along the face from dart {start} are not constant"))
        })?;
        let component = diagram.vertex_component.get(diagram.dart_start(start)).copied().unwrap_or(0);
        faces.push(Face { darts, epsilon, component });
    }
    if seen.iter().any(|&s| !s) {
        return Err(DiagramError::NonPolygonal("a beta edge side lies in no face".into()));
    }
    Ok(faces)
}

/// Constant corner sign of an alternating dart cycle, if there is one.
///
/// For consecutive darts `A, B, A'` (alpha, beta, alpha) with `B` from `v`
/// to `w`: `eps_v = eps_A eps_B s(v)` and `eps_w = -eps_A' eps_B s(w)`,
/// where `eps` of a dart is `+1` when it runs along its curve.
fn good_sequence_sign(diagram: &CombinatorialDiagram, darts: &[Dart]) -> Option<i8> {
    let n = darts.len();
    let dir = |d: Dart| if dart_forward(d) { 1i8 } else { -1 };
    let sign = |v: usize| diagram.vertices[v].sign.as_i64() as i8;
    let mut value = None;
    for t in 0..n {
        let b = darts[t];
        if diagram.edges[dart_edge(b)].kind != CurveKind::Beta {
            continue;
        }
        let a_prev = darts[(t + n - 1) % n];
        let a_next = darts[(t + 1) % n];
        let ev = dir(a_prev) * dir(b) * sign(diagram.dart_start(b));
        let ew = -dir(a_next) * dir(b) * sign(diagram.dart_end(b));
        for e in [ev, ew] {
            if *value.get_or_insert(e) != e {
                return None;
            }
        }
    }
    value
}

fn label_components(diagram: &mut CombinatorialDiagram) {
    let n = diagram.vertices.len();
    let mut uf = UnionFind::new(n);
    for e in &diagram.edges {
        uf.union(e.tail, e.head);
    }
    // order components by their smallest beta index
    let mut keyed: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        let root = uf.find(v);
        let beta = diagram.vertices[v].beta;
        match keyed.iter_mut().find(|(r, _)| *r == root) {
            Some(entry) => entry.1 = entry.1.min(beta),
            None => keyed.push((root, beta)),
        }
    }
    keyed.sort_by_key(|&(_, beta)| beta);
    diagram.vertex_component = (0..n)
        .map(|v| {
            let root = uf.find(v);
            keyed.iter().position(|&(r, _)| r == root).expect("root listed")
        })
        .collect();
}

fn summarize(diagram: &mut CombinatorialDiagram) {
    let count = diagram.vertex_component.iter().copied().max().map_or(0, |c| c + 1);
    let mut comps = vec![
        ComponentSummary { vertices: 0, edges: 0, faces: 0, euler: 0, genus: 0, alphas: Vec::new(), betas: Vec::new() };
        count
    ];
    let mut alphas = vec![BTreeSet::new(); count];
    let mut betas = vec![BTreeSet::new(); count];
    for (v, vert) in diagram.vertices.iter().enumerate() {
        let c = diagram.vertex_component[v];
        comps[c].vertices += 1;
        alphas[c].insert(vert.alpha);
        betas[c].insert(vert.beta);
    }
    for e in &diagram.edges {
        comps[diagram.vertex_component[e.tail]].edges += 1;
    }
    for f in &diagram.faces {
        comps[f.component].faces += 1;
    }
    for (c, s) in comps.iter_mut().enumerate() {
        s.euler = s.vertices as i64 - s.edges as i64 + s.faces as i64;
        s.genus = (2 - s.euler) / 2;
        s.alphas = alphas[c].iter().copied().collect();
        s.betas = betas[c].iter().copied().collect();
    }
    diagram.components = comps;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{check_complement_connected, surface_invariants};
    use crate::moves::{apply_move, AcMove};

    #[test]
    fn trivial_is_a_torus() {
        let g = build_diagram(&DualPair::trivial()).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len(), g.faces.len()), (1, 2, 1));
        let (comps, totals) = surface_invariants(&g).unwrap();
        assert_eq!(totals.components, 1);
        assert_eq!((comps[0].euler, comps[0].genus), (0, 1));
        assert_eq!(g.faces[0].darts.len(), 4);
        assert_eq!(check_complement_connected(&g)[0], crate::diagram::ComplementCheck { alpha_ok: true, beta_ok: true });
    }

    #[test]
    fn z2_is_a_torus_with_two_faces() {
        for swapped in [false, true] {
            let g = build_diagram(&DualPair::z2(swapped)).unwrap();
            assert_eq!((g.vertices.len(), g.edges.len(), g.faces.len()), (2, 4, 2));
            assert_eq!(g.components[0].genus, 1);
            assert!(check_complement_connected(&g).iter().all(|c| c.alpha_ok && c.beta_ok));
        }
    }

    #[test]
    fn stabilization_adds_a_torus() {
        let s = apply_move(&DualPair::trivial(), AcMove::Move4Add).unwrap();
        let g = build_diagram(&s).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len(), g.faces.len()), (2, 4, 2));
        assert_eq!(g.components.len(), 2);
        assert!(g.components.iter().all(|c| c.euler == 0 && c.vertices == 1));
        assert_eq!(g.components[1].betas, vec![2]);
        assert_eq!(check_complement_connected(&g).len(), 2);
    }

    #[test]
    fn all_faces_share_one_sign() {
        let (_, pair) = crate::moves::random_walk(&DualPair::z2(true), 11, 25);
        let g = build_diagram(&pair).unwrap();
        assert!(g.faces.iter().all(|f| f.epsilon == -1));
        let corners: usize = g.faces.iter().map(|f| f.darts.len()).sum();
        assert_eq!(corners, 2 * g.edges.len());
    }

    #[test]
    fn empty_relator_is_a_free_curve() {
        let pair = DualPair::new(
            crate::presentation::BalancedPresentation::parse(&["a", ""]).unwrap(),
            crate::presentation::BalancedPresentation::parse(&["A", ""]).unwrap(),
            {
                let mut f = crate::dual_pair::CorrespondenceFamily::empty(2);
                f.f[0][0].insert(1, 1);
                f
            },
        )
        .unwrap();
        assert_eq!(build_diagram(&pair), Err(DiagramError::FreeCurve { kind: "beta", index: 2 }));
    }

    #[test]
    fn dump_reloads() {
        let (_, pair) = crate::moves::random_walk(&DualPair::trivial(), 4, 20);
        let g = build_diagram(&pair).unwrap();
        let back = CombinatorialDiagram::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let mut broken = g.clone();
        broken.vertices[0].sign = broken.vertices[0].sign.flip();
        assert!(broken.check_consistency().is_err());
    }
}
