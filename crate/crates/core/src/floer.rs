//! Combinatorial substrate of the Floer chain complex: generators, periodic
//! domains and domains connecting two generators. All linear algebra is over
//! the integers.

use serde::{Deserialize, Serialize};

use crate::completing::CompletingCurveSet;
use crate::diagram::{CombinatorialDiagram, CurveKind};
use crate::snf::SmithForm;

/// One marked face per diagram component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoints {
    pub faces: Vec<usize>,
}

impl MarkedPoints {
    /// The lowest-index face of each component.
    pub fn default_for(diagram: &CombinatorialDiagram) -> MarkedPoints {
        let faces = (0..diagram.components.len())
            .map(|c| diagram.faces.iter().position(|f| f.component == c).expect("component has a face"))
            .collect();
        MarkedPoints { faces }
    }

    pub fn validate(&self, diagram: &CombinatorialDiagram) -> Result<(), String> {
        if self.faces.len() != diagram.components.len() {
            return Err(format!("{} marked faces for {} components", self.faces.len(), diagram.components.len()));
        }
        for (c, &f) in self.faces.iter().enumerate() {
            match diagram.faces.get(f) {
                Some(face) if face.component == c => {}
                Some(_) => return Err(format!("marked face {f} is not in component {c}")),
                None => return Err(format!("marked face {f} does not exist")),
            }
        }
        Ok(())
    }
}

/// A tuple of crossings, one on each alpha curve, on distinct beta curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FloerGenerator {
    /// `sigma[i-1]` is the beta curve met by `alpha_i`.
    pub sigma: Vec<usize>,
    /// `points[i-1]` is the crossing vertex on `alpha_i`.
    pub points: Vec<usize>,
    /// Forced coordinate of each completing curve: the marked strand where
    /// its beta-arc crosses.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arcs: Vec<usize>,
}

/// `counts[i-1][j-1] = |alpha_i ∩ beta_j|`.
pub fn intersection_counts(diagram: &CombinatorialDiagram) -> Vec<Vec<usize>> {
    let mut counts = vec![vec![0; diagram.d]; diagram.d];
    for v in &diagram.vertices {
        counts[v.alpha - 1][v.beta - 1] += 1;
    }
    counts
}

/// Every generator, ordered by the alpha_1 vertex, then alpha_2, and so on.
pub fn enumerate_generators(diagram: &CombinatorialDiagram, completing: Option<&CompletingCurveSet>) -> Vec<FloerGenerator> {
    let d = diagram.d;
    let mut on_alpha: Vec<Vec<usize>> = vec![Vec::new(); d];
    for l in 0..diagram.vertices.len() {
        on_alpha[diagram.vertices[l].alpha - 1].push(l);
    }
    let arcs: Vec<usize> = completing.map_or_else(Vec::new, |s| s.curves.iter().map(|c| c.marked).collect());
    let mut out = Vec::new();
    let mut used = vec![false; d + 1];
    let mut points = Vec::with_capacity(d);
    fn go(
        diagram: &CombinatorialDiagram,
        on_alpha: &[Vec<usize>],
        used: &mut [bool],
        points: &mut Vec<usize>,
        arcs: &[usize],
        out: &mut Vec<FloerGenerator>,
    ) {
        let i = points.len();
        if i == on_alpha.len() {
            out.push(FloerGenerator {
                sigma: points.iter().map(|&v| diagram.vertices[v].beta).collect(),
                points: points.clone(),
                arcs: arcs.to_vec(),
            });
            return;
        }
        for &v in &on_alpha[i] {
            let j = diagram.vertices[v].beta;
            if used[j] {
                continue;
            }
            used[j] = true;
            points.push(v);
            go(diagram, on_alpha, used, points, arcs, out);
            points.pop();
            used[j] = false;
        }
    }
    go(diagram, &on_alpha, &mut used, &mut points, &arcs, &mut out);
    out
}

/// Rows of `A x = b` with one unknown per face plus `extra` trailing ones.
struct System {
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
    cols: usize,
}

impl System {
    fn new(cols: usize) -> System {
        System { rows: Vec::new(), rhs: Vec::new(), cols }
    }

    fn push(&mut self, terms: &[(usize, i64)], rhs: i64) {
        let mut row = vec![0; self.cols];
        for &(c, x) in terms {
            row[c] += x;
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    fn smith(&self) -> SmithForm {
        SmithForm::new(&self.rows, self.cols)
    }
}

/// Multiplicity of edge `e` in the boundary of a domain: the coefficient to
/// its left minus the one to its right.
fn jump_terms(dart_faces: &[usize], e: usize, sign: i64) -> [(usize, i64); 2] {
    [(dart_faces[2 * e], sign), (dart_faces[2 * e + 1], -sign)]
}

/// Basis of the periodic domains, those whose boundary is a sum of whole
/// alpha and beta curves. With `marked`, the coefficient of every marked
/// face is zero.
pub fn periodic_domains(diagram: &CombinatorialDiagram, marked: Option<&MarkedPoints>) -> Vec<Vec<i64>> {
    let nf = diagram.faces.len();
    let curve_col = |kind: CurveKind, c: usize| match kind {
        CurveKind::Beta => nf + c - 1,
        CurveKind::Alpha => nf + diagram.d + c - 1,
    };
    let dart_faces = diagram.dart_faces();
    let mut sys = System::new(nf + 2 * diagram.d);
    for (e, edge) in diagram.edges.iter().enumerate() {
        let [l, r] = jump_terms(&dart_faces, e, 1);
        sys.push(&[l, r, (curve_col(edge.kind, edge.curve), -1)], 0);
    }
    if let Some(z) = marked {
        for &f in &z.faces {
            sys.push(&[(f, 1)], 0);
        }
    }
    if sys.rows.is_empty() {
        sys.push(&[], 0);
    }
    // the face part determines the curve multipliers, so projecting keeps a basis
    sys.smith().kernel().into_iter().map(|v| v[..nf].to_vec()).collect()
}

/// A domain from `x` to `y` avoiding the marked faces, if the corner
/// conditions are solvable over the integers.
///
/// At each crossing `p` on `alpha_i`, with boundary multiplicities `m_in` and
/// `m_out` of the alpha edges entering and leaving `p`, the domain must
/// satisfy `m_in - m_out = [p in y] - [p in x]`.
pub fn domain_between(
    diagram: &CombinatorialDiagram,
    x: &FloerGenerator,
    y: &FloerGenerator,
    marked: Option<&MarkedPoints>,
) -> Option<Vec<i64>> {
    let nf = diagram.faces.len();
    let dart_faces = diagram.dart_faces();
    let mut alpha_in = vec![0; diagram.vertices.len()];
    let mut alpha_out = vec![0; diagram.vertices.len()];
    for (e, edge) in diagram.edges.iter().enumerate() {
        if edge.kind == CurveKind::Alpha {
            alpha_out[edge.tail] = e;
            alpha_in[edge.head] = e;
        }
    }
    let mut sys = System::new(nf);
    for p in 0..diagram.vertices.len() {
        let mut terms = jump_terms(&dart_faces, alpha_in[p], 1).to_vec();
        terms.extend(jump_terms(&dart_faces, alpha_out[p], -1));
        let rhs = i64::from(y.points.contains(&p)) - i64::from(x.points.contains(&p));
        sys.push(&terms, rhs);
    }
    if let Some(z) = marked {
        for &f in &z.faces {
            sys.push(&[(f, 1)], 0);
        }
    }
    sys.smith().solve(&sys.rhs)
}

/// Boundary of a face domain as edge multiplicities.
pub fn domain_boundary(diagram: &CombinatorialDiagram, domain: &[i64]) -> Vec<i64> {
    let dart_faces = diagram.dart_faces();
    (0..diagram.edges.len())
        .map(|e| domain[dart_faces[2 * e]] - domain[dart_faces[2 * e + 1]])
        .collect()
}

/// Whether a domain's boundary is a sum of whole alpha and beta curves.
pub fn is_periodic(diagram: &CombinatorialDiagram, domain: &[i64]) -> bool {
    let boundary = domain_boundary(diagram, domain);
    let mut mult: std::collections::BTreeMap<(CurveKind, usize), i64> = Default::default();
    diagram
        .edges
        .iter()
        .zip(&boundary)
        .all(|(edge, &m)| *mult.entry((edge.kind, edge.curve)).or_insert(m) == m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloerReport {
    pub generators: usize,
    pub periodic_rank: usize,
    pub periodic_rank_with_marked: usize,
    pub marked: MarkedPoints,
}

pub fn floer_report(diagram: &CombinatorialDiagram, completing: Option<&CompletingCurveSet>) -> FloerReport {
    let marked = MarkedPoints::default_for(diagram);
    FloerReport {
        generators: enumerate_generators(diagram, completing).len(),
        periodic_rank: periodic_domains(diagram, None).len(),
        periodic_rank_with_marked: periodic_domains(diagram, Some(&marked)).len(),
        marked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build_diagram;
    use crate::dual_pair::DualPair;
    use crate::moves::{apply_move, random_walk, AcMove};

    #[test]
    fn seed_examples() {
        let g = build_diagram(&DualPair::trivial()).unwrap();
        let z = MarkedPoints::default_for(&g);
        assert_eq!(enumerate_generators(&g, None).len(), 1);
        assert!(periodic_domains(&g, Some(&z)).is_empty());

        let g = build_diagram(&DualPair::z2(false)).unwrap();
        let z = MarkedPoints::default_for(&g);
        assert_eq!(enumerate_generators(&g, None).len(), 2);
        assert!(periodic_domains(&g, Some(&z)).is_empty());

        let two = apply_move(&DualPair::trivial(), AcMove::Move4Add).unwrap();
        let g = build_diagram(&two).unwrap();
        let z = MarkedPoints::default_for(&g);
        assert_eq!(enumerate_generators(&g, None).len(), 1);
        assert!(periodic_domains(&g, Some(&z)).is_empty());
        assert_eq!(periodic_domains(&g, None).len(), 2);
    }

    #[test]
    fn z2_domain_by_hand() {
        let g = build_diagram(&DualPair::z2(false)).unwrap();
        let gens = enumerate_generators(&g, None);
        let (x, y) = (&gens[0], &gens[1]);
        assert_eq!(domain_between(&g, x, x, None), Some(vec![0, 0]));
        let z = MarkedPoints::default_for(&g);
        // every coefficient pair in a box, checked against the corner rule
        let corner_ok = |dom: [i64; 2]| {
            let boundary = domain_boundary(&g, &dom);
            (0..g.vertices.len()).all(|p| {
                let e_in = g.edges.iter().position(|e| e.kind == CurveKind::Alpha && e.head == p).unwrap();
                let e_out = g.edges.iter().position(|e| e.kind == CurveKind::Alpha && e.tail == p).unwrap();
                let want = i64::from(y.points.contains(&p)) - i64::from(x.points.contains(&p));
                boundary[e_in] - boundary[e_out] == want
            })
        };
        let boxed: Vec<[i64; 2]> = (-4i64..=4).flat_map(|a| (-4i64..=4).map(move |b| [a, b])).collect();
        let free = boxed.iter().any(|&dom| corner_ok(dom));
        let pinned = boxed.iter().any(|&dom| dom[z.faces[0]] == 0 && corner_ok(dom));
        assert_eq!(domain_between(&g, x, y, None).is_some(), free);
        assert_eq!(domain_between(&g, x, y, Some(&z)).is_some(), pinned);
        // the two generators differ by the torsion class: the jump would have to be 1/2
        assert!(!free);
    }

    #[test]
    fn domains_compose_to_periodic() {
        for seed in 0..10 {
            let (_, pair) = random_walk(&DualPair::z2(true), seed, 8);
            let g = build_diagram(&pair).unwrap();
            let gens = enumerate_generators(&g, None);
            for basis in [periodic_domains(&g, None), periodic_domains(&g, Some(&MarkedPoints::default_for(&g)))] {
                assert!(basis.iter().all(|p| is_periodic(&g, p)));
            }
            for x in gens.iter().take(4) {
                for y in gens.iter().take(4) {
                    if let (Some(a), Some(b)) = (domain_between(&g, x, y, None), domain_between(&g, y, x, None)) {
                        let sum: Vec<i64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
                        assert!(is_periodic(&g, &sum), "seed {seed}");
                    }
                }
            }
        }
    }

    #[test]
    fn marked_faces_give_a_sublattice() {
        let (_, pair) = random_walk(&DualPair::trivial(), 6, 25);
        let g = build_diagram(&pair).unwrap();
        let z = MarkedPoints::default_for(&g);
        z.validate(&g).unwrap();
        let all = periodic_domains(&g, None);
        let with = periodic_domains(&g, Some(&z));
        assert!(with.len() <= all.len() && all.len() - with.len() <= g.components.len());
        assert!(with.iter().all(|p| z.faces.iter().all(|&f| p[f] == 0)));
        assert!(MarkedPoints { faces: vec![] }.validate(&g).is_err());
    }
}
