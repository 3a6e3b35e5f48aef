//! Combinatorial Heegaard diagrams: the 4-valent intersection graph of the
//! alpha and beta curves together with its polygon faces.
//!
//! Conventions:
//!
//! * Edge `k` of a curve runs from its crossing at position `k` to the one at
//!   `k + 1` (cyclically); beta edges are numbered first, then alpha edges.
//! * Half-edge `2e` is the tail end of edge `e`, `2e + 1` the head end. A dart
//!   is identified with the half-edge it leaves from, so dart `2e` runs
//!   forward along `e` and dart `2e + 1` backward.
//! * Counter-clockwise rotation at a crossing with letter sign `+` is
//!   `[beta-out, alpha-out, beta-in, alpha-in]`, with sign `-` it is
//!   `[beta-out, alpha-in, beta-in, alpha-out]`. So at a positive crossing
//!   alpha passes from the right of beta to its left.
//! * Faces keep the region on their left.

mod build;
pub mod dot;
pub mod read;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{DiagramError, FormatError};
use crate::word::Sign;

pub use build::build_diagram;
pub use read::{read_dual_pair, roundtrip_check, Basepoints};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Alpha,
    Beta,
}

/// One crossing of `alpha_i` with `beta_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub alpha: usize,
    pub beta: usize,
    /// Position of the letter in `b_j`.
    pub beta_pos: usize,
    /// Position of the partner letter in `a*_i`.
    pub alpha_pos: usize,
    pub sign: Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub kind: CurveKind,
    pub curve: usize,
    /// 1-based; the edge leaves the crossing at this position.
    pub index: usize,
    pub tail: usize,
    pub head: usize,
}

pub type Dart = usize;

pub fn dart_edge(d: Dart) -> usize {
    d / 2
}

pub fn dart_forward(d: Dart) -> bool {
    d % 2 == 0
}

/// A polygon: darts in boundary order, alternating alpha and beta.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub darts: Vec<Dart>,
    /// The common value of the corner signs.
    pub epsilon: i8,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub genus: i64,
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialDiagram {
    pub d: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub components: Vec<ComponentSummary>,
    /// Component of every vertex.
    pub vertex_component: Vec<usize>,
    /// First edge id of each beta curve, then of each alpha curve.
    pub beta_offsets: Vec<usize>,
    pub alpha_offsets: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceTotals {
    pub components: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementCheck {
    pub alpha_ok: bool,
    pub beta_ok: bool,
}

impl CombinatorialDiagram {
    pub fn beta_len(&self, j: usize) -> usize {
        self.beta_offsets[j] - self.beta_offsets[j - 1]
    }

    pub fn alpha_len(&self, i: usize) -> usize {
        self.alpha_offsets[i] - self.alpha_offsets[i - 1]
    }

    /// Edge id of edge `k` on `beta_j`.
    pub fn beta_edge(&self, j: usize, k: usize) -> usize {
        self.beta_offsets[j - 1] + k - 1
    }

    pub fn alpha_edge(&self, i: usize, l: usize) -> usize {
        self.alpha_offsets[i - 1] + l - 1
    }

    /// Vertex a dart starts from.
    pub fn dart_start(&self, d: Dart) -> usize {
        let e = &self.edges[dart_edge(d)];
        if dart_forward(d) {
            e.tail
        } else {
            e.head
        }
    }

    pub fn dart_end(&self, d: Dart) -> usize {
        self.dart_start(d ^ 1)
    }

    /// Face containing each dart.
    pub fn dart_faces(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; 2 * self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            for &d in &face.darts {
                out[d] = f;
            }
        }
        out
    }

    /// Faces to the left and right of an edge.
    pub fn edge_sides(&self, dart_faces: &[usize], e: usize) -> (usize, usize) {
        (dart_faces[2 * e], dart_faces[2 * e + 1])
    }

    /// Vertices of `alpha_i` met by `beta_j`.
    pub fn intersections(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].alpha == i && self.vertices[v].beta == j)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    /// Parses a dump and checks it for internal consistency.
    pub fn from_json(text: &str) -> Result<CombinatorialDiagram, FormatError> {
        let diagram: CombinatorialDiagram = serde_json::from_str(text)?;
        diagram
            .check_consistency()
            .map_err(|e| FormatError::Presentation(e.to_string()))?;
        Ok(diagram)
    }

    /// Structural checks for diagrams that did not come from the builder.
    pub fn check_consistency(&self) -> Result<(), DiagramError> {
        let bad = |s: String| Err(DiagramError::Inconsistent(s));
        let v = self.vertices.len();
        if self.edges.len() != 2 * v {
            return bad(format!("{} edges for {v} vertices", self.edges.len()));
        }
        if self.beta_offsets.len() != self.d + 1 || self.alpha_offsets.len() != self.d + 1 {
            return bad("curve offsets do not match d".into());
        }
        for (id, e) in self.edges.iter().enumerate() {
            if e.tail >= v || e.head >= v {
                return bad(format!("edge {id} has an endpoint out of range"));
            }
            let (offsets, kind) = match e.kind {
                CurveKind::Beta => (&self.beta_offsets, "beta"),
                CurveKind::Alpha => (&self.alpha_offsets, "alpha"),
            };
            if e.curve == 0 || e.curve > self.d || offsets[e.curve - 1] + e.index - 1 != id {
                return bad(format!("{kind} edge {id} is out of place"));
            }
        }
        let mut used = vec![false; 2 * self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            let n = face.darts.len();
            if n == 0 || n % 2 == 1 {
                return bad(format!("face {f} has {n} sides"));
            }
            for (t, &dart) in face.darts.iter().enumerate() {
                if dart >= used.len() || std::mem::replace(&mut used[dart], true) {
                    return bad(format!("dart {dart} of face {f} is repeated or out of range"));
                }
                let next = face.darts[(t + 1) % n];
                if next >= used.len() || self.dart_end(dart) != self.dart_start(next) {
                    return bad(format!("face {f} is not a closed walk"));
                }
                if self.edges[dart_edge(dart)].kind == self.edges[dart_edge(next)].kind {
                    return bad(format!("face {f} does not alternate"));
                }
            }
        }
        if used.iter().any(|&u| !u) {
            return bad("some dart lies in no face".into());
        }
        let rebuilt = build::trace(self)?;
        if rebuilt.iter().map(|f| &f.darts).ne(self.faces.iter().map(|f| &f.darts)) {
            return bad("faces disagree with the crossing signs".into());
        }
        Ok(())
    }

    /// Faces as cyclic sequences of `(alpha, alpha_pos)` crossing keys, each
    /// rotated to its least form, sorted. Unchanged by reversing a beta curve.
    pub fn unoriented_signature(&self) -> Vec<Vec<(usize, usize)>> {
        let mut faces: Vec<Vec<(usize, usize)>> = self
            .faces
            .iter()
            .map(|f| {
                let keys: Vec<(usize, usize)> = f
                    .darts
                    .iter()
                    .map(|&d| {
                        let v = &self.vertices[self.dart_start(d)];
                        (v.alpha, v.alpha_pos)
                    })
                    .collect();
                (0..keys.len())
                    .map(|r| {
                        let mut k = keys[r..].to_vec();
                        k.extend_from_slice(&keys[..r]);
                        k
                    })
                    .min()
                    .unwrap_or_default()
            })
            .collect();
        faces.sort();
        faces
    }
}

/// Per-component counts and the totals.
pub fn surface_invariants(
    diagram: &CombinatorialDiagram,
) -> Result<(Vec<ComponentSummary>, SurfaceTotals), DiagramError> {
    for (c, s) in diagram.components.iter().enumerate() {
        if s.euler % 2 != 0 || s.euler > 2 {
            return Err(DiagramError::Inconsistent(format!(
                "component {c} has Euler characteristic {}",
                s.euler
            )));
        }
    }
    let totals = SurfaceTotals {
        components: diagram.components.len(),
        vertices: diagram.vertices.len(),
        edges: diagram.edges.len(),
        faces: diagram.faces.len(),
        euler: diagram.components.iter().map(|s| s.euler).sum(),
    };
    Ok((diagram.components.clone(), totals))
}

/// Whether cutting along all alpha (resp. beta) curves leaves each component
/// connected: faces glued across beta edges only (resp. alpha edges only).
pub fn check_complement_connected(diagram: &CombinatorialDiagram) -> Vec<ComplementCheck> {
    let dart_faces = diagram.dart_faces();
    let connected = |glue: CurveKind| {
        let mut uf = UnionFind::new(diagram.faces.len());
        for (e, edge) in diagram.edges.iter().enumerate() {
            if edge.kind == glue {
                let (l, r) = diagram.edge_sides(&dart_faces, e);
                uf.union(l, r);
            }
        }
        let mut roots: BTreeMap<usize, std::collections::BTreeSet<usize>> = BTreeMap::new();
        for (f, face) in diagram.faces.iter().enumerate() {
            roots.entry(face.component).or_default().insert(uf.find(f));
        }
        (0..diagram.components.len()).map(move |c| roots.get(&c).map_or(true, |s| s.len() == 1)).collect::<Vec<_>>()
    };
    let alpha_cut = connected(CurveKind::Beta);
    let beta_cut = connected(CurveKind::Alpha);
    alpha_cut
        .into_iter()
        .zip(beta_cut)
        .map(|(alpha_ok, beta_ok)| ComplementCheck { alpha_ok, beta_ok })
        .collect()
}

/// Disjoint sets with path halving.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
