//! Observed diagram change under a move, sorted into the five kinds of
//! change a move can make to the associated diagram.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{build_diagram, CombinatorialDiagram};
use crate::dual_pair::DualPair;
use crate::error::{DiagramError, MoveError};
use crate::moves::{apply_move, AcMove};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeClass {
    /// Handleslide or isotopy inside the surface.
    HeegaardMove,
    /// A 1-handle attached, plus a Heegaard move.
    HandleAttached,
    /// Only the orientation of one beta curve changed.
    OrientationFlip,
    /// A standard genus one component appeared.
    ComponentAdded,
    /// A standard genus one component disappeared.
    ComponentRemoved,
    /// A Heegaard move, plus a 1-handle removed.
    HandleRemoved,
    Unclassified(String),
}

impl fmt::Display for ChangeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChangeClass::HeegaardMove => f.write_str("Heegaard move"),
            ChangeClass::HandleAttached => f.write_str("1-handle attached plus Heegaard move"),
            ChangeClass::OrientationFlip => f.write_str("orientation flip only"),
            ChangeClass::ComponentAdded => f.write_str("component added, genus-1, V=1"),
            ChangeClass::ComponentRemoved => f.write_str("component removed, genus-1, V=1"),
            ChangeClass::HandleRemoved => f.write_str("Heegaard move plus 1-handle removed"),
            ChangeClass::Unclassified(why) => write!(f, "unclassified change: {why}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    #[serde(rename = "move")]
    pub mv: AcMove,
    pub euler_before: i64,
    pub euler_after: i64,
    pub components_before: usize,
    pub components_after: usize,
    pub class: ChangeClass,
}

impl CorrespondenceReport {
    pub fn delta_euler(&self) -> i64 {
        self.euler_after - self.euler_before
    }

    pub fn delta_components(&self) -> i64 {
        self.components_after as i64 - self.components_before as i64
    }

    pub fn is_classified(&self) -> bool {
        !matches!(self.class, ChangeClass::Unclassified(_))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorrespondError {
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn euler(g: &CombinatorialDiagram) -> i64 {
    g.components.iter().map(|c| c.euler).sum()
}

/// A component consisting of one crossing on a torus.
fn is_standard_torus(g: &CombinatorialDiagram, c: usize) -> bool {
    let s = &g.components[c];
    s.vertices == 1 && s.euler == 0 && s.genus == 1
}

pub fn correspond(pair: &DualPair, mv: AcMove) -> Result<CorrespondenceReport, CorrespondError> {
    let after_pair = apply_move(pair, mv)?;
    let before = build_diagram(pair)?;
    let after = build_diagram(&after_pair)?;
    let de = euler(&after) - euler(&before);
    let dc = after.components.len() as i64 - before.components.len() as i64;
    let class = match mv {
        AcMove::Move1 { .. } | AcMove::Move3 { .. } => match (de, dc) {
            (0, 0) => ChangeClass::HeegaardMove,
            (-2, 0) | (-2, -1) => ChangeClass::HandleAttached,
            _ => ChangeClass::Unclassified(format!("delta chi {de}, delta components {dc}")),
        },
        AcMove::Move5 { .. } => match (de, dc) {
            (0, 0) => ChangeClass::HeegaardMove,
            (2, 0) | (2, 1) => ChangeClass::HandleRemoved,
            _ => ChangeClass::Unclassified(format!("delta chi {de}, delta components {dc}")),
        },
        AcMove::Move2 { .. } => {
            if before.unoriented_signature() == after.unoriented_signature() {
                ChangeClass::OrientationFlip
            } else {
                ChangeClass::Unclassified("unoriented diagram changed".into())
            }
        }
        AcMove::Move4Add => {
            let last = after.components.len() - 1;
            if dc == 1 && de == 0 && is_standard_torus(&after, last) && after.components[last].betas == vec![after_pair.d()] {
                ChangeClass::ComponentAdded
            } else {
                ChangeClass::Unclassified("no new standard torus".into())
            }
        }
        AcMove::Move4Remove => {
            let last = before.components.len() - 1;
            if dc == -1 && de == 0 && is_standard_torus(&before, last) {
                ChangeClass::ComponentRemoved
            } else {
                ChangeClass::Unclassified("no standard torus removed".into())
            }
        }
    };
    Ok(CorrespondenceReport {
        mv,
        euler_before: euler(&before),
        euler_after: euler(&after),
        components_before: before.components.len(),
        components_after: after.components.len(),
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Sign;

    #[test]
    fn examples() {
        let r = correspond(&DualPair::z2(false), AcMove::Move2 { i: 1 }).unwrap();
        assert_eq!(r.class, ChangeClass::OrientationFlip);
        assert_eq!(r.delta_euler(), 0);

        let r = correspond(&DualPair::trivial(), AcMove::Move4Add).unwrap();
        assert_eq!(r.class, ChangeClass::ComponentAdded);
        assert_eq!(r.class.to_string(), "component added, genus-1, V=1");

        let r = correspond(&DualPair::trivial(), AcMove::Move3 { i: 1, j: 1, sign: Sign::Pos }).unwrap();
        assert!(matches!(r.delta_euler(), 0 | -2));
        assert!(r.is_classified());
    }
}
