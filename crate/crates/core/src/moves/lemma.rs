//! Occurrence sets and correspondences after a move, computed from the old
//! sets and maps by index arithmetic alone. No word is rewritten here; the
//! result is compared against direct scans of [`super::apply_move`] output.

use crate::dual_pair::{CorrespondenceFamily, DualPair, MapKind, PositionMap};
use crate::error::MoveError;
use crate::presentation::{occurrence_sets, OccurrenceSets};
use crate::word::Sign;

use super::{check_preconditions, AcMove};

/// Predicted data of the moved pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    /// Occurrence sets of `P1`.
    pub p: OccurrenceSets,
    /// Occurrence sets of `P1*` (indexed `[j-1][i-1]` for `b*_j` in `a*_i`).
    pub pstar: OccurrenceSets,
    pub family: CorrespondenceFamily,
    /// Relator lengths of `P1` and `P1*`.
    pub lengths: Vec<usize>,
    pub dual_lengths: Vec<usize>,
}

fn remap(set: &[usize], f: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&p| f(p)).collect();
    out.sort_unstable();
    out
}

fn remap_values(map: &PositionMap, f: impl Fn(usize) -> usize) -> PositionMap {
    map.iter().map(|(&k, &l)| (k, f(l))).collect()
}

pub fn predict(pair: &DualPair, mv: AcMove) -> Result<Prediction, MoveError> {
    check_preconditions(pair, mv)?;
    let d = pair.d();
    let occ = occurrence_sets(pair.p());
    let occ_star = occurrence_sets(pair.pstar());
    let fam = pair.family();
    let mut lengths: Vec<usize> = pair.p().relators().iter().map(|w| w.len()).collect();
    let mut dual_lengths: Vec<usize> = pair.pstar().relators().iter().map(|w| w.len()).collect();
    let mut p = occ.clone();
    let mut pstar = occ_star.clone();
    let mut family = fam.clone();

    match mv {
        AcMove::Move1 { i, j } => {
            let n = lengths[i - 1];
            // A'_li = A_li ∪ (A_lj + |b_i|), likewise for the inverse letters
            for l in 1..=d {
                for sign in [Sign::Pos, Sign::Neg] {
                    let shifted: Vec<usize> = occ.get(sign, l, j).iter().map(|&k| k + n).collect();
                    p.get_mut(sign, l, i).extend(shifted);
                }
            }
            lengths[i - 1] += lengths[j - 1];
            for l in 1..=d {
                // K = A*_jl ∪ Abar*_jl, ascending
                let mut ks: Vec<usize> =
                    occ_star.get(Sign::Pos, j, l).iter().chain(occ_star.get(Sign::Neg, j, l)).copied().collect();
                ks.sort_unstable();
                let neg_j = occ_star.get(Sign::Neg, j, l);
                // old position -> new position of the letter already there
                let moved = |pos: usize| {
                    let before = ks.partition_point(|&k| k < pos);
                    pos + before + usize::from(neg_j.binary_search(&pos).is_ok())
                };
                for g in 1..=d {
                    for sign in [Sign::Pos, Sign::Neg] {
                        *pstar.get_mut(sign, g, l) = remap(occ_star.get(sign, g, l), moved);
                    }
                }
                // inserted b*_i after each b*_j, inserted b*_i^-1 before each b*_j^-1
                let ins_pos: Vec<usize> = occ_star.get(Sign::Pos, j, l).iter().map(|&k| moved(k) + 1).collect();
                let ins_neg: Vec<usize> = neg_j.iter().map(|&k| moved(k) - 1).collect();
                pstar.get_mut(Sign::Pos, i, l).extend(ins_pos);
                pstar.get_mut(Sign::Neg, i, l).extend(ins_neg);
                dual_lengths[l - 1] += ks.len();

                for g in 1..=d {
                    for kind in [MapKind::F, MapKind::FBar] {
                        *family.map_mut(kind, l, g) = remap_values(fam.map(kind, l, g), moved);
                    }
                }
                let f_copies: Vec<(usize, usize)> =
                    fam.map(MapKind::F, l, j).iter().map(|(&k, &q)| (n + k, moved(q) - 1)).collect();
                let fbar_copies: Vec<(usize, usize)> =
                    fam.map(MapKind::FBar, l, j).iter().map(|(&k, &q)| (n + k, moved(q) + 1)).collect();
                family.map_mut(MapKind::F, l, i).extend(f_copies);
                family.map_mut(MapKind::FBar, l, i).extend(fbar_copies);
            }
        }
        AcMove::Move2 { i } => {
            let n = lengths[i - 1];
            let mirror = |k: usize| n + 1 - k;
            for l in 1..=d {
                // A'_li = |b_i| + 1 - Abar_li and the reverse
                *p.get_mut(Sign::Pos, l, i) = remap(occ.get(Sign::Neg, l, i), mirror);
                *p.get_mut(Sign::Neg, l, i) = remap(occ.get(Sign::Pos, l, i), mirror);
                *pstar.get_mut(Sign::Pos, i, l) = occ_star.get(Sign::Neg, i, l).to_vec();
                *pstar.get_mut(Sign::Neg, i, l) = occ_star.get(Sign::Pos, i, l).to_vec();
                let mirrored = |m: &PositionMap| m.iter().map(|(&k, &q)| (mirror(k), q)).collect();
                *family.map_mut(MapKind::F, l, i) = mirrored(fam.map(MapKind::FBar, l, i));
                *family.map_mut(MapKind::FBar, l, i) = mirrored(fam.map(MapKind::F, l, i));
            }
        }
        AcMove::Move3 { i, j, sign } => {
            let n = lengths[i - 1];
            let m = dual_lengths[j - 1];
            p.get_mut(sign, j, i).push(n + 1);
            p.get_mut(sign.flip(), j, i).push(n + 2);
            pstar.get_mut(Sign::Pos, i, j).push(m + 1);
            pstar.get_mut(Sign::Neg, i, j).push(m + 2);
            // the inserted a_j^+1 pairs with b*_i^-1 at m+2, a_j^-1 with b*_i at m+1
            let (pos_k, neg_k) = match sign {
                Sign::Pos => (n + 1, n + 2),
                Sign::Neg => (n + 2, n + 1),
            };
            family.map_mut(MapKind::F, j, i).insert(pos_k, m + 2);
            family.map_mut(MapKind::FBar, j, i).insert(neg_k, m + 1);
            lengths[i - 1] += 2;
            dual_lengths[j - 1] += 2;
        }
        AcMove::Move4Add => {
            let grow = |s: &OccurrenceSets| {
                let mut out = OccurrenceSets::empty(d + 1);
                for a in 0..d {
                    for b in 0..d {
                        out.positive[a][b] = s.positive[a][b].clone();
                        out.negative[a][b] = s.negative[a][b].clone();
                    }
                }
                out
            };
            p = grow(&occ);
            pstar = grow(&occ_star);
            p.positive[d][d] = vec![1];
            pstar.negative[d][d] = vec![1];
            let mut f = CorrespondenceFamily::empty(d + 1);
            for a in 0..d {
                for b in 0..d {
                    f.f[a][b] = fam.f[a][b].clone();
                    f.fbar[a][b] = fam.fbar[a][b].clone();
                }
            }
            f.f[d][d].insert(1, 1);
            family = f;
            lengths.push(1);
            dual_lengths.push(1);
        }
        AcMove::Move4Remove => {
            let shrink = |s: &OccurrenceSets| OccurrenceSets {
                positive: s.positive[..d - 1].iter().map(|r| r[..d - 1].to_vec()).collect(),
                negative: s.negative[..d - 1].iter().map(|r| r[..d - 1].to_vec()).collect(),
            };
            p = shrink(&occ);
            pstar = shrink(&occ_star);
            family = CorrespondenceFamily {
                f: fam.f[..d - 1].iter().map(|r| r[..d - 1].to_vec()).collect(),
                fbar: fam.fbar[..d - 1].iter().map(|r| r[..d - 1].to_vec()).collect(),
            };
            lengths.pop();
            dual_lengths.pop();
        }
        AcMove::Move5 { i, j, sign } => {
            let n = lengths[i - 1];
            // the final pair is a_j^s at n-1 and a_j^-s at n
            let (pos_k, neg_k) = match sign {
                Sign::Pos => (n - 1, n),
                Sign::Neg => (n, n - 1),
            };
            let q_neg = fam.map(MapKind::F, j, i)[&pos_k];
            let q_pos = fam.map(MapKind::FBar, j, i)[&neg_k];
            p.get_mut(Sign::Pos, j, i).retain(|&k| k != pos_k);
            p.get_mut(Sign::Neg, j, i).retain(|&k| k != neg_k);
            family.map_mut(MapKind::F, j, i).remove(&pos_k);
            family.map_mut(MapKind::FBar, j, i).remove(&neg_k);
            let moved = |q: usize| q - usize::from(q_neg < q) - usize::from(q_pos < q);
            for g in 1..=d {
                for s in [Sign::Pos, Sign::Neg] {
                    let kept: Vec<usize> =
                        pstar.get(s, g, j).iter().copied().filter(|&q| q != q_neg && q != q_pos).collect();
                    *pstar.get_mut(s, g, j) = remap(&kept, moved);
                }
                for kind in [MapKind::F, MapKind::FBar] {
                    let updated = remap_values(family.map(kind, j, g), moved);
                    *family.map_mut(kind, j, g) = updated;
                }
            }
            lengths[i - 1] -= 2;
            dual_lengths[j - 1] -= 2;
        }
    }
    p.sort();
    pstar.sort();
    Ok(Prediction { p, pstar, family, lengths, dual_lengths })
}

/// Compares a prediction with the scanned data of `moved`; returns the first
/// disagreement.
pub fn compare(prediction: &Prediction, moved: &DualPair) -> Result<(), String> {
    let lengths: Vec<usize> = moved.p().relators().iter().map(|w| w.len()).collect();
    if lengths != prediction.lengths {
        return Err(format!("relator lengths {lengths:?} vs predicted {:?}", prediction.lengths));
    }
    let dual_lengths: Vec<usize> = moved.pstar().relators().iter().map(|w| w.len()).collect();
    if dual_lengths != prediction.dual_lengths {
        return Err(format!("dual lengths {dual_lengths:?} vs predicted {:?}", prediction.dual_lengths));
    }
    if occurrence_sets(moved.p()) != prediction.p {
        return Err("occurrence sets of P1 differ".into());
    }
    if occurrence_sets(moved.pstar()) != prediction.pstar {
        return Err("occurrence sets of P1* differ".into());
    }
    if moved.family() != &prediction.family {
        return Err("correspondences differ".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::apply_move;

    fn check(pair: &DualPair, mv: AcMove) {
        let moved = apply_move(pair, mv).unwrap();
        let pred = predict(pair, mv).unwrap();
        compare(&pred, &moved).unwrap_or_else(|e| panic!("{mv} on {pair}: {e}"));
    }

    #[test]
    fn worked_examples() {
        let t = DualPair::trivial();
        let pred = predict(&t, AcMove::Move3 { i: 1, j: 1, sign: Sign::Pos }).unwrap();
        assert_eq!(pred.p.get(Sign::Pos, 1, 1), &[1, 2]);
        assert_eq!(pred.p.get(Sign::Neg, 1, 1), &[3]);
        assert_eq!(pred.pstar.get(Sign::Pos, 1, 1), &[2]);
        assert_eq!(pred.pstar.get(Sign::Neg, 1, 1), &[1, 3]);

        let pred = predict(&t, AcMove::Move2 { i: 1 }).unwrap();
        assert_eq!(pred.p.get(Sign::Neg, 1, 1), &[1]);

        let pred = predict(&t, AcMove::Move4Add).unwrap();
        assert_eq!(pred.p.get(Sign::Pos, 2, 2), &[1]);
        assert_eq!(pred.pstar.get(Sign::Neg, 2, 2), &[1]);
        assert!(pred.p.get(Sign::Pos, 1, 2).is_empty() && pred.p.get(Sign::Pos, 2, 1).is_empty());
    }

    #[test]
    fn formula_matches_rewrite_on_a_script() {
        let mut pair = DualPair::z2(true);
        for lit in ["m4+", "m3 2 1 +", "m1 1 2", "m1 2 1", "m2 2", "m3 1 2 -", "m1 2 1", "m4+", "m1 3 2"] {
            let mv: AcMove = lit.parse().unwrap();
            check(&pair, mv);
            pair = apply_move(&pair, mv).unwrap();
        }
        for mv in AcMove::all(pair.d()) {
            if check_preconditions(&pair, mv).is_ok() {
                check(&pair, mv);
            }
        }
    }
}
