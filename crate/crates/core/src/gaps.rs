//! Gap sequences at the places of Ω.
//!
//! The differential x^{k−1} y^{l−q−1} dx is regular exactly when (k, l) is an
//! interior lattice point of Δ = conv{(0, q+1), (2i, 0), (2i+2, 0)}. The gaps
//! at Q_∞, Q_0 and Q_α are read off from Δ° and the two sub-triangles Δ₁, Δ₂.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::curve::CurveIndex;
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, Triangle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PlaceClass {
    Infinity,
    Zero,
    Alpha,
}

impl PlaceClass {
    pub const ALL: [PlaceClass; 3] = [PlaceClass::Infinity, PlaceClass::Zero, PlaceClass::Alpha];

    pub fn name(self) -> &'static str {
        match self {
            PlaceClass::Infinity => "inf",
            PlaceClass::Zero => "zero",
            PlaceClass::Alpha => "alpha",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapSet {
    pub place_class: PlaceClass,
    pub gaps: Vec<i64>,
}

impl GapSet {
    pub fn contains(&self, n: i64) -> bool {
        self.gaps.binary_search(&n).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Triangles {
    pub delta: Triangle,
    pub delta1: Triangle,
    pub delta2: Triangle,
}

pub fn triangles_for(c: &CurveIndex) -> Triangles {
    let (q, d, i) = (c.q as i64, c.d as i64, c.i as i64);
    let tri = |a, b, c| Triangle::new(a, b, c).expect("non-degenerate by construction");
    Triangles {
        delta: tri((0, q + 1), (2 * i, 0), (2 * (i + 1), 0)),
        delta1: tri((i + 1, d), (2 * i + 1, 0), (2 * (i + 1), 0)),
        delta2: tri((i, d), (2 * i, 0), (2 * i + 1, 0)),
    }
}

/// The two constituent lists whose union is the gap sequence, before any
/// deduplication.
pub fn gap_parts(c: &CurveIndex, place: PlaceClass) -> (Vec<i64>, Vec<i64>) {
    let (q, d, i) = (c.q as i64, c.d as i64, c.i as i64);
    let t = triangles_for(c);
    let delta = t.delta.interior_points();
    let below = |&&(_, l): &&LatticePoint| l < d;
    match place {
        PlaceClass::Infinity => {
            let val = |(k, l): LatticePoint| -k * d - (l - q - 1) * (i + 1);
            let first = delta.iter().filter(below).map(|&p| val(p)).collect();
            let second = t.delta1.interior_points().into_iter().map(|p| val(p) + q + 1).collect();
            (first, second)
        }
        PlaceClass::Zero => {
            let val = |(k, l): LatticePoint| k * d + (l - q - 1) * i;
            let first = delta.iter().filter(below).map(|&p| val(p)).collect();
            let second = t.delta2.interior_points().into_iter().map(|p| val(p) + q + 1).collect();
            (first, second)
        }
        PlaceClass::Alpha => {
            let inner: BTreeSet<LatticePoint> = t.delta1.interior_points().into_iter().collect();
            let first = delta.iter().filter(|p| !inner.contains(p)).map(|&(_, l)| l).collect();
            let second = inner.iter().map(|&(_, l)| l + q + 1).collect();
            (first, second)
        }
    }
}

/// Gap sequence at the place class, sorted. Any repeated value is an error:
/// the two lists must be internally distinct and mutually disjoint.
pub fn gap_set(c: &CurveIndex, place: PlaceClass) -> Result<GapSet> {
    let (first, second) = gap_parts(c, place);
    let mut seen = BTreeSet::new();
    for &g in first.iter().chain(&second) {
        if !seen.insert(g) {
            return Err(Error::Internal(format!("gap value {g} produced twice for {c}, place {}", place.name())));
        }
    }
    Ok(GapSet { place_class: place, gaps: seen.into_iter().collect() })
}

/// |Δ°| by enumeration, cross-checked against Pick's theorem.
pub fn genus_by_pick(c: &CurveIndex) -> Result<u64> {
    let delta = triangles_for(c).delta;
    let enumerated = delta.interior_points().len() as i64;
    let pick = delta.interior_count_by_pick();
    if enumerated != pick {
        return Err(Error::Internal(format!("interior count {enumerated} disagrees with Pick value {pick} for {c}")));
    }
    Ok(enumerated as u64)
}

/// [0, 2g] with the gaps removed.
pub fn nongaps(gaps: &GapSet, genus: u64) -> Vec<i64> {
    let top = 2 * genus as i64;
    (0..=top).filter(|n| !gaps.contains(*n)).collect()
}

/// Closure check on the nongaps up to 2g; everything above 2g is a nongap.
pub fn is_numerical_semigroup(nongap_set: &[i64], genus: u64) -> bool {
    let top = 2 * genus as i64;
    let members: BTreeSet<i64> = nongap_set.iter().copied().collect();
    if !members.contains(&0) {
        return false;
    }
    for &a in &members {
        for &b in &members {
            if a + b > top {
                break;
            }
            if !members.contains(&(a + b)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{indices_for_q, validate_index};

    #[test]
    fn triangle_vertices_for_q13_i1() {
        let t = triangles_for(&validate_index(13, 1).unwrap());
        assert_eq!(t.delta.vertices, [(0, 14), (2, 0), (4, 0)]);
        assert_eq!(t.delta1.vertices, [(2, 7), (3, 0), (4, 0)]);
        assert_eq!(t.delta2.vertices, [(1, 7), (2, 0), (3, 0)]);
        assert_eq!(t.delta.interior_points().len(), 12);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_by_pick(&validate_index(13, 1).unwrap()).unwrap(), 12);
        assert_eq!(genus_by_pick(&validate_index(13, 2).unwrap()).unwrap(), 12);
        assert_eq!(genus_by_pick(&validate_index(9, 1).unwrap()).unwrap(), 8);
    }

    #[test]
    fn d_plus_two_membership_q13() {
        let c = validate_index(13, 1).unwrap();
        assert!(gap_set(&c, PlaceClass::Zero).unwrap().contains(9));
        assert!(gap_set(&c, PlaceClass::Alpha).unwrap().contains(9));
        assert!(!gap_set(&c, PlaceClass::Infinity).unwrap().contains(9));
    }

    #[test]
    fn point_2i_plus_1_1_gives_known_gaps() {
        for q in [9u64, 13, 17, 25, 29, 37] {
            for c in indices_for_q(q).unwrap() {
                let (d, i) = (c.d as i64, c.i as i64);
                assert!(triangles_for(&c).delta.contains_strictly((2 * i + 1, 1)));
                assert!(gap_set(&c, PlaceClass::Zero).unwrap().contains(d + i));
                assert!(gap_set(&c, PlaceClass::Infinity).unwrap().contains(d - i - 1));
            }
        }
    }

    #[test]
    fn nongap_edges() {
        let c = validate_index(13, 1).unwrap();
        let inf = gap_set(&c, PlaceClass::Infinity).unwrap();
        let ng = nongaps(&inf, 12);
        assert!(ng.contains(&0) && ng.contains(&24));
        let zero = gap_set(&c, PlaceClass::Zero).unwrap();
        assert!(!nongaps(&zero, 12).contains(&1));
    }

    #[test]
    fn semigroup_check_rejects_non_closed_sets() {
        assert!(is_numerical_semigroup(&[0, 2, 4, 5, 6, 7, 8], 4));
        assert!(!is_numerical_semigroup(&[0, 3, 4, 5, 7, 8], 4));
        assert!(!is_numerical_semigroup(&[2, 4], 4));
    }
}
