//! Isomorphism arithmetic modulo d.
//!
//! Two canonical indices i₁, i₂ ∈ [1, (d−1)/2] name isomorphic fields iff
//! they are equal or one of
//!
//! ```text
//! i₁i₂ ≡ 1,  i₁i₂ + i₁ + i₂ ≡ 0,  i₁i₂ + i₁ + 1 ≡ 0,  i₁i₂ + i₂ + 1 ≡ 0  (mod d)
//! ```
//!
//! holds. The first condition is sometimes printed as i₁i₂ ≡ 0, which can
//! never hold under gcd(i(i+1), d) = 1; the explicit isomorphism behind it
//! uses i₁i₂ ≡ 1.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{gcd, mod_inverse, reduce_mod, FactoredInt};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Congruence {
    /// ij ≡ 1
    Inverse,
    /// ij + i + 1 ≡ 0
    PlusFirst,
    /// ij + i + j ≡ 0
    PlusBoth,
    /// ij + j + 1 ≡ 0
    PlusSecond,
}

impl Congruence {
    pub const ALL: [Congruence; 4] =
        [Congruence::Inverse, Congruence::PlusFirst, Congruence::PlusBoth, Congruence::PlusSecond];

    /// Position in the usual (1)–(4) numbering.
    pub fn number(self) -> u8 {
        match self {
            Congruence::Inverse => 1,
            Congruence::PlusFirst => 2,
            Congruence::PlusBoth => 3,
            Congruence::PlusSecond => 4,
        }
    }

    /// The integer whose divisibility by d is the condition.
    pub fn residue_numerator(self, i: i64, j: i64) -> i64 {
        match self {
            Congruence::Inverse => i * j - 1,
            Congruence::PlusFirst => i * j + i + 1,
            Congruence::PlusBoth => i * j + i + j,
            Congruence::PlusSecond => i * j + j + 1,
        }
    }

    pub fn holds(self, i: i64, j: i64, d: u64) -> bool {
        reduce_mod(self.residue_numerator(i, j), d) == 0
    }
}

/// Congruences satisfied by the ordered pair (i, j).
pub fn matching_congruences(i: i64, j: i64, d: u64) -> Vec<Congruence> {
    Congruence::ALL.into_iter().filter(|c| c.holds(i, j, d)).collect()
}

fn check_modulus(d: u64, min: u64) -> Result<()> {
    if d.is_multiple_of(2) || d < min {
        return Err(Error::InvalidParameter(format!("d = {d} must be odd and at least {min}")));
    }
    Ok(())
}

fn is_valid_residue(i: u64, d: u64) -> bool {
    gcd(i % d * ((i + 1) % d) % d, d) == 1
}

fn is_canonical(i: u64, d: u64) -> bool {
    (1..=(d - 1) / 2).contains(&i) && is_valid_residue(i, d)
}

/// {i ∈ [1, (d−1)/2] : gcd(i(i+1), d) = 1}.
pub fn valid_indices(d: u64) -> Result<Vec<u64>> {
    check_modulus(d, 5)?;
    Ok((1..=(d - 1) / 2).filter(|&i| is_valid_residue(i, d)).collect())
}

pub fn are_isomorphic(i1: u64, i2: u64, d: u64) -> Result<bool> {
    check_modulus(d, 5)?;
    for i in [i1, i2] {
        if !is_canonical(i, d) {
            return Err(Error::InvalidParameter(format!("{i} is not a canonical index for d = {d}")));
        }
    }
    Ok(i1 == i2 || !matching_congruences(i1 as i64, i2 as i64, d).is_empty())
}

/// The residues j (mod d) satisfying some congruence with i; each congruence
/// is linear in j so has exactly one solution.
fn partner_residues(i: u64, d: u64) -> Option<[u64; 4]> {
    let inv_i = mod_inverse(i, d)?;
    let inv_i1 = mod_inverse((i + 1) % d, d)?;
    let neg = |x: u64| (d - x % d) % d;
    let mul = |a: u64, b: u64| ((u128::from(a) * u128::from(b)) % u128::from(d)) as u64;
    Some([inv_i, neg(mul(i + 1, inv_i)), neg(mul(i, inv_i1)), neg(inv_i1)])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoPartition {
    pub d: u64,
    /// Each class sorted; classes ordered by their smallest member.
    pub classes: Vec<Vec<u64>>,
    pub singleton_indices: Vec<u64>,
    pub pair_class: Option<Vec<u64>>,
}

impl IsoPartition {
    pub fn class_of(&self, i: u64) -> Option<&Vec<u64>> {
        self.classes.iter().find(|c| c.contains(&i))
    }

    /// Histogram of class sizes.
    pub fn size_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.classes {
            *out.entry(c.len()).or_insert(0) += 1;
        }
        out
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Classes of valid canonical indices under the isomorphism relation.
///
/// Edges come from solving each congruence for the partner; the classes are
/// then checked pairwise against [`are_isomorphic`], so a relation that is
/// not already transitive is reported instead of silently closed.
pub fn partition_classes(d: u64) -> Result<IsoPartition> {
    check_modulus(d, 5)?;
    let valid = valid_indices(d)?;
    let pos: BTreeMap<u64, usize> = valid.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut parent: Vec<usize> = (0..valid.len()).collect();
    for (k, &i) in valid.iter().enumerate() {
        let partners = partner_residues(i, d)
            .ok_or_else(|| Error::Internal(format!("{i} or {} not invertible mod {d}", i + 1)))?;
        for j in partners {
            if let Some(&m) = pos.get(&j) {
                let (a, b) = (find(&mut parent, k), find(&mut parent, m));
                parent[a] = b;
            }
        }
    }
    let mut grouped: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (k, &i) in valid.iter().enumerate() {
        grouped.entry(find(&mut parent, k)).or_default().push(i);
    }
    let mut classes: Vec<Vec<u64>> = grouped.into_values().collect();
    classes.sort();
    for class in &classes {
        for &a in class {
            for &b in class {
                if !are_isomorphic(a, b, d)? {
                    return Err(Error::Internal(format!(
                        "isomorphism relation not transitive for d = {d}: {a} and {b} share class {class:?}"
                    )));
                }
            }
        }
    }
    let singleton_indices = classes.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    let pair_class = classes.iter().find(|c| c.len() == 2).cloned();
    Ok(IsoPartition { d, classes, singleton_indices, pair_class })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountMode {
    ClosedForm,
    BruteForce,
}

/// Solutions of i² + i + 1 ≡ 0 (mod d) with 1 ≤ i ≤ (d−3)/2.
pub fn pi_count(d: u64, mode: CountMode) -> Result<u64> {
    check_modulus(d, 7)?;
    match mode {
        CountMode::BruteForce => {
            // v tracks i² + i + 1 mod d; each step adds 2i + 2 < d
            let mut v = 3 % d;
            let mut count = 0;
            for i in 1..=(d - 3) / 2 {
                if v == 0 {
                    count += 1;
                }
                v += 2 * i + 2;
                if v >= d {
                    v -= d;
                }
            }
            Ok(count)
        }
        CountMode::ClosedForm => {
            let f = FactoredInt::new(d)?;
            let nine_divides = f.factors.iter().any(|&(p, e)| p == 3 && e >= 2);
            let m1 = f.primes().filter(|p| p % 3 == 1).count() as u32;
            let m2 = f.primes().filter(|p| p % 3 == 2).count();
            if nine_divides || m2 >= 1 {
                Ok(0)
            } else if m1 == 0 {
                Err(Error::Internal(format!("d = {d} has no prime ≡ 1 mod 3 and no obstruction")))
            } else {
                Ok(1 << (m1 - 1))
            }
        }
    }
}

/// #{i ∈ [0, d−1] : gcd(i(i+1), d) = 1}.
pub fn phi2(d: u64, mode: CountMode) -> Result<u64> {
    check_modulus(d, 5)?;
    match mode {
        CountMode::BruteForce => {
            // coprime[i] marks gcd(i, d) = 1; the divisors of d are found by
            // plain trial division so this path shares nothing with the
            // closed form.
            let n = d as usize;
            let mut coprime = vec![true; n];
            let mut rest = d;
            let mut p = 2u64;
            while rest > 1 {
                if p * p > rest {
                    p = rest;
                }
                if rest.is_multiple_of(p) {
                    for k in (0..n).step_by(p as usize) {
                        coprime[k] = false;
                    }
                    while rest.is_multiple_of(p) {
                        rest /= p;
                    }
                }
                p += 1;
            }
            let inner = coprime.windows(2).filter(|w| w[0] && w[1]).count();
            let wrap = usize::from(coprime[n - 1] && coprime[0]);
            Ok((inner + wrap) as u64)
        }
        CountMode::ClosedForm => {
            let f = FactoredInt::new(d)?;
            Ok(f.factors.iter().map(|&(p, e)| p.pow(e - 1) * (p - 2)).product())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassCountMode {
    /// (φ₂(d) + 4π(d) + 3) / 6 from the closed forms.
    Formula,
    /// Number of classes in [`partition_classes`].
    Enumeration,
}

pub fn class_count(d: u64, mode: ClassCountMode) -> Result<u64> {
    check_modulus(d, 7)?;
    match mode {
        ClassCountMode::Formula => {
            let num = phi2(d, CountMode::ClosedForm)? + 4 * pi_count(d, CountMode::ClosedForm)? + 3;
            if num % 6 != 0 {
                return Err(Error::Internal(format!("class count formula not integral for d = {d}: numerator {num}")));
            }
            Ok(num / 6)
        }
        ClassCountMode::Enumeration => Ok(partition_classes(d)?.classes.len() as u64),
    }
}

/// Canonical F_j index: the element of {j mod d, −j−2 mod d} lying in
/// [1, (d−3)/2], or d − 1 (the fixed point of j ↦ −j−2).
pub fn canonical_fj(j: i64, d: u64) -> Result<u64> {
    check_modulus(d, 5)?;
    let a = reduce_mod(j, d);
    let b = reduce_mod(-j - 2, d);
    let ok = |x: u64| {
        let in_range = (1..=(d - 3) / 2).contains(&x) || x == d - 1;
        in_range && gcd(x * ((x + 2) % d) % d, d) == 1
    };
    [a, b]
        .into_iter()
        .find(|&x| ok(x))
        .ok_or_else(|| Error::InvalidParameter(format!("F_{j} has no valid representative for d = {d}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SubfieldPattern {
    AllDistinct,
    TwoEqual,
    AllEqual,
}

/// How the fixed field of one involution of H_i was identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SubfieldCase {
    /// σ₀ : (x, y) ↦ (x, −y), generator y².
    Sigma0,
    /// i⁻¹ ≤ (d−1)/2, j = i⁻¹.
    Case1,
    /// i⁻¹ ≥ (d+1)/2, j = d − (i⁻¹ + 1).
    Case2,
    /// (i+1)⁻¹ ≤ (d−1)/2, j = (i+1)⁻¹ − 1.
    Case3,
    /// (i+1)⁻¹ ≥ (d+1)/2, j = d − (i+1)⁻¹.
    Case4,
}

impl SubfieldCase {
    pub const ALL: [SubfieldCase; 5] =
        [SubfieldCase::Sigma0, SubfieldCase::Case1, SubfieldCase::Case2, SubfieldCase::Case3, SubfieldCase::Case4];
}

/// The index j with F_i ⊇ F_j-shaped subfield for the given case, or
/// `CaseNotApplicable` when the case's condition on the inverse fails.
pub fn case_index(i: u64, d: u64, case: SubfieldCase) -> Result<u64> {
    let half = (d - 1) / 2;
    let not_applicable = || Error::CaseNotApplicable(format!("{case:?} for i = {i}, d = {d}"));
    match case {
        SubfieldCase::Sigma0 => Ok(i),
        SubfieldCase::Case1 | SubfieldCase::Case2 => {
            let j0 = mod_inverse(i, d).ok_or_else(not_applicable)?;
            match (case, j0 <= half) {
                (SubfieldCase::Case1, true) => Ok(j0),
                (SubfieldCase::Case2, false) => Ok(d - (j0 + 1)),
                _ => Err(not_applicable()),
            }
        }
        SubfieldCase::Case3 | SubfieldCase::Case4 => {
            let j0 = mod_inverse((i + 1) % d, d).ok_or_else(not_applicable)?;
            match (case, j0 <= half) {
                (SubfieldCase::Case3, true) => Ok(j0 - 1),
                (SubfieldCase::Case4, false) => Ok(d - j0),
                _ => Err(not_applicable()),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubfieldProfile {
    pub i: u64,
    pub d: u64,
    /// Canonical F_j indices for σ₀, the i⁻¹ case and the (i+1)⁻¹ case.
    pub fj_indices: [u64; 3],
    pub cases: [SubfieldCase; 3],
    pub pattern: SubfieldPattern,
}

impl SubfieldProfile {
    pub fn contains_fd_minus_1(&self) -> bool {
        self.fj_indices.contains(&(self.d - 1))
    }
}

pub fn subfield_indices(i: u64, d: u64) -> Result<SubfieldProfile> {
    check_modulus(d, 5)?;
    if !is_canonical(i, d) {
        return Err(Error::InvalidParameter(format!("{i} is not a canonical index for d = {d}")));
    }
    let inverse_case = [SubfieldCase::Case1, SubfieldCase::Case2]
        .into_iter()
        .find(|&c| case_index(i, d, c).is_ok())
        .ok_or_else(|| Error::Internal(format!("neither inverse case applies to i = {i}")))?;
    let shifted_case = [SubfieldCase::Case3, SubfieldCase::Case4]
        .into_iter()
        .find(|&c| case_index(i, d, c).is_ok())
        .ok_or_else(|| Error::Internal(format!("neither shifted case applies to i = {i}")))?;
    let cases = [SubfieldCase::Sigma0, inverse_case, shifted_case];
    let mut fj_indices = [0u64; 3];
    for (slot, &case) in fj_indices.iter_mut().zip(&cases) {
        let j = case_index(i, d, case)?;
        *slot = canonical_fj(2 * j as i64, d)?;
    }
    let mut distinct = fj_indices.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let pattern = match distinct.len() {
        3 => SubfieldPattern::AllDistinct,
        2 => SubfieldPattern::TwoEqual,
        _ => SubfieldPattern::AllEqual,
    };
    Ok(SubfieldProfile { i, d, fj_indices, cases, pattern })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_partition(d: u64) -> Vec<Vec<u64>> {
        let valid = valid_indices(d).unwrap();
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for &i in &valid {
            if classes.iter().any(|c| c.contains(&i)) {
                continue;
            }
            classes.push(valid.iter().copied().filter(|&j| are_isomorphic(i, j, d).unwrap()).collect());
        }
        classes
    }

    #[test]
    fn valid_index_examples() {
        assert_eq!(valid_indices(7).unwrap(), vec![1, 2, 3]);
        assert_eq!(valid_indices(9).unwrap(), vec![1, 4]);
        assert_eq!(valid_indices(15).unwrap(), vec![1, 7]);
        assert!(valid_indices(8).is_err());
        assert!(valid_indices(3).is_err());
    }

    #[test]
    fn isomorphism_examples() {
        assert!(are_isomorphic(1, 3, 7).unwrap());
        assert!(are_isomorphic(2, 2, 7).unwrap());
        assert!(!are_isomorphic(1, 2, 7).unwrap());
        assert!(are_isomorphic(1, 6, 7).is_err());
        assert!(are_isomorphic(2, 1, 9).is_err());
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition_classes(7).unwrap().classes, vec![vec![1, 3], vec![2]]);
        assert_eq!(partition_classes(9).unwrap().classes, vec![vec![1, 4]]);
        assert_eq!(partition_classes(15).unwrap().classes, vec![vec![1, 7]]);
        let p = partition_classes(7).unwrap();
        assert_eq!(p.singleton_indices, vec![2]);
        assert_eq!(p.pair_class, Some(vec![1, 3]));
    }

    #[test]
    fn partition_matches_pairwise_scan() {
        for d in (5u64..400).step_by(2) {
            assert_eq!(partition_classes(d).unwrap().classes, brute_partition(d), "d = {d}");
        }
    }

    #[test]
    fn relation_is_symmetric() {
        for d in (7u64..150).step_by(2) {
            let v = valid_indices(d).unwrap();
            for &a in &v {
                for &b in &v {
                    assert_eq!(are_isomorphic(a, b, d).unwrap(), are_isomorphic(b, a, d).unwrap());
                }
            }
        }
    }

    #[test]
    fn pi_examples() {
        for mode in [CountMode::ClosedForm, CountMode::BruteForce] {
            assert_eq!(pi_count(7, mode).unwrap(), 1);
            assert_eq!(pi_count(9, mode).unwrap(), 0);
            assert_eq!(pi_count(91, mode).unwrap(), 2);
        }
    }

    #[test]
    fn phi2_examples() {
        for mode in [CountMode::ClosedForm, CountMode::BruteForce] {
            assert_eq!(phi2(7, mode).unwrap(), 5);
            assert_eq!(phi2(9, mode).unwrap(), 3);
            assert_eq!(phi2(15, mode).unwrap(), 3);
        }
    }

    #[test]
    fn phi2_brute_force_matches_literal_gcd() {
        for d in (5u64..800).step_by(2) {
            let literal = (0..d).filter(|&i| gcd(i * (i + 1), d) == 1).count() as u64;
            assert_eq!(phi2(d, CountMode::BruteForce).unwrap(), literal, "d = {d}");
        }
    }

    #[test]
    fn class_count_examples() {
        for mode in [ClassCountMode::Formula, ClassCountMode::Enumeration] {
            assert_eq!(class_count(7, mode).unwrap(), 2);
            assert_eq!(class_count(9, mode).unwrap(), 1);
        }
        for d in [11u64, 13, 19, 31, 37, 43] {
            let expected = (d + 1 + 4 * pi_count(d, CountMode::BruteForce).unwrap()) / 6;
            assert_eq!(class_count(d, ClassCountMode::Enumeration).unwrap(), expected);
        }
    }

    #[test]
    fn powers_of_three_have_no_cube_roots() {
        // q = 3^k gives d ≡ 2 (mod 3)
        for k in [4u32, 6, 8, 10] {
            let d = 3u64.pow(k).div_ceil(2);
            assert_eq!(d % 3, 2);
            assert_eq!(pi_count(d, CountMode::ClosedForm).unwrap(), 0);
        }
    }

    #[test]
    fn canonical_fj_examples() {
        for d in [7u64, 9, 11, 13] {
            assert_eq!(canonical_fj(d as i64 - 1, d).unwrap(), d - 1);
        }
        assert_eq!(canonical_fj(7, 11).unwrap(), 2);
        assert_eq!(canonical_fj(2, 7).unwrap(), 2);
        assert!(canonical_fj(0, 7).is_err());
    }

    #[test]
    fn subfield_examples() {
        let p = subfield_indices(1, 7).unwrap();
        let mut idx = p.fj_indices;
        idx.sort_unstable();
        assert_eq!(idx, [2, 2, 6]);
        assert_eq!(p.cases, [SubfieldCase::Sigma0, SubfieldCase::Case1, SubfieldCase::Case4]);
        assert_eq!(p.pattern, SubfieldPattern::TwoEqual);
        assert_eq!(subfield_indices(2, 7).unwrap().pattern, SubfieldPattern::AllEqual);
        assert_eq!(subfield_indices(2, 11).unwrap().pattern, SubfieldPattern::AllDistinct);
    }

    #[test]
    fn mirror_of_one_has_the_same_profile() {
        for d in (7u64..200).step_by(2) {
            let mut a = subfield_indices(1, d).unwrap().fj_indices;
            let mut b = subfield_indices((d - 1) / 2, d).unwrap().fj_indices;
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "d = {d}");
        }
    }
}
