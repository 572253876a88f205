//! Batch checks over a whole q or a range of d, reported as named pass/fail
//! records. A failing record carries the first counterexample found, in the
//! order (q, i, place) or (d, i).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::curve::{count_places, hasse_weil_bound, indices_for_q, CountMethod, CurveIndex, NAIVE_Q_LIMIT};
use crate::error::Result;
use crate::gaps::{gap_parts, gap_set, genus_by_pick, is_numerical_semigroup, nongaps, triangles_for, PlaceClass};
use crate::gf::FieldCtx;
use crate::iso::{
    class_count, partition_classes, phi2, pi_count, subfield_indices, valid_indices, ClassCountMode, Congruence,
    CountMode, SubfieldCase, SubfieldPattern,
};
use crate::maps::{
    aut_order_for, generated_group_order, h_group, is_three_cycle, omega_conjugation, order_on_curve,
    preserves_relation, preserves_relation_raw, standard_map, structural_aut_order, subfield_generators, MapKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), pass, detail: detail.into() }
    }
}

/// Runs `probe` on every case; `probe` returns `Some(description)` for a
/// failing case. Stops at the first failure.
pub fn check_cases<T>(
    name: &str,
    cases: impl IntoIterator<Item = T>,
    mut probe: impl FnMut(&T) -> Result<Option<String>>,
) -> Result<Check> {
    let mut n = 0usize;
    for case in cases {
        n += 1;
        if let Some(why) = probe(&case)? {
            return Ok(Check::new(name, false, format!("counterexample: {why}")));
        }
    }
    Ok(Check::new(name, true, format!("{n} cases")))
}

/// Expected subfield pattern for canonical i ≤ (d−3)/2.
pub fn expected_pattern(i: u64, d: u64) -> SubfieldPattern {
    if (i * i + i + 1).is_multiple_of(d) {
        SubfieldPattern::AllEqual
    } else if i == 1 {
        SubfieldPattern::TwoEqual
    } else {
        SubfieldPattern::AllDistinct
    }
}

/// First violation of the class-size description for modulus d: sizes are
/// 3 except singletons exactly at the roots of i² + i + 1 and the one pair
/// {1, (d−1)/2}.
pub fn class_structure_violation(d: u64) -> Result<Option<String>> {
    let p = partition_classes(d)?;
    let valid = valid_indices(d)?;
    let roots: Vec<u64> = valid.iter().copied().filter(|&i| (i * i + i + 1) % d == 0).collect();
    if p.singleton_indices != roots {
        return Ok(Some(format!("d = {d}: singletons {:?}, roots {:?}", p.singleton_indices, roots)));
    }
    let pair = vec![1, (d - 1) / 2];
    if p.pair_class.as_ref() != Some(&pair) {
        return Ok(Some(format!("d = {d}: pair class {:?}, expected {pair:?}", p.pair_class)));
    }
    for class in &p.classes {
        let ok = match class.len() {
            1 => true,
            2 => *class == pair,
            3 => true,
            _ => false,
        };
        if !ok {
            return Ok(Some(format!("d = {d}: class {class:?}")));
        }
    }
    Ok(None)
}

pub fn gap_violation(c: &CurveIndex, place: PlaceClass) -> Result<Option<String>> {
    let g = c.genus();
    let (first, second) = gap_parts(c, place);
    let a: BTreeSet<i64> = first.iter().copied().collect();
    let b: BTreeSet<i64> = second.iter().copied().collect();
    if a.len() != first.len() || b.len() != second.len() || !a.is_disjoint(&b) {
        return Ok(Some(format!("{c} at {}: constituent lists overlap", place.name())));
    }
    let gaps = gap_set(c, place)?;
    let top = 2 * g as i64 - 1;
    if gaps.gaps.len() as u64 != g {
        return Ok(Some(format!("{c} at {}: {} gaps, genus {g}", place.name(), gaps.gaps.len())));
    }
    if let Some(bad) = gaps.gaps.iter().find(|&&x| !(1..=top).contains(&x)) {
        return Ok(Some(format!("{c} at {}: gap {bad} outside [1, {top}]", place.name())));
    }
    if !is_numerical_semigroup(&nongaps(&gaps, g), g) {
        return Ok(Some(format!("{c} at {}: nongaps not closed under addition", place.name())));
    }
    Ok(None)
}

fn counting_violation(d: u64) -> Result<Option<String>> {
    let (pc, pb) = (pi_count(d, CountMode::ClosedForm)?, pi_count(d, CountMode::BruteForce)?);
    if pc != pb {
        return Ok(Some(format!("d = {d}: pi closed form {pc}, brute force {pb}")));
    }
    let (fc, fb) = (phi2(d, CountMode::ClosedForm)?, phi2(d, CountMode::BruteForce)?);
    if fc != fb {
        return Ok(Some(format!("d = {d}: phi2 closed form {fc}, brute force {fb}")));
    }
    Ok(None)
}

fn class_count_violation(d: u64) -> Result<Option<String>> {
    let f = class_count(d, ClassCountMode::Formula)?;
    let e = class_count(d, ClassCountMode::Enumeration)?;
    Ok((f != e).then(|| format!("d = {d}: formula {f}, enumeration {e}")))
}

/// Every relation check attached to the standard maps for one q.
pub fn map_checks(ctx: &FieldCtx) -> Result<Vec<Check>> {
    let q = ctx.q();
    let d = q.div_ceil(2);
    let idx = indices_for_q(q)?;
    let mut out = Vec::new();
    let pairs: Vec<(u64, u64, Congruence)> = idx
        .iter()
        .flat_map(|a| idx.iter().map(move |b| (a.i, b.i)))
        .flat_map(|(i, j)| Congruence::ALL.into_iter().map(move |c| (i, j, c)))
        .filter(|&(i, j, c)| c.holds(i as i64, j as i64, d))
        .collect();
    out.push(check_cases("isomorphisms preserve relations", pairs, |&(i, j, cong)| {
        let m = standard_map(ctx, MapKind::Iso { congruence: cong, i: i as i64, j: j as i64 })?;
        let ok = preserves_relation_raw(ctx, &m, j as i64, i as i64)?;
        Ok((!ok).then(|| format!("q = {q}, (i, j) = ({i}, {j}), congruence ({})", cong.number())))
    })?);
    let cube: Vec<&CurveIndex> = idx.iter().filter(|c| (c.i * c.i + c.i + 1) % d == 0).collect();
    out.push(check_cases("omega has order 3", cube.clone(), |c| {
        let w = standard_map(ctx, MapKind::Omega { i: c.exponent() })?;
        let k = order_on_curve(ctx, &w, c, None)?;
        Ok((k != 3).then(|| format!("{c}: order {k}")))
    })?);
    out.push(check_cases("omega conjugation is a 3-cycle", cube, |c| {
        let perm = omega_conjugation(ctx, c)?;
        Ok((!is_three_cycle(&perm)).then(|| format!("{c}: permutation {perm:?}")))
    })?);
    let one = idx.iter().find(|c| c.i == 1).copied();
    out.push(check_cases("pi and pi' have order 2", one, |c| {
        for kind in [MapKind::Pi, MapKind::PiPrime] {
            let k = order_on_curve(ctx, &standard_map(ctx, kind)?, c, None)?;
            if k != 2 {
                return Ok(Some(format!("{c}: {kind:?} has order {k}")));
            }
        }
        Ok(None)
    })?);
    let h = h_group(ctx);
    let h_pass = h.len() as u64 == 2 * (q + 1);
    let h_cases: Vec<_> = idx.iter().flat_map(|c| h.iter().map(move |m| (*c, *m))).collect();
    let mut h_check = check_cases("H elements preserve relations", h_cases, |(c, m)| {
        let ok = preserves_relation(ctx, m, c, c)?;
        Ok((!ok).then(|| format!("{c}: {}", m.render(ctx))))
    })?;
    if !h_pass {
        h_check = Check::new(&h_check.name, false, format!("|H| = {}, expected {}", h.len(), 2 * (q + 1)));
    }
    out.push(h_check);
    out.push(check_cases("negative control fails", idx.clone(), |c| {
        let m = standard_map(ctx, MapKind::NegativeControl)?;
        let ok = preserves_relation(ctx, &m, c, c)?;
        Ok(ok.then(|| format!("{c}: (x, xy) preserved the relation")))
    })?);
    Ok(out)
}

/// Subfield patterns for all valid i of d, plus the mirror index.
pub fn subfield_pattern_violation(d: u64) -> Result<Option<String>> {
    let valid = valid_indices(d)?;
    for &i in &valid {
        let prof = subfield_indices(i, d)?;
        if i == (d - 1) / 2 {
            let mut mine = prof.fj_indices;
            let mut base = subfield_indices(1, d)?.fj_indices;
            mine.sort_unstable();
            base.sort_unstable();
            if mine != base {
                return Ok(Some(format!("d = {d}, i = {i}: {mine:?} differs from i = 1 {base:?}")));
            }
            continue;
        }
        let expected = expected_pattern(i, d);
        let fd = expected != SubfieldPattern::TwoEqual || prof.contains_fd_minus_1();
        if prof.pattern != expected || !fd {
            return Ok(Some(format!("d = {d}, i = {i}: {:?} for {:?}", prof.pattern, prof.fj_indices)));
        }
    }
    Ok(None)
}

pub fn subfield_generator_checks(ctx: &FieldCtx) -> Result<Check> {
    let idx = indices_for_q(ctx.q())?;
    let cases: Vec<(CurveIndex, SubfieldCase)> =
        idx.iter().flat_map(|c| SubfieldCase::ALL.into_iter().map(move |k| (*c, k))).collect();
    let mut applied = 0;
    let mut check = check_cases("subfield generators satisfy their relations", cases, |(c, case)| {
        match subfield_generators(ctx, c, *case) {
            Ok(g) => {
                applied += 1;
                Ok((!g.relation_holds).then(|| format!("{c}, {case:?}, j = {}", g.j)))
            }
            Err(crate::Error::CaseNotApplicable(_)) => Ok(None),
            Err(e) => Err(e),
        }
    })?;
    if check.pass {
        check.detail = format!("{applied} applicable cases");
    }
    Ok(check)
}

pub fn aut_checks(ctx: &FieldCtx) -> Result<Vec<Check>> {
    let idx = indices_for_q(ctx.q())?;
    let q = ctx.q();
    let tab = check_cases("automorphism orders match the table", idx.clone(), |c| {
        let (order, _) = aut_order_for(c);
        let n = q + 1;
        let expected = if c.is_special() {
            360
        } else if c.i == 1 || c.i == (c.d - 1) / 2 {
            4 * n
        } else if (c.i * c.i + c.i + 1) % c.d == 0 {
            3 * n
        } else {
            n
        };
        Ok((order != expected).then(|| format!("{c}: {order}, expected {expected}")))
    })?;
    let mut out = vec![tab];
    if q > 5 {
        out.push(check_cases("generators close to a group of the structural order", idx, |c| {
            let got = generated_group_order(ctx, c, 64 * (q as usize + 1))?;
            let want = structural_aut_order(c);
            Ok((got != want).then(|| format!("{c}: generated {got}, structural {want}")))
        })?);
    }
    Ok(out)
}

/// Every applicable check for a single q.
pub fn verify_q(q: u64) -> Result<Vec<Check>> {
    let ctx = FieldCtx::new(q)?;
    let idx = indices_for_q(q)?;
    let d = q.div_ceil(2);
    let bound = hasse_weil_bound(q);
    let mut out = vec![check_cases("maximality", idx.clone(), |c| {
        let n = count_places(&ctx, c, CountMethod::Fast)?;
        Ok((n != bound).then(|| format!("{c}: N = {n}, bound {bound}")))
    })?];
    if q <= NAIVE_Q_LIMIT {
        out.push(check_cases("fast and naive counts agree", idx.clone(), |c| {
            let (f, n) = (count_places(&ctx, c, CountMethod::Fast)?, count_places(&ctx, c, CountMethod::Naive)?);
            Ok((f != n).then(|| format!("{c}: fast {f}, naive {n}")))
        })?);
    }
    out.push(check_cases("interior point counts", idx.clone(), |c| {
        let g = genus_by_pick(c)?;
        let t = triangles_for(c);
        let (n1, n2) = (t.delta1.interior_points().len() as u64, t.delta2.interior_points().len() as u64);
        let quarter = (q - 1) / 4;
        Ok((g != q - 1 || n1 != quarter || n2 != quarter)
            .then(|| format!("{c}: |int D| = {g}, |int D1| = {n1}, |int D2| = {n2}")))
    })?);
    let places: Vec<(CurveIndex, PlaceClass)> =
        idx.iter().flat_map(|c| PlaceClass::ALL.into_iter().map(move |p| (*c, p))).collect();
    out.push(check_cases("gap sequences", places, |(c, p)| gap_violation(c, *p))?);
    if q >= 9 {
        let one = idx.iter().find(|c| c.i == 1).copied();
        out.push(check_cases("d + 2 in G_0 and G_alpha, not in G_inf", one, |c| {
            let n = c.d as i64 + 2;
            let z = gap_set(c, PlaceClass::Zero)?.contains(n);
            let a = gap_set(c, PlaceClass::Alpha)?.contains(n);
            let f = gap_set(c, PlaceClass::Infinity)?.contains(n);
            Ok((!z || !a || f).then(|| format!("{c}: zero {z}, alpha {a}, inf {f}")))
        })?);
    }
    if d >= 7 {
        out.push(check_cases("pi and phi2 closed forms", [d], |&d| counting_violation(d))?);
        out.push(check_cases("class count formula", [d], |&d| class_count_violation(d))?);
        out.push(check_cases("class structure", [d], |&d| class_structure_violation(d))?);
        out.push(check_cases("subfield patterns", [d], |&d| subfield_pattern_violation(d))?);
        out.extend(map_checks(&ctx)?);
        out.push(subfield_generator_checks(&ctx)?);
    }
    out.extend(aut_checks(&ctx)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub d: u64,
    pub pi: u64,
    pub phi2: u64,
    pub classes: u64,
}

/// Counting-formula cross-checks for every odd d in [7, max_d].
pub fn sweep(max_d: u64) -> Result<(Vec<SweepRow>, Vec<Check>)> {
    let ds: Vec<u64> = (7..=max_d).step_by(2).collect();
    let checks = vec![
        check_cases("pi and phi2 closed forms", ds.clone(), |&d| counting_violation(d))?,
        check_cases("class count formula", ds.clone(), |&d| class_count_violation(d))?,
        check_cases("class structure", ds.clone(), |&d| class_structure_violation(d))?,
    ];
    let mut rows = Vec::with_capacity(ds.len());
    for d in ds {
        rows.push(SweepRow {
            d,
            pi: pi_count(d, CountMode::ClosedForm)?,
            phi2: phi2(d, CountMode::ClosedForm)?,
            classes: class_count(d, ClassCountMode::Formula)?,
        });
    }
    Ok((rows, checks))
}
