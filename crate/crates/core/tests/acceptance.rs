//! Acceptance suite. The ten criteria run one after another in a single test
//! so their wall-clock limits are measured without interference; each prints
//! one PASS/FAIL line.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use maxfield_core::curve::{count_places, indices_for_q, validate_index, CountMethod, CurveIndex};
use maxfield_core::gaps::{gap_parts, gap_set, nongaps, triangles_for, PlaceClass};
use maxfield_core::gf::FieldCtx;
use maxfield_core::iso::{
    class_count, partition_classes, phi2, pi_count, subfield_indices, valid_indices, ClassCountMode, Congruence,
    CountMode, SubfieldCase, SubfieldPattern,
};
use maxfield_core::maps::{
    aut_order, h_group, omega_conjugation, order_on_curve, preserves_relation, preserves_relation_raw, standard_map,
    subfield_generators, MapKind,
};

type Outcome = Result<String, String>;

const MAIN_QS: [u64; 7] = [9, 13, 17, 25, 29, 37, 49];
const MAP_QS: [u64; 3] = [13, 17, 25];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_indices(qs: &[u64]) -> Vec<CurveIndex> {
    qs.iter().flat_map(|&q| indices_for_q(q).unwrap()).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Interior lattice points of a triangle by exact half-plane tests on a
/// bounding box.
fn interior_by_half_planes(v: [(i64, i64); 3]) -> usize {
    let side = |a: (i64, i64), b: (i64, i64), p: (i64, i64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
    let orient = side(v[0], v[1], v[2]).signum();
    let xs = v.map(|p| p.0);
    let ys = v.map(|p| p.1);
    let mut n = 0;
    for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
        for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
            let p = (x, y);
            if [side(v[0], v[1], p), side(v[1], v[2], p), side(v[2], v[0], p)].iter().all(|s| s.signum() == orient) {
                n += 1;
            }
        }
    }
    n
}

/// Closure of the nongaps under addition, checked against the full range
/// [0, 4g] where every value above 2g − 1 must be a nongap.
fn semigroup_closed(gaps: &BTreeSet<i64>, g: i64) -> bool {
    let top = 4 * g;
    let nongap: Vec<i64> = (0..=top).filter(|n| !gaps.contains(n)).collect();
    nongap.iter().all(|&a| nongap.iter().all(|&b| a + b > top || !gaps.contains(&(a + b))))
}

fn criterion_1() -> Outcome {
    let mut n = 0;
    for c in all_indices(&MAIN_QS) {
        let ctx = FieldCtx::new(c.q).unwrap();
        let q = c.q;
        let bound = q * q + 1 + 2 * (q - 1) * q;
        let got = count_places(&ctx, &c, CountMethod::Fast).map_err(|e| e.to_string())?;
        ensure(got == bound, || format!("{c}: {got} places, bound {bound}"))?;
        n += 1;
    }
    Ok(format!("{n} curves maximal"))
}

fn criterion_2() -> Outcome {
    let mut n = 0;
    for c in all_indices(&[5, 9, 13]) {
        let ctx = FieldCtx::new(c.q).unwrap();
        let fast = count_places(&ctx, &c, CountMethod::Fast).unwrap();
        let naive = count_places(&ctx, &c, CountMethod::Naive).unwrap();
        ensure(fast == naive, || format!("{c}: fast {fast}, naive {naive}"))?;
        n += 1;
    }
    Ok(format!("{n} curves agree"))
}

fn criterion_3() -> Outcome {
    let mut n = 0;
    for c in all_indices(&MAIN_QS) {
        let t = triangles_for(&c);
        let q = c.q as i64;
        let enumerated = t.delta.interior_points().len() as i64;
        let pick = t.delta.interior_count_by_pick();
        let oracle = interior_by_half_planes(t.delta.vertices) as i64;
        ensure(enumerated == q - 1 && pick == q - 1 && oracle == q - 1, || {
            format!("{c}: enumeration {enumerated}, Pick {pick}, oracle {oracle}")
        })?;
        for (name, tri) in [("D1", t.delta1), ("D2", t.delta2)] {
            let k = interior_by_half_planes(tri.vertices) as i64;
            let lib = tri.interior_points().len() as i64;
            ensure(k == (q - 1) / 4 && lib == k && tri.interior_count_by_pick() == k, || {
                format!("{c}: |int {name}| = {lib} (oracle {k}), expected {}", (q - 1) / 4)
            })?;
        }
        n += 1;
    }
    Ok(format!("{n} curves"))
}

fn criterion_4() -> Outcome {
    let mut n = 0;
    for c in all_indices(&MAIN_QS) {
        let g = c.q as i64 - 1;
        for place in PlaceClass::ALL {
            let (a, b) = gap_parts(&c, place);
            let sa: BTreeSet<i64> = a.iter().copied().collect();
            let sb: BTreeSet<i64> = b.iter().copied().collect();
            ensure(sa.len() == a.len() && sb.len() == b.len() && sa.is_disjoint(&sb), || {
                format!("{c} at {}: constituent sets overlap", place.name())
            })?;
            let gaps: BTreeSet<i64> = sa.union(&sb).copied().collect();
            ensure(gaps.len() as i64 == g, || format!("{c} at {}: {} gaps", place.name(), gaps.len()))?;
            ensure(gaps.iter().all(|&x| (1..=2 * g - 1).contains(&x)), || {
                format!("{c} at {}: gap outside [1, 2q-3]: {gaps:?}", place.name())
            })?;
            ensure(semigroup_closed(&gaps, g), || format!("{c} at {}: nongaps not closed", place.name()))?;
            let lib = gap_set(&c, place).unwrap();
            ensure(lib.gaps.iter().copied().collect::<BTreeSet<_>>() == gaps, || {
                format!("{c} at {}: gap_set differs from its parts", place.name())
            })?;
            ensure(nongaps(&lib, g as u64).len() as i64 == g + 1, || format!("{c}: nongap count"))?;
            n += 1;
        }
    }
    Ok(format!("{n} gap sequences"))
}

fn criterion_5() -> Outcome {
    for q in MAIN_QS {
        let c = validate_index(q, 1).unwrap();
        let v = c.d as i64 + 2;
        let zero = gap_set(&c, PlaceClass::Zero).unwrap().contains(v);
        let alpha = gap_set(&c, PlaceClass::Alpha).unwrap().contains(v);
        let inf = gap_set(&c, PlaceClass::Infinity).unwrap().contains(v);
        ensure(zero && alpha && !inf, || format!("{c}: d+2 in G_0 {zero}, G_alpha {alpha}, G_inf {inf}"))?;
    }
    Ok(format!("{} values of q", MAIN_QS.len()))
}

fn criterion_6() -> Outcome {
    let mut n = 0;
    for d in (7u64..=99_999).step_by(2) {
        let pc = pi_count(d, CountMode::ClosedForm).unwrap();
        let pb = pi_count(d, CountMode::BruteForce).unwrap();
        ensure(pc == pb, || format!("d = {d}: pi closed {pc}, brute {pb}"))?;
        let fc = phi2(d, CountMode::ClosedForm).unwrap();
        let fb = phi2(d, CountMode::BruteForce).unwrap();
        ensure(fc == fb, || format!("d = {d}: phi2 closed {fc}, brute {fb}"))?;
        n += 1;
    }
    for d in (7u64..=9_999).step_by(2) {
        let f = class_count(d, ClassCountMode::Formula).unwrap();
        let e = class_count(d, ClassCountMode::Enumeration).unwrap();
        ensure(f == e, || format!("d = {d}: formula {f}, enumeration {e}"))?;
    }
    Ok(format!("{n} moduli for pi/phi2, 4997 for class counts"))
}

fn criterion_7() -> Outcome {
    for d in (7u64..=9_999).step_by(2) {
        let p = partition_classes(d).unwrap();
        let valid: BTreeSet<u64> = valid_indices(d).unwrap().into_iter().collect();
        let covered: BTreeSet<u64> = p.classes.iter().flatten().copied().collect();
        ensure(covered == valid, || format!("d = {d}: classes do not cover the valid indices"))?;
        let roots: BTreeSet<u64> =
            (1..=(d - 1) / 2).filter(|&i| gcd(i * (i + 1), d) == 1 && (i * i + i + 1) % d == 0).collect();
        let mut pairs = 0;
        for class in &p.classes {
            match class.len() {
                1 => ensure(roots.contains(&class[0]), || format!("d = {d}: singleton {class:?}"))?,
                2 => {
                    pairs += 1;
                    ensure(*class == vec![1, (d - 1) / 2], || format!("d = {d}: pair {class:?}"))?
                }
                3 => ensure(class.iter().all(|i| !roots.contains(i)), || format!("d = {d}: {class:?}"))?,
                _ => return Err(format!("d = {d}: class {class:?}")),
            }
        }
        let singles = p.classes.iter().filter(|c| c.len() == 1).count();
        ensure(pairs == 1 && singles == roots.len(), || {
            format!("d = {d}: {pairs} pairs, {singles} singletons, {} roots", roots.len())
        })?;
    }
    Ok("4997 moduli".to_string())
}

fn criterion_8() -> Outcome {
    let mut maps = 0;
    for q in MAP_QS {
        let ctx = FieldCtx::new(q).unwrap();
        let d = q.div_ceil(2);
        let idx = indices_for_q(q).unwrap();
        for a in &idx {
            for b in &idx {
                for cong in Congruence::ALL {
                    if !cong.holds(a.i as i64, b.i as i64, d) {
                        continue;
                    }
                    let m =
                        standard_map(&ctx, MapKind::Iso { congruence: cong, i: a.i as i64, j: b.i as i64 }).unwrap();
                    let ok = preserves_relation(&ctx, &m, b, a).unwrap();
                    ensure(ok, || format!("q = {q}: map ({}) for ({}, {}) fails", cong.number(), a.i, b.i))?;
                    maps += 1;
                }
            }
        }
        for c in &idx {
            if (c.i * c.i + c.i + 1) % d == 0 {
                let w = standard_map(&ctx, MapKind::Omega { i: c.i as i64 }).unwrap();
                let k = order_on_curve(&ctx, &w, c, None).unwrap();
                ensure(k == 3, || format!("{c}: omega has order {k}"))?;
                let perm = omega_conjugation(&ctx, c).unwrap();
                let fixed = (0..3).filter(|&k| perm[k] == k).count();
                let image: BTreeSet<usize> = perm.iter().copied().collect();
                ensure(fixed == 0 && image.len() == 3, || format!("{c}: conjugation {perm:?}"))?;
            }
            let h = h_group(&ctx);
            ensure(h.len() as u64 == 2 * (q + 1), || format!("q = {q}: |H| = {}", h.len()))?;
            let distinct: BTreeSet<_> = h.iter().map(|m| (m.cx, m.cy)).collect();
            ensure(distinct.len() == h.len(), || format!("q = {q}: repeated H elements"))?;
            for m in &h {
                ensure(preserves_relation(&ctx, m, c, c).unwrap(), || format!("{c}: H element fails"))?;
            }
            let neg = standard_map(&ctx, MapKind::NegativeControl).unwrap();
            ensure(!preserves_relation(&ctx, &neg, c, c).unwrap(), || format!("{c}: negative control passes"))?;
        }
        let one = validate_index(q, 1).unwrap();
        for kind in [MapKind::Pi, MapKind::PiPrime] {
            let m = standard_map(&ctx, kind).unwrap();
            let k = order_on_curve(&ctx, &m, &one, None).unwrap();
            ensure(k == 2, || format!("q = {q}: {kind:?} has order {k}"))?;
        }
    }
    Ok(format!("{maps} isomorphisms"))
}

fn criterion_9() -> Outcome {
    let mut profiles = 0;
    for d in (7u64..=99).step_by(2) {
        for i in valid_indices(d).unwrap() {
            let p = subfield_indices(i, d).unwrap();
            let distinct: BTreeSet<u64> = p.fj_indices.iter().copied().collect();
            if i == (d - 1) / 2 {
                let mut mine = p.fj_indices;
                let mut one = subfield_indices(1, d).unwrap().fj_indices;
                mine.sort_unstable();
                one.sort_unstable();
                ensure(mine == one, || format!("d = {d}, i = {i}: {mine:?} vs {one:?}"))?;
                continue;
            }
            let cube = (i * i + i + 1) % d == 0;
            let expected = if cube {
                SubfieldPattern::AllEqual
            } else if i == 1 {
                SubfieldPattern::TwoEqual
            } else {
                SubfieldPattern::AllDistinct
            };
            ensure(p.pattern == expected && distinct.len() == [3, 2, 1][expected as usize], || {
                format!("d = {d}, i = {i}: {:?} {:?}", p.pattern, p.fj_indices)
            })?;
            if i == 1 {
                ensure(distinct.contains(&(d - 1)), || format!("d = {d}: F_(d-1) missing for i = 1"))?;
            }
            profiles += 1;
        }
    }
    let mut relations = 0;
    for q in MAP_QS {
        let ctx = FieldCtx::new(q).unwrap();
        for c in indices_for_q(q).unwrap() {
            for case in SubfieldCase::ALL {
                match subfield_generators(&ctx, &c, case) {
                    Ok(g) => {
                        let direct = preserves_relation_raw(&ctx, &g.map, c.i as i64, g.j).unwrap();
                        ensure(g.relation_holds && direct, || format!("{c}, {case:?}: relation fails"))?;
                        relations += 1;
                    }
                    Err(maxfield_core::Error::CaseNotApplicable(_)) => {}
                    Err(e) => return Err(format!("{c}, {case:?}: {e}")),
                }
            }
        }
    }
    Ok(format!("{profiles} profiles, {relations} generator relations"))
}

fn criterion_10() -> Outcome {
    let mut n = 0;
    for q in [9u64, 13, 17, 25, 29] {
        let d = q.div_ceil(2);
        for i in valid_indices(d).unwrap() {
            let (got, _) = aut_order(q, i as i64).unwrap();
            let want = if i == 1 || i == (d - 1) / 2 {
                4 * (q + 1)
            } else if (i * i + i + 1) % d == 0 {
                3 * (q + 1)
            } else {
                q + 1
            };
            ensure(got == want, || format!("(q, i) = ({q}, {i}): {got}, expected {want}"))?;
            n += 1;
        }
    }
    let special = aut_order(5, 1).unwrap().0;
    ensure(special == 360, || format!("q = 5: {special}"))?;
    let q13 = aut_order(13, 1).unwrap().0;
    ensure(q13 == 56, || format!("(13, 1): {q13}"))?;
    Ok(format!("{n} curves plus q = 5"))
}

#[test]
fn acceptance_criteria() {
    type Criterion = (u32, &'static str, fn() -> Outcome, Option<u64>);
    let criteria: [Criterion; 10] = [
        (1, "maximality", criterion_1, Some(10)),
        (2, "fast and naive counts", criterion_2, Some(60)),
        (3, "interior point counts", criterion_3, None),
        (4, "gap sequences", criterion_4, None),
        (5, "d + 2 gap membership", criterion_5, None),
        (6, "counting formulas", criterion_6, Some(120)),
        (7, "class structure", criterion_7, None),
        (8, "map verification", criterion_8, Some(120)),
        (9, "subfield profiles", criterion_9, None),
        (10, "automorphism orders", criterion_10, None),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (k, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(_) => Err("panicked".to_string()),
        };
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(s)) if elapsed > Duration::from_secs(s) => {
                Err(format!("took {:.2}s, limit {s}s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        writeln!(err, "criterion {k:>2} {tag} [{:>7.2}s] {name}: {detail}", elapsed.as_secs_f64()).unwrap();
        if outcome.is_err() {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
