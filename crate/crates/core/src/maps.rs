//! Monomial coordinate maps between the fields F_i and their verification.
//!
//! A map m with components (X, Y) written in the coordinates of a source
//! ring F_s "preserves the relation of F_t" when Y^{q+1} = X^{2t}(X² + 1)
//! holds in F_s; it then defines the field morphism F_t → F_s sending
//! x ↦ X, y ↦ Y. The isomorphism forms below follow this convention: the
//! map for the pair (i, j) has coordinates in F_j and satisfies the relation
//! of F_i.
//!
//! For the congruences ij + i + 1 ≡ 0 and ij + j + 1 ≡ 0 the two shapes
//! are easy to swap; only the pairing in [`iso_map_with_exponent`]
//! satisfies the relation.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::arith::reduce_mod;
use crate::curve::{defining_rhs, CurveIndex};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::iso::{canonical_fj, case_index, Congruence, SubfieldCase};
use crate::ring::{CoordinateRing, Point, RingElem};

/// x ↦ cx · x^{ux} · y^{vx},  y ↦ cy · x^{uy} · y^{vy}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialMap {
    pub cx: FieldElement,
    pub ux: i64,
    pub vx: i64,
    pub cy: FieldElement,
    pub uy: i64,
    pub vy: i64,
}

impl MonomialMap {
    pub fn identity() -> Self {
        Self { cx: FieldElement::ONE, ux: 1, vx: 0, cy: FieldElement::ONE, uy: 0, vy: 1 }
    }

    /// Rows are the (x, y) exponents of the two components.
    pub fn exponent_matrix(&self) -> [[i64; 2]; 2] {
        [[self.ux, self.vx], [self.uy, self.vy]]
    }

    /// Values of both components at an affine point with x, y ≠ 0.
    pub fn eval(&self, ctx: &FieldCtx, (x, y): Point) -> (FieldElement, FieldElement) {
        let mono = |c, u, v| {
            let xu = ctx.pow(x, u).expect("x ≠ 0");
            let yv = ctx.pow(y, v).expect("y ≠ 0");
            ctx.mul(c, ctx.mul(xu, yv))
        };
        (mono(self.cx, self.ux, self.vx), mono(self.cy, self.uy, self.vy))
    }

    /// Images of x and y in the given ring.
    pub fn images(&self, ring: &CoordinateRing) -> (RingElem, RingElem) {
        (ring.monomial(self.cx, self.ux, self.vx), ring.monomial(self.cy, self.uy, self.vy))
    }

    pub fn render(&self, ctx: &FieldCtx) -> String {
        let part = |c: FieldElement, u: i64, v: i64| format!("[{}]*x^{u}*y^{v}", ctx.render(c));
        format!("(x, y) -> ({}, {})", part(self.cx, self.ux, self.vx), part(self.cy, self.uy, self.vy))
    }
}

/// Substitutes the components of `inner` for x and y in `outer`.
pub fn compose(ctx: &FieldCtx, outer: &MonomialMap, inner: &MonomialMap) -> MonomialMap {
    let coeff = |c: FieldElement, u: i64, v: i64| {
        let a = ctx.pow(inner.cx, u).expect("map coefficients are units");
        let b = ctx.pow(inner.cy, v).expect("map coefficients are units");
        ctx.mul(c, ctx.mul(a, b))
    };
    MonomialMap {
        cx: coeff(outer.cx, outer.ux, outer.vx),
        ux: outer.ux * inner.ux + outer.vx * inner.uy,
        vx: outer.ux * inner.vx + outer.vx * inner.vy,
        cy: coeff(outer.cy, outer.uy, outer.vy),
        uy: outer.uy * inner.ux + outer.vy * inner.uy,
        vy: outer.uy * inner.vx + outer.vy * inner.vy,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapKind {
    Identity,
    /// (x, y/x^m): coordinates in F_{md+i}, relation of F_i.
    Shift {
        m: i64,
    },
    /// (1/x, y/x^m): coordinates in F_j, relation of F_{md−j−1}.
    Reflect {
        m: i64,
    },
    /// The isomorphism attached to a congruence, for the ordered pair (i, j).
    Iso {
        congruence: Congruence,
        i: i64,
        j: i64,
    },
    /// (ax, by) with a² = b^{q+1} = 1.
    HElement {
        a: FieldElement,
        b: FieldElement,
    },
    /// Order-three automorphism of F_i when i² + i + 1 ≡ 0 (mod d).
    Omega {
        i: i64,
    },
    /// (a^d y^d/x, a² y) on F_1.
    Omega1,
    /// (a^d y^d/x, y) on F_1.
    Pi,
    /// (−a^d y^d/x, y) on F_1.
    PiPrime,
    /// (x, xy), which never preserves a relation.
    NegativeControl,
}

fn d_of(ctx: &FieldCtx) -> u64 {
    ctx.q().div_ceil(2)
}

/// The isomorphism shape attached to `shape` with an explicit r, without
/// checking any side condition.
pub fn iso_map_with_exponent(ctx: &FieldCtx, shape: Congruence, i: i64, j: i64, r: i64) -> MonomialMap {
    let d = d_of(ctx) as i64;
    let (_, a) = ctx.special_elements();
    let ap = |k: i64| ctx.pow(a, k).expect("a ≠ 0");
    match shape {
        Congruence::Inverse => MonomialMap { cx: ap(d), ux: -j, vx: d, cy: ap(i + 1), uy: -r, vy: i },
        Congruence::PlusFirst => MonomialMap { cx: ap(d), ux: -(j + 1), vx: d, cy: ap(i + 1), uy: -r, vy: i },
        Congruence::PlusBoth => MonomialMap { cx: ap(-d), ux: j + 1, vx: -d, cy: ap(-i), uy: r, vy: -(i + 1) },
        Congruence::PlusSecond => MonomialMap { cx: ap(-d), ux: j, vx: -d, cy: ap(-i), uy: r, vy: -(i + 1) },
    }
}

pub fn standard_map(ctx: &FieldCtx, kind: MapKind) -> Result<MonomialMap> {
    let d = d_of(ctx);
    let (_, a) = ctx.special_elements();
    let ap = |k: i64| ctx.pow(a, k).expect("a ≠ 0");
    let one = FieldElement::ONE;
    Ok(match kind {
        MapKind::Identity => MonomialMap::identity(),
        MapKind::Shift { m } => MonomialMap { cx: one, ux: 1, vx: 0, cy: one, uy: -m, vy: 1 },
        MapKind::Reflect { m } => MonomialMap { cx: one, ux: -1, vx: 0, cy: one, uy: -m, vy: 1 },
        MapKind::Iso { congruence, i, j } => {
            let num = congruence.residue_numerator(i, j);
            if num % d as i64 != 0 {
                return Err(Error::InvalidParameter(format!(
                    "congruence ({}) fails for (i, j) = ({i}, {j}) mod {d}",
                    congruence.number()
                )));
            }
            iso_map_with_exponent(ctx, congruence, i, j, num / d as i64)
        }
        MapKind::HElement { a: sa, b } => {
            if ctx.mul(sa, sa) != one || ctx.norm_to_base(b) != one {
                return Err(Error::InvalidParameter(format!(
                    "({}, {}) does not satisfy a² = b^(q+1) = 1",
                    ctx.render(sa),
                    ctx.render(b)
                )));
            }
            MonomialMap { cx: sa, ux: 1, vx: 0, cy: b, uy: 0, vy: 1 }
        }
        MapKind::Omega { i } => {
            if reduce_mod(i * i + i + 1, d) != 0 {
                return Err(Error::InvalidParameter(format!("i² + i + 1 ≢ 0 (mod {d}) for i = {i}")));
            }
            iso_map_with_exponent(ctx, Congruence::PlusSecond, i, i, (i * i + i + 1) / d as i64)
        }
        MapKind::Omega1 => MonomialMap { cx: ap(d as i64), ux: -1, vx: d as i64, cy: ap(2), uy: 0, vy: 1 },
        MapKind::Pi => MonomialMap { cx: ap(d as i64), ux: -1, vx: d as i64, cy: one, uy: 0, vy: 1 },
        MapKind::PiPrime => MonomialMap { cx: ctx.neg(ap(d as i64)), ux: -1, vx: d as i64, cy: one, uy: 0, vy: 1 },
        MapKind::NegativeControl => MonomialMap { cx: one, ux: 1, vx: 0, cy: one, uy: 1, vy: 1 },
    })
}

fn tripwire(what: &str, symbolic: bool, numeric: bool) -> Result<bool> {
    if symbolic != numeric {
        return Err(Error::Internal(format!(
            "{what}: symbolic reduction says {symbolic} but evaluation at sample points says {numeric}"
        )));
    }
    Ok(symbolic)
}

/// Whether m, read in the ring of exponent `src`, satisfies the relation of
/// exponent `dst`.
pub fn preserves_relation_raw(ctx: &FieldCtx, m: &MonomialMap, src: i64, dst: i64) -> Result<bool> {
    let ring = CoordinateRing::new(ctx, src);
    let n = ctx.q() as i64 + 1;
    let lhs = ring.monomial(ctx.pow_u(m.cy, n as u64), m.uy * n, m.vy * n);
    let mut diff = lhs;
    for k in [2 * dst, 2 * dst + 2] {
        let term = ring.monomial(ctx.pow(m.cx, k).expect("unit"), m.ux * k, m.vx * k);
        diff = ring.sub(&diff, &term);
    }
    let symbolic = diff.is_zero();
    let numeric = ring.sample_points().iter().all(|&pt| {
        let (mx, my) = m.eval(ctx, pt);
        ctx.norm_to_base(my) == defining_rhs(ctx, dst, mx)
    });
    tripwire("relation check", symbolic, numeric)
}

pub fn preserves_relation(ctx: &FieldCtx, m: &MonomialMap, src: &CurveIndex, dst: &CurveIndex) -> Result<bool> {
    if src.q != dst.q || src.q != ctx.q() {
        return Err(Error::InvalidParameter(format!("{src} and {dst} must share q = {}", ctx.q())));
    }
    preserves_relation_raw(ctx, m, src.exponent(), dst.exponent())
}

/// Equality of both components in the ring of the given exponent.
pub fn equal_on_curve(ctx: &FieldCtx, m1: &MonomialMap, m2: &MonomialMap, exponent: i64) -> Result<bool> {
    let ring = CoordinateRing::new(ctx, exponent);
    equal_in_ring(&ring, m1, m2)
}

fn equal_in_ring(ring: &CoordinateRing, m1: &MonomialMap, m2: &MonomialMap) -> Result<bool> {
    let ctx = ring.ctx();
    let symbolic = m1.images(ring) == m2.images(ring);
    let numeric = ring.sample_points().iter().all(|&pt| m1.eval(ctx, pt) == m2.eval(ctx, pt));
    tripwire("map equality", symbolic, numeric)
}

pub fn default_max_order(q: u64) -> u64 {
    2 * (q + 1)
}

/// Least k with m^k equal to the identity on the curve.
pub fn order_on_curve(ctx: &FieldCtx, m: &MonomialMap, c: &CurveIndex, max_order: Option<u64>) -> Result<u64> {
    if !preserves_relation(ctx, m, c, c)? {
        return Err(Error::InvalidParameter(format!("map is not an endomorphism of {c}")));
    }
    let ring = CoordinateRing::new(ctx, c.exponent());
    let limit = max_order.unwrap_or_else(|| default_max_order(c.q));
    let id = MonomialMap::identity();
    let mut power = *m;
    for k in 1..=limit {
        if equal_in_ring(&ring, &power, &id)? {
            return Ok(k);
        }
        power = compose(ctx, m, &power);
    }
    Err(Error::NotFound(format!("no order ≤ {limit} for the map on {c}")))
}

/// The first element of multiplicative order exactly q + 1.
pub fn primitive_norm_one_root(ctx: &FieldCtx) -> FieldElement {
    let n = ctx.q() + 1;
    let primes: Vec<u64> = crate::arith::FactoredInt::new(n).expect("small").primes().collect();
    ctx.elements()
        .filter(|e| !e.is_zero() && ctx.pow_u(*e, n) == FieldElement::ONE)
        .find(|&e| primes.iter().all(|&p| ctx.pow_u(e, n / p) != FieldElement::ONE))
        .expect("F_{q²}* is cyclic of order divisible by q + 1")
}

/// All 2(q+1) maps (±x, by) with b^{q+1} = 1, ordered by (a, b) index.
pub fn h_group(ctx: &FieldCtx) -> Vec<MonomialMap> {
    let n = ctx.q() + 1;
    let bs: Vec<FieldElement> =
        ctx.elements().filter(|e| !e.is_zero() && ctx.pow_u(*e, n) == FieldElement::ONE).collect();
    let mut signs = [FieldElement::ONE, ctx.minus_one()];
    signs.sort();
    signs
        .iter()
        .flat_map(|&a| bs.iter().map(move |&b| (a, b)))
        .map(|(a, b)| standard_map(ctx, MapKind::HElement { a, b }).expect("a² = b^{q+1} = 1"))
        .collect()
}

/// (−x, y), (x, −y), (−x, −y).
pub fn h_involutions(ctx: &FieldCtx) -> [MonomialMap; 3] {
    let (one, m1) = (FieldElement::ONE, ctx.minus_one());
    [(m1, one), (one, m1), (m1, m1)].map(|(a, b)| MonomialMap { cx: a, ux: 1, vx: 0, cy: b, uy: 0, vy: 1 })
}

/// For each involution σ_k of H_i, the index of ω σ_k ω⁻¹ among the
/// involutions.
pub fn omega_conjugation(ctx: &FieldCtx, c: &CurveIndex) -> Result<[usize; 3]> {
    let omega = standard_map(ctx, MapKind::Omega { i: c.exponent() })?;
    let omega_inv = compose(ctx, &omega, &omega);
    let ring = CoordinateRing::new(ctx, c.exponent());
    if !equal_in_ring(&ring, &compose(ctx, &omega, &omega_inv), &MonomialMap::identity())? {
        return Err(Error::Internal(format!("ω² is not the inverse of ω on {c}")));
    }
    let invs = h_involutions(ctx);
    let mut perm = [0usize; 3];
    for (k, sigma) in invs.iter().enumerate() {
        let conj = compose(ctx, &omega, &compose(ctx, sigma, &omega_inv));
        let mut hit = None;
        for (l, tau) in invs.iter().enumerate() {
            if equal_in_ring(&ring, &conj, tau)? {
                hit = Some(l);
            }
        }
        perm[k] = hit.ok_or_else(|| {
            Error::Internal(format!("conjugate of involution {k} by ω is not an involution of H on {c}"))
        })?;
    }
    Ok(perm)
}

pub fn is_three_cycle(perm: &[usize; 3]) -> bool {
    let mut seen = *perm;
    seen.sort_unstable();
    seen == [0, 1, 2] && perm.iter().enumerate().all(|(k, &p)| k != p)
}

#[derive(Debug, Clone)]
pub struct SubfieldGenerators {
    pub case: SubfieldCase,
    pub map: MonomialMap,
    pub x: RingElem,
    pub y: RingElem,
    /// y², generating the fixed field together with x.
    pub t: RingElem,
    pub j: i64,
    /// Canonical index of the subfield t^d = x^{2j}(x² + 1).
    pub target: u64,
    pub relation_holds: bool,
}

/// Generators of the fixed field of one involution of H_i, written in F_i.
pub fn subfield_generators(ctx: &FieldCtx, c: &CurveIndex, case: SubfieldCase) -> Result<SubfieldGenerators> {
    let j = case_index(c.i, c.d, case)? as i64;
    let i = c.exponent();
    let kind = match case {
        SubfieldCase::Sigma0 => MapKind::Identity,
        SubfieldCase::Case1 => MapKind::Iso { congruence: Congruence::Inverse, i: j, j: i },
        SubfieldCase::Case2 => MapKind::Iso { congruence: Congruence::PlusSecond, i: j, j: i },
        SubfieldCase::Case3 => MapKind::Iso { congruence: Congruence::PlusBoth, i: j, j: i },
        SubfieldCase::Case4 => MapKind::Iso { congruence: Congruence::PlusFirst, i: j, j: i },
    };
    let map = standard_map(ctx, kind)?;
    let ring = CoordinateRing::new(ctx, i);
    let (x, y) = map.images(&ring);
    let t = ring.mul(&y, &y);
    let lhs = ring.pow(&t, c.d as u32);
    let x2p1 = ring.add(&ring.mul(&x, &x), &ring.one());
    let x2j = ring.monomial(ctx.pow(map.cx, 2 * j).expect("unit"), map.ux * 2 * j, map.vx * 2 * j);
    let subfield_relation = ring.sub(&lhs, &ring.mul(&x2j, &x2p1)).is_zero();
    let relation_holds = preserves_relation_raw(ctx, &map, i, j)? && subfield_relation;
    let target = canonical_fj(2 * j, c.d)?;
    Ok(SubfieldGenerators { case, map, x, y, t, j, target, relation_holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AutCase {
    /// q = 5, the curve with the large group of order 360.
    Special,
    IEqualsOne,
    /// i = (d−1)/2, isomorphic to F_1.
    MirrorOfOne,
    CubeRootOfUnity,
    Generic,
}

impl AutCase {
    pub fn describe(self) -> &'static str {
        match self {
            AutCase::Special => "q = 5",
            AutCase::IEqualsOne => "i = 1",
            AutCase::MirrorOfOne => "i = (d-1)/2, isomorphic to i = 1",
            AutCase::CubeRootOfUnity => "i^2 + i + 1 = 0 mod d",
            AutCase::Generic => "otherwise",
        }
    }
}

pub fn aut_order(q: u64, i: i64) -> Result<(u64, AutCase)> {
    let c = crate::curve::validate_index(q, i)?;
    Ok(aut_order_for(&c))
}

pub fn aut_order_for(c: &CurveIndex) -> (u64, AutCase) {
    let n = c.q + 1;
    if c.is_special() {
        (360, AutCase::Special)
    } else if c.i == 1 {
        (4 * n, AutCase::IEqualsOne)
    } else if c.i == (c.d - 1) / 2 {
        (4 * n, AutCase::MirrorOfOne)
    } else if (c.i * c.i + c.i + 1).is_multiple_of(c.d) {
        (3 * n, AutCase::CubeRootOfUnity)
    } else {
        (n, AutCase::Generic)
    }
}

/// |H_i| · [G : H_i] for G = H_i, H_i ⋊ ⟨π⟩ or H_i ⋊ ⟨ω⟩, with
/// |H_i| = 2(q+1). This agrees with [`aut_order_for`] for i = 1 and its
/// mirror, and is twice the tabulated value in the other two cases.
pub fn structural_aut_order(c: &CurveIndex) -> u64 {
    let h = 2 * (c.q + 1);
    match aut_order_for(c).1 {
        AutCase::Special => 360,
        AutCase::IEqualsOne | AutCase::MirrorOfOne => 2 * h,
        AutCase::CubeRootOfUnity => 3 * h,
        AutCase::Generic => h,
    }
}

/// The π of F_1 transported to F_{(d−1)/2} along the isomorphism of
/// congruence ij + i + j ≡ 0.
fn mirrored_pi(ctx: &FieldCtx, c: &CurveIndex) -> Result<MonomialMap> {
    let big = c.exponent();
    let pi = standard_map(ctx, MapKind::Pi)?;
    let to_one = standard_map(ctx, MapKind::Iso { congruence: Congruence::PlusBoth, i: 1, j: big })?;
    let raw_back = standard_map(ctx, MapKind::Iso { congruence: Congruence::PlusBoth, i: big, j: 1 })?;
    // the two forms compose to a diagonal map (λx, μy), which is divided out
    let diag = compose(ctx, &raw_back, &to_one);
    if diag.exponent_matrix() != MonomialMap::identity().exponent_matrix() {
        return Err(Error::Internal(format!("transport maps do not compose to a diagonal map on {c}")));
    }
    let undo = MonomialMap { cx: ctx.inv(diag.cx)?, cy: ctx.inv(diag.cy)?, ..MonomialMap::identity() };
    let back = compose(ctx, &undo, &raw_back);
    if !equal_on_curve(ctx, &compose(ctx, &back, &to_one), &MonomialMap::identity(), big)? {
        return Err(Error::Internal(format!("transport maps are not inverse on {c}")));
    }
    Ok(compose(ctx, &back, &compose(ctx, &pi, &to_one)))
}

/// Generators of the automorphism group: H_i, plus π (i = 1 or its mirror)
/// or ω (i² + i + 1 ≡ 0).
pub fn aut_generators(ctx: &FieldCtx, c: &CurveIndex) -> Result<Vec<MonomialMap>> {
    if c.is_special() {
        return Err(Error::CaseNotApplicable("generators are not tabulated for q = 5".into()));
    }
    let zeta = primitive_norm_one_root(ctx);
    let mut gens = vec![
        standard_map(ctx, MapKind::HElement { a: ctx.minus_one(), b: FieldElement::ONE })?,
        standard_map(ctx, MapKind::HElement { a: FieldElement::ONE, b: zeta })?,
    ];
    match aut_order_for(c).1 {
        AutCase::IEqualsOne => gens.push(standard_map(ctx, MapKind::Pi)?),
        AutCase::MirrorOfOne => gens.push(mirrored_pi(ctx, c)?),
        AutCase::CubeRootOfUnity => gens.push(standard_map(ctx, MapKind::Omega { i: c.exponent() })?),
        _ => {}
    }
    Ok(gens)
}

/// Order of the group generated by [`aut_generators`], by closure on
/// reduced images. Every generator must be an automorphism of the curve.
pub fn generated_group_order(ctx: &FieldCtx, c: &CurveIndex, limit: usize) -> Result<u64> {
    let gens = aut_generators(ctx, c)?;
    for g in &gens {
        if !preserves_relation(ctx, g, c, c)? {
            return Err(Error::Internal(format!("generator {} does not preserve {c}", g.render(ctx))));
        }
    }
    let ring = CoordinateRing::new(ctx, c.exponent());
    let id = MonomialMap::identity();
    let mut seen: HashSet<(RingElem, RingElem)> = HashSet::from([id.images(&ring)]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = compose(ctx, &g, s);
            if seen.insert(h.images(&ring)) {
                if seen.len() > limit {
                    return Err(Error::NotFound(format!("group generated on {c} exceeds {limit} elements")));
                }
                queue.push_back(h);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Raw exponent pairs (j, m) with j = md + i, 1 ≤ m ≤ max_m, for the shift
/// isomorphisms onto F_i.
pub fn shift_targets(c: &CurveIndex, max_m: i64) -> Vec<(i64, i64)> {
    (1..=max_m).map(|m| (m * c.d as i64 + c.exponent(), m)).collect()
}

/// Raw exponent pairs (j, m) with i = md − j − 1, for the reflections onto F_i.
pub fn reflect_targets(c: &CurveIndex, max_m: i64) -> Vec<(i64, i64)> {
    (1..=max_m).map(|m| (m * c.d as i64 - c.exponent() - 1, m)).collect()
}
