//! Members F_i : y^{q+1} = x^{2i}(x² + 1) of the family, the divisors of
//! x, y and dx on the six special places, and rational place counting.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{gcd, prime_power, reduce_mod};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Largest q for which the O(q⁴) pair enumeration runs without an explicit
/// override.
pub const NAIVE_Q_LIMIT: u64 = 25;

/// A validated member of the family: q ≡ 1 (mod 4), d = (q+1)/2 odd,
/// gcd(i(i+1), d) = 1 and 1 ≤ i ≤ (d−1)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveIndex {
    pub q: u64,
    pub d: u64,
    pub i: u64,
}

impl CurveIndex {
    pub fn genus(&self) -> u64 {
        self.q - 1
    }

    /// q = 5 is accepted but sits outside the generic theory (d = 3).
    pub fn is_special(&self) -> bool {
        self.q == 5
    }

    /// The exponent i as a signed value, for use in Laurent arithmetic.
    pub fn exponent(&self) -> i64 {
        self.i as i64
    }
}

impl fmt::Display for CurveIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (q = {}, d = {})", self.i, self.q, self.d)
    }
}

/// Reduces i_raw to the representative of {i mod d, −i−1 mod d} in
/// [1, (d−1)/2].
pub fn canonicalize_index(i_raw: i64, d: u64) -> Result<u64> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("d = {d} must be odd and at least 3")));
    }
    let r = reduce_mod(i_raw, d);
    if gcd(r * (r + 1) % d, d) != 1 {
        return Err(Error::InvalidIndex { i: i_raw, d });
    }
    let half = (d - 1) / 2;
    Ok(if r <= half { r } else { d - 1 - r })
}

/// d = (q+1)/2 for an odd prime power q ≥ 5 with q ≡ 1 (mod 4).
pub fn d_for_q(q: u64) -> Result<u64> {
    if q < 5 || q.is_multiple_of(2) || prime_power(q).is_none() {
        return Err(Error::InvalidParameter(format!("q = {q} must be an odd prime power ≥ 5")));
    }
    let d = q.div_ceil(2);
    if d.is_multiple_of(2) {
        return Err(Error::UnsupportedQ { q, d });
    }
    Ok(d)
}

pub fn validate_index(q: u64, i_raw: i64) -> Result<CurveIndex> {
    let d = d_for_q(q)?;
    let i = canonicalize_index(i_raw, d)?;
    Ok(CurveIndex { q, d, i })
}

/// Canonical indices of the family for q, ascending.
pub fn indices_for_q(q: u64) -> Result<Vec<CurveIndex>> {
    let d = d_for_q(q)?;
    Ok((1..=(d - 1) / 2).filter(|&i| gcd(i * (i + 1) % d, d) == 1).map(|i| CurveIndex { q, d, i }).collect())
}

/// The six places over x ∈ {0, ∞, α, −α}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PlaceLabel {
    Zero1,
    Zero2,
    Inf1,
    Inf2,
    Alpha,
    MinusAlpha,
}

impl PlaceLabel {
    pub const ALL: [PlaceLabel; 6] = [
        PlaceLabel::Zero1,
        PlaceLabel::Zero2,
        PlaceLabel::Inf1,
        PlaceLabel::Inf2,
        PlaceLabel::Alpha,
        PlaceLabel::MinusAlpha,
    ];
}

/// Integer combination of places of Ω; every place involved has degree one.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FormalDivisor {
    pub coefficients: BTreeMap<PlaceLabel, i64>,
}

impl FormalDivisor {
    fn from_pairs(zero: i64, alpha: i64, inf: i64) -> Self {
        let coefficients = [
            (PlaceLabel::Zero1, zero),
            (PlaceLabel::Zero2, zero),
            (PlaceLabel::Alpha, alpha),
            (PlaceLabel::MinusAlpha, alpha),
            (PlaceLabel::Inf1, inf),
            (PlaceLabel::Inf2, inf),
        ]
        .into_iter()
        .collect();
        Self { coefficients }
    }

    pub fn coefficient(&self, place: PlaceLabel) -> i64 {
        self.coefficients.get(&place).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.coefficients.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorTable {
    pub x: FormalDivisor,
    pub y: FormalDivisor,
    pub dx: FormalDivisor,
}

/// Divisors of x, y and dx. The coefficient of (P_α + P_{−α}) in (dx) is q;
/// it is the only value giving deg (dx) = 2g − 2 and it is what the
/// valuations of x^{k−1} y^{l−q−1} dx at P_α require.
pub fn divisor_table(c: &CurveIndex) -> DivisorTable {
    let (d, i, q) = (c.d as i64, c.i as i64, c.q as i64);
    DivisorTable {
        x: FormalDivisor::from_pairs(d, 0, -d),
        y: FormalDivisor::from_pairs(i, 1, -(i + 1)),
        dx: FormalDivisor::from_pairs(d - 1, q, -(d + 1)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    /// One pass over x using the norm map: O(q²) field operations.
    Fast,
    /// All (x, y) pairs: O(q⁴) comparisons; oracle only.
    Naive,
}

/// f(x) = x^{2i}(x² + 1). At x = 0 a nonzero exponent is read as a zero
/// (negative exponents only arise away from x = 0).
pub fn defining_rhs(ctx: &FieldCtx, exponent: i64, x: FieldElement) -> FieldElement {
    let x2 = ctx.mul(x, x);
    let lhs = if x.is_zero() {
        if exponent == 0 {
            FieldElement::ONE
        } else {
            FieldElement::ZERO
        }
    } else {
        ctx.pow(x, 2 * exponent).expect("nonzero base")
    };
    ctx.mul(lhs, ctx.add(x2, FieldElement::ONE))
}

fn check_ctx(ctx: &FieldCtx, c: &CurveIndex) -> Result<()> {
    if ctx.q() != c.q {
        return Err(Error::InvalidParameter(format!("field built for q = {} but curve has q = {}", ctx.q(), c.q)));
    }
    Ok(())
}

/// S = #{(x, y) ∈ F_{q²}² : y^{q+1} = x^{2i}(x² + 1)}.
pub fn affine_solution_count(ctx: &FieldCtx, c: &CurveIndex, method: CountMethod, naive_limit: u64) -> Result<u64> {
    check_ctx(ctx, c)?;
    let e = c.exponent();
    match method {
        CountMethod::Fast => {
            let (mut zeros, mut units) = (0u64, 0u64);
            for x in ctx.elements() {
                let fx = defining_rhs(ctx, e, x);
                if fx.is_zero() {
                    zeros += 1;
                } else if ctx.is_in_base(fx) {
                    units += 1;
                }
            }
            Ok(zeros + (c.q + 1) * units)
        }
        CountMethod::Naive => {
            if c.q > naive_limit {
                return Err(Error::InvalidParameter(format!(
                    "naive count limited to q ≤ {naive_limit}, got q = {}",
                    c.q
                )));
            }
            let powers: Vec<FieldElement> = ctx.elements().map(|y| ctx.pow_u(y, c.q + 1)).collect();
            let mut s = 0u64;
            for x in ctx.elements() {
                let fx = defining_rhs(ctx, e, x);
                s += powers.iter().filter(|&&v| v == fx).count() as u64;
            }
            Ok(s)
        }
    }
}

/// Number of degree-one places, S + 3: the fibre over x = 0 carries two
/// places for one affine point, the fibres over ±α one each, and two places
/// lie over x = ∞.
pub fn count_places(ctx: &FieldCtx, c: &CurveIndex, method: CountMethod) -> Result<u64> {
    count_places_with_limit(ctx, c, method, NAIVE_Q_LIMIT)
}

pub fn count_places_with_limit(ctx: &FieldCtx, c: &CurveIndex, method: CountMethod, naive_limit: u64) -> Result<u64> {
    Ok(affine_solution_count(ctx, c, method, naive_limit)? + 3)
}

/// q² + 1 + 2gq with g = q − 1.
pub fn hasse_weil_bound(q: u64) -> u64 {
    q * q + 1 + 2 * (q - 1) * q
}

pub fn is_maximal(ctx: &FieldCtx, c: &CurveIndex) -> Result<bool> {
    Ok(count_places(ctx, c, CountMethod::Fast)? == hasse_weil_bound(c.q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        assert_eq!(validate_index(13, 1).unwrap(), CurveIndex { q: 13, d: 7, i: 1 });
        assert!(matches!(validate_index(13, 6), Err(Error::InvalidIndex { .. })));
        assert_eq!(validate_index(13, 9).unwrap().i, 2);
        assert!(matches!(validate_index(17, 3), Err(Error::InvalidIndex { .. })));
        assert!(matches!(validate_index(11, 1), Err(Error::UnsupportedQ { q: 11, d: 6 })));
        assert!(matches!(validate_index(15, 1), Err(Error::InvalidParameter(_))));
        assert!(validate_index(5, 1).unwrap().is_special());
    }

    #[test]
    fn canonical_examples() {
        for d in [7u64, 9, 11, 13, 15, 25] {
            assert_eq!(canonicalize_index(d as i64 - 2, d).unwrap(), 1);
            assert_eq!(canonicalize_index((d as i64 - 1) / 2, d).unwrap(), (d - 1) / 2);
            assert!(canonicalize_index(0, d).is_err());
            assert!(canonicalize_index(d as i64 - 1, d).is_err());
        }
        assert_eq!(canonicalize_index(2, 7).unwrap(), 2);
        assert_eq!(canonicalize_index(-2, 7).unwrap(), 1);
    }

    #[test]
    fn canonical_representative_is_one_of_the_two_candidates() {
        for d in (5u64..60).step_by(2) {
            for raw in -3 * d as i64..3 * d as i64 {
                if let Ok(i) = canonicalize_index(raw, d) {
                    assert!((1..=(d - 1) / 2).contains(&i));
                    let r = reduce_mod(raw, d);
                    assert!(i == r || i == reduce_mod(-raw - 1, d));
                }
            }
        }
    }

    #[test]
    fn divisor_degrees() {
        for q in [5u64, 9, 13, 17, 25, 29] {
            for c in indices_for_q(q).unwrap() {
                let t = divisor_table(&c);
                assert_eq!(t.x.degree(), 0);
                assert_eq!(t.y.degree(), 0);
                assert_eq!(t.dx.degree(), 2 * q as i64 - 4);
                assert_eq!(t.dx.coefficient(PlaceLabel::Alpha), q as i64);
            }
        }
    }

    #[test]
    fn counts_small_fields() {
        let ctx = FieldCtx::new(13).unwrap();
        let c = validate_index(13, 1).unwrap();
        assert_eq!(count_places(&ctx, &c, CountMethod::Fast).unwrap(), 482);
        assert!(is_maximal(&ctx, &c).unwrap());
        assert!(is_maximal(&ctx, &validate_index(13, 2).unwrap()).unwrap());

        let ctx5 = FieldCtx::new(5).unwrap();
        let c5 = validate_index(5, 1).unwrap();
        assert_eq!(count_places(&ctx5, &c5, CountMethod::Fast).unwrap(), 66);
        assert_eq!(count_places(&ctx5, &c5, CountMethod::Naive).unwrap(), 66);
    }

    #[test]
    fn naive_limit_and_ctx_mismatch() {
        let ctx = FieldCtx::new(29).unwrap();
        let c = validate_index(29, 1).unwrap();
        assert!(count_places(&ctx, &c, CountMethod::Naive).is_err());
        let other = validate_index(13, 1).unwrap();
        assert!(count_places(&ctx, &other, CountMethod::Fast).is_err());
    }

    #[test]
    fn affine_count_is_3_mod_q_plus_1() {
        for q in [5u64, 9, 13, 17] {
            let ctx = FieldCtx::new(q).unwrap();
            for c in indices_for_q(q).unwrap() {
                let s = affine_solution_count(&ctx, &c, CountMethod::Fast, NAIVE_Q_LIMIT).unwrap();
                assert_eq!(s % (q + 1), 3);
            }
        }
    }
}
