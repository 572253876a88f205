//! The coordinate ring F_{q²}[x, y]/(y^{q+1} − x^{2e}(x² + 1)), localized at
//! x, y and x² + 1.
//!
//! An element is stored as Σ_{t=0}^{q} P_t(x) y^t / (x² + 1)^b with Laurent
//! polynomials P_t. The exponent e is any integer, so the rings of the raw
//! indices j = md + i used by the shift isomorphisms are available too.

use std::collections::{BTreeMap, HashMap};

use crate::curve::defining_rhs;
use crate::gf::{FieldCtx, FieldElement};

/// Sparse Laurent polynomial in x; never stores zero coefficients.
pub type LaurentPoly = BTreeMap<i64, FieldElement>;

/// Normal form of a ring element. Two elements are equal on the curve iff
/// their normal forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    /// `parts[t]` is the coefficient of y^t, for t in 0..=q.
    pub parts: Vec<LaurentPoly>,
    /// Power of (x² + 1) in the denominator.
    pub den: u32,
}

impl RingElem {
    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_empty())
    }

    /// Number of stored monomials.
    pub fn term_count(&self) -> usize {
        self.parts.iter().map(|p| p.len()).sum()
    }
}

/// Raw expressions accepted by [`CoordinateRing::reduce`].
#[derive(Debug, Clone)]
pub enum Expr {
    Const(FieldElement),
    /// x^k
    X(i64),
    /// y^k
    Y(i64),
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn difference(a: Expr, b: Expr) -> Expr {
        Expr::Sum(vec![a, Expr::Neg(Box::new(b))])
    }
}

pub type Point = (FieldElement, FieldElement);

pub const SAMPLE_POINTS: usize = 64;

pub struct CoordinateRing<'a> {
    ctx: &'a FieldCtx,
    q: u64,
    exponent: i64,
    points: Vec<Point>,
}

fn lp_add_term(ctx: &FieldCtx, p: &mut LaurentPoly, k: i64, c: FieldElement) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(k).or_insert(FieldElement::ZERO);
    *entry = ctx.add(*entry, c);
    if entry.is_zero() {
        p.remove(&k);
    }
}

fn lp_mul(ctx: &FieldCtx, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mut out = LaurentPoly::new();
    for (&i, &u) in a {
        for (&j, &v) in b {
            lp_add_term(ctx, &mut out, i + j, ctx.mul(u, v));
        }
    }
    out
}

fn lp_shift(p: &LaurentPoly, k: i64) -> LaurentPoly {
    p.iter().map(|(&e, &c)| (e + k, c)).collect()
}

/// p · (x² + 1)^n
fn lp_mul_x2p1(ctx: &FieldCtx, p: &LaurentPoly, n: u32) -> LaurentPoly {
    let mut out = p.clone();
    for _ in 0..n {
        let mut next = out.clone();
        for (&e, &c) in &out {
            lp_add_term(ctx, &mut next, e + 2, c);
        }
        out = next;
    }
    out
}

/// p / (x² + 1) when the division is exact.
fn lp_div_x2p1(ctx: &FieldCtx, p: &LaurentPoly) -> Option<LaurentPoly> {
    let (Some((&lo, _)), Some((&hi, _))) = (p.first_key_value(), p.last_key_value()) else {
        return Some(LaurentPoly::new());
    };
    if hi - lo < 2 {
        return None;
    }
    let len = (hi - lo + 1) as usize;
    let mut dense = vec![FieldElement::ZERO; len];
    for (&e, &c) in p {
        dense[(e - lo) as usize] = c;
    }
    let mut quot = LaurentPoly::new();
    for k in (2..len).rev() {
        let c = dense[k];
        if !c.is_zero() {
            quot.insert(k as i64 - 2 + lo, c);
            dense[k - 2] = ctx.sub(dense[k - 2], c);
            dense[k] = FieldElement::ZERO;
        }
    }
    (dense[0].is_zero() && dense[1].is_zero()).then_some(quot)
}

fn lp_eval(ctx: &FieldCtx, p: &LaurentPoly, x: FieldElement) -> FieldElement {
    p.iter().fold(FieldElement::ZERO, |acc, (&e, &c)| {
        ctx.add(acc, ctx.mul(c, ctx.pow(x, e).expect("sample points have x ≠ 0")))
    })
}

impl<'a> CoordinateRing<'a> {
    pub fn new(ctx: &'a FieldCtx, exponent: i64) -> Self {
        let q = ctx.q();
        Self { ctx, q, exponent, points: sample_points(ctx, exponent) }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Deterministic affine points with x ∉ {0, ±α} and y ≠ 0.
    pub fn sample_points(&self) -> &[Point] {
        &self.points
    }

    pub fn zero(&self) -> RingElem {
        RingElem { parts: vec![LaurentPoly::new(); self.q as usize + 1], den: 0 }
    }

    pub fn constant(&self, c: FieldElement) -> RingElem {
        self.monomial(c, 0, 0)
    }

    pub fn one(&self) -> RingElem {
        self.constant(FieldElement::ONE)
    }

    pub fn x(&self) -> RingElem {
        self.monomial(FieldElement::ONE, 1, 0)
    }

    pub fn y(&self) -> RingElem {
        self.monomial(FieldElement::ONE, 0, 1)
    }

    /// c · x^u · y^v, with y^{q+1} rewritten to x^{2e}(x² + 1).
    pub fn monomial(&self, c: FieldElement, u: i64, v: i64) -> RingElem {
        let mut out = self.zero();
        if c.is_zero() {
            return out;
        }
        let n = self.q as i64 + 1;
        let (k, t) = (v.div_euclid(n), v.rem_euclid(n));
        let base = LaurentPoly::from([(u + 2 * self.exponent * k, c)]);
        if k >= 0 {
            out.parts[t as usize] = lp_mul_x2p1(self.ctx, &base, k as u32);
        } else {
            out.parts[t as usize] = base;
            out.den = (-k) as u32;
        }
        out
    }

    fn normalize(&self, mut e: RingElem) -> RingElem {
        if e.is_zero() {
            e.den = 0;
            return e;
        }
        while e.den > 0 {
            let divided: Option<Vec<LaurentPoly>> = e.parts.iter().map(|p| lp_div_x2p1(self.ctx, p)).collect();
            match divided {
                Some(parts) => {
                    e.parts = parts;
                    e.den -= 1;
                }
                None => break,
            }
        }
        e
    }

    fn lift(&self, e: &RingElem, den: u32) -> Vec<LaurentPoly> {
        e.parts.iter().map(|p| lp_mul_x2p1(self.ctx, p, den - e.den)).collect()
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let den = a.den.max(b.den);
        let (pa, pb) = (self.lift(a, den), self.lift(b, den));
        let parts = pa
            .into_iter()
            .zip(pb)
            .map(|(mut s, t)| {
                for (k, c) in t {
                    lp_add_term(self.ctx, &mut s, k, c);
                }
                s
            })
            .collect();
        self.normalize(RingElem { parts, den })
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        let parts = a.parts.iter().map(|p| p.iter().map(|(&k, &c)| (k, self.ctx.neg(c))).collect()).collect();
        RingElem { parts, den: a.den }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &RingElem, c: FieldElement) -> RingElem {
        if c.is_zero() {
            return self.zero();
        }
        let parts = a.parts.iter().map(|p| p.iter().map(|(&k, &v)| (k, self.ctx.mul(v, c))).collect()).collect();
        RingElem { parts, den: a.den }
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let n = self.q as usize + 1;
        let mut parts = vec![LaurentPoly::new(); n];
        // products landing in y^{n+t} pick up one factor x^{2e}(x² + 1)
        let mut carry = vec![LaurentPoly::new(); n];
        for (s, ps) in a.parts.iter().enumerate() {
            if ps.is_empty() {
                continue;
            }
            for (t, pt) in b.parts.iter().enumerate() {
                if pt.is_empty() {
                    continue;
                }
                let prod = lp_mul(self.ctx, ps, pt);
                let (dest, idx) = if s + t < n { (&mut parts, s + t) } else { (&mut carry, s + t - n) };
                for (k, c) in prod {
                    lp_add_term(self.ctx, &mut dest[idx], k, c);
                }
            }
        }
        for (t, c) in carry.into_iter().enumerate() {
            let lifted = lp_mul_x2p1(self.ctx, &lp_shift(&c, 2 * self.exponent), 1);
            for (k, v) in lifted {
                lp_add_term(self.ctx, &mut parts[t], k, v);
            }
        }
        self.normalize(RingElem { parts, den: a.den + b.den })
    }

    pub fn pow(&self, a: &RingElem, mut k: u32) -> RingElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn reduce(&self, e: &Expr) -> RingElem {
        match e {
            Expr::Const(c) => self.constant(*c),
            Expr::X(k) => self.monomial(FieldElement::ONE, *k, 0),
            Expr::Y(k) => self.monomial(FieldElement::ONE, 0, *k),
            Expr::Neg(inner) => self.neg(&self.reduce(inner)),
            Expr::Sum(terms) => terms.iter().fold(self.zero(), |acc, t| self.add(&acc, &self.reduce(t))),
            Expr::Product(terms) => terms.iter().fold(self.one(), |acc, t| self.mul(&acc, &self.reduce(t))),
            Expr::Pow(inner, k) => self.pow(&self.reduce(inner), *k),
        }
    }

    /// Value at an affine point with x ≠ 0 and x² + 1 ≠ 0.
    pub fn eval(&self, a: &RingElem, (x, y): Point) -> FieldElement {
        let ctx = self.ctx;
        let mut acc = FieldElement::ZERO;
        let mut ypow = FieldElement::ONE;
        for p in &a.parts {
            acc = ctx.add(acc, ctx.mul(lp_eval(ctx, p, x), ypow));
            ypow = ctx.mul(ypow, y);
        }
        let d = ctx.add(ctx.mul(x, x), FieldElement::ONE);
        ctx.mul(acc, ctx.pow(d, -(a.den as i64)).expect("x² + 1 ≠ 0 at sample points"))
    }

    /// Human-readable rendering, e.g. `(1)*x^2*y^1 + ...`, for reports.
    pub fn render(&self, a: &RingElem) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (t, p) in a.parts.iter().enumerate() {
            for (&k, &c) in p {
                let mut s = format!("[{}]", self.ctx.render(c));
                if k != 0 {
                    s.push_str(&format!("x^{k}"));
                }
                if t != 0 {
                    s.push_str(&format!("y^{t}"));
                }
                terms.push(s);
            }
        }
        let body = terms.join(" + ");
        if a.den == 0 {
            body
        } else {
            format!("({body}) / (x^2+1)^{}", a.den)
        }
    }
}

/// Up to [`SAMPLE_POINTS`] points of y^{q+1} = x^{2e}(x² + 1): x runs over the
/// admissible abscissae in enumeration order and the y over each fibre is
/// taken round-robin.
fn sample_points(ctx: &FieldCtx, exponent: i64) -> Vec<Point> {
    let (alpha, _) = ctx.special_elements();
    let minus_alpha = ctx.neg(alpha);
    let mut fibres: HashMap<FieldElement, Vec<FieldElement>> = HashMap::new();
    for y in ctx.elements().filter(|y| !y.is_zero()) {
        fibres.entry(ctx.norm_to_base(y)).or_default().push(y);
    }
    let xs: Vec<(FieldElement, FieldElement)> = ctx
        .elements()
        .filter(|&x| !x.is_zero() && x != alpha && x != minus_alpha)
        .map(|x| (x, defining_rhs(ctx, exponent, x)))
        .filter(|&(_, v)| !v.is_zero() && fibres.contains_key(&v))
        .collect();
    if xs.is_empty() {
        return Vec::new();
    }
    (0..SAMPLE_POINTS)
        .map(|k| {
            let (x, v) = xs[k % xs.len()];
            let fibre = &fibres[&v];
            (x, fibre[(k + k / xs.len()) % fibre.len()])
        })
        .collect()
}
