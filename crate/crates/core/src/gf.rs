//! Exact arithmetic in F_{q²} for odd prime powers q = p^n.
//!
//! F_{q²} is realised as F_p[t]/(m(t)) with m the lexicographically smallest
//! monic irreducible of degree 2n, where coefficient sequences (c₀, …, c_{2n−1})
//! are compared with c₀ most significant. An element is stored as the base-p
//! integer Σ cₖ pᵏ of its coefficient sequence, so counting through indices
//! 0, 1, 2, … enumerates coefficient sequences with the low digit fastest.
//!
//! Multiplication goes through discrete log tables built once per context
//! from schoolbook polynomial multiplication; addition is digit-wise.

use std::fmt;

use serde::Serialize;

use crate::arith::{prime_power, FactoredInt};
use crate::error::{Error, Result};

/// Largest field (q² elements) a context will build tables for.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// An element of F_{q²}, encoded as Σ cₖ pᵏ of its coefficients over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Caller guarantees the index is below the field size.
    #[cfg(test)]
    pub(crate) fn from_index_unchecked(index: u32) -> Self {
        FieldElement(index)
    }
}

#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    degree: usize,
    size: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    minus_one: FieldElement,
    alpha: FieldElement,
    a: FieldElement,
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, coefficient vectors low-to-high.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    crate::arith::mod_inverse(a, p).expect("nonzero residue mod prime")
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (k, &c) in m.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|k| {
            let x = a.get(k).copied().unwrap_or(0);
            let y = b.get(k).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Rabin's irreducibility test for a monic `m` over F_p.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let m = trim(m.to_vec());
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // frob[k] = x^(p^k) mod m
    let mut frob = vec![poly_rem(&x, &m, p)];
    for k in 1..=deg {
        let next = poly_powmod(&frob[k - 1], p, &m, p);
        frob.push(next);
    }
    if !poly_rem(&poly_sub(&frob[deg], &x, p), &m, p).is_empty() {
        return false;
    }
    let Ok(f) = FactoredInt::new(deg as u64) else {
        return false;
    };
    let coprime = f.primes().all(|r| {
        let h = poly_sub(&frob[deg / r as usize], &x, p);
        poly_gcd(&h, &m, p).len() == 1
    });
    coprime
}

/// Lexicographically smallest monic irreducible of the given degree over F_p.
fn smallest_irreducible(p: u64, degree: usize) -> Vec<u64> {
    // digits[0] is c₀ and is the most significant position of the counter
    let mut digits = vec![0u64; degree];
    loop {
        let mut m = digits.clone();
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
        let mut k = degree;
        loop {
            if k == 0 {
                unreachable!("irreducible polynomials exist in every degree");
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
        }
    }
}

impl FieldCtx {
    /// Builds F_{q²} for an odd prime power q ≥ 5.
    pub fn new(q: u64) -> Result<Self> {
        if q < 5 {
            return Err(Error::InvalidParameter(format!("q = {q} must be at least 5")));
        }
        if q.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("q = {q} must be odd")));
        }
        let (p, n) = prime_power(q).ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
        let size = q * q;
        if size > MAX_FIELD_SIZE {
            return Err(Error::InvalidParameter(format!("q = {q} too large: q² exceeds {MAX_FIELD_SIZE}")));
        }
        let degree = 2 * n as usize;
        let modulus = smallest_irreducible(p, degree);

        let mut ctx = FieldCtx {
            p,
            n,
            q,
            degree,
            size,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            minus_one: FieldElement((p - 1) as u32),
            alpha: FieldElement::ZERO,
            a: FieldElement::ZERO,
        };
        ctx.build_tables()?;
        ctx.alpha = ctx
            .elements()
            .find(|&e| ctx.mul(e, e) == ctx.minus_one)
            .ok_or_else(|| Error::Internal("no square root of -1 in F_{q²}".into()))?;
        ctx.a = ctx
            .elements()
            .find(|&e| ctx.norm_to_base(e) == ctx.minus_one)
            .ok_or_else(|| Error::Internal("norm map misses -1".into()))?;
        Ok(ctx)
    }

    fn build_tables(&mut self) -> Result<()> {
        let order = self.size - 1;
        let order_factors = FactoredInt::new(order)?;
        let one = vec![1u64];
        let generator = (2..self.size)
            .map(|k| self.poly_of(FieldElement(k as u32)))
            .find(|g| order_factors.primes().all(|r| poly_powmod(g, order / r, &self.modulus, self.p) != one))
            .ok_or_else(|| Error::Internal("no primitive element found".into()))?;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; self.size as usize];
        let mut cur = one;
        for k in 0..order {
            let e = self.encode_poly(&cur);
            if log[e.0 as usize] != u32::MAX {
                return Err(Error::Internal("generator order below q² - 1".into()));
            }
            log[e.0 as usize] = k as u32;
            exp.push(e.0);
            cur = poly_mulmod(&cur, &generator, &self.modulus, self.p);
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    fn poly_of(&self, e: FieldElement) -> Vec<u64> {
        trim(self.coeffs(e))
    }

    fn encode_poly(&self, c: &[u64]) -> FieldElement {
        let mut idx = 0u64;
        for &d in c.iter().rev() {
            idx = idx * self.p + d;
        }
        FieldElement(idx as u32)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// The exponent n with q = p^n.
    pub fn extension_degree(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of elements, q².
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Monic defining polynomial over F_p, coefficients low-to-high (degree 2n).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn minus_one(&self) -> FieldElement {
        self.minus_one
    }

    /// Image of an integer under Z → F_p ⊂ F_{q²}.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(crate::arith::reduce_mod(k, self.p) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.degree || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter(format!("expected {} coefficients in [0, {})", self.degree, self.p)));
        }
        Ok(self.encode_poly(coeffs))
    }

    pub fn from_index(&self, index: u32) -> Result<FieldElement> {
        if u64::from(index) >= self.size {
            return Err(Error::InvalidParameter(format!("index {index} outside field")));
        }
        Ok(FieldElement(index))
    }

    /// Coefficients of `e` over F_p, low-to-high, always of length 2n.
    pub fn coeffs(&self, e: FieldElement) -> Vec<u64> {
        let mut idx = u64::from(e.0);
        (0..self.degree)
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d
            })
            .collect()
    }

    /// All elements in enumeration order (low coefficient fastest).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size as u32).map(FieldElement)
    }

    /// "c0,c1,...", the textual form used in reports.
    pub fn render(&self, e: FieldElement) -> String {
        self.coeffs(e).iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }

    fn digitwise(&self, a: FieldElement, b: FieldElement, op: impl Fn(u64, u64) -> u64) -> FieldElement {
        let (mut x, mut y) = (u64::from(a.0), u64::from(b.0));
        let (mut out, mut scale) = (0u64, 1u64);
        for _ in 0..self.degree {
            out += op(x % self.p, y % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        self.digitwise(a, b, |x, y| (x + y) % p)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        self.digitwise(a, b, |x, y| (x + p - y) % p)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let order = self.size - 1;
        let k = (u64::from(self.log[a.0 as usize]) + u64::from(self.log[b.0 as usize])) % order;
        FieldElement(self.exp[k as usize])
    }

    /// Multiplication straight from the polynomial model, bypassing the tables.
    pub fn mul_schoolbook(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = poly_mulmod(&self.poly_of(a), &self.poly_of(b), &self.modulus, self.p);
        self.encode_poly(&prod)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let order = self.size - 1;
        let k = (order - u64::from(self.log[a.0 as usize])) % order;
        Ok(FieldElement(self.exp[k as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k` for any integer k; negative exponents need a nonzero base and
    /// `pow(0, k)` is an error for k ≤ 0.
    pub fn pow(&self, a: FieldElement, k: i64) -> Result<FieldElement> {
        if a.is_zero() {
            return if k > 0 { Ok(FieldElement::ZERO) } else { Err(Error::Domain(format!("0^{k} is undefined"))) };
        }
        let mut e = crate::arith::reduce_mod(k, self.size - 1);
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Power with a non-negative exponent, which never fails.
    pub fn pow_u(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        self.pow(a, k as i64).expect("positive exponent")
    }

    /// e ↦ e^q.
    pub fn frobenius(&self, e: FieldElement) -> FieldElement {
        self.pow_u(e, self.q)
    }

    /// e^{q+1}, the norm from F_{q²} down to F_q.
    pub fn norm_to_base(&self, e: FieldElement) -> FieldElement {
        self.pow_u(e, self.q + 1)
    }

    pub fn is_in_base(&self, e: FieldElement) -> bool {
        self.frobenius(e) == e
    }

    /// The first α with α² = −1 and the first a with a^{q+1} = −1 in
    /// enumeration order.
    pub fn special_elements(&self) -> (FieldElement, FieldElement) {
        (self.alpha, self.a)
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^2 = F_{}[t]/(", self.q, self.p)?;
        let terms: Vec<String> = self
            .modulus
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                1 if c == 1 => "t".to_string(),
                1 => format!("{c}t"),
                _ if c == 1 => format!("t^{k}"),
                _ => format!("{c}t^{k}"),
            })
            .collect();
        write!(f, "{})", terms.join(" + "))
    }
}
