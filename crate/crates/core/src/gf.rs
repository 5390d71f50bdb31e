//! Finite fields GF(p^e) with exact arithmetic.
//!
//! An element is stored as its coefficient vector in the polynomial basis
//! `1, t, ..., t^(e-1)`, packed as base-`p` digits into a `u32` (constant term
//! least significant). The packed value doubles as the fixed total order on
//! elements used everywhere a deterministic choice is needed.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get exp/log tables for multiplication.
const TABLE_LIMIT: u32 = 1 << 16;
/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

/// Packed field element. Meaningless without the [`Field`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    e: u32,
    order: u32,
    /// Monic modulus, low-to-high, length `e + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
}

/// A finite field GF(p^e). Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}; modulus {:?})",
            self.0.p, self.0.e, self.0.modulus
        )
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Builds GF(p^e) with the lexicographically smallest monic irreducible
/// modulus, comparing coefficients from the constant term upwards.
pub fn make_field(p: u64, e: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !(1..=12).contains(&e) {
        return Err(Error::DegreeOutOfRange(e));
    }
    let order = p
        .checked_pow(e)
        .filter(|&o| o <= MAX_ORDER)
        .ok_or(Error::FieldTooLarge(p.saturating_pow(e)))?;
    let p32 = p as u32;
    let modulus = smallest_irreducible(p32, e as usize);
    Ok(Field::from_modulus(p32, e, order as u32, modulus))
}

/// Builds the field of order `q`, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<Field> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    make_field(p, e)
}

fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    let count = (p as u64).pow(e as u32);
    for n in 0..count {
        // c0 is the most significant digit of n, so n enumerates in
        // low-to-high lexicographic order.
        let mut coeffs = vec![0u32; e + 1];
        let mut rest = n;
        for i in (0..e).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[e] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree at most half.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut rest = n;
            for c in g.iter_mut().take(d) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            g[d] = 1;
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `f` by the monic `g` over GF(p).
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    while r.len() > dg {
        let lead = r.pop().unwrap() % p;
        if lead != 0 {
            let shift = r.len() - dg;
            for (i, &gc) in g.iter().take(dg).enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * gc as u64) % p;
            }
        }
    }
    r.into_iter().map(|c| (c % p) as u32).collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    fn from_modulus(p: u32, e: u32, order: u32, modulus: Vec<u32>) -> Field {
        let mut inner = Inner {
            p,
            e,
            order,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add: Vec::new(),
            neg: Vec::new(),
        };
        let field = Field(Arc::new(Inner {
            p,
            e,
            order,
            modulus: inner.modulus.clone(),
            exp: Vec::new(),
            log: Vec::new(),
            add: Vec::new(),
            neg: Vec::new(),
        }));
        if order <= TABLE_LIMIT {
            inner.neg = (0..order).map(|a| field.neg_slow(a)).collect();
            if order <= ADD_TABLE_LIMIT && p != 2 && e > 1 {
                inner.add = (0..order * order)
                    .map(|i| field.add_slow(i / order, i % order))
                    .collect();
            }
            if order > 2 {
                let g = field.find_generator();
                let n = (order - 1) as usize;
                let mut exp = vec![0u32; 2 * n];
                let mut log = vec![0u32; order as usize];
                let mut x = 1u32;
                for (i, slot) in exp.iter_mut().take(n).enumerate() {
                    *slot = x;
                    log[x as usize] = i as u32;
                    x = field.mul_slow(x, g);
                }
                for i in n..2 * n {
                    exp[i] = exp[i - n];
                }
                inner.exp = exp;
                inner.log = log;
            }
        }
        Field(Arc::new(inner))
    }

    fn find_generator(&self) -> u32 {
        let n = (self.0.order - 1) as u64;
        let factors = prime_factors(n);
        (2..self.0.order)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, n / r) != 1))
            .unwrap_or(1)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u64 {
        self.0.order as u64
    }

    /// Monic modulus, coefficients low-to-high.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The canonical generator `t` of the polynomial basis.
    pub fn generator(&self) -> Elem {
        if self.0.e == 1 {
            // t is a root of the degree-one modulus t + c0.
            self.neg(Elem(self.0.modulus[0]))
        } else {
            Elem(self.0.p)
        }
    }

    pub fn elem(&self, index: u32) -> Elem {
        assert!(
            index < self.0.order,
            "index {index} outside GF({})",
            self.0.order
        );
        Elem(index)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.order).map(Elem)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut rest = a.0;
        (0..self.0.e)
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Precondition(format!(
                "coefficient vector {coeffs:?} is not an element of GF({})",
                self.0.order
            )));
        }
        Ok(Elem(
            coeffs.iter().rev().fold(0, |acc, &c| acc * self.0.p + c),
        ))
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.0.e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let p = self.0.p;
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.0.e {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p as u64;
        let e = self.0.e as usize;
        let da = self.coeffs(Elem(a));
        let db = self.coeffs(Elem(b));
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (e..prod.len()).rev() {
            let lead = prod[top];
            if lead != 0 {
                for (i, &m) in self.0.modulus.iter().take(e).enumerate() {
                    let idx = top - e + i;
                    prod[idx] = (prod[idx] + (p - lead) * m as u64) % p;
                }
            }
        }
        prod.truncate(e);
        prod.iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.0.p + c as u32)
    }

    fn pow_slow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            n >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            Elem(a.0 ^ b.0)
        } else if inner.e == 1 {
            let s = a.0 + b.0;
            Elem(if s >= inner.p { s - inner.p } else { s })
        } else if !inner.add.is_empty() {
            Elem(inner.add[(a.0 * inner.order + b.0) as usize])
        } else {
            Elem(self.add_slow(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            a
        } else if inner.e == 1 {
            Elem(if a.0 == 0 { 0 } else { inner.p - a.0 })
        } else if !inner.neg.is_empty() {
            Elem(inner.neg[a.0 as usize])
        } else {
            Elem(self.neg_slow(a.0))
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if inner.e == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32);
        }
        if !inner.exp.is_empty() {
            let idx = inner.log[a.0 as usize] + inner.log[b.0 as usize];
            return Elem(inner.exp[idx as usize]);
        }
        Elem(self.mul_slow(a.0, b.0))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let inner = &*self.0;
        if !inner.exp.is_empty() {
            let n = inner.order - 1;
            return Ok(Elem(
                inner.exp[((n - inner.log[a.0 as usize]) % n) as usize],
            ));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `0^0 = 1`.
    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The absolute Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.characteristic())
    }

    /// Unique `y` with `y^q = x`, computed as `x^(q^(k-1))` where the field
    /// has order `q^k`.
    pub fn qth_root(&self, x: Elem, q: u64) -> Result<Elem> {
        let k = self.root_tower_height(q)?;
        Ok(self.pow(x, q.pow(k - 1)))
    }

    fn root_tower_height(&self, q: u64) -> Result<u32> {
        let incompatible = || Error::IncompatibleRoot {
            q,
            order: self.order(),
        };
        let (p, e) = prime_power(q).ok_or_else(incompatible)?;
        if p != self.characteristic() || !self.degree().is_multiple_of(e) {
            return Err(incompatible());
        }
        Ok(self.degree() / e)
    }

    /// Evaluates a polynomial with prime-subfield coefficients (low-to-high).
    fn eval_prime_poly(&self, coeffs: &[u32], x: Elem) -> Elem {
        coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| {
            self.add(self.mul(acc, x), self.from_int(c as i64))
        })
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.random_range(0..self.0.order))
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.random_range(1..self.0.order))
    }

    pub fn wrap(&self, a: Elem) -> FieldElem {
        FieldElem {
            field: self.clone(),
            value: a,
        }
    }
}

/// A field homomorphism GF(p^e) -> GF(p^(e k)) sending the source generator
/// to the smallest root of the source modulus in the target.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Field,
    dst: Field,
    root: Elem,
}

impl Embedding {
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding> {
        if src.characteristic() != dst.characteristic()
            || !dst.degree().is_multiple_of(src.degree())
        {
            return Err(Error::IncompatibleEmbedding {
                src: src.order(),
                dst: dst.order(),
            });
        }
        let root = dst
            .elements()
            .find(|&x| dst.eval_prime_poly(src.modulus(), x).is_zero())
            .ok_or(Error::NoEmbeddingRoot)?;
        Ok(Embedding {
            src: src.clone(),
            dst: dst.clone(),
            root,
        })
    }

    pub fn source(&self) -> &Field {
        &self.src
    }

    pub fn target(&self) -> &Field {
        &self.dst
    }

    /// Image of the source generator.
    pub fn root(&self) -> Elem {
        self.root
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.dst.eval_prime_poly(&self.src.coeffs(x), self.root)
    }
}

/// Embeds `x` into `target` along the canonical [`Embedding`].
pub fn embed(x: &FieldElem, target: &Field) -> Result<FieldElem> {
    let emb = Embedding::new(&x.field, target)?;
    Ok(target.wrap(emb.apply(x.value)))
}

/// An element bundled with its field, for checked arithmetic at API edges.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

impl FieldElem {
    pub fn new(field: &Field, coeffs: &[u32]) -> Result<FieldElem> {
        Ok(field.wrap(field.from_coeffs(coeffs)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElem {
        self.field.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.field.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, n: u64) -> FieldElem {
        self.field.wrap(self.field.pow(self.value, n))
    }

    pub fn qth_root(&self, q: u64) -> Result<FieldElem> {
        Ok(self.field.wrap(self.field.qth_root(self.value, q)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields_upto_81() -> Vec<Field> {
        [
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 1),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 1),
            (5, 2),
            (7, 1),
            (7, 2),
        ]
        .iter()
        .map(|&(p, e)| make_field(p, e).unwrap())
        .filter(|f| f.order() <= 81)
        .collect()
    }

    #[test]
    fn small_moduli() {
        assert_eq!(make_field(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(2, 2).unwrap().modulus(), &[1, 1, 1]);
        let gf9 = make_field(3, 2).unwrap();
        let m = gf9.modulus().to_vec();
        for r in 0..3u32 {
            let v = (m[0] + m[1] * r + m[2] * r * r) % 3;
            assert_ne!(v, 0, "root {r} of {m:?}");
        }
        // smallest in low-to-high order among t^2+1, t^2+t+2, t^2+2t+2
        assert_eq!(m, vec![1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(2, 0).unwrap_err(), Error::DegreeOutOfRange(0));
        assert_eq!(make_field(2, 13).unwrap_err(), Error::DegreeOutOfRange(13));
        assert!(matches!(
            make_field(3, 13),
            Err(Error::DegreeOutOfRange(13))
        ));
        assert!(matches!(make_field(11, 6), Err(Error::FieldTooLarge(_))));
        assert!(matches!(field_of_order(6), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn moduli_irreducible_across_range() {
        for (p, e) in [(2, 7), (2, 12), (3, 5), (5, 4), (7, 3), (13, 2)] {
            let f = make_field(p, e).unwrap();
            assert!(is_irreducible(f.modulus(), p as u32), "GF({p}^{e})");
        }
    }

    #[test]
    fn gf2_and_gf4_examples() {
        let gf2 = make_field(2, 1).unwrap();
        assert_eq!(gf2.add(Elem::ONE, Elem::ONE), Elem::ZERO);
        let gf4 = make_field(2, 2).unwrap();
        let t = gf4.generator();
        let t1 = gf4.add(t, Elem::ONE);
        assert_eq!(gf4.mul(t, t1), Elem::ONE);
        assert_eq!(gf4.qth_root(t, 2).unwrap(), t1);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields_upto_81() {
            let els: Vec<Elem> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                assert_eq!(f.mul(a, Elem::ONE), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b).0, f.mul_slow(a.0, b.0), "{f:?}");
                    for &c in els.iter().step_by(if els.len() > 27 { 7 } else { 1 }) {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_and_roots_invert_it() {
        for f in all_fields_upto_81() {
            let p = f.characteristic();
            let mut images: Vec<Elem> = f.elements().map(|a| f.frobenius(a)).collect();
            images.sort();
            images.dedup();
            assert_eq!(images.len() as u64, f.order());
            for q in (1..=f.degree())
                .filter(|e| f.degree() % e == 0)
                .map(|e| p.pow(e))
            {
                for x in f.elements() {
                    let y = f.qth_root(x, q).unwrap();
                    assert_eq!(f.pow(y, q), x);
                    assert_eq!(f.qth_root(f.pow(x, q), q).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn qth_root_rejects_incompatible_q() {
        let gf8 = make_field(2, 3).unwrap();
        assert!(gf8.qth_root(Elem::ONE, 4).is_err());
        assert!(gf8.qth_root(Elem::ONE, 3).is_err());
        assert_eq!(gf8.qth_root(Elem::ZERO, 8).unwrap(), Elem::ZERO);
    }

    #[test]
    fn embedding_is_homomorphism() {
        let gf4 = make_field(2, 2).unwrap();
        let gf16 = make_field(2, 4).unwrap();
        let emb = Embedding::new(&gf4, &gf16).unwrap();
        // smallest root of t^2+t+1 in GF(16), found by scanning
        let root = gf16
            .elements()
            .find(|&x| gf16.add(gf16.add(gf16.mul(x, x), x), Elem::ONE).is_zero())
            .unwrap();
        assert_eq!(emb.apply(gf4.generator()), root);
        let mut seen = std::collections::HashSet::new();
        for a in gf4.elements() {
            assert!(seen.insert(emb.apply(a)));
            for b in gf4.elements() {
                assert_eq!(
                    emb.apply(gf4.mul(a, b)),
                    gf16.mul(emb.apply(a), emb.apply(b))
                );
                assert_eq!(
                    emb.apply(gf4.add(a, b)),
                    gf16.add(emb.apply(a), emb.apply(b))
                );
            }
        }
        assert_eq!(emb.apply(Elem::ONE), Elem::ONE);
        let gf8 = make_field(2, 3).unwrap();
        assert!(Embedding::new(&gf4, &gf8).is_err());
    }

    #[test]
    fn checked_elements() {
        let gf4 = make_field(2, 2).unwrap();
        let gf9 = make_field(3, 2).unwrap();
        let a = FieldElem::new(&gf4, &[0, 1]).unwrap();
        let b = FieldElem::new(&gf9, &[0, 1]).unwrap();
        assert_eq!(a.add(&b).unwrap_err(), Error::FieldMismatch);
        assert_eq!(gf4.wrap(Elem::ZERO).inv().unwrap_err(), Error::ZeroInverse);
        assert!(FieldElem::new(&gf4, &[2, 0]).is_err());
        let one = embed(&gf4.wrap(Elem::ONE), &make_field(2, 4).unwrap()).unwrap();
        assert_eq!(one.value(), Elem::ONE);
    }

    #[test]
    fn big_field_uses_slow_path_consistently() {
        let f = make_field(3, 12).unwrap();
        let a = f.elem(123_457);
        let b = f.inv(a).unwrap();
        assert_eq!(f.mul(a, b), Elem::ONE);
        assert_eq!(f.qth_root(f.pow(a, 9), 9).unwrap(), a);
    }
}
