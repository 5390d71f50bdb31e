//! Sparse polynomials in `x, y, z` over a finite field.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::plane::ProjPoint;

/// Exponent vector `[i, j, k]` of `x^i y^j z^k`. Terms are kept in lex
/// order with `x > y > z`.
pub type Monomial = [u32; 3];

#[derive(Clone, PartialEq, Eq)]
pub struct Poly3 {
    field: Field,
    terms: BTreeMap<Monomial, Elem>,
}

impl fmt::Debug for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("{}*x^{}y^{}z^{}", c.index(), m[0], m[1], m[2]))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Poly3 {
    pub fn zero(field: &Field) -> Poly3 {
        Poly3 {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: &Field, coeff: Elem, exps: Monomial) -> Poly3 {
        let mut p = Poly3::zero(field);
        p.add_term(exps, coeff);
        p
    }

    /// `a x + b y + c z`.
    pub fn linear(field: &Field, coeffs: [Elem; 3]) -> Poly3 {
        let mut p = Poly3::zero(field);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn from_terms(field: &Field, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Poly3 {
        let mut p = Poly3::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> Elem {
        self.terms.get(&m).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degs.next() {
            Some(d) => degs.all(|x| x == d),
            None => true,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Elem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        let entry = self.terms.entry(m).or_insert(Elem::ZERO);
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn leading(&self) -> Option<(Monomial, Elem)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, *c);
        }
        out
    }

    pub fn sub(&self, other: &Poly3) -> Poly3 {
        self.add(&other.scale(self.field.neg(Elem::ONE)))
    }

    pub fn scale(&self, c: Elem) -> Poly3 {
        Poly3::from_terms(
            &self.field,
            self.terms.iter().map(|(m, x)| (*m, self.field.mul(*x, c))),
        )
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::zero(&self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(
                    [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]],
                    self.field.mul(*ca, *cb),
                );
            }
        }
        out
    }

    pub fn eval(&self, pt: &[Elem; 3]) -> Elem {
        let f = &self.field;
        self.terms.iter().fold(Elem::ZERO, |acc, (m, c)| {
            let v = (0..3).fold(*c, |v, i| f.mul(v, f.pow(pt[i], m[i] as u64)));
            f.add(acc, v)
        })
    }

    /// Formal partial derivative in variable `var`.
    pub fn partial(&self, var: usize) -> Poly3 {
        let f = &self.field;
        Poly3::from_terms(
            f,
            self.terms.iter().filter(|(m, _)| m[var] > 0).map(|(m, c)| {
                let mut e = *m;
                e[var] -= 1;
                (e, f.mul(*c, f.from_int(m[var] as i64)))
            }),
        )
    }

    pub fn gradient(&self, pt: &[Elem; 3]) -> [Elem; 3] {
        [0, 1, 2].map(|v| self.partial(v).eval(pt))
    }

    /// Division with remainder by `divisor` in lex order.
    pub fn div_rem(&self, divisor: &Poly3) -> Result<(Poly3, Poly3)> {
        let f = &self.field;
        let (lm, lc) = divisor.leading().ok_or(Error::ZeroInverse)?;
        let lc_inv = f.inv(lc)?;
        let mut quot = Poly3::zero(f);
        let mut rem = Poly3::zero(f);
        let mut p = self.clone();
        while let Some((m, c)) = p.leading() {
            if (0..3).all(|i| m[i] >= lm[i]) {
                let e = [m[0] - lm[0], m[1] - lm[1], m[2] - lm[2]];
                let t = Poly3::monomial(f, f.mul(c, lc_inv), e);
                p = p.sub(&t.mul(divisor));
                quot = quot.add(&t);
            } else {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        Ok((quot, rem))
    }

    /// Expansion around `pt` in the affine chart where its leftmost nonzero
    /// coordinate is 1: substitutes the remaining two coordinates by
    /// `u0 + s`, `v0 + t` and returns the coefficients of `s^a t^b`.
    pub fn local_expansion(&self, pt: &ProjPoint) -> BTreeMap<(u32, u32), Elem> {
        let f = &self.field;
        let chart = pt.chart();
        let others: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
        let c = pt.coords();
        let (u0, v0) = (c[others[0]], c[others[1]]);
        // (u0 + s)^i as coefficient vectors, built by repeated multiplication
        let powers = |base: Elem, n: u32| -> Vec<Vec<Elem>> {
            let mut out = vec![vec![Elem::ONE]];
            for _ in 0..n {
                let prev = out.last().unwrap();
                let mut next = vec![Elem::ZERO; prev.len() + 1];
                for (k, &x) in prev.iter().enumerate() {
                    next[k] = f.add(next[k], f.mul(x, base));
                    next[k + 1] = f.add(next[k + 1], x);
                }
                out.push(next);
            }
            out
        };
        let max_u = self.terms.keys().map(|m| m[others[0]]).max().unwrap_or(0);
        let max_v = self.terms.keys().map(|m| m[others[1]]).max().unwrap_or(0);
        let pu = powers(u0, max_u);
        let pv = powers(v0, max_v);
        let mut out = BTreeMap::new();
        for (m, coeff) in &self.terms {
            let su = &pu[m[others[0]] as usize];
            let sv = &pv[m[others[1]] as usize];
            for (a, &x) in su.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (b, &y) in sv.iter().enumerate() {
                    let term = f.mul(*coeff, f.mul(x, y));
                    if !term.is_zero() {
                        let e = out.entry((a as u32, b as u32)).or_insert(Elem::ZERO);
                        *e = f.add(*e, term);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Order of vanishing at `pt`: the least total degree in the local expansion.
    pub fn multiplicity_at(&self, pt: &ProjPoint) -> Option<u32> {
        self.local_expansion(pt).keys().map(|(a, b)| a + b).min()
    }

    /// Applies the linear substitution `v -> A v` to the variables.
    pub fn substitute_linear(&self, a: &[[Elem; 3]; 3]) -> Poly3 {
        let f = &self.field;
        let images: Vec<Poly3> = (0..3).map(|i| Poly3::linear(f, a[i])).collect();
        let mut out = Poly3::zero(f);
        for (m, c) in &self.terms {
            let mut t = Poly3::monomial(f, *c, [0, 0, 0]);
            for (i, img) in images.iter().enumerate() {
                for _ in 0..m[i] {
                    t = t.mul(img);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Whether `self = c * other` for some nonzero scalar `c`.
    pub fn proportional(&self, other: &Poly3) -> bool {
        let (Some((m, c)), Some(d)) = (self.leading(), other.leading()) else {
            return self.is_zero() && other.is_zero();
        };
        if d.0 != m {
            return false;
        }
        let f = &self.field;
        let s = f.div(c, d.1).expect("nonzero leading coefficient");
        *self == other.scale(s)
    }
}
