//! Picard lattice of a blowup of the plane at distinct rational points.
//!
//! A class is written `D = a H - sum m_i E_i` with exact rational
//! coefficients. The intersection form is diagonal: `H^2 = 1`,
//! `E_i^2 = -1`, all mixed products zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{field_of_order, Field};
use crate::plane::{enumerate_plane, Incidence, ProjPoint};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The blowup of the plane over `field` at the listed distinct points.
#[derive(Debug, PartialEq, Eq)]
pub struct SurfaceDesc {
    field: Field,
    centers: Vec<ProjPoint>,
}

impl SurfaceDesc {
    pub fn new(field: &Field, centers: Vec<ProjPoint>) -> Result<Arc<SurfaceDesc>> {
        let mut sorted = centers.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != centers.len() {
            return Err(Error::RepeatedCenter);
        }
        Ok(Arc::new(SurfaceDesc {
            field: field.clone(),
            centers,
        }))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn centers(&self) -> &[ProjPoint] {
        &self.centers
    }

    pub fn n(&self) -> usize {
        self.centers.len()
    }
}

/// A numerical divisor class `a H - sum m_i E_i`.
#[derive(Clone)]
pub struct DivClass {
    surface: Arc<SurfaceDesc>,
    a: Rational,
    m: Vec<Rational>,
}

impl PartialEq for DivClass {
    fn eq(&self, other: &Self) -> bool {
        same_surface(&self.surface, &other.surface) && self.a == other.a && self.m == other.m
    }
}

impl Eq for DivClass {}

impl fmt::Debug for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.a)?;
        for (i, m) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

fn same_surface(a: &Arc<SurfaceDesc>, b: &Arc<SurfaceDesc>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl DivClass {
    pub fn new(surface: &Arc<SurfaceDesc>, a: Rational, m: Vec<Rational>) -> Result<DivClass> {
        if m.len() != surface.n() {
            return Err(Error::Precondition(format!(
                "expected {} multiplicities, got {}",
                surface.n(),
                m.len()
            )));
        }
        Ok(DivClass {
            surface: surface.clone(),
            a,
            m,
        })
    }

    pub fn from_ints(surface: &Arc<SurfaceDesc>, a: i64, m: &[i64]) -> Result<DivClass> {
        DivClass::new(surface, rat(a), m.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero(surface: &Arc<SurfaceDesc>) -> DivClass {
        DivClass {
            surface: surface.clone(),
            a: Rational::zero(),
            m: vec![Rational::zero(); surface.n()],
        }
    }

    /// Pullback of a line.
    pub fn hyperplane(surface: &Arc<SurfaceDesc>) -> DivClass {
        DivClass {
            a: Rational::one(),
            ..DivClass::zero(surface)
        }
    }

    /// The exceptional curve over center `i`.
    pub fn exceptional(surface: &Arc<SurfaceDesc>, i: usize) -> DivClass {
        let mut d = DivClass::zero(surface);
        d.m[i] = rat(-1);
        d
    }

    /// `K = -3H + sum E_i`.
    pub fn canonical(surface: &Arc<SurfaceDesc>) -> DivClass {
        DivClass {
            surface: surface.clone(),
            a: rat(-3),
            m: vec![rat(-1); surface.n()],
        }
    }

    pub fn surface(&self) -> &Arc<SurfaceDesc> {
        &self.surface
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn m(&self) -> &[Rational] {
        &self.m
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.m.iter().all(|x| x.is_integer())
    }

    /// Integer coefficients `(a, m)`, or `NonIntegral`.
    pub fn int_coeffs(&self) -> Result<(i64, Vec<i64>)> {
        let conv = |x: &Rational| -> Result<i64> {
            if !x.is_integer() {
                return Err(Error::NonIntegral);
            }
            x.to_integer().to_i64().ok_or(Error::NonIntegral)
        };
        Ok((
            conv(&self.a)?,
            self.m.iter().map(conv).collect::<Result<_>>()?,
        ))
    }

    pub fn scale(&self, c: &Rational) -> DivClass {
        DivClass {
            surface: self.surface.clone(),
            a: &self.a * c,
            m: self.m.iter().map(|x| x * c).collect(),
        }
    }

    fn zip(&self, other: &DivClass, f: impl Fn(&Rational, &Rational) -> Rational) -> DivClass {
        assert!(
            same_surface(&self.surface, &other.surface),
            "classes on different surfaces"
        );
        DivClass {
            surface: self.surface.clone(),
            a: f(&self.a, &other.a),
            m: self.m.iter().zip(&other.m).map(|(x, y)| f(x, y)).collect(),
        }
    }

    pub fn dot(&self, other: &DivClass) -> Result<Rational> {
        intersect(self, other)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a.to_string(),
            "m": self.m.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(surface: &Arc<SurfaceDesc>, value: &Value) -> Result<DivClass> {
        let bad = || Error::Precondition("malformed divisor class JSON".into());
        let parse = |v: &Value| -> Result<Rational> {
            v.as_str().ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let a = parse(value.get("a").ok_or_else(bad)?)?;
        let m = value
            .get("m")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(parse)
            .collect::<Result<Vec<_>>>()?;
        DivClass::new(surface, a, m)
    }
}

// Arithmetic operators panic when the classes live on different surfaces.
impl Add for &DivClass {
    type Output = DivClass;
    fn add(self, rhs: &DivClass) -> DivClass {
        self.zip(rhs, |x, y| x + y)
    }
}

impl Sub for &DivClass {
    type Output = DivClass;
    fn sub(self, rhs: &DivClass) -> DivClass {
        self.zip(rhs, |x, y| x - y)
    }
}

impl Neg for &DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        self.scale(&rat(-1))
    }
}

impl Mul<&DivClass> for &Rational {
    type Output = DivClass;
    fn mul(self, rhs: &DivClass) -> DivClass {
        rhs.scale(self)
    }
}

impl Mul<&DivClass> for i64 {
    type Output = DivClass;
    fn mul(self, rhs: &DivClass) -> DivClass {
        rhs.scale(&rat(self))
    }
}

pub fn sum<'a>(
    surface: &Arc<SurfaceDesc>,
    classes: impl IntoIterator<Item = &'a DivClass>,
) -> DivClass {
    classes
        .into_iter()
        .fold(DivClass::zero(surface), |acc, c| &acc + c)
}

/// `D1 . D2 = a1 a2 - sum m1_i m2_i`.
pub fn intersect(d1: &DivClass, d2: &DivClass) -> Result<Rational> {
    if !same_surface(&d1.surface, &d2.surface) {
        return Err(Error::SurfaceMismatch);
    }
    let mixed =
        d1.m.iter()
            .zip(&d2.m)
            .fold(Rational::zero(), |acc, (x, y)| acc + x * y);
    Ok(&d1.a * &d2.a - mixed)
}

/// Riemann-Roch: `chi(D) = 1 + D.(D - K)/2`.
pub fn euler_char(d: &DivClass) -> Result<i64> {
    if !d.is_integral() {
        return Err(Error::NonIntegral);
    }
    let k = DivClass::canonical(&d.surface);
    let chi = Rational::one() + intersect(d, &(d - &k))? / rat(2);
    assert!(
        chi.is_integer(),
        "Euler characteristic {chi} of an integral class"
    );
    chi.to_integer().to_i64().ok_or(Error::NonIntegral)
}

/// The blowup of PG(2, q) at all of its rational points, with its incidence.
#[derive(Clone, Debug)]
pub struct AllPointsBlowup {
    q: u64,
    incidence: Incidence,
    surface: Arc<SurfaceDesc>,
}

pub fn all_points_blowup(q: u64) -> Result<AllPointsBlowup> {
    let field = field_of_order(q)?;
    let incidence = enumerate_plane(&field);
    let surface = SurfaceDesc::new(&field, incidence.points().to_vec())?;
    Ok(AllPointsBlowup {
        q,
        incidence,
        surface,
    })
}

impl AllPointsBlowup {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &Field {
        self.surface.field()
    }

    pub fn incidence(&self) -> &Incidence {
        &self.incidence
    }

    pub fn surface(&self) -> &Arc<SurfaceDesc> {
        &self.surface
    }

    pub fn classes(&self) -> StandardClasses {
        standard_classes(&self.surface, &self.incidence).expect("centers are the plane points")
    }
}

/// The named classes on the blowup at all rational points.
#[derive(Clone, Debug)]
pub struct StandardClasses {
    pub q: u64,
    pub h: DivClass,
    pub e: Vec<DivClass>,
    pub k: DivClass,
    /// Strict transforms `L'_j` of the rational lines.
    pub lines: Vec<DivClass>,
    /// `B = (q^2+1) H - q sum E_i`.
    pub b: DivClass,
    /// `Delta = q/(q+1) sum L'_j`.
    pub delta: DivClass,
    /// `M = (q+1) H - sum E_i`.
    pub m: DivClass,
}

impl StandardClasses {
    pub fn sum_e(&self) -> DivClass {
        sum(self.h.surface(), &self.e)
    }

    pub fn sum_lines(&self) -> DivClass {
        sum(self.h.surface(), &self.lines)
    }

    /// `K + B`, the divisor whose first cohomology is nonzero.
    pub fn k_plus_b(&self) -> DivClass {
        &self.k + &self.b
    }
}

pub fn standard_classes(surface: &Arc<SurfaceDesc>, inc: &Incidence) -> Result<StandardClasses> {
    if surface.field() != inc.field() || surface.centers() != inc.points() {
        return Err(Error::NotAllPointsBlowup);
    }
    let q = inc.q() as i64;
    let n = surface.n();
    let h = DivClass::hyperplane(surface);
    let e: Vec<DivClass> = (0..n).map(|i| DivClass::exceptional(surface, i)).collect();
    let k = DivClass::canonical(surface);
    let lines: Vec<DivClass> = (0..n)
        .map(|j| {
            let m = (0..n).map(|i| rat(inc.on(i, j) as i64)).collect();
            DivClass::new(surface, rat(1), m)
        })
        .collect::<Result<_>>()?;
    let sum_e = sum(surface, &e);
    let sum_l = sum(surface, &lines);
    let b = &((q * q + 1) * &h) - &(q * &sum_e);
    let delta = &frac(q, q + 1) * &sum_l;
    let m = &((q + 1) * &h) - &sum_e;
    Ok(StandardClasses {
        q: q as u64,
        h,
        e,
        k,
        lines,
        b,
        delta,
        m,
    })
}

/// Numerical data of the contraction `g: X -> Y` of all the `L'_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionData {
    /// `c` with `g^* K_Y = K_X + c sum L'_j`.
    pub coeff: Rational,
    /// `(q^2+q+1, q^2-2q-2)`: `(q^2+q+1) K_Y ~ (q^2-2q-2) sum E_i^Y`.
    pub ky_multiplier: (i64, i64),
    pub rho_y: i64,
    pub klt: bool,
    pub canonical: bool,
    /// `-K_Y` ample (multiplier negative).
    pub anti_canonical_ample: bool,
    /// `K_Y` ample (multiplier positive).
    pub canonical_ample: bool,
}

impl ContractionData {
    pub fn to_json(&self) -> Value {
        json!({
            "coeff": self.coeff.to_string(),
            "ky_multiplier": [self.ky_multiplier.0, self.ky_multiplier.1],
            "rho_y": self.rho_y,
            "klt": self.klt,
            "canonical": self.canonical,
            "minus_ky_ample": self.anti_canonical_ample,
            "ky_ample": self.canonical_ample,
        })
    }
}

pub fn contraction_data(classes: &StandardClasses) -> Result<ContractionData> {
    let surface = classes.h.surface();
    let n = surface.n() as i64;
    // (K + c sum L').L'_j = 0 with the L'_j pairwise disjoint.
    let mut coeff: Option<Rational> = None;
    for (j, l) in classes.lines.iter().enumerate() {
        for (i, other) in classes.lines.iter().enumerate().skip(j + 1) {
            if !intersect(l, other)?.is_zero() {
                return Err(Error::Contradiction(format!("L'_{j} and L'_{i} meet")));
            }
        }
        let c = -intersect(&classes.k, l)? / intersect(l, l)?;
        match &coeff {
            Some(prev) if *prev != c => {
                return Err(Error::Contradiction(
                    "discrepancies of the L'_j differ".into(),
                ));
            }
            _ => coeff = Some(c),
        }
    }
    let coeff = coeff.ok_or(Error::NotAllPointsBlowup)?;
    let q = classes.q as i64;
    if coeff != Rational::one() - frac(2, q) {
        return Err(Error::Contradiction(format!(
            "discrepancy {coeff} differs from 1 - 2/q"
        )));
    }
    // (q^2+q+1) K + 3 sum L' must be a multiple of sum E.
    let lhs = &(n * &classes.k) + &(3 * &classes.sum_lines());
    let sum_e = classes.sum_e();
    let lambda = -lhs.m()[0].clone();
    if lhs != &lambda * &sum_e {
        return Err(Error::Contradiction(
            "(q^2+q+1)K + 3 sum L' is not a multiple of sum E".into(),
        ));
    }
    let lambda = lambda.to_integer().to_i64().ok_or(Error::NonIntegral)?;
    if lambda != q * q - 2 * q - 2 {
        return Err(Error::Contradiction(format!("K_Y multiplier {lambda}")));
    }
    let rho_y = (surface.n() as i64 + 1) - classes.lines.len() as i64;
    Ok(ContractionData {
        klt: coeff < Rational::one(),
        canonical: !coeff.is_positive(),
        coeff,
        ky_multiplier: (n, lambda),
        rho_y,
        anti_canonical_ample: lambda < 0,
        canonical_ample: lambda > 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn blowup_sizes() {
        assert_eq!(all_points_blowup(2).unwrap().surface().n(), 7);
        assert_eq!(all_points_blowup(3).unwrap().surface().n(), 13);
        assert_eq!(all_points_blowup(5).unwrap().surface().n(), 31);
        assert!(all_points_blowup(6).is_err());
    }

    #[test]
    fn standard_intersection_numbers() {
        for q in [2i64, 3, 4, 5] {
            let c = all_points_blowup(q as u64).unwrap().classes();
            for l in &c.lines {
                assert_eq!(intersect(l, l).unwrap(), rat(-q));
                assert_eq!(intersect(&c.m, l).unwrap(), rat(0));
                assert_eq!(intersect(&c.k, l).unwrap(), rat(q - 2));
            }
            assert_eq!(intersect(&c.b, &c.b).unwrap(), rat(-q * q * q + q * q + 1));
            assert_eq!(
                intersect(&c.b, &c.k).unwrap(),
                rat(q * q * q - 2 * q * q + q - 3)
            );
            assert_eq!(intersect(&c.m, &c.m).unwrap(), rat(q));
            assert_eq!(euler_char(&c.k_plus_b()).unwrap(), (q - q * q) / 2);
        }
    }

    #[test]
    fn q2_anticanonical_is_m() {
        let c = all_points_blowup(2).unwrap().classes();
        assert_eq!(c.m, -&c.k);
        assert_eq!(intersect(&c.k, &c.k).unwrap(), rat(2));
    }

    #[test]
    fn euler_characteristics() {
        let s = all_points_blowup(3).unwrap();
        let c = s.classes();
        assert_eq!(euler_char(&DivClass::zero(s.surface())).unwrap(), 1);
        assert_eq!(euler_char(&c.h).unwrap(), 3);
        assert_eq!(euler_char(&c.delta), Err(Error::NonIntegral));
    }

    #[test]
    fn adjunction_and_signature() {
        let c = all_points_blowup(3).unwrap().classes();
        for curve in c.e.iter().chain(&c.lines) {
            let g = intersect(curve, curve).unwrap() + intersect(curve, &c.k).unwrap();
            assert_eq!(g, rat(-2));
        }
        assert_eq!(intersect(&c.h, &c.h).unwrap(), rat(1));
        for (i, ei) in c.e.iter().enumerate() {
            assert_eq!(intersect(&c.h, ei).unwrap(), rat(0));
            for (j, ej) in c.e.iter().enumerate() {
                assert_eq!(intersect(ei, ej).unwrap(), rat(if i == j { -1 } else { 0 }));
            }
        }
    }

    #[test]
    fn class_identities() {
        for q in [2i64, 3, 4, 5, 7, 8, 9] {
            let c = all_points_blowup(q as u64).unwrap().classes();
            let n = q * q + q + 1;
            assert_eq!(n * &c.h, &c.sum_lines() + &((q + 1) * &c.sum_e()));
            assert_eq!(&c.b - &c.delta, c.h.scale(&frac(1, q + 1)));
        }
    }

    #[test]
    fn contraction_examples() {
        let d2 = contraction_data(&all_points_blowup(2).unwrap().classes()).unwrap();
        assert_eq!(d2.coeff, rat(0));
        assert!(d2.canonical && d2.klt && d2.anti_canonical_ample);
        assert_eq!(d2.ky_multiplier, (7, -2));
        let d3 = contraction_data(&all_points_blowup(3).unwrap().classes()).unwrap();
        assert_eq!(d3.coeff, frac(1, 3));
        assert!(!d3.canonical && d3.klt && d3.canonical_ample);
        assert_eq!(d3.ky_multiplier, (13, 1));
        let d4 = contraction_data(&all_points_blowup(4).unwrap().classes()).unwrap();
        assert_eq!(d4.coeff, frac(1, 2));
        assert_eq!(d4.ky_multiplier.1, 6);
        assert_eq!(d4.rho_y, 1);
    }

    #[test]
    fn surface_mismatch_and_json() {
        let s2 = all_points_blowup(2).unwrap();
        let s3 = all_points_blowup(3).unwrap();
        let a = DivClass::hyperplane(s2.surface());
        let b = DivClass::hyperplane(s3.surface());
        assert_eq!(intersect(&a, &b), Err(Error::SurfaceMismatch));
        let d = s2.classes().delta;
        let v = d.to_json();
        assert_eq!(v["a"], "14/3");
        assert_eq!(v["m"][0], "2");
        assert_eq!(DivClass::from_json(s2.surface(), &v).unwrap(), d);
        assert!(SurfaceDesc::new(s2.field(), vec![s2.incidence().points()[0]; 2]).is_err());
    }

    fn arb_class(n: usize) -> impl Strategy<Value = (i64, i64, Vec<(i64, i64)>)> {
        (
            -20i64..20,
            1i64..6,
            proptest::collection::vec((-20i64..20, 1i64..6), n),
        )
    }

    proptest! {
        #[test]
        fn form_is_symmetric_bilinear(x in arb_class(7), y in arb_class(7), z in arb_class(7), s in -5i64..5) {
            let surf = all_points_blowup(2).unwrap();
            let mk = |(an, ad, ms): (i64, i64, Vec<(i64, i64)>)| {
                DivClass::new(surf.surface(), frac(an, ad), ms.into_iter().map(|(n, d)| frac(n, d)).collect()).unwrap()
            };
            let (x, y, z) = (mk(x), mk(y), mk(z));
            prop_assert_eq!(intersect(&x, &y).unwrap(), intersect(&y, &x).unwrap());
            let lhs = intersect(&(&x.scale(&rat(s)) + &y), &z).unwrap();
            let rhs = rat(s) * intersect(&x, &z).unwrap() + intersect(&y, &z).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
