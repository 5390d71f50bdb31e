//! The linear system `|M| = |(q+1)H - sum E_i|` and the purely inseparable
//! map it induces.
//!
//! Sections of `M` are the plane forms
//! `gamma (x^q y - x y^q) + alpha (y^q z - y z^q) + beta (z^q x - z x^q)`.
//! In the affine chart `z = 1`, dehomogenized by the first form, the map is
//! `Psi(u, v) = ((v^q - v) / (u^q v - u v^q), (u - u^q) / (u^q v - u v^q))`.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{make_field, Elem, Embedding, Field};
use crate::lattice::{sum, AllPointsBlowup};
use crate::linalg;
use crate::linsys::{h0, monomials};
use crate::plane::{plane_points, ProjPoint};
use crate::poly::Poly3;

/// `x^q y - x y^q`, `y^q z - y z^q`, `z^q x - z x^q` over `field`.
pub fn basis_forms(field: &Field, q: u64) -> [Poly3; 3] {
    let q = q as u32;
    let minus = field.neg(Elem::ONE);
    let form = |a: usize, b: usize| {
        let mut hi = [0; 3];
        hi[a] = q;
        hi[b] = 1;
        let mut lo = [0; 3];
        lo[a] = 1;
        lo[b] = q;
        Poly3::from_terms(field, [(hi, Elem::ONE), (lo, minus)])
    };
    [form(0, 1), form(1, 2), form(2, 0)]
}

/// A member of `|M|` with coefficients `(alpha, beta, gamma)` in a field
/// containing `F_q`.
#[derive(Clone, Debug)]
pub struct MForm {
    field: Field,
    q: u64,
    coeffs: [Elem; 3],
    poly: Poly3,
}

impl MForm {
    pub fn new(field: &Field, q: u64, alpha: Elem, beta: Elem, gamma: Elem) -> Result<MForm> {
        if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
            return Err(Error::ZeroVector);
        }
        let [fxy, fyz, fzx] = basis_forms(field, q);
        let poly = fxy
            .scale(gamma)
            .add(&fyz.scale(alpha))
            .add(&fzx.scale(beta));
        debug_assert_eq!(poly.degree(), Some(q as u32 + 1));
        Ok(MForm {
            field: field.clone(),
            q,
            coeffs: [alpha, beta, gamma],
            poly,
        })
    }

    pub fn poly(&self) -> &Poly3 {
        &self.poly
    }

    pub fn coeffs(&self) -> [Elem; 3] {
        self.coeffs
    }

    /// `[alpha^(1/q) : beta^(1/q) : gamma^(1/q)]`.
    pub fn root_point(&self) -> Result<ProjPoint> {
        let r = self
            .coeffs
            .iter()
            .map(|&c| self.field.qth_root(c, self.q))
            .collect::<Result<Vec<_>>>()?;
        ProjPoint::new(&self.field, [r[0], r[1], r[2]])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MBasisReport {
    pub vanish_at_all_points: bool,
    pub independent: bool,
    pub h0_m: u64,
    pub class_decompositions: bool,
}

impl MBasisReport {
    pub fn passed(&self) -> bool {
        self.vanish_at_all_points && self.independent && self.h0_m == 3 && self.class_decompositions
    }
}

/// The three forms vanish at every rational point, are independent, and
/// `h^0(M) = 3`, so they span the sections of `M`. Also checks
/// `M = q E_i + sum_{P_i in L_j} L'_j` for every `i`.
pub fn m_basis_check(s: &AllPointsBlowup) -> Result<MBasisReport> {
    let field = s.field();
    let q = s.q();
    let forms = basis_forms(field, q);
    let vanish = forms.iter().all(|f| {
        s.incidence()
            .points()
            .iter()
            .all(|p| f.eval(&p.coords()).is_zero())
    });
    let mons = monomials(q as u32 + 1);
    let rows: Vec<Vec<Elem>> = forms
        .iter()
        .map(|f| mons.iter().map(|m| f.coeff(*m)).collect())
        .collect();
    let independent = linalg::rank(field, &rows) == 3;
    let classes = s.classes();
    let h0_m = h0(s.surface(), &classes.m)?;
    let class_decompositions = (0..classes.e.len()).all(|i| {
        let through = s.incidence().lines_through_index(i);
        let rhs = &(q as i64 * &classes.e[i])
            + &sum(s.surface(), through.iter().map(|&j| &classes.lines[j]));
        rhs == classes.m
    });
    Ok(MBasisReport {
        vanish_at_all_points: vanish,
        independent,
        h0_m,
        class_decompositions,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseLocusReport {
    pub extension_order: u64,
    pub common_zeros: usize,
    pub rational_points: usize,
    /// Rational points where the linear parts of the three forms span a plane.
    pub reduced_base_points: usize,
}

impl BaseLocusReport {
    pub fn passed(&self) -> bool {
        self.common_zeros == self.rational_points
            && self.reduced_base_points == self.rational_points
    }
}

/// Common zeros of the three forms over `F_{q^k}` are exactly the rational
/// points, and each is a simple base point.
pub fn base_locus_check(s: &AllPointsBlowup, k: u32) -> Result<BaseLocusReport> {
    let base = s.field();
    let ext = make_field(base.characteristic(), base.degree() * k)?;
    let emb = Embedding::new(base, &ext)?;
    let rational: BTreeSet<ProjPoint> = s
        .incidence()
        .points()
        .iter()
        .map(|p| ProjPoint::new(&ext, p.coords().map(|c| emb.apply(c))))
        .collect::<Result<_>>()?;
    let forms = basis_forms(&ext, s.q());
    let zeros: Vec<ProjPoint> = plane_points(&ext)
        .into_iter()
        .filter(|p| forms.iter().all(|f| f.eval(&p.coords()).is_zero()))
        .collect();
    if let Some(stray) = zeros.iter().find(|p| !rational.contains(p)) {
        return Err(Error::Contradiction(format!(
            "common zero {stray:?} is not a rational point"
        )));
    }
    let base_forms = basis_forms(base, s.q());
    let reduced = s
        .incidence()
        .points()
        .iter()
        .filter(|p| {
            let rows: Vec<Vec<Elem>> = base_forms
                .iter()
                .map(|f| {
                    let exp = f.local_expansion(p);
                    let get = |key| exp.get(&key).copied().unwrap_or(Elem::ZERO);
                    vec![get((1, 0)), get((0, 1))]
                })
                .collect();
            linalg::rank(base, &rows) == 2
        })
        .count();
    Ok(BaseLocusReport {
        extension_order: ext.order(),
        common_zeros: zeros.len(),
        rational_points: rational.len(),
        reduced_base_points: reduced,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberClass {
    pub center: usize,
    pub lines: Vec<usize>,
}

/// A member with `F_q` coefficients is `q E_i + sum L'_j` over the lines
/// through a single rational point; verified by exact division.
pub fn classify_member(
    s: &AllPointsBlowup,
    alpha: Elem,
    beta: Elem,
    gamma: Elem,
) -> Result<MemberClass> {
    let field = s.field();
    let form = MForm::new(field, s.q(), alpha, beta, gamma)?;
    let center_pt = form.root_point()?;
    let center = s.incidence().point_index(&center_pt)?;
    let lines = s.incidence().lines_through_index(center);
    let mut rest = form.poly().clone();
    for &j in &lines {
        let l = Poly3::linear(field, s.incidence().lines()[j].coeffs());
        let (quot, rem) = rest.div_rem(&l)?;
        if !rem.is_zero() {
            return Err(Error::Contradiction(format!(
                "line {j} does not divide the member"
            )));
        }
        rest = quot;
    }
    if rest.degree() != Some(0) {
        return Err(Error::Contradiction(
            "member is not a product of the lines through its center".into(),
        ));
    }
    Ok(MemberClass { center, lines })
}

/// Every member over `F_q`, one per projective coefficient class.
pub fn classify_all_members(s: &AllPointsBlowup) -> Result<Vec<MemberClass>> {
    s.incidence()
        .points()
        .iter()
        .map(|p| {
            let [a, b, c] = p.coords();
            classify_member(s, a, b, c)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPointReport {
    #[serde(skip)]
    pub point: ProjPoint,
    pub multiplicity: u32,
    pub rational: bool,
    /// The point, its conjugate and its second conjugate are collinear, i.e.
    /// it lies on an `F_q`-line; the member then contains that line.
    pub on_rational_line: bool,
    pub other_points_checked: usize,
    pub other_singular: usize,
    /// Lines over the extension contained in the member.
    pub line_components: usize,
}

impl SingularPointReport {
    pub fn passed(&self) -> bool {
        self.multiplicity >= 2 && self.other_singular == 0
    }
}

/// The member is singular exactly at its root point among the points of
/// the plane over its field of definition.
pub fn member_singular_point(form: &MForm, base_q: u64) -> Result<SingularPointReport> {
    let field = &form.field;
    let point = form.root_point()?;
    let multiplicity = form.poly().multiplicity_at(&point).unwrap_or(0);
    let on_curve: Vec<ProjPoint> = plane_points(field)
        .into_iter()
        .filter(|p| form.poly().eval(&p.coords()).is_zero())
        .collect();
    let other_singular = on_curve
        .iter()
        .filter(|p| **p != point && form.poly().multiplicity_at(p).unwrap_or(0) >= 2)
        .count();
    let rational = point.coords().iter().all(|&c| field.pow(c, base_q) == c);
    let conj = |c: [Elem; 3]| c.map(|x| field.pow(x, base_q));
    let c0 = point.coords();
    let on_rational_line = crate::plane::det3(field, &c0, &conj(c0), &conj(conj(c0))).is_zero();
    // a line is a component iff it carries more than deg F points of the curve
    let deg = form.q as usize + 1;
    let line_components = if field.order() <= 81 {
        plane_points(field)
            .iter()
            .filter(|l| {
                on_curve
                    .iter()
                    .filter(|p| crate::plane::dot(field, &l.coords(), &p.coords()).is_zero())
                    .count()
                    > deg
            })
            .count()
    } else {
        0
    };
    Ok(SingularPointReport {
        point,
        multiplicity,
        rational,
        on_rational_line,
        other_points_checked: on_curve.len().saturating_sub(1),
        other_singular,
        line_components,
    })
}

/// `Psi(u, v)`, or `None` on the excluded lines `u^q v = u v^q`.
pub fn psi_eval(field: &Field, q: u64, u: Elem, v: Elem) -> Option<(Elem, Elem)> {
    let uq = field.pow(u, q);
    let vq = field.pow(v, q);
    let den = field.sub(field.mul(uq, v), field.mul(u, vq));
    let inv = field.inv(den).ok()?;
    Some((
        field.mul(field.sub(vq, v), inv),
        field.mul(field.sub(u, uq), inv),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberSolution {
    Solved { u: Elem, v: Elem },
    Degenerate(&'static str),
}

/// The unique preimage of `(alpha, beta)` under `Psi`, from the closed form
/// `u^q = (-beta^(q-1) + (-1)^(q-1)) / (alpha beta^(q-1) - (-1)^(q-1) alpha^q)`
/// and `v = -(alpha u + 1) / beta`. Targets violating one of the
/// nonvanishing conditions used to derive it are reported degenerate.
pub fn fiber_solve(field: &Field, q: u64, alpha: Elem, beta: Elem) -> Result<FiberSolution> {
    use FiberSolution::Degenerate;
    if beta.is_zero() {
        return Ok(Degenerate("beta = 0"));
    }
    let sign = field.pow(field.neg(Elem::ONE), q - 1);
    let bq1 = field.pow(beta, q - 1);
    let den = field.sub(field.mul(alpha, bq1), field.mul(sign, field.pow(alpha, q)));
    if den.is_zero() {
        return Ok(Degenerate("alpha beta^(q-1) = (-1)^(q-1) alpha^q"));
    }
    let num = field.add(field.neg(bq1), sign);
    let uq = field.div(num, den)?;
    let u = field.qth_root(uq, q)?;
    if u.is_zero() {
        return Ok(Degenerate("u = 0"));
    }
    let au1 = field.add(field.mul(alpha, u), Elem::ONE);
    if au1.is_zero() {
        return Ok(Degenerate("alpha u + 1 = 0"));
    }
    let v = field.neg(field.div(au1, beta)?);
    if v.is_zero() {
        return Ok(Degenerate("v = 0"));
    }
    if field.pow(u, q - 1) == field.pow(v, q - 1) {
        return Ok(Degenerate("u^(q-1) = v^(q-1)"));
    }
    match psi_eval(field, q, u, v) {
        None => Ok(Degenerate("solution on an excluded line")),
        Some(img) if img == (alpha, beta) => Ok(FiberSolution::Solved { u, v }),
        Some(_) => Err(Error::Contradiction(format!(
            "closed-form preimage of ({}, {}) does not map back",
            alpha.index(),
            beta.index()
        ))),
    }
}

/// All `(u, v)` off the excluded lines with `Psi(u, v) = (alpha, beta)`.
pub fn brute_force_fiber(field: &Field, q: u64, alpha: Elem, beta: Elem) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for u in field.elements() {
        for v in field.elements() {
            if psi_eval(field, q, u, v) == Some((alpha, beta)) {
                out.push((u, v));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCensus {
    pub q: u64,
    pub ext: u32,
    pub seed: u64,
    /// Fiber size -> number of sampled targets.
    pub histogram: BTreeMap<usize, usize>,
    pub degenerate_count: usize,
    /// Targets where the closed form disagrees with brute force.
    pub solver_mismatches: usize,
}

impl FiberCensus {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "ext": self.ext,
            "seed": self.seed,
            "histogram": self.histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
            "degenerate_count": self.degenerate_count,
            "solver_mismatches": self.solver_mismatches,
        })
    }
}

const CENSUS_BUDGET: usize = 100_000;

/// Draws targets over `F_{q^k}`, `k >= 3` from a seeded stream until `samples`
/// non-degenerate ones are found, then counts each fiber by brute force.
///
/// Over `F_q` and `F_{q^2}` every point lies on an `F_q`-line (a point and
/// its conjugate span one), and `Psi` contracts those lines, so no target
/// there is non-degenerate.
pub fn fiber_census(q: u64, k: u32, samples: usize, seed: u64) -> Result<FiberCensus> {
    if k < 3 {
        return Err(Error::Precondition(format!(
            "no non-degenerate targets over F_{{q^{k}}}: every point lies on an F_q-line"
        )));
    }
    let (p, e) = crate::gf::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let field = make_field(p, e * k)?;
    if field.order().pow(2) > crate::gf::MAX_ORDER {
        return Err(Error::FieldTooLarge(field.order().pow(2)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut targets = Vec::with_capacity(samples);
    let mut degenerate_count = 0;
    let mut draws = 0;
    while targets.len() < samples {
        draws += 1;
        if draws > CENSUS_BUDGET {
            return Err(Error::BudgetExhausted(CENSUS_BUDGET));
        }
        let (alpha, beta) = (field.random(&mut rng), field.random(&mut rng));
        match fiber_solve(&field, q, alpha, beta)? {
            FiberSolution::Solved { u, v } => targets.push((alpha, beta, (u, v))),
            FiberSolution::Degenerate(_) => degenerate_count += 1,
        }
    }
    let results: Vec<(usize, bool)> = targets
        .par_iter()
        .map(|&(alpha, beta, sol)| {
            let fiber = brute_force_fiber(&field, q, alpha, beta);
            (fiber.len(), fiber == vec![sol])
        })
        .collect();
    let mut histogram = BTreeMap::new();
    let mut solver_mismatches = 0;
    for (size, agrees) in results {
        *histogram.entry(size).or_insert(0) += 1;
        if !agrees {
            solver_mismatches += 1;
        }
    }
    Ok(FiberCensus {
        q,
        ext: k,
        seed,
        histogram,
        degenerate_count,
        solver_mismatches,
    })
}
