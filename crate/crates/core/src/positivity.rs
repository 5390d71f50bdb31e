//! Certificates for klt-ness, nefness and bigness, and the ample perturbation
//! of `B - Delta` when the cone of curves is known (q = 2).
//!
//! Nefness is certified, never decided. Without the full cone a class that
//! passes no route is reported inconclusive; it is refuted only by a curve
//! known to be irreducible (`E_i` or `L'_j`) on which it is negative.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cone::cone_generators;
use crate::error::{Error, Result};
use crate::lattice::{frac, intersect, rat, DivClass, Rational, StandardClasses};
use crate::linalg::solve_unique;
use crate::plane::Incidence;

#[derive(Clone, Debug)]
pub struct BoundaryComponent {
    pub curve: DivClass,
    pub coeff: Rational,
}

/// A pair `(X, Delta)` whose boundary is a disjoint union of smooth rational
/// curves. The construction refuses any other boundary.
#[derive(Clone, Debug)]
pub struct PairDesc {
    boundary: Vec<BoundaryComponent>,
    facts: Vec<String>,
}

impl PairDesc {
    pub fn new(k: &DivClass, boundary: Vec<BoundaryComponent>) -> Result<PairDesc> {
        let mut facts = Vec::new();
        for (i, c) in boundary.iter().enumerate() {
            if c.coeff.is_negative() {
                return Err(Error::BoundaryCoefficient(c.coeff.to_string()));
            }
            let s = intersect(&c.curve, &c.curve)?;
            let genus_term = &s + intersect(&c.curve, k)?;
            if !s.is_negative() || genus_term != rat(-2) {
                return Err(Error::BoundaryNotDisjoint(format!(
                    "component {i}: C^2 = {s}, C^2 + C.K = {genus_term}"
                )));
            }
            for (j, d) in boundary.iter().enumerate().skip(i + 1) {
                let x = intersect(&c.curve, &d.curve)?;
                if !x.is_zero() {
                    return Err(Error::BoundaryNotDisjoint(format!(
                        "components {i} and {j} meet: {x}"
                    )));
                }
            }
        }
        if !boundary.is_empty() {
            facts.push(format!(
                "{} components with negative self-intersection",
                boundary.len()
            ));
            facts.push("adjunction C^2 + C.K = -2 for every component".into());
            facts.push("pairwise intersection numbers all 0".into());
        }
        Ok(PairDesc { boundary, facts })
    }

    /// `Delta = q/(q+1) sum L'_j`.
    pub fn line_delta(classes: &StandardClasses) -> Result<PairDesc> {
        let c = frac(classes.q as i64, classes.q as i64 + 1);
        let boundary = classes
            .lines
            .iter()
            .map(|l| BoundaryComponent {
                curve: l.clone(),
                coeff: c.clone(),
            })
            .collect();
        PairDesc::new(&classes.k, boundary)
    }

    pub fn boundary(&self) -> &[BoundaryComponent] {
        &self.boundary
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KltCertificate {
    pub klt: bool,
    pub max_coeff: Rational,
    pub facts: Vec<String>,
}

/// For a disjoint union of smooth curves the pair is klt iff every
/// coefficient is below 1.
pub fn is_klt_disjoint_snc(pair: &PairDesc) -> KltCertificate {
    let max_coeff = pair
        .boundary
        .iter()
        .map(|c| c.coeff.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    KltCertificate {
        klt: max_coeff < Rational::one(),
        max_coeff,
        facts: pair.facts.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NefMode {
    /// `D` is a positive multiple of `H` in the basis `H, L'_j`.
    PullbackDecomposition,
    /// `D` pairs nonnegatively with the 14 generators of the cone (q = 2).
    FullConeQ2,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NefVerdict {
    NefAndBig,
    /// Negative on a known irreducible curve.
    NotNef {
        witness: String,
        value: Rational,
    },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NefBigCertificate {
    pub verdict: NefVerdict,
    pub mode: NefMode,
    pub self_intersection: Rational,
    pub notes: Vec<String>,
}

impl NefBigCertificate {
    pub fn certified(&self) -> bool {
        self.verdict == NefVerdict::NefAndBig
    }

    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            NefVerdict::NefAndBig => json!("nef-and-big"),
            NefVerdict::NotNef { witness, value } => {
                json!({"not-nef": witness, "value": value.to_string()})
            }
            NefVerdict::Inconclusive => json!("inconclusive"),
        };
        json!({
            "verdict": verdict,
            "route": match self.mode {
                NefMode::PullbackDecomposition => "pullback-decomposition",
                NefMode::FullConeQ2 => "full-cone-q2",
            },
            "self_intersection": self.self_intersection.to_string(),
            "notes": self.notes,
        })
    }
}

/// Coefficients `(c, c_j)` with `D = c H + sum c_j L'_j`.
pub fn line_decomposition(
    d: &DivClass,
    classes: &StandardClasses,
) -> Option<(Rational, Vec<Rational>)> {
    let n = classes.lines.len();
    // unknowns (c, c_1..c_n); one equation for the H coefficient and one per E_i
    let mut rows = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    let mut h_row = vec![Rational::one()];
    h_row.extend(classes.lines.iter().map(|l| l.a().clone()));
    rows.push(h_row);
    rhs.push(d.a().clone());
    for i in 0..n {
        let mut row = vec![Rational::zero()];
        row.extend(classes.lines.iter().map(|l| l.m()[i].clone()));
        rows.push(row);
        rhs.push(d.m()[i].clone());
    }
    let sol = solve_unique(&rows, &rhs)?;
    let c = sol[0].clone();
    Some((c, sol[1..].to_vec()))
}

pub fn nef_big_certificate(
    d: &DivClass,
    classes: &StandardClasses,
    inc: &Incidence,
    mode: NefMode,
) -> Result<NefBigCertificate> {
    let self_intersection = intersect(d, d)?;
    let mut notes = Vec::new();
    let known = classes
        .e
        .iter()
        .enumerate()
        .map(|(i, c)| (format!("E_{}", i + 1), c))
        .chain(
            classes
                .lines
                .iter()
                .enumerate()
                .map(|(j, c)| (format!("L'_{}", j + 1), c)),
        );
    for (name, curve) in known {
        let v = intersect(d, curve)?;
        if v.is_negative() {
            return Ok(NefBigCertificate {
                verdict: NefVerdict::NotNef {
                    witness: name,
                    value: v,
                },
                mode,
                self_intersection,
                notes,
            });
        }
    }
    let big = self_intersection.is_positive();
    let verdict = match mode {
        NefMode::PullbackDecomposition => match line_decomposition(d, classes) {
            Some((c, cs)) if c.is_positive() && cs.iter().all(Zero::is_zero) => {
                notes.push(format!("D = {c} H, the pullback of an ample class"));
                let dh = intersect(d, &classes.h)?;
                notes.push(format!("D^2 = {self_intersection}, D.H = {dh}"));
                if big && dh.is_positive() {
                    NefVerdict::NefAndBig
                } else {
                    NefVerdict::Inconclusive
                }
            }
            Some((c, _)) => {
                notes.push(format!("D = {c} H + sum c_j L'_j with some c_j nonzero"));
                NefVerdict::Inconclusive
            }
            None => NefVerdict::Inconclusive,
        },
        NefMode::FullConeQ2 => {
            if classes.q != 2 {
                return Err(Error::RequiresQ2(classes.q));
            }
            let cone = cone_generators(classes, inc)?;
            let min = cone
                .generators
                .iter()
                .map(|g| intersect(d, g))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .expect("14 generators");
            notes.push(format!("min D.C over the 14 generators = {min}"));
            notes.push(format!("D^2 = {self_intersection}"));
            if !min.is_negative() && big {
                NefVerdict::NefAndBig
            } else {
                NefVerdict::Inconclusive
            }
        }
    };
    Ok(NefBigCertificate {
        verdict,
        mode,
        self_intersection,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplePerturbation {
    pub epsilon: Rational,
    pub exponent: u32,
    /// `(B - Delta - eps sum E).C` for each of the 14 generators.
    pub pairings: Vec<Rational>,
    pub square: Rational,
}

impl AmplePerturbation {
    pub fn to_json(&self) -> Value {
        json!({
            "epsilon": self.epsilon.to_string(),
            "pairings": self.pairings.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "square": self.square.to_string(),
        })
    }
}

/// Pairings and square of `B - Delta - eps sum E_i` against the cone.
pub fn perturbation_values(
    classes: &StandardClasses,
    inc: &Incidence,
    eps: &Rational,
) -> Result<(Vec<Rational>, Rational)> {
    let cone = cone_generators(classes, inc)?;
    let d = &(&classes.b - &classes.delta) - &classes.sum_e().scale(eps);
    let pairings = cone
        .generators
        .iter()
        .map(|g| intersect(&d, g))
        .collect::<Result<Vec<_>>>()?;
    let square = intersect(&d, &d)?;
    Ok((pairings, square))
}

/// Largest `eps = 1/2^s`, `s <= 20`, making `B - Delta - eps sum E_i`
/// strictly positive on the cone with positive square (Kleiman).
pub fn ample_perturbation_q2(
    classes: &StandardClasses,
    inc: &Incidence,
) -> Result<AmplePerturbation> {
    if classes.q != 2 {
        return Err(Error::RequiresQ2(classes.q));
    }
    for s in 0..=20u32 {
        let eps = frac(1, 1 << s);
        let (pairings, square) = perturbation_values(classes, inc, &eps)?;
        if pairings.iter().all(Signed::is_positive) && square.is_positive() {
            return Ok(AmplePerturbation {
                epsilon: eps,
                exponent: s,
                pairings,
                square,
            });
        }
    }
    Err(Error::NoAmplePerturbation)
}
