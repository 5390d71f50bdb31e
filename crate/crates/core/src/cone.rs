//! Negative curves and the cone of curves of the Fano-plane blowup (q = 2).
//!
//! The enumeration certifies classes, not curves. `E_i` and `L'_j` are
//! irreducible by construction. Every other numerical class with
//! `C^2 in {-1, -2}` is shown not to be the class of an irreducible curve by
//! incidence and Bezout arguments. `C^2 >= -2` for every irreducible curve
//! because `-K` is nef and big, so the enumeration is exhaustive.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{intersect, rat, DivClass, StandardClasses};
use crate::plane::Incidence;

/// Largest `a >= 0` allowed by Cauchy-Schwarz for a smooth rational curve
/// `C = aH - sum m_i E_i` on a blowup at `r` points with `C^2 = selfint`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub selfint: i64,
    pub points: usize,
    pub bound: i64,
    /// The reduced quadratic `c2 a^2 + c1 a + c0 <= 0`.
    pub quadratic: [i64; 3],
    /// `(lhs, rhs)` of `(sum m)^2 <= r sum m^2` at `bound + 1`.
    pub first_failure: (i64, i64),
}

pub fn degree_bound(selfint: i64) -> Result<DegreeBound> {
    degree_bound_for(selfint, 7)
}

pub fn degree_bound_for(selfint: i64, points: usize) -> Result<DegreeBound> {
    if !(selfint == -1 || selfint == -2) {
        return Err(Error::SelfIntersectionOutOfDomain(selfint));
    }
    if !(1..=8).contains(&points) {
        return Err(Error::PointCount(points));
    }
    let r = points as i64;
    // sum m_i = 3a - 2 - C^2 and sum m_i^2 = a^2 - C^2
    let lhs = |a: i64| (3 * a - 2 - selfint).pow(2);
    let rhs = |a: i64| r * (a * a - selfint);
    let mut a = 0;
    while lhs(a + 1) <= rhs(a + 1) {
        a += 1;
        if a > 1000 {
            return Err(Error::Contradiction("degree bound diverges".into()));
        }
    }
    let mut quadratic = [
        9 - r,
        -6 * (2 + selfint),
        (2 + selfint).pow(2) + r * selfint,
    ];
    let g = quadratic.iter().fold(0i64, |g, &c| gcd(g, c.abs()));
    if g > 1 {
        quadratic = quadratic.map(|c| c / g);
    }
    Ok(DegreeBound {
        selfint,
        points,
        bound: a,
        quadratic,
        first_failure: (lhs(a + 1), rhs(a + 1)),
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Integer solutions `(a, m)` with `0 <= a <= bound`,
/// `a^2 - sum m_i^2 = selfint` and `-3a + sum m_i = -2 - selfint`.
pub fn numerical_classes(selfint: i64, points: usize) -> Result<Vec<(i64, Vec<i64>)>> {
    let bound = degree_bound_for(selfint, points)?.bound;
    let mut out = Vec::new();
    for a in 0..=bound {
        let sq = a * a - selfint;
        let target_sum = 3 * a - 2 - selfint;
        let mut m = vec![0i64; points];
        fill(&mut m, 0, sq, target_sum, &mut |v| {
            out.push((a, v.to_vec()))
        });
    }
    Ok(out)
}

fn fill(m: &mut [i64], idx: usize, sq_left: i64, sum_left: i64, emit: &mut impl FnMut(&[i64])) {
    let rest = (m.len() - idx) as i64;
    if idx == m.len() {
        if sq_left == 0 && sum_left == 0 {
            emit(m);
        }
        return;
    }
    // remaining entries can realize at most |sum| <= sqrt(rest * sq)
    if sum_left * sum_left > rest * sq_left {
        return;
    }
    let bound = (sq_left as f64).sqrt() as i64 + 1;
    for v in -bound..=bound {
        if v * v <= sq_left {
            m[idx] = v;
            fill(m, idx + 1, sq_left - v * v, sum_left - v, emit);
        }
    }
    m[idx] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CandidateStatus {
    RealizedE { index: usize },
    RealizedL { index: usize },
    Excluded { reason: String },
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct CurveCandidate {
    pub cls: DivClass,
    pub a: i64,
    pub m: Vec<i64>,
    pub selfint: i64,
    pub kdot: i64,
    pub status: CandidateStatus,
}

impl CurveCandidate {
    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a,
            "m": self.m,
            "selfint": self.selfint,
            "kdot": self.kdot,
            "status": self.status,
        })
    }
}

fn require_q2(classes: &StandardClasses) -> Result<()> {
    if classes.q != 2 {
        return Err(Error::RequiresQ2(classes.q));
    }
    Ok(())
}

/// All numerical classes with `C^2 in {-1, -2}` satisfying adjunction for a
/// smooth rational curve, status not yet decided.
pub fn enumerate_candidates(classes: &StandardClasses) -> Result<Vec<CurveCandidate>> {
    require_q2(classes)?;
    let surface = classes.h.surface();
    let mut out = Vec::new();
    for selfint in [-1, -2] {
        for (a, m) in numerical_classes(selfint, surface.n())? {
            let cls = DivClass::from_ints(surface, a, &m)?;
            let s = intersect(&cls, &cls)?;
            let kd = intersect(&cls, &classes.k)?;
            debug_assert_eq!(s, rat(selfint));
            out.push(CurveCandidate {
                kdot: kd.to_integer().try_into().expect("small"),
                cls,
                a,
                m,
                selfint,
                status: CandidateStatus::Undetermined,
            });
        }
    }
    Ok(out)
}

/// Decides a candidate by the incidence and Bezout arguments.
pub fn exclude(c: &CurveCandidate, inc: &Incidence) -> CandidateStatus {
    let n = c.m.len();
    let support: Vec<usize> = (0..n).filter(|&i| c.m[i] > 0).collect();
    let line_weight = |j: usize| -> i64 { inc.points_on(j).iter().map(|&i| c.m[i].max(0)).sum() };

    if c.a == 0 {
        let negs: Vec<usize> = (0..n).filter(|&i| c.m[i] < 0).collect();
        if negs.len() == 1 && c.m[negs[0]] == -1 && support.is_empty() {
            return CandidateStatus::RealizedE { index: negs[0] };
        }
    }
    if let Some(i) = (0..n).find(|&i| c.m[i] < 0) {
        return CandidateStatus::Excluded {
            reason: format!(
                "negative multiplicity at P_{}: an irreducible curve other than E_{} meets it nonnegatively",
                i + 1,
                i + 1
            ),
        };
    }
    if c.a == 1 {
        if let Some(i) = support.iter().find(|&&i| c.m[i] > 1) {
            return CandidateStatus::Excluded {
                reason: format!("a line has multiplicity at most 1 at P_{}", i + 1),
            };
        }
        return match inc.line_avoiding(&[], &support) {
            Some(j) if inc.points_on(j) == support => CandidateStatus::RealizedL { index: j },
            Some(j) => {
                let extra: Vec<usize> = inc
                    .points_on(j)
                    .into_iter()
                    .filter(|i| !support.contains(i))
                    .collect();
                CandidateStatus::Excluded {
                    reason: format!(
                        "the line through the support is L_{}, which also passes through P_{}; its strict transform is L'_{}",
                        j + 1,
                        extra[0] + 1,
                        j + 1
                    ),
                }
            }
            None => CandidateStatus::Excluded {
                reason: "no rational line passes through the support".into(),
            },
        };
    }
    if c.a == 2 && support.len() >= 5 {
        let outside: Vec<usize> = (0..n).filter(|i| !support.contains(i)).collect();
        if let Some(j) = inc.line_avoiding(&outside, &[]) {
            return CandidateStatus::Excluded {
                reason: format!(
                    "L_{} misses the points off the conic, so it meets the conic in {} > 2 points",
                    j + 1,
                    line_weight(j)
                ),
            };
        }
    }
    if c.a == 3 {
        if let Some(&i) = support.iter().find(|&&i| c.m[i] == 2) {
            let j = inc.lines_through_index(i)[0];
            let w = line_weight(j);
            if w > 3 {
                return CandidateStatus::Excluded {
                    reason: format!("L_{} through the double point P_{} meets the cubic with multiplicity {w} > 3", j + 1, i + 1),
                };
            }
        }
    }
    if c.a >= 2 {
        if let Some(j) = (0..inc.lines().len()).find(|&j| line_weight(j) > c.a) {
            return CandidateStatus::Excluded {
                reason: format!(
                    "L_{} meets the curve in {} > {} points",
                    j + 1,
                    line_weight(j),
                    c.a
                ),
            };
        }
    }
    CandidateStatus::Undetermined
}

/// Enumeration with every status decided.
pub fn classify_candidates(
    classes: &StandardClasses,
    inc: &Incidence,
) -> Result<Vec<CurveCandidate>> {
    let mut cands = enumerate_candidates(classes)?;
    for c in cands.iter_mut() {
        c.status = exclude(c, inc);
    }
    Ok(cands)
}

#[derive(Clone, Debug)]
pub struct ConeCertificate {
    /// `E_1..E_7` followed by `L'_1..L'_7`.
    pub generators: Vec<DivClass>,
    pub candidates: Vec<CurveCandidate>,
}

impl ConeCertificate {
    pub fn summary(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.candidates {
            let key = match c.status {
                CandidateStatus::RealizedE { .. } => "realized_e",
                CandidateStatus::RealizedL { .. } => "realized_l",
                CandidateStatus::Excluded { .. } => "excluded",
                CandidateStatus::Undetermined => "undetermined",
            };
            *counts.entry(key).or_insert(0) += 1;
        }
        counts
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generators.iter().map(DivClass::to_json).collect::<Vec<_>>(),
            "summary": self.summary(),
            "candidates": self.candidates.iter().map(CurveCandidate::to_json).collect::<Vec<_>>(),
        })
    }
}

/// The 14 generators of the cone of curves, with the duality cross-checks.
pub fn cone_generators(classes: &StandardClasses, inc: &Incidence) -> Result<ConeCertificate> {
    require_q2(classes)?;
    let candidates = classify_candidates(classes, inc)?;
    let undetermined: Vec<String> = candidates
        .iter()
        .filter(|c| c.status == CandidateStatus::Undetermined)
        .map(|c| format!("{:?}", c.cls))
        .collect();
    if !undetermined.is_empty() {
        return Err(Error::Undetermined(undetermined.join(" ")));
    }
    let mut generators = Vec::new();
    for c in &candidates {
        let expected = match c.status {
            CandidateStatus::RealizedE { index } => &classes.e[index],
            CandidateStatus::RealizedL { index } => &classes.lines[index],
            _ => continue,
        };
        if &c.cls != expected {
            return Err(Error::Contradiction(format!(
                "realized class {:?} is not {:?}",
                c.cls, expected
            )));
        }
        generators.push(c.cls.clone());
    }
    let mut ordered: Vec<DivClass> = classes.e.iter().chain(&classes.lines).cloned().collect();
    ordered.retain(|g| generators.contains(g));
    if ordered.len() != 14 || generators.len() != 14 {
        return Err(Error::Contradiction(format!(
            "{} realized classes",
            generators.len()
        )));
    }
    let anti = -&classes.k;
    for g in &ordered {
        let s = intersect(g, g)?;
        if s >= rat(0) {
            return Err(Error::Contradiction(format!(
                "generator {g:?} has C^2 = {s}"
            )));
        }
        if intersect(&classes.h, g)? < rat(0) || intersect(&anti, g)? < rat(0) {
            return Err(Error::Contradiction(format!(
                "H or -K is negative on {g:?}"
            )));
        }
    }
    for l in &classes.lines {
        if intersect(&anti, l)? != rat(0) {
            return Err(Error::Contradiction(
                "-K is not trivial on the contracted face".into(),
            ));
        }
    }
    Ok(ConeCertificate {
        generators: ordered,
        candidates,
    })
}
