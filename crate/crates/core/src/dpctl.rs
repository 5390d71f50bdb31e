//! Vanishing scan on del Pezzo surfaces, blowups of the plane at up to
//! seven points in general position, with the all-points configuration as a
//! negative control.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cone::numerical_classes;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lattice::{all_points_blowup, intersect, rat, DivClass, SurfaceDesc};
use crate::linalg;
use crate::linsys::{cohomology, monomials, CohomologyTriple};
use crate::plane::{collinear, ProjPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralPosition {
    pub general: bool,
    /// Indices of three collinear points or six points on a conic.
    pub witness: Option<Vec<usize>>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// No three points collinear and no six on a conic.
pub fn general_position_check(field: &Field, points: &[ProjPoint]) -> Result<GeneralPosition> {
    if points.is_empty() || points.len() > 7 {
        return Err(Error::PointCount(points.len()));
    }
    for i in 0..points.len() {
        if points[..i].contains(&points[i]) {
            return Err(Error::RepeatedPoint);
        }
    }
    for s in subsets(points.len(), 3) {
        if collinear(field, &points[s[0]], &points[s[1]], &points[s[2]]) {
            return Ok(GeneralPosition {
                general: false,
                witness: Some(s),
            });
        }
    }
    let conic_monomials = monomials(2);
    for s in subsets(points.len(), 6) {
        let rows: Vec<Vec<Elem>> = s
            .iter()
            .map(|&i| {
                let c = points[i].coords();
                conic_monomials
                    .iter()
                    .map(|m| {
                        (0..3).fold(Elem::ONE, |acc, v| {
                            field.mul(acc, field.pow(c[v], m[v] as u64))
                        })
                    })
                    .collect()
            })
            .collect();
        if linalg::rank(field, &rows) < 6 {
            return Ok(GeneralPosition {
                general: false,
                witness: Some(s),
            });
        }
    }
    Ok(GeneralPosition {
        general: true,
        witness: None,
    })
}

/// Points in general position together with the blowup they define.
#[derive(Clone, Debug)]
pub struct GeneralConfig {
    pub field: Field,
    pub points: Vec<ProjPoint>,
    pub surface: Arc<SurfaceDesc>,
    pub seed: u64,
    pub attempts: usize,
}

impl GeneralConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "field_order": self.field.order(),
            "points": self.points.iter().map(|p| p.to_json(&self.field)).collect::<Vec<_>>(),
            "seed": self.seed,
            "attempts": self.attempts,
        })
    }
}

const SAMPLE_BUDGET: usize = 10_000;

fn random_point(field: &Field, rng: &mut ChaCha8Rng) -> ProjPoint {
    loop {
        let c = [field.random(rng), field.random(rng), field.random(rng)];
        if let Ok(p) = ProjPoint::new(field, c) {
            return p;
        }
    }
}

/// Rejection sampling of `r` distinct points until they are in general
/// position. Over `F_2` no 4 points are general, so small fields exhaust
/// the budget.
pub fn sample_config(r: usize, field: &Field, seed: u64) -> Result<GeneralConfig> {
    if !(1..=7).contains(&r) {
        return Err(Error::PointCount(r));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=SAMPLE_BUDGET {
        let mut points: Vec<ProjPoint> = Vec::with_capacity(r);
        while points.len() < r {
            let p = random_point(field, &mut rng);
            if !points.contains(&p) {
                points.push(p);
            }
        }
        if general_position_check(field, &points)?.general {
            let surface = SurfaceDesc::new(field, points.clone())?;
            return Ok(GeneralConfig {
                field: field.clone(),
                points,
                surface,
                seed,
                attempts: attempt,
            });
        }
    }
    Err(Error::BudgetExhausted(SAMPLE_BUDGET))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelPezzoCertificate {
    pub points: usize,
    pub minus_one_classes: usize,
    /// `-K.C` over all of them; all equal 1.
    pub anticanonical_degrees_positive: bool,
    pub canonical_square: i64,
}

impl DelPezzoCertificate {
    pub fn ample(&self) -> bool {
        self.anticanonical_degrees_positive && self.canonical_square > 0
    }
}

/// The `(-1)`-classes `aH - sum m_i E_i` with `a <= 3`: the `E_i` and the
/// solutions with nonnegative multiplicities.
pub fn minus_one_classes(surface: &Arc<SurfaceDesc>) -> Result<Vec<DivClass>> {
    let r = surface.n();
    numerical_classes(-1, r)?
        .into_iter()
        .filter(|(a, m)| {
            *a > 0 && m.iter().all(|&x| x >= 0)
                || *a == 0 && m.iter().filter(|&&x| x == -1).count() == 1
        })
        .map(|(a, m)| DivClass::from_ints(surface, a, &m))
        .collect()
}

pub fn del_pezzo_certificate(surface: &Arc<SurfaceDesc>) -> Result<DelPezzoCertificate> {
    let curves = minus_one_classes(surface)?;
    let minus_k = -&DivClass::canonical(surface);
    let positive = curves
        .iter()
        .all(|c| intersect(&minus_k, c).map(|v| v > rat(0)).unwrap_or(false));
    let k2 = intersect(&minus_k, &minus_k)?;
    Ok(DelPezzoCertificate {
        points: surface.n(),
        minus_one_classes: curves.len(),
        anticanonical_degrees_positive: positive,
        canonical_square: k2.to_integer().try_into().map_err(|_| Error::NonIntegral)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KvvTrial {
    pub index: usize,
    pub a: i64,
    pub m: Vec<i64>,
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KvvScan {
    pub points: usize,
    pub field_order: u64,
    pub seed: u64,
    pub certificate: DelPezzoCertificate,
    pub trials: Vec<KvvTrial>,
    /// Trials with `h^1 != 0` or `h^2 != 0`.
    pub falsifications: Vec<usize>,
}

impl KvvScan {
    pub fn passed(&self) -> bool {
        self.certificate.ample() && self.falsifications.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// Largest coefficient of `H` drawn for `D - K`.
const MAX_DEGREE: i64 = 9;
const TRIAL_BUDGET: usize = 100_000;

/// Whether `N` pairs nonnegatively with every `(-1)`-class and `N^2 > 0`.
pub fn nef_and_big(n: &DivClass, curves: &[DivClass]) -> Result<bool> {
    for c in curves {
        if intersect(n, c)? < rat(0) {
            return Ok(false);
        }
    }
    Ok(intersect(n, n)? > rat(0))
}

fn draw_divisor(
    surface: &Arc<SurfaceDesc>,
    curves: &[DivClass],
    rng: &mut ChaCha8Rng,
) -> Result<DivClass> {
    let k = DivClass::canonical(surface);
    for _ in 0..TRIAL_BUDGET {
        let a = rng.random_range(1..=MAX_DEGREE);
        let m: Vec<i64> = (0..surface.n()).map(|_| rng.random_range(0..=a)).collect();
        let n = DivClass::from_ints(surface, a, &m)?;
        if nef_and_big(&n, curves)? {
            return Ok(&k + &n);
        }
    }
    Err(Error::BudgetExhausted(TRIAL_BUDGET))
}

fn trial(index: usize, surface: &Arc<SurfaceDesc>, d: &DivClass) -> Result<KvvTrial> {
    let CohomologyTriple {
        h0, h1, h2, chi, ..
    } = cohomology(surface, d)?;
    let (a, m) = d.int_coeffs()?;
    Ok(KvvTrial {
        index,
        a,
        m,
        h0,
        h1,
        h2,
        chi,
    })
}

/// Samples `trials` integral `D` with `D - K` nef and big and records the
/// cohomology of each. Trial `i` draws from stream `i` of the seeded
/// generator, so results do not depend on scheduling.
pub fn kvv_scan(config: &GeneralConfig, trials: usize, seed: u64) -> Result<KvvScan> {
    let surface = &config.surface;
    if !(2..=7).contains(&surface.n()) {
        return Err(Error::PointCount(surface.n()));
    }
    let certificate = del_pezzo_certificate(surface)?;
    if !certificate.ample() {
        return Err(Error::Precondition("-K is not ample".into()));
    }
    let curves = minus_one_classes(surface)?;
    let results: Vec<KvvTrial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let d = draw_divisor(surface, &curves, &mut rng)?;
            trial(i, surface, &d)
        })
        .collect::<Result<_>>()?;
    let falsifications = results
        .iter()
        .filter(|t| t.h1 != 0 || t.h2 != 0)
        .map(|t| t.index)
        .collect();
    Ok(KvvScan {
        points: surface.n(),
        field_order: config.field.order(),
        seed,
        certificate,
        trials: results,
        falsifications,
    })
}

/// Cohomology of the fixed divisors `-K` and `-2K` on a configuration.
pub fn anticanonical_multiples(config: &GeneralConfig) -> Result<Vec<KvvTrial>> {
    let minus_k = -&DivClass::canonical(&config.surface);
    [1, 2]
        .iter()
        .map(|&c| trial(c as usize, &config.surface, &(c * &minus_k)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegativeControl {
    pub general_position: GeneralPosition,
    pub anticanonical_ample: bool,
    pub h1: u64,
    pub cohomology: CohomologyTriple,
}

impl NegativeControl {
    /// The all-points blowup fails the scan's hypotheses and violates vanishing.
    pub fn passed(&self) -> bool {
        !self.general_position.general && !self.anticanonical_ample && self.h1 == 1
    }
}

/// The `q = 2` all-points configuration with `D = K + B`.
pub fn negative_control() -> Result<NegativeControl> {
    let s = all_points_blowup(2)?;
    let general_position = general_position_check(s.field(), s.incidence().points())?;
    let classes = s.classes();
    let minus_k = -&classes.k;
    let anticanonical_ample = classes
        .lines
        .iter()
        .all(|l| intersect(&minus_k, l).map(|v| v > rat(0)).unwrap_or(false));
    let cohomology = cohomology(s.surface(), &classes.k_plus_b())?;
    Ok(NegativeControl {
        general_position,
        anticanonical_ample,
        h1: cohomology.h1,
        cohomology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;

    #[test]
    fn collinear_triple_is_witnessed() {
        let f = field_of_order(5).unwrap();
        let pts: Vec<ProjPoint> = [[1, 0, 0], [0, 1, 0], [1, 1, 0]]
            .iter()
            .map(|&c| ProjPoint::from_ints(&f, c).unwrap())
            .collect();
        assert_eq!(
            general_position_check(&f, &pts).unwrap(),
            GeneralPosition {
                general: false,
                witness: Some(vec![0, 1, 2])
            }
        );
        let s = all_points_blowup(2).unwrap();
        assert!(
            !general_position_check(s.field(), s.incidence().points())
                .unwrap()
                .general
        );
    }

    #[test]
    fn six_on_a_conic() {
        // the six rational points of xy + z^2 over GF(5)
        let f = field_of_order(5).unwrap();
        let on: Vec<ProjPoint> = crate::plane::plane_points(&f)
            .into_iter()
            .filter(|p| {
                let c = p.coords();
                f.add(f.mul(c[0], c[1]), f.mul(c[2], c[2])).is_zero()
            })
            .collect();
        assert_eq!(on.len(), 6);
        let g = general_position_check(&f, &on).unwrap();
        assert_eq!(g.witness, Some(vec![0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn sampling() {
        let f5 = field_of_order(5).unwrap();
        let c = sample_config(4, &f5, 3).unwrap();
        assert_eq!(c.points.len(), 4);
        assert_eq!(sample_config(4, &f5, 3).unwrap().points, c.points);
        let f2 = field_of_order(2).unwrap();
        assert_eq!(
            sample_config(7, &f2, 0).unwrap_err(),
            Error::BudgetExhausted(SAMPLE_BUDGET)
        );
        let f32 = field_of_order(32).unwrap();
        assert!(sample_config(7, &f32, 11).is_ok());
    }

    #[test]
    fn minus_one_curve_counts() {
        let f = field_of_order(32).unwrap();
        for (r, count) in [(2, 3), (3, 6), (4, 10), (5, 16), (6, 27), (7, 56)] {
            let c = sample_config(r, &f, r as u64).unwrap();
            let cert = del_pezzo_certificate(&c.surface).unwrap();
            assert_eq!(cert.minus_one_classes, count);
            assert_eq!(cert.canonical_square, 9 - r as i64);
            assert!(cert.ample());
        }
    }

    #[test]
    fn anticanonical_vanishing() {
        let f = field_of_order(32).unwrap();
        for r in [6, 7] {
            let c = sample_config(r, &f, 100 + r as u64).unwrap();
            for t in anticanonical_multiples(&c).unwrap() {
                assert_eq!((t.h1, t.h2), (0, 0));
            }
        }
    }

    #[test]
    fn scan_and_control() {
        let f = field_of_order(32).unwrap();
        let c = sample_config(5, &f, 9).unwrap();
        let scan = kvv_scan(&c, 10, 1).unwrap();
        assert!(scan.passed());
        assert_eq!(kvv_scan(&c, 10, 1).unwrap(), scan);
        let ctl = negative_control().unwrap();
        assert!(ctl.passed());
    }
}
