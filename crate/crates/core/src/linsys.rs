//! Cohomology of line bundles on point blowups of the plane.
//!
//! `h^0(aH - sum m_i E_i)` is the dimension of the degree-`a` plane forms
//! vanishing to order `m_i` at the i-th center. Order of vanishing is
//! imposed through the coefficients of the Taylor expansion at the point
//! (Hasse derivatives), which stay correct in characteristic `p`; ordinary
//! iterated partials would not. `h^2` comes from Serre duality and `h^1`
//! from Riemann-Roch.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gf::{make_field, Elem, Embedding, Field};
use crate::lattice::{euler_char, DivClass, SurfaceDesc};
use crate::linalg;
use crate::plane::ProjPoint;
use crate::poly::Monomial;

/// Degree-`d` monomials in `x, y, z`, `x^d` first.
pub fn monomials(d: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

/// Binomial coefficients mod `p`, `table[n][k]` for `n <= max`.
fn pascal_mod(max: u32, p: u64) -> Vec<Vec<u32>> {
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(max as usize + 1);
    for n in 0..=max as usize {
        let mut row = vec![1u32; n + 1];
        for k in 1..n {
            row[k] = ((rows[n - 1][k - 1] as u64 + rows[n - 1][k] as u64) % p) as u32;
        }
        rows.push(row);
    }
    rows
}

/// Linear conditions on degree-`d` forms for assigned multiplicities.
#[derive(Clone, Debug)]
pub struct InterpolationSystem {
    field: Field,
    degree: u32,
    conditions: Vec<(ProjPoint, u32)>,
    monomials: Vec<Monomial>,
    rows: Vec<Vec<Elem>>,
}

impl InterpolationSystem {
    pub fn build(
        field: &Field,
        degree: u32,
        conditions: Vec<(ProjPoint, u32)>,
    ) -> InterpolationSystem {
        let monomials = monomials(degree);
        let binom = pascal_mod(degree, field.characteristic());
        let mut rows = Vec::new();
        for (pt, mult) in &conditions {
            let chart = pt.chart();
            let (o1, o2) = match chart {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let c = pt.coords();
            let pow_table = |base: Elem| -> Vec<Elem> {
                std::iter::successors(Some(Elem::ONE), |&x| Some(field.mul(x, base)))
                    .take(degree as usize + 1)
                    .collect()
            };
            let (pu, pv) = (pow_table(c[o1]), pow_table(c[o2]));
            for total in 0..*mult {
                for a in (0..=total).rev() {
                    let b = total - a;
                    let row = monomials
                        .iter()
                        .map(|m| {
                            let (i, j) = (m[o1], m[o2]);
                            if a > i || b > j {
                                return Elem::ZERO;
                            }
                            let coeff = binom[i as usize][a as usize] as u64
                                * binom[j as usize][b as usize] as u64;
                            let scalar = field.from_int((coeff % field.characteristic()) as i64);
                            field.mul(
                                scalar,
                                field.mul(pu[(i - a) as usize], pv[(j - b) as usize]),
                            )
                        })
                        .collect();
                    rows.push(row);
                }
            }
        }
        InterpolationSystem {
            field: field.clone(),
            degree,
            conditions,
            monomials,
            rows,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn conditions(&self) -> &[(ProjPoint, u32)] {
        &self.conditions
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.field, &self.rows)
    }

    /// Dimension of the space of forms satisfying every condition.
    pub fn solution_dim(&self) -> usize {
        self.monomials.len() - self.rank()
    }

    /// One line per condition, entries as bracketed coefficient vectors.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|&x| {
                    let c: Vec<String> = self.field.coeffs(x).iter().map(u32::to_string).collect();
                    format!("[{}]", c.join(","))
                })
                .collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }
}

/// The interpolation system computing `h^0(D)`; `None` when `a < 0`.
/// Negative multiplicities impose nothing: effective exceptional parts do
/// not change global sections.
pub fn system_for(surface: &SurfaceDesc, d: &DivClass) -> Result<Option<InterpolationSystem>> {
    let (a, m) = d.int_coeffs()?;
    if a < 0 {
        return Ok(None);
    }
    let conditions = surface
        .centers()
        .iter()
        .zip(&m)
        .filter(|(_, &mi)| mi > 0)
        .map(|(p, &mi)| (*p, mi as u32))
        .collect();
    Ok(Some(InterpolationSystem::build(
        surface.field(),
        a as u32,
        conditions,
    )))
}

pub fn h0(surface: &SurfaceDesc, d: &DivClass) -> Result<u64> {
    Ok(system_for(surface, d)?.map_or(0, |s| s.solution_dim() as u64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTriple {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
    pub chi: i64,
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl CohomologyTriple {
    /// `{"h0":..,"h1":..,"h2":..,"chi":..}`.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain integers")
    }
}

pub fn cohomology(surface: &Arc<SurfaceDesc>, d: &DivClass) -> Result<CohomologyTriple> {
    let k = DivClass::canonical(surface);
    let h0v = h0(surface, d)?;
    let dual = &k - d;
    let h2v = h0(surface, &dual)?;
    let chi = euler_char(d)?;
    let h1 = h0v as i64 + h2v as i64 - chi;
    if h1 < 0 {
        return Err(Error::NegativeH1(h1));
    }
    Ok(CohomologyTriple {
        h0: h0v,
        h1: h1 as u64,
        h2: h2v,
        chi,
        notes: vec![
            "h0: rank of the Taylor-coefficient interpolation system".into(),
            "h2: h0(K - D) by Serre duality".into(),
            "h1: h0 + h2 - chi with chi = 1 + D.(D-K)/2".into(),
        ],
    })
}

/// Moves the surface to GF(q^k) along the canonical embedding.
pub fn extend_surface(surface: &SurfaceDesc, k: u32) -> Result<Arc<SurfaceDesc>> {
    let base = surface.field();
    let ext = make_field(base.characteristic(), base.degree() * k)?;
    let emb = Embedding::new(base, &ext)?;
    let centers = surface
        .centers()
        .iter()
        .map(|p| ProjPoint::new(&ext, p.coords().map(|c| emb.apply(c))))
        .collect::<Result<Vec<_>>>()?;
    SurfaceDesc::new(&ext, centers)
}

/// Whether `h^0(D)` is unchanged after extending scalars to GF(q^k).
pub fn base_change_check(surface: &Arc<SurfaceDesc>, d: &DivClass, k: u32) -> Result<bool> {
    let ext = extend_surface(surface, k)?;
    let moved = DivClass::new(&ext, d.a().clone(), d.m().to_vec())?;
    Ok(h0(surface, d)? == h0(&ext, &moved)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use crate::lattice::all_points_blowup;
    use crate::poly::Poly3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn system_shape() {
        let f = field_of_order(3).unwrap();
        let p = ProjPoint::from_ints(&f, [1, 2, 0]).unwrap();
        let s = InterpolationSystem::build(&f, 5, vec![(p, 3)]);
        assert_eq!(s.monomials().len(), 21);
        assert_eq!(s.rows().len(), 6);
        // a single fat point of order m imposes independent conditions when m <= d+1
        assert_eq!(s.rank(), 6);
        let dump = s.dump();
        assert_eq!(dump.lines().count(), 6);
        assert!(dump.lines().all(|l| l.split(' ').count() == 21));
    }

    #[test]
    fn m_has_three_sections() {
        for q in [2, 3, 4, 5] {
            let s = all_points_blowup(q).unwrap();
            assert_eq!(h0(s.surface(), &s.classes().m).unwrap(), 3);
        }
    }

    #[test]
    fn fano_conics() {
        let s = all_points_blowup(2).unwrap();
        let c = s.classes();
        assert_eq!(h0(s.surface(), &c.k_plus_b()).unwrap(), 0);
        let t = cohomology(s.surface(), &c.k_plus_b()).unwrap();
        assert_eq!((t.h0, t.h1, t.h2, t.chi), (0, 1, 0, -1));
        let z = cohomology(s.surface(), &DivClass::zero(s.surface())).unwrap();
        assert_eq!((z.h0, z.h1, z.h2, z.chi), (1, 0, 0, 1));
        assert_eq!(
            t.to_json().to_string(),
            r#"{"h0":0,"h1":1,"h2":0,"chi":-1}"#
        );
    }

    #[test]
    fn unconditioned_forms() {
        let s = all_points_blowup(3).unwrap();
        for d in 0..6 {
            let cls = DivClass::hyperplane(s.surface()).scale(&crate::lattice::rat(d));
            assert_eq!(
                h0(s.surface(), &cls).unwrap(),
                ((d + 1) * (d + 2) / 2) as u64
            );
            assert!(base_change_check(s.surface(), &cls, 2).unwrap());
        }
        let neg = DivClass::hyperplane(s.surface()).scale(&crate::lattice::rat(-1));
        assert_eq!(h0(s.surface(), &neg).unwrap(), 0);
    }

    #[test]
    fn base_change_examples() {
        let s = all_points_blowup(2).unwrap();
        let c = s.classes();
        assert!(base_change_check(s.surface(), &c.k_plus_b(), 2).unwrap());
        assert!(base_change_check(s.surface(), &c.m, 3).unwrap());
    }

    #[test]
    fn negative_multiplicities_are_clamped() {
        let s = all_points_blowup(2).unwrap();
        let d = DivClass::from_ints(s.surface(), 1, &[-2, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(h0(s.surface(), &d).unwrap(), 3);
        assert_eq!(h0(s.surface(), &s.classes().delta), Err(Error::NonIntegral));
    }

    /// The condition block annihilates a form exactly when its shifted
    /// expansion has no terms of local degree below the multiplicity.
    #[test]
    fn taylor_rows_match_substitution_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 4, 5, 9] {
            let f = field_of_order(q).unwrap();
            let pts = crate::plane::plane_points(&f);
            for _ in 0..30 {
                let d = rng.random_range(1..7u32);
                let mult = rng.random_range(1..4u32);
                let p = pts[rng.random_range(0..pts.len())];
                let sys = InterpolationSystem::build(&f, d, vec![(p, mult)]);
                // forms: random, and random multiples of (line through p)^mult
                let mut coeffs: Vec<Elem> =
                    sys.monomials().iter().map(|_| f.random(&mut rng)).collect();
                if rng.random_bool(0.5) && d >= mult {
                    let l = loop {
                        let l = [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)];
                        if l.iter().any(|c| !c.is_zero())
                            && crate::plane::dot(&f, &l, &p.coords()).is_zero()
                        {
                            break l;
                        }
                    };
                    let mut g = Poly3::from_terms(
                        &f,
                        monomials(d - mult)
                            .into_iter()
                            .map(|m| (m, f.random(&mut rng))),
                    );
                    for _ in 0..mult {
                        g = g.mul(&Poly3::linear(&f, l));
                    }
                    coeffs = sys.monomials().iter().map(|m| g.coeff(*m)).collect();
                }
                let poly = Poly3::from_terms(
                    &f,
                    sys.monomials().iter().copied().zip(coeffs.iter().copied()),
                );
                let applied_zero = sys.rows().iter().all(|row| {
                    row.iter()
                        .zip(&coeffs)
                        .fold(Elem::ZERO, |acc, (&r, &c)| f.add(acc, f.mul(r, c)))
                        .is_zero()
                });
                let oracle_zero = poly.local_expansion(&p).keys().all(|(a, b)| a + b >= mult);
                assert_eq!(applied_zero, oracle_zero, "q={q} d={d} m={mult}");
            }
        }
    }

    #[test]
    fn monotone_in_multiplicities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = all_points_blowup(3).unwrap();
        for _ in 0..20 {
            let a = rng.random_range(0..8);
            let m: Vec<i64> = (0..13).map(|_| rng.random_range(0..3)).collect();
            let d = DivClass::from_ints(s.surface(), a, &m).unwrap();
            let base = h0(s.surface(), &d).unwrap();
            let i = rng.random_range(0..13);
            let mut m2 = m.clone();
            m2[i] += 1;
            let raised = h0(
                s.surface(),
                &DivClass::from_ints(s.surface(), a, &m2).unwrap(),
            )
            .unwrap();
            assert!(raised <= base);
            assert!(base - raised <= m2[i] as u64);
        }
    }
}
