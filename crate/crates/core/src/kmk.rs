//! Projectivities of the plane, strange conics in characteristic 2, and the
//! Picard lattice of the degree-3 Keel–McKernan surface.
//!
//! The surface is the blowup of the plane at `Q` and at the three rational
//! points `Q_1, Q_2, Q_3` of a conic whose tangent lines all pass through
//! `Q`, followed by a second blowup at the tangent direction over each
//! `Q_i`. Infinitely near points only enter through [`KmClass`] arithmetic.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lattice::{all_points_blowup, DivClass};
use crate::plane::{collinear, det3, dot, join, plane_points, ProjLine, ProjPoint};
use crate::poly::Poly3;

pub type Matrix3 = [[Elem; 3]; 3];

fn mat_mul(f: &Field, a: &Matrix3, b: &Matrix3) -> Matrix3 {
    let mut out = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(Elem::ZERO, |acc, k| f.add(acc, f.mul(a[i][k], b[k][j])));
        }
    }
    out
}

fn mat_vec(f: &Field, a: &Matrix3, v: &[Elem; 3]) -> [Elem; 3] {
    [0, 1, 2].map(|i| dot(f, &a[i], v))
}

fn det(f: &Field, a: &Matrix3) -> Elem {
    det3(f, &a[0], &a[1], &a[2])
}

fn inverse(f: &Field, a: &Matrix3) -> Result<Matrix3> {
    let d_inv = f.inv(det(f, a))?;
    let mut out = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // cofactor of entry (j, i)
            let r: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let minor = f.sub(
                f.mul(a[r[0]][c[0]], a[r[1]][c[1]]),
                f.mul(a[r[0]][c[1]], a[r[1]][c[0]]),
            );
            let signed = if (i + j) % 2 == 0 {
                minor
            } else {
                f.neg(minor)
            };
            out[i][j] = f.mul(signed, d_inv);
        }
    }
    Ok(out)
}

/// An invertible 3x3 matrix acting on points as column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectivity {
    field: Field,
    matrix: Matrix3,
}

impl Projectivity {
    pub fn new(field: &Field, matrix: Matrix3) -> Result<Projectivity> {
        if det(field, &matrix).is_zero() {
            return Err(Error::Precondition("singular matrix".into()));
        }
        Ok(Projectivity {
            field: field.clone(),
            matrix,
        })
    }

    pub fn identity(field: &Field) -> Projectivity {
        let mut m = [[Elem::ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Elem::ONE;
        }
        Projectivity {
            field: field.clone(),
            matrix: m,
        }
    }

    pub fn matrix(&self) -> &Matrix3 {
        &self.matrix
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(&self.field, mat_vec(&self.field, &self.matrix, &p.coords()))
            .expect("invertible")
    }

    pub fn compose(&self, inner: &Projectivity) -> Projectivity {
        Projectivity {
            field: self.field.clone(),
            matrix: mat_mul(&self.field, &self.matrix, &inner.matrix),
        }
    }

    pub fn inverse(&self) -> Projectivity {
        let m = inverse(&self.field, &self.matrix).expect("invertible");
        Projectivity {
            field: self.field.clone(),
            matrix: m,
        }
    }

    /// The equation of the image curve: `F(sigma^-1 x)`.
    pub fn push_curve(&self, f: &Poly3) -> Poly3 {
        f.substitute_linear(&self.inverse().matrix)
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&c| self.field.coeffs(c)).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

fn check_frame(field: &Field, pts: &[ProjPoint; 4]) -> Result<()> {
    for a in 0..4 {
        for b in a + 1..4 {
            for c in b + 1..4 {
                if collinear(field, &pts[a], &pts[b], &pts[c]) {
                    return Err(Error::Collinear);
                }
            }
        }
    }
    Ok(())
}

/// The projectivity taking `e_1, e_2, e_3, [1:1:1]` to the given frame:
/// columns `Q_1, Q_2, Q_3` rescaled by `[d:e:f] = M^-1 Q_4`.
fn from_standard_frame(field: &Field, q: &[ProjPoint; 4]) -> Result<Projectivity> {
    let cols = [q[0].coords(), q[1].coords(), q[2].coords()];
    let m: Matrix3 = [0, 1, 2].map(|i| [cols[0][i], cols[1][i], cols[2][i]]);
    let scale = mat_vec(field, &inverse(field, &m)?, &q[3].coords());
    let scaled: Matrix3 = [0, 1, 2].map(|i| [0, 1, 2].map(|j| field.mul(m[i][j], scale[j])));
    Projectivity::new(field, scaled)
}

/// The unique projectivity with `sigma(P_i) = Q_i`; both quadruples must
/// have no three points collinear.
pub fn find_projectivity(
    field: &Field,
    p: &[ProjPoint; 4],
    q: &[ProjPoint; 4],
) -> Result<Projectivity> {
    check_frame(field, p)?;
    check_frame(field, q)?;
    let to_p = from_standard_frame(field, p)?;
    let to_q = from_standard_frame(field, q)?;
    Ok(to_q.compose(&to_p.inverse()))
}

/// `a x^2 + b y^2 + c z^2 + d xy + e xz + f yz`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Conic(pub [Elem; 6]);

impl Conic {
    pub fn poly(&self, field: &Field) -> Poly3 {
        let mons = [
            [2, 0, 0],
            [0, 2, 0],
            [0, 0, 2],
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
        ];
        Poly3::from_terms(field, mons.into_iter().zip(self.0))
    }

    pub fn from_poly(field: &Field, f: &Poly3) -> Result<Conic> {
        if !f.is_homogeneous() || f.degree() != Some(2) {
            return Err(Error::Precondition("not a plane conic".into()));
        }
        let mons = [
            [2, 0, 0],
            [0, 2, 0],
            [0, 0, 2],
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
        ];
        let c = mons.map(|m| f.coeff(m));
        let lead = *c.iter().find(|x| !x.is_zero()).expect("nonzero conic");
        let inv = field.inv(lead)?;
        Ok(Conic(c.map(|x| field.mul(x, inv))))
    }

    /// Half the determinant of the symmetric matrix of the form, which is
    /// defined over every characteristic; nonzero iff the conic is smooth.
    pub fn half_discriminant(&self, f: &Field) -> Elem {
        let [a, b, c, d, e, g] = self.0;
        let m = |x: Elem, y: Elem| f.mul(x, y);
        let four_abc = m(f.from_int(4), m(a, m(b, c)));
        let plus = f.add(four_abc, m(d, m(e, g)));
        let minus = f.add(f.add(m(a, m(g, g)), m(b, m(e, e))), m(c, m(d, d)));
        f.sub(plus, minus)
    }

    pub fn is_smooth(&self, f: &Field) -> bool {
        !self.half_discriminant(f).is_zero()
    }

    pub fn contains(&self, f: &Field, p: &ProjPoint) -> bool {
        self.poly(f).eval(&p.coords()).is_zero()
    }

    /// Tangent line at a point of the conic, when the gradient is nonzero.
    pub fn tangent(&self, f: &Field, p: &ProjPoint) -> Option<ProjLine> {
        ProjLine::new(f, self.poly(f).gradient(&p.coords())).ok()
    }

    pub fn to_json(&self, f: &Field) -> Value {
        json!(self.0.iter().map(|&c| f.coeffs(c)).collect::<Vec<_>>())
    }
}

/// `xy + z^2`.
pub fn standard_conic() -> Conic {
    Conic([
        Elem::ZERO,
        Elem::ZERO,
        Elem::ONE,
        Elem::ONE,
        Elem::ZERO,
        Elem::ZERO,
    ])
}

/// `Q = [0:0:1]` and `Q_1, Q_2, Q_3 = [1:0:0], [0:1:0], [1:1:1]`.
pub fn standard_frame(field: &Field) -> [ProjPoint; 4] {
    [[0, 0, 1], [1, 0, 0], [0, 1, 0], [1, 1, 1]]
        .map(|c| ProjPoint::from_ints(field, c).expect("nonzero"))
}

/// Normalized coefficient vectors of all conics over `field`.
fn all_conics(field: &Field) -> impl Iterator<Item = Conic> + '_ {
    let n = field.order() as u32;
    (0..6).flat_map(move |lead| {
        let free = 5 - lead;
        (0..n.pow(free as u32)).map(move |mut idx| {
            let mut c = [Elem::ZERO; 6];
            c[lead] = Elem::ONE;
            for slot in c.iter_mut().skip(lead + 1) {
                *slot = field.elem(idx % n);
                idx /= n;
            }
            Conic(c)
        })
    })
}

/// All smooth conics through `P_1, P_2, P_3` whose tangent line at each
/// `P_i` passes through `Q`, by exhaustive search over the conics of the plane.
pub fn strange_conics(field: &Field, p: [&ProjPoint; 3], q: &ProjPoint) -> Result<Vec<Conic>> {
    if field.characteristic() != 2 {
        return Err(Error::RequiresChar2);
    }
    let frame = [*p[0], *p[1], *p[2], *q];
    let distinct: BTreeSet<&ProjPoint> = frame.iter().collect();
    if distinct.len() != 4 {
        return Err(Error::RepeatedPoint);
    }
    check_frame(field, &frame)?;
    Ok(all_conics(field)
        .filter(|c| {
            c.is_smooth(field)
                && p.iter().all(|pi| {
                    c.contains(field, pi)
                        && c.tangent(field, pi).is_some_and(|t| t.contains(field, q))
                })
        })
        .collect())
}

/// Rational points of a conic, in canonical point order.
pub fn conic_rational_points(c: &Conic, field: &Field) -> Vec<ProjPoint> {
    plane_points(field)
        .into_iter()
        .filter(|p| c.contains(field, p))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub field_order: u64,
    pub triples: usize,
    pub projectivities_found: usize,
    pub conic_preserved: usize,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.triples > 0
            && self.projectivities_found == self.triples
            && self.conic_preserved == self.triples
    }
}

/// For every ordered triple of distinct rational points of `xy + z^2`, the
/// projectivity fixing `Q` and moving the standard triple onto it carries
/// the conic to itself.
pub fn step_independent_check(field: &Field) -> Result<IndependenceReport> {
    let frame = standard_frame(field);
    let conic = standard_conic();
    let cpoly = conic.poly(field);
    let pts = conic_rational_points(&conic, field);
    let mut rep = IndependenceReport {
        field_order: field.order(),
        triples: 0,
        projectivities_found: 0,
        conic_preserved: 0,
    };
    for a in 0..pts.len() {
        for b in 0..pts.len() {
            for c in 0..pts.len() {
                if a == b || b == c || a == c {
                    continue;
                }
                rep.triples += 1;
                let target = [frame[0], pts[a], pts[b], pts[c]];
                let Ok(sigma) = find_projectivity(field, &frame, &target) else {
                    continue;
                };
                rep.projectivities_found += 1;
                if sigma.push_curve(&cpoly).proportional(&cpoly) {
                    rep.conic_preserved += 1;
                }
            }
        }
    }
    Ok(rep)
}

/// A class `a H + c_Q eps_Q + c_1 eps_1 + c_1' eps_1' + ...` in the basis
/// `H, eps_Q, eps_1, eps_1', eps_2, eps_2', eps_3, eps_3'` of total
/// transforms, with form `diag(1, -1, ..., -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KmClass(pub [i64; 8]);

pub const KM_H: usize = 0;
pub const KM_Q: usize = 1;

/// Index of `eps_i` (`prime = false`) or `eps_i'` for `i` in `1..=3`.
pub fn km_eps(i: usize, prime: bool) -> usize {
    2 * i + prime as usize
}

impl KmClass {
    pub fn basis(k: usize) -> KmClass {
        let mut v = [0; 8];
        v[k] = 1;
        KmClass(v)
    }

    pub fn dot(&self, o: &KmClass) -> i64 {
        self.0[0] * o.0[0] - (1..8).map(|k| self.0[k] * o.0[k]).sum::<i64>()
    }

    pub fn add(&self, o: &KmClass) -> KmClass {
        KmClass(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    pub fn scale(&self, c: i64) -> KmClass {
        KmClass(self.0.map(|x| c * x))
    }

    pub fn sub(&self, o: &KmClass) -> KmClass {
        self.add(&o.scale(-1))
    }
}

/// The rank-8 lattice with its marked classes.
#[derive(Clone, Debug)]
pub struct KmLattice {
    pub canonical: KmClass,
    /// `eps_Q, eps_1', eps_2', eps_3', H - eps_1 - eps_2, H - eps_1 - eps_3, H - eps_2 - eps_3`.
    pub minus_one: Vec<KmClass>,
    /// `eps_i - eps_i'`, `H - eps_Q - eps_i - eps_i'`, `2H - sum (eps_i + eps_i')`.
    pub minus_two: Vec<KmClass>,
}

pub fn km_lattice() -> KmLattice {
    let b = KmClass::basis;
    let h = b(KM_H);
    let canonical = KmClass([-3, 1, 1, 1, 1, 1, 1, 1]);
    let mut minus_one = vec![b(KM_Q)];
    minus_one.extend((1..=3).map(|i| b(km_eps(i, true))));
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        minus_one.push(h.sub(&b(km_eps(i, false))).sub(&b(km_eps(j, false))));
    }
    let mut minus_two: Vec<KmClass> = (1..=3)
        .map(|i| b(km_eps(i, false)).sub(&b(km_eps(i, true))))
        .collect();
    minus_two.extend((1..=3).map(|i| {
        h.sub(&b(KM_Q))
            .sub(&b(km_eps(i, false)))
            .sub(&b(km_eps(i, true)))
    }));
    let all_eps = (1..=3).fold(KmClass([0; 8]), |acc, i| {
        acc.add(&b(km_eps(i, false))).add(&b(km_eps(i, true)))
    });
    minus_two.push(h.scale(2).sub(&all_eps));
    KmLattice {
        canonical,
        minus_one,
        minus_two,
    }
}

/// Coordinates `(a, e_1, ..., e_n)` of `a H + sum e_i E_i` for a class on the all-points blowup.
fn blowup_vector(d: &DivClass) -> Vec<i64> {
    let (a, m) = d.int_coeffs().expect("integral class");
    std::iter::once(a)
        .chain(m.into_iter().map(|x| -x))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KmLatticeReport {
    pub canonical_square: i64,
    /// `(C^2, K.C)` for each of the seven `(-1)`-classes.
    pub minus_one_numbers: Vec<(i64, i64)>,
    pub minus_one_disjoint: bool,
    pub minus_two_numbers: Vec<(i64, i64)>,
    /// Each joining line `Q_i Q_j` misses `Q` and differs from the conic's
    /// tangent lines at `Q_i` and `Q_j`, over `F_2`.
    pub joining_lines_transversal: bool,
    pub tangent_lines_through_q: bool,
    /// `(sum c_i - K) / 3`, the pullback of a line after contraction.
    pub contracted_hyperplane: Option<[i64; 8]>,
    pub contracted_rank_one: bool,
    pub contracted_canonical_square: Option<i64>,
    /// Bijections `c_i -> E_{pi(i)}` whose extension also carries the
    /// `(-2)`-classes onto the strict transforms of the lines.
    pub compatible_bijections: usize,
    pub isometry: Option<Vec<usize>>,
    pub isometry_preserves_form: bool,
    pub isometry_fixes_canonical: bool,
}

impl KmLatticeReport {
    pub fn passed(&self) -> bool {
        self.canonical_square == 2
            && self.minus_one_numbers.iter().all(|&x| x == (-1, -1))
            && self.minus_one_disjoint
            && self.minus_two_numbers.iter().all(|&x| x == (-2, 0))
            && self.joining_lines_transversal
            && self.tangent_lines_through_q
            && self.contracted_rank_one
            && self.contracted_canonical_square == Some(9)
            && self.isometry.is_some()
            && self.isometry_preserves_form
            && self.isometry_fixes_canonical
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Lattice-level identification of the Keel–McKernan surface with the
/// blowup of PG(2,2) at all seven points.
pub fn km_lattice_check() -> Result<KmLatticeReport> {
    let lat = km_lattice();
    let k = lat.canonical;
    let c = &lat.minus_one;
    let minus_one_numbers = c.iter().map(|x| (x.dot(x), k.dot(x))).collect();
    let minus_one_disjoint = (0..7).all(|i| (0..7).all(|j| i == j || c[i].dot(&c[j]) == 0));
    let minus_two_numbers = lat.minus_two.iter().map(|x| (x.dot(x), k.dot(x))).collect();

    let gf2 = crate::gf::field_of_order(2)?;
    let frame = standard_frame(&gf2);
    let conic = standard_conic();
    let qpt = &frame[0];
    let tangent_lines_through_q = frame[1..].iter().all(|p| {
        conic
            .tangent(&gf2, p)
            .is_some_and(|t| t.contains(&gf2, qpt))
    });
    let joining_lines_transversal = [(1, 2), (1, 3), (2, 3)].iter().all(|&(i, j)| {
        let l = join(&gf2, &frame[i], &frame[j]).expect("distinct");
        !l.contains(&gf2, qpt)
            && conic.tangent(&gf2, &frame[i]).is_some_and(|t| t != l)
            && conic.tangent(&gf2, &frame[j]).is_some_and(|t| t != l)
    });

    let sum_c = c.iter().fold(KmClass([0; 8]), |acc, x| acc.add(x));
    let diff = sum_c.sub(&k);
    let contracted = diff
        .0
        .iter()
        .all(|x| x % 3 == 0)
        .then(|| KmClass(diff.0.map(|x| x / 3)));
    let contracted_rank_one =
        contracted.is_some_and(|h| h.dot(&h) == 1 && c.iter().all(|x| x.dot(&h) == 0));
    let contracted_canonical_square = contracted.map(|h| h.scale(-3).dot(&h.scale(-3)));

    let blowup = all_points_blowup(2)?;
    let classes = blowup.classes();
    let e: Vec<Vec<i64>> = classes.e.iter().map(blowup_vector).collect();
    let lines: BTreeSet<Vec<i64>> = classes.lines.iter().map(blowup_vector).collect();
    let image = |v: &KmClass, perm: &[usize], h: &KmClass| -> Vec<i64> {
        let mut out = vec![0; 8];
        out[0] = v.dot(h);
        for (i, ci) in c.iter().enumerate() {
            let coeff = -v.dot(ci);
            for (slot, x) in out.iter_mut().zip(&e[perm[i]]) {
                *slot += coeff * x;
            }
        }
        out
    };
    let mut compatible_bijections = 0;
    let mut isometry = None;
    let mut isometry_preserves_form = false;
    let mut isometry_fixes_canonical = false;
    if let (Some(h), true) = (contracted, contracted_rank_one) {
        for perm in permutations(7) {
            let imgs: BTreeSet<Vec<i64>> =
                lat.minus_two.iter().map(|v| image(v, &perm, &h)).collect();
            if imgs == lines {
                compatible_bijections += 1;
                if isometry.is_none() {
                    isometry = Some(perm);
                }
            }
        }
        if let Some(perm) = &isometry {
            let form =
                |v: &[i64], w: &[i64]| v[0] * w[0] - (1..8).map(|i| v[i] * w[i]).sum::<i64>();
            let basis: Vec<KmClass> = (0..8).map(KmClass::basis).collect();
            let imgs: Vec<Vec<i64>> = basis.iter().map(|b| image(b, perm, &h)).collect();
            isometry_preserves_form =
                (0..8).all(|i| (0..8).all(|j| form(&imgs[i], &imgs[j]) == basis[i].dot(&basis[j])));
            isometry_fixes_canonical = image(&k, perm, &h) == blowup_vector(&classes.k);
        }
    }
    Ok(KmLatticeReport {
        canonical_square: k.dot(&k),
        minus_one_numbers,
        minus_one_disjoint,
        minus_two_numbers,
        joining_lines_transversal,
        tangent_lines_through_q,
        contracted_hyperplane: contracted.map(|h| h.0),
        contracted_rank_one,
        contracted_canonical_square,
        compatible_bijections,
        isometry,
        isometry_preserves_form,
        isometry_fixes_canonical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_frame(f: &Field, rng: &mut ChaCha8Rng) -> [ProjPoint; 4] {
        let pts = plane_points(f);
        loop {
            let pick: Vec<ProjPoint> = (0..4)
                .map(|_| pts[rand::Rng::random_range(rng, 0..pts.len())])
                .collect();
            let frame: [ProjPoint; 4] = pick.try_into().unwrap();
            if check_frame(f, &frame).is_ok() {
                return frame;
            }
        }
    }

    #[test]
    fn identity_and_f2_frame() {
        let f = field_of_order(2).unwrap();
        let std = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
            .map(|c| ProjPoint::from_ints(&f, c).unwrap());
        assert_eq!(
            find_projectivity(&f, &std, &std).unwrap().matrix(),
            Projectivity::identity(&f).matrix()
        );
        let target = standard_frame(&f);
        let s = find_projectivity(&f, &std, &target).unwrap();
        for i in 0..4 {
            assert_eq!(s.apply(&std[i]), target[i]);
        }
    }

    #[test]
    fn random_frames_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2, 4, 9] {
            let f = field_of_order(q).unwrap();
            for _ in 0..200 {
                let p = random_frame(&f, &mut rng);
                let t = random_frame(&f, &mut rng);
                let s = find_projectivity(&f, &p, &t).unwrap();
                for i in 0..4 {
                    assert_eq!(s.apply(&p[i]), t[i]);
                }
                let back = s.inverse().compose(&s);
                assert_eq!(back.matrix(), Projectivity::identity(&f).matrix());
            }
        }
    }

    #[test]
    fn collinear_frames_are_refused() {
        let f = field_of_order(5).unwrap();
        let bad = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]
            .map(|c| ProjPoint::from_ints(&f, c).unwrap());
        assert_eq!(find_projectivity(&f, &bad, &bad), Err(Error::Collinear));
    }

    #[test]
    fn strange_conic_is_unique() {
        let f2 = field_of_order(2).unwrap();
        let fr = standard_frame(&f2);
        let cs = strange_conics(&f2, [&fr[1], &fr[2], &fr[3]], &fr[0]).unwrap();
        assert_eq!(cs, vec![standard_conic()]);
        let f4 = field_of_order(4).unwrap();
        assert_eq!(all_conics(&f4).count(), 1365);
        let fr = standard_frame(&f4);
        assert_eq!(
            strange_conics(&f4, [&fr[1], &fr[2], &fr[3]], &fr[0]).unwrap(),
            vec![standard_conic()]
        );
        let line = [[1, 0, 0], [0, 1, 0], [1, 1, 0]].map(|c| ProjPoint::from_ints(&f4, c).unwrap());
        assert_eq!(
            strange_conics(&f4, [&line[0], &line[1], &line[2]], &fr[0]),
            Err(Error::Collinear)
        );
        let f3 = field_of_order(3).unwrap();
        let fr3 = standard_frame(&f3);
        assert_eq!(
            strange_conics(&f3, [&fr3[1], &fr3[2], &fr3[3]], &fr3[0]),
            Err(Error::RequiresChar2)
        );
    }

    #[test]
    fn strange_conics_exhaustive_over_gf2() {
        let f = field_of_order(2).unwrap();
        let pts = plane_points(&f);
        let mut tested = 0;
        for a in 0..7 {
            for b in a + 1..7 {
                for c in b + 1..7 {
                    for q in 0..7 {
                        let frame = [pts[a], pts[b], pts[c], pts[q]];
                        if [a, b, c].contains(&q) || check_frame(&f, &frame).is_err() {
                            continue;
                        }
                        tested += 1;
                        assert_eq!(
                            strange_conics(&f, [&pts[a], &pts[b], &pts[c]], &pts[q])
                                .unwrap()
                                .len(),
                            1
                        );
                    }
                }
            }
        }
        // seven 4-arcs (complements of lines), four choices of Q in each
        assert_eq!(tested, 28);
    }

    #[test]
    fn rational_points_of_conics() {
        let f2 = field_of_order(2).unwrap();
        let pts = conic_rational_points(&standard_conic(), &f2);
        let expect: Vec<ProjPoint> = [[0, 1, 0], [1, 0, 0], [1, 1, 1]]
            .iter()
            .map(|&c| ProjPoint::from_ints(&f2, c).unwrap())
            .collect();
        assert_eq!(pts, expect);
        let f4 = field_of_order(4).unwrap();
        assert_eq!(conic_rational_points(&standard_conic(), &f4).len(), 5);
        let xy = Conic([
            Elem::ZERO,
            Elem::ZERO,
            Elem::ZERO,
            Elem::ONE,
            Elem::ZERO,
            Elem::ZERO,
        ]);
        assert!(!xy.is_smooth(&f2));
        assert_eq!(conic_rational_points(&xy, &f2).len(), 5);
        assert!(standard_conic().is_smooth(&f4));
    }

    #[test]
    fn independence_of_triples() {
        for q in [2, 4] {
            let r = step_independent_check(&field_of_order(q).unwrap()).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn lattice_identification() {
        let lat = km_lattice();
        assert_eq!(lat.canonical.dot(&lat.canonical), 2);
        let h12 = &lat.minus_one[4];
        assert_eq!((h12.dot(h12), lat.canonical.dot(h12)), (-1, -1));
        let r = km_lattice_check().unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.contracted_hyperplane, Some([2, 0, -1, 0, -1, 0, -1, 0]));
        assert_eq!(r.contracted_canonical_square, Some(9));
        assert!(r.compatible_bijections > 0);
    }
}
