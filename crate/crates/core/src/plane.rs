//! The projective plane PG(2, q): points, lines and their incidence.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Homogeneous coordinates normalized so the leftmost nonzero entry is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(pub(crate) [Elem; 3]);

/// A line `a x + b y + c z = 0`, its coefficients normalized like a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjLine(pub(crate) [Elem; 3]);

fn normalize_triple(field: &Field, v: [Elem; 3]) -> Result<[Elem; 3]> {
    let lead = v
        .iter()
        .copied()
        .find(|c| !c.is_zero())
        .ok_or(Error::ZeroVector)?;
    let s = field.inv(lead)?;
    Ok(v.map(|c| field.mul(s, c)))
}

impl ProjPoint {
    pub fn new(field: &Field, coords: [Elem; 3]) -> Result<ProjPoint> {
        Ok(ProjPoint(normalize_triple(field, coords)?))
    }

    /// Builds a point from small integers in the prime subfield.
    pub fn from_ints(field: &Field, coords: [i64; 3]) -> Result<ProjPoint> {
        ProjPoint::new(field, coords.map(|c| field.from_int(c)))
    }

    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }

    /// Index of the leftmost nonzero coordinate, which equals 1.
    pub fn chart(&self) -> usize {
        self.0
            .iter()
            .position(|c| !c.is_zero())
            .expect("normalized point")
    }

    pub fn to_json(&self, field: &Field) -> Value {
        json!(self.0.iter().map(|&c| field.coeffs(c)).collect::<Vec<_>>())
    }
}

impl ProjLine {
    pub fn new(field: &Field, coeffs: [Elem; 3]) -> Result<ProjLine> {
        Ok(ProjLine(normalize_triple(field, coeffs)?))
    }

    pub fn coeffs(&self) -> [Elem; 3] {
        self.0
    }

    pub fn contains(&self, field: &Field, p: &ProjPoint) -> bool {
        dot(field, &self.0, &p.0).is_zero()
    }

    pub fn to_json(&self, field: &Field) -> Value {
        json!(self.0.iter().map(|&c| field.coeffs(c)).collect::<Vec<_>>())
    }
}

pub(crate) fn dot(field: &Field, a: &[Elem; 3], b: &[Elem; 3]) -> Elem {
    (0..3).fold(Elem::ZERO, |acc, i| field.add(acc, field.mul(a[i], b[i])))
}

pub(crate) fn cross(field: &Field, a: &[Elem; 3], b: &[Elem; 3]) -> [Elem; 3] {
    let m = |i: usize, j: usize| field.sub(field.mul(a[i], b[j]), field.mul(a[j], b[i]));
    [m(1, 2), m(2, 0), m(0, 1)]
}

/// The line through two distinct points.
pub fn join(field: &Field, p: &ProjPoint, r: &ProjPoint) -> Result<ProjLine> {
    ProjLine::new(field, cross(field, &p.0, &r.0))
}

/// The intersection point of two distinct lines.
pub fn meet(field: &Field, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    ProjPoint::new(field, cross(field, &l.0, &m.0))
}

/// Determinant of the matrix whose rows are the three points.
pub fn det3(field: &Field, a: &[Elem; 3], b: &[Elem; 3], c: &[Elem; 3]) -> Elem {
    dot(field, a, &cross(field, b, c))
}

pub fn collinear(field: &Field, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    det3(field, &a.0, &b.0, &c.0).is_zero()
}

/// All normalized triples in canonical order: `[0:0:1]`, then `[0:1:*]`,
/// then `[1:*:*]`, each block sorted by the element order.
fn normalized_triples(field: &Field) -> Vec<[Elem; 3]> {
    let q = field.order() as u32;
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    out.push([Elem::ZERO, Elem::ZERO, Elem::ONE]);
    for z in 0..q {
        out.push([Elem::ZERO, Elem::ONE, field.elem(z)]);
    }
    for y in 0..q {
        for z in 0..q {
            out.push([Elem::ONE, field.elem(y), field.elem(z)]);
        }
    }
    out
}

/// All rational points of the plane over `field`, canonically ordered.
pub fn plane_points(field: &Field) -> Vec<ProjPoint> {
    normalized_triples(field)
        .into_iter()
        .map(ProjPoint)
        .collect()
}

/// Points and lines of PG(2, q) with the incidence table `on[point][line]`.
#[derive(Clone, Debug)]
pub struct Incidence {
    field: Field,
    points: Vec<ProjPoint>,
    lines: Vec<ProjLine>,
    on: Vec<Vec<bool>>,
    index: HashMap<ProjPoint, usize>,
}

pub fn enumerate_plane(field: &Field) -> Incidence {
    let points = plane_points(field);
    let lines: Vec<ProjLine> = normalized_triples(field)
        .into_iter()
        .map(ProjLine)
        .collect();
    let on = points
        .iter()
        .map(|p| lines.iter().map(|l| l.contains(field, p)).collect())
        .collect();
    let index = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    Incidence {
        field: field.clone(),
        points,
        lines,
        on,
        index,
    }
}

impl Incidence {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn on(&self, point: usize, line: usize) -> bool {
        self.on[point][line]
    }

    pub fn point_index(&self, p: &ProjPoint) -> Result<usize> {
        self.index.get(p).copied().ok_or(Error::PointNotInPlane)
    }

    pub fn line_index(&self, l: &ProjLine) -> Option<usize> {
        self.lines.binary_search(l).ok()
    }

    /// Indices of the points on line `j`, ascending.
    pub fn points_on(&self, line: usize) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.on[i][line])
            .collect()
    }

    /// Indices of the lines through `p`, ascending.
    pub fn lines_through(&self, p: &ProjPoint) -> Result<Vec<usize>> {
        let i = self.point_index(p)?;
        Ok(self.lines_through_index(i))
    }

    pub fn lines_through_index(&self, point: usize) -> Vec<usize> {
        (0..self.lines.len())
            .filter(|&j| self.on[point][j])
            .collect()
    }

    /// Whether the lines through `p` cover every point of the plane.
    pub fn cover_check(&self, p: &ProjPoint) -> Result<bool> {
        let lines = self.lines_through(p)?;
        let mut covered = vec![false; self.points.len()];
        for &j in &lines {
            for i in self.points_on(j) {
                covered[i] = true;
            }
        }
        Ok(covered.into_iter().all(|c| c))
    }

    /// Smallest-index line through every point of `through` and none of `avoid`.
    pub fn line_avoiding(&self, avoid: &[usize], through: &[usize]) -> Option<usize> {
        (0..self.lines.len()).find(|&j| {
            through.iter().all(|&i| self.on[i][j]) && avoid.iter().all(|&i| !self.on[i][j])
        })
    }

    /// Checks the axioms of a projective plane of order q. Returns the first
    /// violated axiom as an error message.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let q = self.q() as usize;
        let n = q * q + q + 1;
        if self.points.len() != n || self.lines.len() != n {
            return Err(format!("expected {n} points and lines"));
        }
        for j in 0..n {
            let c = self.points_on(j).len();
            if c != q + 1 {
                return Err(format!("line {j} has {c} points"));
            }
        }
        for i in 0..n {
            let c = self.lines_through_index(i).len();
            if c != q + 1 {
                return Err(format!("point {i} is on {c} lines"));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let common_lines = (0..n).filter(|&j| self.on[a][j] && self.on[b][j]).count();
                if common_lines != 1 {
                    return Err(format!("points {a},{b} share {common_lines} lines"));
                }
                let common_points = (0..n).filter(|&i| self.on[i][a] && self.on[i][b]).count();
                if common_points != 1 {
                    return Err(format!("lines {a},{b} share {common_points} points"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q(),
            "points": self.points.iter().map(|p| p.to_json(&self.field)).collect::<Vec<_>>(),
            "lines": self.lines.iter().map(|l| l.to_json(&self.field)).collect::<Vec<_>>(),
            "on": self.on,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_of_order, make_field};

    #[test]
    fn plane_sizes() {
        for (q, n, k) in [(2, 7, 3), (3, 13, 4), (4, 21, 5)] {
            let inc = enumerate_plane(&field_of_order(q).unwrap());
            assert_eq!(inc.points().len(), n);
            assert_eq!(inc.lines().len(), n);
            for j in 0..n {
                assert_eq!(inc.points_on(j).len(), k);
            }
        }
    }

    #[test]
    fn lines_through_origin_point_q2() {
        let f = make_field(2, 1).unwrap();
        let inc = enumerate_plane(&f);
        let p = ProjPoint::from_ints(&f, [0, 0, 1]).unwrap();
        let got = inc.lines_through(&p).unwrap();
        // x = 0, y = 0, x + y = 0 by direct evaluation of all 7 forms
        let expected: Vec<usize> = inc
            .lines()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.coeffs()[2].is_zero())
            .map(|(j, _)| j)
            .collect();
        assert_eq!(got, expected);
        let forms: Vec<[u32; 3]> = got
            .iter()
            .map(|&j| inc.lines()[j].coeffs().map(|c| c.index()))
            .collect();
        assert_eq!(forms, vec![[0, 1, 0], [1, 0, 0], [1, 1, 0]]);
        for q in [2, 3] {
            let inc = enumerate_plane(&field_of_order(q).unwrap());
            for p in inc.points() {
                assert_eq!(inc.lines_through(p).unwrap().len(), q as usize + 1);
            }
        }
    }

    #[test]
    fn point_outside_plane() {
        let inc = enumerate_plane(&make_field(2, 1).unwrap());
        let gf4 = make_field(2, 2).unwrap();
        let p = ProjPoint::new(&gf4, [Elem::ONE, gf4.generator(), Elem::ZERO]).unwrap();
        assert_eq!(inc.lines_through(&p).unwrap_err(), Error::PointNotInPlane);
    }

    #[test]
    fn lines_cover_the_plane() {
        for q in [2, 3, 5] {
            let inc = enumerate_plane(&field_of_order(q).unwrap());
            for p in inc.points() {
                assert!(inc.cover_check(p).unwrap());
            }
        }
    }

    #[test]
    fn avoiding_lines() {
        let inc = enumerate_plane(&make_field(2, 1).unwrap());
        assert!(inc.line_avoiding(&[5, 6], &[]).is_some());
        assert_eq!(inc.line_avoiding(&[3], &[3]), None);
        for a in 0..7 {
            for b in a + 1..7 {
                let joining = (0..7).find(|&j| inc.on(a, j) && inc.on(b, j)).unwrap();
                let third = inc
                    .points_on(joining)
                    .into_iter()
                    .find(|&i| i != a && i != b)
                    .unwrap();
                assert_eq!(inc.line_avoiding(&[], &[a, b]), Some(joining));
                assert_eq!(inc.line_avoiding(&[third], &[a, b]), None);
            }
        }
    }

    #[test]
    fn axioms_and_determinism() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = field_of_order(q).unwrap();
            let inc = enumerate_plane(&f);
            inc.check_axioms().unwrap();
            let again = enumerate_plane(&f);
            assert_eq!(inc.points(), again.points());
            assert_eq!(inc.lines(), again.lines());
            let mut sorted = inc.points().to_vec();
            sorted.sort();
            assert_eq!(sorted, inc.points());
        }
    }

    #[test]
    fn join_and_meet() {
        let f = field_of_order(5).unwrap();
        let inc = enumerate_plane(&f);
        let (a, b) = (inc.points()[3], inc.points()[17]);
        let l = join(&f, &a, &b).unwrap();
        assert!(l.contains(&f, &a) && l.contains(&f, &b));
        let j = inc.line_index(&l).unwrap();
        let m = inc.lines()[(j + 1) % inc.lines().len()];
        let x = meet(&f, &l, &m).unwrap();
        assert!(l.contains(&f, &x) && m.contains(&f, &x));
    }
}
