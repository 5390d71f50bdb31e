use kvcheck::gf::{field_of_order, Elem, Field};
use kvcheck::kmk::Projectivity;
use kvcheck::lattice::{DivClass, SurfaceDesc};
use kvcheck::linsys::{cohomology, h0, monomials};
use kvcheck::plane::{plane_points, ProjPoint};
use kvcheck::poly::Poly3;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_projectivity(f: &Field, rng: &mut ChaCha8Rng) -> Projectivity {
    loop {
        let m = [0; 3].map(|_| [0; 3].map(|_| f.random(rng)));
        if let Ok(p) = Projectivity::new(f, m) {
            return p;
        }
    }
}

#[test]
fn h0_is_invariant_under_projectivities() {
    let f = field_of_order(9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let all = plane_points(&f);
    for _ in 0..12 {
        let n = rng.random_range(3..=9);
        let pts: Vec<ProjPoint> = all.choose_multiple(&mut rng, n).cloned().collect();
        let g = random_projectivity(&f, &mut rng);
        let moved: Vec<ProjPoint> = pts.iter().map(|p| g.apply(p)).collect();
        let s1 = SurfaceDesc::new(&f, pts).unwrap();
        let s2 = SurfaceDesc::new(&f, moved).unwrap();
        let a = rng.random_range(1..=6);
        let m: Vec<i64> = (0..n).map(|_| rng.random_range(0..=2)).collect();
        let d1 = DivClass::from_ints(&s1, a, &m).unwrap();
        let d2 = DivClass::from_ints(&s2, a, &m).unwrap();
        assert_eq!(
            cohomology(&s1, &d1).unwrap(),
            cohomology(&s2, &d2).unwrap(),
            "a={a}, m={m:?}"
        );
    }
}

/// Counts every polynomial of the given degree over a small field that
/// vanishes at all the points, and returns log_q of that count.
fn brute_force_h0(f: &Field, degree: u32, points: &[ProjPoint]) -> u64 {
    let mons = monomials(degree);
    let els: Vec<Elem> = f.elements().collect();
    let q = els.len();
    let total = q.pow(mons.len() as u32);
    let mut count = 0usize;
    for mut code in 0..total {
        let terms: Vec<_> = mons
            .iter()
            .map(|&mo| {
                let c = els[code % q];
                code /= q;
                (mo, c)
            })
            .collect();
        let poly = Poly3::from_terms(f, terms);
        if points.iter().all(|p| poly.eval(&p.coords()).is_zero()) {
            count += 1;
        }
    }
    let mut h = 0;
    let mut c = count;
    while c > 1 {
        assert_eq!(c % q, 0, "solution count is a power of q");
        c /= q;
        h += 1;
    }
    h
}

#[test]
fn h0_matches_brute_force_over_small_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (order, max_degree) in [(2u64, 3u32), (3, 2), (4, 2)] {
        let f = field_of_order(order).unwrap();
        let all = plane_points(&f);
        for degree in 1..=max_degree {
            for _ in 0..4 {
                let n = rng.random_range(1..=all.len().min(8));
                let pts: Vec<ProjPoint> = all.choose_multiple(&mut rng, n).cloned().collect();
                let s = SurfaceDesc::new(&f, pts.clone()).unwrap();
                let d = DivClass::from_ints(&s, degree as i64, &vec![1; n]).unwrap();
                assert_eq!(
                    h0(&s, &d).unwrap(),
                    brute_force_h0(&f, degree, &pts),
                    "GF({order}), degree {degree}, {n} points"
                );
            }
        }
    }
}
