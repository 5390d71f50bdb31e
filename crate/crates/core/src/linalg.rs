//! Exact linear algebra: rank over finite fields and rational solving.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::gf::{Elem, Field};
use crate::lattice::Rational;

/// Rows below this count are eliminated serially.
const PAR_THRESHOLD: usize = 64;

/// Rank of a dense matrix over `field`, by row reduction.
pub fn rank(field: &Field, rows: &[Vec<Elem>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    debug_assert!(rows.iter().all(|r| r.len() == width));
    if field.order() == 2 {
        rank_gf2(rows, width)
    } else if field.degree() == 1 {
        rank_prime(field.characteristic() as u32, rows, width)
    } else {
        rank_generic(field, rows, width)
    }
}

fn rank_gf2(rows: &[Vec<Elem>], width: usize) -> usize {
    let words = width.div_ceil(64);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut packed = vec![0u64; words];
            for (c, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    packed[c / 64] |= 1 << (c % 64);
                }
            }
            packed
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][w] & bit != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let (done, rest) = m.split_at_mut(rank + 1);
        let prow = &done[rank];
        for row in rest.iter_mut() {
            if row[w] & bit != 0 {
                for (x, y) in row[w..].iter_mut().zip(&prow[w..]) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_prime(p: u32, rows: &[Vec<Elem>], width: usize) -> usize {
    let p64 = p as u64;
    let mut m: Vec<Vec<u32>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.index()).collect())
        .collect();
    let inv = |a: u32| -> u32 {
        let (mut base, mut n, mut acc) = (a as u64, p64 - 2, 1u64);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base % p64;
            }
            base = base * base % p64;
            n >>= 1;
        }
        acc as u32
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let s = inv(m[rank][col]) as u64;
        for x in m[rank][col..].iter_mut() {
            *x = (*x as u64 * s % p64) as u32;
        }
        let (done, rest) = m.split_at_mut(rank + 1);
        let prow = &done[rank];
        let eliminate = |row: &mut Vec<u32>| {
            let f = row[col] as u64;
            if f != 0 {
                let nf = p64 - f;
                for (x, &y) in row[col..].iter_mut().zip(&prow[col..]) {
                    *x = ((*x as u64 + nf * y as u64) % p64) as u32;
                }
            }
        };
        if rest.len() >= PAR_THRESHOLD {
            rest.par_iter_mut().for_each(eliminate);
        } else {
            rest.iter_mut().for_each(eliminate);
        }
        rank += 1;
    }
    rank
}

fn rank_generic(field: &Field, rows: &[Vec<Elem>], width: usize) -> usize {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let s = field.inv(m[rank][col]).expect("pivot is nonzero");
        for x in m[rank][col..].iter_mut() {
            *x = field.mul(*x, s);
        }
        let (done, rest) = m.split_at_mut(rank + 1);
        let prow = &done[rank];
        let eliminate = |row: &mut Vec<Elem>| {
            let f = row[col];
            if !f.is_zero() {
                let nf = field.neg(f);
                for (x, &y) in row[col..].iter_mut().zip(&prow[col..]) {
                    *x = field.add(*x, field.mul(nf, y));
                }
            }
        };
        if rest.len() >= PAR_THRESHOLD {
            rest.par_iter_mut().for_each(eliminate);
        } else {
            rest.iter_mut().for_each(eliminate);
        }
        rank += 1;
    }
    rank
}

/// Solves `A x = b` over the rationals when the solution is unique.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(rhs.clone()))
                .collect()
        })
        .collect();
    let mut r = 0;
    for col in 0..n {
        let p = (r..m.len()).find(|&i| !m[i][col].is_zero())?;
        m.swap(r, p);
        let s = Rational::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x = &*x * &s;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = &*x - &f * y;
                }
            }
        }
        r += 1;
    }
    // inconsistent rows
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some(m.into_iter().take(n).map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::lattice::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Rank via determinant-free brute force: size of the row span.
    fn span_size(field: &Field, rows: &[Vec<Elem>]) -> usize {
        let width = rows[0].len();
        let mut span = std::collections::HashSet::new();
        span.insert(vec![Elem::ZERO; width]);
        for r in rows {
            let current: Vec<Vec<Elem>> = span.iter().cloned().collect();
            for v in current {
                for c in field.elements() {
                    let w: Vec<Elem> = v
                        .iter()
                        .zip(r)
                        .map(|(&x, &y)| field.add(x, field.mul(c, y)))
                        .collect();
                    span.insert(w);
                }
            }
        }
        span.len()
    }

    #[test]
    fn rank_matches_span_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, e) in [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1)] {
            let f = make_field(p, e).unwrap();
            for _ in 0..20 {
                let rows: Vec<Vec<Elem>> = (0..4)
                    .map(|_| {
                        (0..4)
                            .map(|_| {
                                if rng.random_bool(0.4) {
                                    Elem::ZERO
                                } else {
                                    f.random(&mut rng)
                                }
                            })
                            .collect()
                    })
                    .collect();
                let r = rank(&f, &rows);
                assert_eq!(span_size(&f, &rows), (f.order() as usize).pow(r as u32));
            }
        }
    }

    #[test]
    fn fano_conic_evaluation_matrix_has_full_rank() {
        // monomials x^2, y^2, z^2, xy, xz, yz at the 7 points of PG(2,2)
        let f = make_field(2, 1).unwrap();
        let pts = crate::plane::plane_points(&f);
        let rows: Vec<Vec<Elem>> = pts
            .iter()
            .map(|p| {
                let [x, y, z] = p.coords();
                vec![
                    f.mul(x, x),
                    f.mul(y, y),
                    f.mul(z, z),
                    f.mul(x, y),
                    f.mul(x, z),
                    f.mul(y, z),
                ]
            })
            .collect();
        assert_eq!(rank(&f, &rows), 6);
    }

    #[test]
    fn rational_solve() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        let x = solve_unique(&a, &[rat(3), rat(4)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
        let singular = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        assert!(solve_unique(&singular, &[rat(1), rat(3)]).is_none());
    }
}
