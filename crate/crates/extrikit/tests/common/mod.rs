#![allow(dead_code)]

use extrikit::instances::fixture;
use extrikit::{QInstance, Rational, Scalar};
use num_traits::{One, Zero};

pub fn fx(name: &str) -> QInstance {
    fixture(name, 0).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn q(v: i64) -> Rational {
    Rational::from_i64(v, 0).unwrap()
}

/// Rank by plain Gaussian elimination on a row-list, independent of the
/// library's RREF.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, |x| x.len());
    for c in (0..cols).rev() {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / piv.clone();
                for k in 0..cols {
                    let d = f.clone() * rows[r][k].clone();
                    rows[i][k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[k] = Rational::one();
    v
}
