mod common;

use common::{q, rank};
use extrikit::linalg::{preimage_of_subspace, Matrix, Subspace};
use extrikit::{Fp, Rational};
use num_traits::Zero;
use proptest::prelude::*;

const P: u32 = 1_000_003;

fn entries() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..4, r * c)))
}

fn qmat(r: usize, c: usize, v: &[i64]) -> Matrix<Rational> {
    Matrix::from_fn(r, c, |i, j| q(v[i * c + j]))
}

fn pmat(r: usize, c: usize, v: &[i64]) -> Matrix<Fp> {
    Matrix::from_fn(r, c, |i, j| Fp::new(v[i * c + j], P))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_nullity((r, c, v) in entries()) {
        let m = qmat(r, c, &v);
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.dim(), c);
        prop_assert!(m.mul(k.basis()).is_zero());
        prop_assert_eq!(m.image_basis().dim(), m.rank());
        prop_assert_eq!(m.cokernel().quotient_dim, r - m.rank());
        prop_assert!(m.cokernel().projection.mul(&m).is_zero());
    }

    #[test]
    fn rank_agrees_with_an_independent_elimination((r, c, v) in entries()) {
        let rows: Vec<Vec<Rational>> = (0..r).map(|i| (0..c).map(|j| q(v[i * c + j])).collect()).collect();
        prop_assert_eq!(qmat(r, c, &v).rank(), rank(rows));
    }

    #[test]
    fn solutions_solve((r, c, v) in entries(), x in prop::collection::vec(-3i64..4, 5)) {
        let m = qmat(r, c, &v);
        let x: Vec<Rational> = x[..c].iter().map(|&t| q(t)).collect();
        let b = m.apply(&x);
        let sol = m.solve(&b).unwrap().expect("consistent system");
        prop_assert_eq!(m.apply(&sol.particular), b);
        prop_assert_eq!(sol.kernel.dim(), c - m.rank());
    }

    #[test]
    fn inconsistent_systems_have_no_solution((r, c, v) in entries()) {
        let m = qmat(r, c, &v);
        let cok = m.cokernel();
        prop_assume!(cok.quotient_dim > 0);
        let b = cok.section.column(0);
        prop_assert!(m.solve(&b).unwrap().is_none());
    }

    #[test]
    fn small_integer_matrices_have_the_same_rank_mod_a_large_prime((r, c, v) in entries()) {
        prop_assert_eq!(qmat(r, c, &v).rank(), pmat(r, c, &v).rank());
    }

    #[test]
    fn subspace_dimension_formula((r, c, v) in entries(), (r2, c2, w) in entries()) {
        prop_assume!(r == r2);
        let a = Subspace::span(r, &qmat(r, c, &v));
        let b = Subspace::span(r, &qmat(r2, c2, &w));
        prop_assert_eq!(a.sum(&b).dim() + a.intersect(&b).dim(), a.dim() + b.dim());
        prop_assert!(a.contains_subspace(&a.intersect(&b)));
        prop_assert!(a.sum(&b).contains_subspace(&b));
    }

    #[test]
    fn preimages((r, c, v) in entries(), k in 0usize..5) {
        let m = qmat(r, c, &v);
        let u = Subspace::span(r, &Matrix::from_fn(r, k.min(r), |i, j| if i == j { q(1) } else { q(0) }));
        let pre = preimage_of_subspace(&m, &u);
        prop_assert!(pre.contains_subspace(&m.kernel_basis()));
        prop_assert!(u.contains_subspace(&pre.image_under(&m)));
        prop_assert_eq!(pre.image_under(&m).dim(), m.image_basis().intersect(&u).dim());
    }
}

#[test]
fn prime_field_arithmetic() {
    let a = Fp::new(-1, 7);
    assert_eq!(a.value(), 6);
    assert_eq!((a * a).value(), 1);
    assert!((Fp::new(3, 7) + Fp::new(4, 7)).is_zero());
    let m = Matrix::from_fn(2, 2, |i, j| Fp::new([[1, 2], [3, 6]][i][j], 7));
    assert_eq!(m.rank(), 1);
    assert_eq!(pmat(2, 2, &[1, 2, 3, 6]).rank(), 1);
    assert_eq!(Matrix::from_fn(2, 2, |i, j| Fp::new([[1, 2], [3, 4]][i][j], 2)).rank(), 1);
}
