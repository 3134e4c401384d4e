mod common;

use common::fx;
use extrikit::fincat::{FinAddCategory, Morphism, Obj};
use extrikit::funcat::Variance;
use extrikit::linalg::Matrix;
use extrikit::negext::{NegKind, NegSequence, Towers};
use extrikit::posext::{Conflation, ExtError};
use extrikit::relstruct::{acyclic_witness_subfunctor, gamma_cohomology, is_sub_bifunctor, ConnectedSequence, Truncated};
use extrikit::Rational;
use num_traits::One;

#[test]
fn split_conflations_are_acyclic() {
    let inst = fx("twoterm_a2");
    let t = Towers::build(&inst, 3, 3).unwrap();
    let conf = Conflation::split(&inst.cat, &inst.e, "s", &inst.cat.indec(0), &inst.cat.indec(4));
    let full = NegSequence { towers: &t, kind: NegKind::I };
    assert!(gamma_cohomology(&full, &inst.cat, &conf, -3, 2).unwrap().acyclic());
    let trunc = Truncated { tower: &t.pos };
    assert!(gamma_cohomology(&trunc, &inst.cat, &conf, -3, 2).unwrap().acyclic());
}

#[test]
fn periodic_point_full_sequence_is_acyclic() {
    let inst = fx("pt");
    let t = Towers::build(&inst, 4, 4).unwrap();
    let conf = &inst.conflations[0];
    let full = NegSequence { towers: &t, kind: NegKind::I };
    let h = gamma_cohomology(&full, &inst.cat, conf, -4, 3).unwrap();
    assert!(h.acyclic());
    assert_eq!(h.degrees.first(), Some(&(3 * -4 - 1)));
    let trunc = Truncated { tower: &t.pos };
    assert!(!gamma_cohomology(&trunc, &inst.cat, conf, -4, 3).unwrap().acyclic());
}

#[test]
fn truncation_detects_the_non_bivariant_extension() {
    let inst = fx("a4sub");
    let t = Towers::build(&inst, 3, 3).unwrap();
    let trunc = Truncated { tower: &t.pos };
    let conf = &inst.conflations[inst.conflation_index("ext:[4;3]:2:0").unwrap()];
    let h = gamma_cohomology(&trunc, &inst.cat, conf, -3, 2).unwrap();
    let x = inst.cat.index_of("3[-1]").unwrap();
    // C(3[-1], 2) -> C(3[-1], [4;3;2]) is not mono
    assert!(h.nonzero().contains(&(-2, x, 1)), "{:?}", h.nonzero());

    let sub = acyclic_witness_subfunctor(&inst, &trunc, -3, 2).unwrap();
    assert!(sub.rejected.contains(&conf.name));
    assert!(!sub.contains(&inst.e, conf));
    assert!(sub.dims().iter().flatten().all(|&d| d == 0));
    assert!(is_sub_bifunctor(&inst.cat, &inst.e, &sub.sub));
}

#[test]
fn full_sequence_generates_the_table_span() {
    for name in ["twoterm_a2", "a4sub", "pt"] {
        let inst = fx(name);
        let t = Towers::build(&inst, 3, 3).unwrap();
        let full = NegSequence { towers: &t, kind: NegKind::I };
        let sub = acyclic_witness_subfunctor(&inst, &full, -3, 2).unwrap();
        assert!(sub.rejected.is_empty(), "{name}");
        for conf in &inst.conflations {
            assert!(sub.contains(&inst.e, conf), "{name}/{}", conf.name);
        }
        assert!(is_sub_bifunctor(&inst.cat, &inst.e, &sub.sub));
    }
}

#[test]
fn split_fixture_gives_the_zero_subfunctor() {
    let inst = fx("split2");
    let t = Towers::build(&inst, 2, 2).unwrap();
    let trunc = Truncated { tower: &t.pos };
    let sub = acyclic_witness_subfunctor(&inst, &trunc, -2, 1).unwrap();
    assert!(sub.dims().iter().flatten().all(|&d| d == 0));
}

/// Replaces every induced map by an all-ones matrix.
struct Scrambled<'a>(Truncated<'a, Rational>);

impl ConnectedSequence<Rational> for Scrambled<'_> {
    fn variance(&self) -> Variance {
        Variance::Co
    }

    fn dim(&self, cat: &FinAddCategory<Rational>, n: i64, m: usize, x: &Obj) -> Result<usize, ExtError> {
        self.0.dim(cat, n, m, x)
    }

    fn induced(&self, cat: &FinAddCategory<Rational>, n: i64, m: usize, f: &Morphism<Rational>) -> Result<Matrix<Rational>, ExtError> {
        let real = self.0.induced(cat, n, m, f)?;
        Ok(Matrix::from_fn(real.rows(), real.cols(), |_, _| Rational::one()))
    }

    fn connecting(&self, cat: &FinAddCategory<Rational>, n: i64, m: usize, conf: &Conflation<Rational>) -> Result<Matrix<Rational>, ExtError> {
        self.0.connecting(cat, n, m, conf)
    }
}

#[test]
fn non_complexes_are_rejected() {
    let inst = fx("twoterm_a2");
    let t = Towers::build(&inst, 2, 2).unwrap();
    let conf = Conflation::split(&inst.cat, &inst.e, "s", &inst.cat.indec(0), &inst.cat.indec(1));
    let bad = Scrambled(Truncated { tower: &t.pos });
    assert!(matches!(gamma_cohomology(&bad, &inst.cat, &conf, -1, 1), Err(ExtError::NotWellDefined(_))));
}
