use std::sync::Arc;

use gammak_core::algebra::{
    diagonal_inclusion, diagonal_projection, make_builtin, triangular_semiring, validate_hom,
};
use gammak_core::intlinalg::{group_from_presentation, smith_normal_form, IntMatrix};
use gammak_core::{BuiltinKind, Caps};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), proptest::collection::vec(-12i64..=12, r * c))
    })
}

fn build(r: usize, c: usize, xs: &[i64]) -> IntMatrix {
    let rows: Vec<Vec<i64>> = xs.chunks(c).map(|x| x.to_vec()).collect();
    debug_assert_eq!(rows.len(), r);
    IntMatrix::from_rows(c, &rows)
}

proptest! {
    #[test]
    fn snf_factors_the_input((r, c, xs) in matrix()) {
        let a = build(r, c, &xs);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert!(s.u.is_unimodular());
        prop_assert!(s.v.is_unimodular());
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(c));
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag: Vec<&BigInt> = s.diagonal().collect();
        for w in diag.windows(2) {
            prop_assert!(*w[0] >= BigInt::zero());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((w[1] % w[0]).is_zero());
            }
        }
    }

    /// Projection onto canonical coordinates is additive and kills relations.
    #[test]
    fn presentation_projection_is_a_homomorphism(
        (r, c, xs) in matrix(),
        x in proptest::collection::vec(-9i64..=9, 4),
        y in proptest::collection::vec(-9i64..=9, 4),
    ) {
        let rel = build(r, c, &xs);
        let p = group_from_presentation(c, &rel);
        let g = &p.group;
        let big = |v: &[i64]| v[..c].iter().map(|&k| BigInt::from(k)).collect::<Vec<_>>();
        let (bx, by) = (big(&x), big(&y));
        let sum: Vec<BigInt> = bx.iter().zip(&by).map(|(a, b)| a + b).collect();
        prop_assert_eq!(p.project(&sum), g.add(&p.project(&bx), &p.project(&by)));
        for i in 0..r {
            prop_assert!(g.is_zero_elem(&p.project(rel.row(i))));
        }
        for k in 0..g.ngens() {
            let mut e = g.zero();
            e[k] = BigInt::from(1);
            g.reduce(&mut e);
            prop_assert_eq!(p.project(&p.lift(k)), e);
        }
    }
}

/// Changing any single value of the diagonal projection or inclusion
/// breaks the homomorphism axioms.
#[test]
fn perturbed_diagonal_maps_are_rejected() {
    let caps = Caps { carrier: 32, ..Caps::default() };
    for kind in [BuiltinKind::Boolean, BuiltinKind::Modular(2), BuiltinKind::Modular(3)] {
        let b = make_builtin(kind, &caps).unwrap();
        let tri = Arc::new(triangular_semiring(&b, 2, &caps).unwrap());
        for f in [diagonal_projection(&tri, &caps).unwrap(), diagonal_inclusion(&tri, &caps).unwrap()] {
            assert!(validate_hom(&f).is_empty());
            for x in 0..f.f_t.len() {
                for v in 0..f.target.card() {
                    if v == f.f_t[x] {
                        continue;
                    }
                    let mut g = f.clone();
                    g.f_t[x] = v;
                    assert!(!validate_hom(&g).is_empty(), "{kind}: f_t[{x}] := {v} accepted");
                }
            }
        }
    }
}
