use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal,
/// `d₁ | d₂ | …`, nonnegative. `v_inv` is `v⁻¹`, kept so canonical
/// coordinates can be lifted back.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> impl Iterator<Item = &BigInt> + '_ {
        (0..self.d.rows().min(self.d.cols())).map(move |i| &self.d[(i, i)])
    }
}

/// Smallest nonzero |entry| in the trailing block from `t`, ties broken by
/// row-major position.
fn pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..d.rows() {
        for c in t..d.cols() {
            let x = &d[(r, c)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if d[(br, bc)].abs() <= x.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pr, pc)) = pivot(&d, t) else {
                break;
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);
            v_inv.swap_rows(t, pc);

            let mut clean = true;
            for r in t + 1..m {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = -d[(r, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                if !d[(r, t)].is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..n {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = -d[(t, c)].div_floor(&d[(t, t)]);
                d.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                // v ← v·(I + q E_tc) so v⁻¹ ← (I − q E_tc)·v⁻¹
                v_inv.add_row_multiple(t, c, &-&q);
                if !d[(t, c)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and go again
            let offending = (t + 1..m).find(|&r| {
                (t + 1..n).any(|c| !d[(r, c)].is_multiple_of(&d[(t, t)]))
            });
            match offending {
                Some(r) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if t < m && t < n && d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    assert_eq!(u.mul(a).mul(&v), d, "Smith normal form identity failed");
    assert_eq!(v.mul(&v_inv), IntMatrix::identity(n), "column transform inverse failed");
    Snf { u, d, v, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn diag(s: &Snf) -> Vec<i64> {
        s.diagonal().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn diagonal_two_three() {
        let a = IntMatrix::from_rows(2, &[vec![2i64, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(diag(&s), vec![1, 6]);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
    }

    #[test]
    fn zero_matrix_keeps_identity_transforms() {
        let a = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&a);
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn identity_is_fixed() {
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn textbook_example() {
        let a = IntMatrix::from_rows(3, &[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(diag(&s), vec![2, 6, 12]);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
    }

    #[test]
    fn empty_shapes() {
        let s = smith_normal_form(&IntMatrix::zeros(0, 2));
        assert_eq!(s.v, IntMatrix::identity(2));
        let s = smith_normal_form(&IntMatrix::zeros(2, 0));
        assert_eq!(s.u, IntMatrix::identity(2));
    }
}
