use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{decode_radix, encode_radix, Construction, GammaSemiring, Unit};
use crate::caps::{pow_sat, Caps};
use crate::{Error, Result};

/// Componentwise product with Γ = Γ_a × Γ_b.
pub fn product(a: &GammaSemiring, b: &GammaSemiring, caps: &Caps) -> Result<GammaSemiring> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch(a.arity(), b.arity()));
    }
    let n = a.arity();
    let (ta, tb) = (a.card(), b.card());
    let (ga, gb) = (a.gamma_card(), b.gamma_card());
    caps.check_carrier("product carrier", (ta as u64).saturating_mul(tb as u64))?;
    let nt = ta * tb;
    let ng = ga * gb;

    let mut t_elems = Vec::with_capacity(nt);
    let mut t_add = Vec::with_capacity(nt * nt);
    for x in 0..ta {
        for y in 0..tb {
            t_elems.push(format!("({},{})", a.t_elems()[x], b.t_elems()[y]));
        }
    }
    for p in 0..nt {
        for q in 0..nt {
            t_add.push(a.add(p / tb, q / tb) * tb + b.add(p % tb, q % tb));
        }
    }
    let mut g_elems = Vec::with_capacity(ng);
    for x in 0..ga {
        for y in 0..gb {
            g_elems.push(format!("({},{})", a.g_elems()[x], b.g_elems()[y]));
        }
    }
    let g_op = match (a.g_op_table(), b.g_op_table()) {
        (Some(_), Some(_)) => {
            let mut op = Vec::with_capacity(ng * ng);
            for p in 0..ng {
                for q in 0..ng {
                    op.push(
                        a.g_add(p / gb, q / gb).unwrap() * gb + b.g_add(p % gb, q % gb).unwrap(),
                    );
                }
            }
            Some(op)
        }
        _ => None,
    };

    let total = pow_sat(nt, n) as usize * pow_sat(ng, n - 1) as usize;
    let mut mu = Vec::with_capacity(total);
    let mut ts = vec![0; n];
    let mut gs = vec![0; n - 1];
    let (mut tsa, mut tsb) = (vec![0; n], vec![0; n]);
    let (mut gsa, mut gsb) = (vec![0; n - 1], vec![0; n - 1]);
    for ti in 0..pow_sat(nt, n) as usize {
        decode_radix(ti, nt, n, &mut ts);
        for (k, &t) in ts.iter().enumerate() {
            tsa[k] = t / tb;
            tsb[k] = t % tb;
        }
        for gi in 0..pow_sat(ng, n - 1) as usize {
            decode_radix(gi, ng, n - 1, &mut gs);
            for (k, &g) in gs.iter().enumerate() {
                gsa[k] = g / gb;
                gsb[k] = g % gb;
            }
            mu.push(a.mu(&tsa, &gsa) * tb + b.mu(&tsb, &gsb));
        }
    }

    let unit = match (a.unit(), b.unit()) {
        (Some(ua), Some(ub)) => Some(Unit {
            one: ua.one * tb + ub.one,
            delta: ua
                .delta
                .iter()
                .zip(&ub.delta)
                .map(|(&x, &y)| x * gb + y)
                .collect(),
        }),
        _ => None,
    };

    let s = GammaSemiring::from_tables(
        format!("{}×{}", a.name(), b.name()),
        n,
        t_elems,
        t_add,
        g_elems,
        g_op,
        mu,
        unit,
    )?;
    Ok(s.with_construction(Construction::Product(Arc::new(a.clone()), Arc::new(b.clone()))))
}

/// `base × base × … × base` (`copies` factors, left-nested), so element
/// indices are the mixed-radix encoding of the coordinate tuple.
pub fn power(base: &GammaSemiring, copies: usize, caps: &Caps) -> Result<GammaSemiring> {
    if copies == 0 {
        return Err(Error::Structure("power needs at least one factor".into()));
    }
    let mut acc = base.clone();
    for _ in 1..copies {
        acc = product(&acc, base, caps)?;
    }
    Ok(acc)
}

fn matrix_label(base: &GammaSemiring, entries: &[usize], m: usize) -> String {
    let rows: Vec<String> = entries
        .chunks(m)
        .map(|r| {
            r.iter()
                .map(|&e| base.t_elems()[e].as_str())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("[{}]", rows.join(";"))
}

/// Full m×m matrices over `base`: entrywise addition and
/// `(A γ B)_ij = Σ_k a_ik γ b_kj`.
pub fn matrix_semiring(base: &GammaSemiring, m: usize, caps: &Caps) -> Result<GammaSemiring> {
    let positions: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let s = matrix_like(base, m, &positions, caps, "matrix carrier", format!("M{m}({})", base.name()))?;
    Ok(s.with_construction(Construction::Matrix {
        base: Arc::new(base.clone()),
        size: m,
    }))
}

/// Upper-triangular matrices with `(A γ B)_ij = Σ_{k=i..j} a_ik γ b_kj`.
pub fn triangular_semiring(base: &GammaSemiring, size: usize, caps: &Caps) -> Result<GammaSemiring> {
    let positions: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (i..size).map(move |j| (i, j)))
        .collect();
    let s = matrix_like(
        base,
        size,
        &positions,
        caps,
        "triangular carrier",
        format!("T{size}({})", base.name()),
    )?;
    Ok(s.with_construction(Construction::Triangular {
        base: Arc::new(base.clone()),
        size,
    }))
}

/// Matrices over `base` supported on `positions` (row-major order). The
/// product sums over k in `i..=j` when the support is triangular, which for
/// full support is all of `0..m` once the zero entries are accounted for.
fn matrix_like(
    base: &GammaSemiring,
    m: usize,
    positions: &[(usize, usize)],
    caps: &Caps,
    what: &'static str,
    name: String,
) -> Result<GammaSemiring> {
    let (one, delta) = base.require_unital_binary()?;
    if m == 0 {
        return Err(Error::Structure("matrix size must be >= 1".into()));
    }
    let nb = base.card();
    let ng = base.gamma_card();
    let free = positions.len();
    caps.check_carrier(what, pow_sat(nb, free))?;
    let nt = pow_sat(nb, free) as usize;
    let triangular = positions.iter().all(|&(i, j)| i <= j) && free < m * m;

    let expand = |idx: usize, digits: &mut [usize], full: &mut [usize]| {
        decode_radix(idx, nb, free, digits);
        full.iter_mut().for_each(|x| *x = 0);
        for (d, &(i, j)) in digits.iter().zip(positions) {
            full[i * m + j] = *d;
        }
    };
    let compress = |full: &[usize], digits: &mut [usize]| -> usize {
        for (d, &(i, j)) in digits.iter_mut().zip(positions) {
            *d = full[i * m + j];
        }
        encode_radix(digits, nb)
    };

    let mut digits = vec![0; free];
    let mut mats = Vec::with_capacity(nt);
    let mut t_elems = Vec::with_capacity(nt);
    for idx in 0..nt {
        let mut full = vec![0; m * m];
        expand(idx, &mut digits, &mut full);
        t_elems.push(matrix_label(base, &full, m));
        mats.push(full);
    }

    let mut t_add = Vec::with_capacity(nt * nt);
    let mut buf = vec![0; m * m];
    for a in &mats {
        for b in &mats {
            for (k, x) in buf.iter_mut().enumerate() {
                *x = base.add(a[k], b[k]);
            }
            t_add.push(compress(&buf, &mut digits));
        }
    }

    let mut mu = Vec::with_capacity(nt * nt * ng);
    for a in &mats {
        for b in &mats {
            for g in 0..ng {
                for i in 0..m {
                    for j in 0..m {
                        let ks = if triangular { i..j + 1 } else { 0..m };
                        buf[i * m + j] =
                            base.sum(ks.map(|k| base.mul(a[i * m + k], g, b[k * m + j])));
                    }
                }
                mu.push(compress(&buf, &mut digits));
            }
        }
    }

    let mut id = vec![0; m * m];
    for i in 0..m {
        id[i * m + i] = one;
    }
    let unit = Unit {
        one: compress(&id, &mut digits),
        delta: vec![delta],
    };
    GammaSemiring::from_tables(
        name,
        2,
        t_elems,
        t_add,
        base.g_elems().to_vec(),
        base.g_op_table().map(|o| o.to_vec()),
        mu,
        Some(unit),
    )
}

/// Entries of a matrix- or triangular-built element as a full row-major
/// m×m array over the base.
pub fn matrix_entries(s: &GammaSemiring, elem: usize) -> Option<Vec<usize>> {
    let (base, m, tri) = match s.construction() {
        Construction::Matrix { base, size } => (base, *size, false),
        Construction::Triangular { base, size } => (base, *size, true),
        _ => return None,
    };
    let positions: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| !tri || i <= j)
        .collect();
    let mut digits = vec![0; positions.len()];
    decode_radix(elem, base.card(), positions.len(), &mut digits);
    let mut full = vec![0; m * m];
    for (d, &(i, j)) in digits.iter().zip(&positions) {
        full[i * m + j] = *d;
    }
    Some(full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_builtin, validate, BuiltinKind};

    fn b(kind: BuiltinKind) -> GammaSemiring {
        make_builtin(kind, &Caps::default()).unwrap()
    }

    #[test]
    fn boolean_squared() {
        let bb = product(&b(BuiltinKind::Boolean), &b(BuiltinKind::Boolean), &Caps::default()).unwrap();
        assert_eq!(bb.card(), 4);
        assert_eq!(bb.gamma_card(), 1);
        // (1,1) sits at index 1*2+1
        assert_eq!(bb.unit().unwrap().one, 3);
        assert_eq!(bb.unit().unwrap().delta, vec![0]);
        assert!(validate(&bb, &Caps::default()).unwrap().is_valid());
    }

    #[test]
    fn product_arity_mismatch() {
        let s = b(BuiltinKind::Boolean);
        let ternary = GammaSemiring::from_tables(
            "t",
            3,
            vec!["0".into()],
            vec![0],
            vec!["g".into()],
            None,
            vec![0],
            None,
        )
        .unwrap();
        assert_eq!(product(&s, &ternary, &Caps::default()), Err(Error::ArityMismatch(2, 3)));
    }

    #[test]
    fn size_one_matrices_copy_the_base() {
        for k in [BuiltinKind::Boolean, BuiltinKind::Modular(3), BuiltinKind::TruncatedNat(2)] {
            let base = b(k);
            for s in [
                matrix_semiring(&base, 1, &Caps::default()).unwrap(),
                triangular_semiring(&base, 1, &Caps::default()).unwrap(),
            ] {
                assert_eq!(s.t_add_table(), base.t_add_table());
                assert_eq!(s.mu_table(), base.mu_table());
                assert_eq!(s.unit(), base.unit());
            }
        }
    }

    #[test]
    fn triangular_boolean_has_eight_elements() {
        let t = triangular_semiring(&b(BuiltinKind::Boolean), 2, &Caps::default()).unwrap();
        assert_eq!(t.card(), 8);
        assert!(validate(&t, &Caps::default()).unwrap().is_valid());
    }

    #[test]
    fn strictly_upper_products_vanish() {
        let base = b(BuiltinKind::Boolean);
        let t = triangular_semiring(&base, 2, &Caps::default()).unwrap();
        // entries (a11, a12, a22); strictly upper means a11 = a22 = 0
        let strict: Vec<usize> = (0..t.card())
            .filter(|&e| {
                let m = matrix_entries(&t, e).unwrap();
                m[0] == 0 && m[3] == 0
            })
            .collect();
        assert_eq!(strict.len(), 2);
        for &x in &strict {
            for &y in &strict {
                assert_eq!(t.mul(x, 0, y), 0);
            }
        }
    }

    #[test]
    fn matrix_requires_unit_and_binary() {
        let r = b(BuiltinKind::Rectangular(1, 2));
        assert!(matches!(matrix_semiring(&r, 2, &Caps::default()), Err(Error::MissingUnit(_))));
        let caps = Caps::default().with_carrier(8);
        assert!(matches!(
            matrix_semiring(&b(BuiltinKind::Boolean), 2, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }
}
