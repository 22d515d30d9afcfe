use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{Construction, GammaSemiring, Unit};
use crate::caps::{pow_sat, Caps};
use crate::{Error, Result};

/// The built-in families. All are binary with a singleton Γ, except
/// `Rectangular` whose Γ is the set of transposed-shape Boolean matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinKind {
    Boolean,
    /// ℤ/k
    Modular(usize),
    /// ℕ with every value ≥ k identified to a top element.
    TruncatedNat(usize),
    /// (ℕ ∪ {∞}, min, +) with finite values capped at k.
    Tropical(usize),
    /// p×q Boolean matrices acting through q×p Boolean matrices.
    Rectangular(usize, usize),
}

impl fmt::Display for BuiltinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinKind::Boolean => write!(f, "boolean"),
            BuiltinKind::Modular(k) => write!(f, "modular({k})"),
            BuiltinKind::TruncatedNat(k) => write!(f, "truncated_nat({k})"),
            BuiltinKind::Tropical(k) => write!(f, "tropical({k})"),
            BuiltinKind::Rectangular(p, q) => write!(f, "rectangular({p},{q})"),
        }
    }
}

impl FromStr for BuiltinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Structure(format!("unknown built-in `{s}`"));
        if s == "boolean" {
            return Ok(BuiltinKind::Boolean);
        }
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open..]
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let args: Vec<usize> = inner
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<core::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (&s[..open], args.as_slice()) {
            ("modular", [k]) => Ok(BuiltinKind::Modular(*k)),
            ("truncated_nat", [k]) => Ok(BuiltinKind::TruncatedNat(*k)),
            ("tropical", [k]) => Ok(BuiltinKind::Tropical(*k)),
            ("rectangular", [p, q]) => Ok(BuiltinKind::Rectangular(*p, *q)),
            _ => Err(bad()),
        }
    }
}

fn binary(
    name: String,
    labels: Vec<String>,
    add: impl Fn(usize, usize) -> usize,
    mul: impl Fn(usize, usize) -> usize,
    one: usize,
) -> Result<GammaSemiring> {
    let n = labels.len();
    let mut t_add = Vec::with_capacity(n * n);
    let mut mu = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            t_add.push(add(a, b));
            mu.push(mul(a, b));
        }
    }
    GammaSemiring::from_tables(
        name,
        2,
        labels,
        t_add,
        vec!["γ".to_string()],
        None,
        mu,
        Some(Unit { one, delta: vec![0] }),
    )
}

pub fn make_builtin(kind: BuiltinKind, caps: &Caps) -> Result<GammaSemiring> {
    let positive = |k: usize| {
        if k == 0 {
            Err(Error::Structure(format!("{kind}: size parameter must be >= 1")))
        } else {
            Ok(())
        }
    };
    let s = match kind {
        BuiltinKind::Boolean => binary(
            kind.to_string(),
            vec!["0".to_string(), "1".to_string()],
            |a, b| a | b,
            |a, b| a & b,
            1,
        )?,
        BuiltinKind::Modular(k) => {
            positive(k)?;
            caps.check_carrier("modular carrier", k as u64)?;
            binary(
                kind.to_string(),
                (0..k).map(|i| i.to_string()).collect(),
                move |a, b| (a + b) % k,
                move |a, b| (a * b) % k,
                1 % k,
            )?
        }
        BuiltinKind::TruncatedNat(k) => {
            positive(k)?;
            caps.check_carrier("truncated_nat carrier", k as u64 + 1)?;
            let mut labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
            labels.push("⊤".to_string());
            binary(
                kind.to_string(),
                labels,
                move |a, b| (a + b).min(k),
                move |a, b| (a * b).min(k),
                1,
            )?
        }
        BuiltinKind::Tropical(k) => {
            positive(k)?;
            caps.check_carrier("tropical carrier", k as u64 + 2)?;
            // index 0 is ∞ (the additive zero); index i+1 is the value i.
            let mut labels = vec!["∞".to_string()];
            labels.extend((0..=k).map(|i| i.to_string()));
            binary(
                kind.to_string(),
                labels,
                |a, b| match (a, b) {
                    (0, x) | (x, 0) => x,
                    (x, y) => x.min(y),
                },
                move |a, b| {
                    if a == 0 || b == 0 {
                        0
                    } else {
                        ((a - 1) + (b - 1)).min(k) + 1
                    }
                },
                1,
            )?
        }
        BuiltinKind::Rectangular(p, q) => {
            positive(p)?;
            positive(q)?;
            let cells = p * q;
            caps.check_carrier("rectangular carrier", pow_sat(2, cells))?;
            rectangular(kind, p, q)?
        }
    };
    Ok(s.with_construction(Construction::Builtin(kind)))
}

/// Boolean matrix stored as bits, row-major, first entry most significant.
fn bits(idx: usize, rows: usize, cols: usize) -> Vec<Vec<bool>> {
    let cells = rows * cols;
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (idx >> (cells - 1 - (i * cols + j))) & 1 == 1)
                .collect()
        })
        .collect()
}

fn unbits(m: &[Vec<bool>]) -> usize {
    m.iter().flatten().fold(0, |acc, &b| (acc << 1) | b as usize)
}

fn bool_mat_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let inner = b.len();
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).any(|k| row[k] && b[k][j]))
                .collect()
        })
        .collect()
}

fn label(m: &[Vec<bool>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
        .collect();
    format!("[{}]", rows.join(";"))
}

fn rectangular(kind: BuiltinKind, p: usize, q: usize) -> Result<GammaSemiring> {
    let nt = 1usize << (p * q);
    let ng = 1usize << (q * p);
    let ts: Vec<_> = (0..nt).map(|i| bits(i, p, q)).collect();
    let gs: Vec<_> = (0..ng).map(|i| bits(i, q, p)).collect();
    let mut t_add = Vec::with_capacity(nt * nt);
    for a in 0..nt {
        for b in 0..nt {
            t_add.push(a | b);
        }
    }
    let mut g_op = Vec::with_capacity(ng * ng);
    for a in 0..ng {
        for b in 0..ng {
            g_op.push(a | b);
        }
    }
    let mut mu = Vec::with_capacity(nt * nt * ng);
    for a in &ts {
        for b in &ts {
            for g in &gs {
                mu.push(unbits(&bool_mat_mul(&bool_mat_mul(a, g), b)));
            }
        }
    }
    GammaSemiring::from_tables(
        kind.to_string(),
        2,
        ts.iter().map(|m| label(m)).collect(),
        t_add,
        gs.iter().map(|m| label(m)).collect(),
        Some(g_op),
        mu,
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate;

    #[test]
    fn parses_and_prints() {
        for k in [
            BuiltinKind::Boolean,
            BuiltinKind::Modular(3),
            BuiltinKind::TruncatedNat(2),
            BuiltinKind::Tropical(1),
            BuiltinKind::Rectangular(1, 2),
        ] {
            assert_eq!(k.to_string().parse::<BuiltinKind>().unwrap(), k);
        }
        assert!("modular".parse::<BuiltinKind>().is_err());
        assert!("modular(x)".parse::<BuiltinKind>().is_err());
        assert!("cubic(2)".parse::<BuiltinKind>().is_err());
    }

    #[test]
    fn boolean_shape() {
        let b = make_builtin(BuiltinKind::Boolean, &Caps::default()).unwrap();
        assert_eq!(b.card(), 2);
        assert_eq!(b.gamma_card(), 1);
        assert_eq!(b.unit(), Some(&Unit { one: 1, delta: vec![0] }));
    }

    #[test]
    fn modular_two_is_z2() {
        let m = make_builtin(BuiltinKind::Modular(2), &Caps::default()).unwrap();
        assert_eq!(m.t_add_table(), &[0, 1, 1, 0]);
        assert_eq!(m.mu_table(), &[0, 0, 0, 1]);
    }

    #[test]
    fn truncated_nat_two_saturates() {
        let t = make_builtin(BuiltinKind::TruncatedNat(2), &Caps::default()).unwrap();
        assert_eq!(t.t_elems(), &["0", "1", "⊤"]);
        assert_eq!(t.add(1, 1), 2);
        assert_eq!(t.add(2, 1), 2);
        assert_eq!(t.mul(2, 0, 2), 2);
        assert_eq!(t.mul(1, 0, 2), 2);
    }

    #[test]
    fn every_builtin_validates() {
        let caps = Caps::default();
        for k in [
            BuiltinKind::Boolean,
            BuiltinKind::Modular(1),
            BuiltinKind::Modular(2),
            BuiltinKind::Modular(3),
            BuiltinKind::Modular(6),
            BuiltinKind::TruncatedNat(1),
            BuiltinKind::TruncatedNat(2),
            BuiltinKind::TruncatedNat(4),
            BuiltinKind::Tropical(1),
            BuiltinKind::Tropical(3),
            BuiltinKind::Rectangular(1, 1),
            BuiltinKind::Rectangular(1, 2),
            BuiltinKind::Rectangular(2, 1),
            BuiltinKind::Rectangular(2, 2),
        ] {
            let s = make_builtin(k, &caps).unwrap();
            let r = validate(&s, &caps).unwrap();
            assert!(r.is_valid(), "{k}: {:?}", &r.violations[..r.violations.len().min(3)]);
        }
    }

    #[test]
    fn carrier_cap_is_enforced() {
        let caps = Caps::default().with_carrier(4);
        assert!(matches!(
            make_builtin(BuiltinKind::Modular(5), &caps),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            make_builtin(BuiltinKind::Rectangular(2, 2), &caps),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            make_builtin(BuiltinKind::Modular(0), &caps),
            Err(Error::Structure(_))
        ));
    }
}
