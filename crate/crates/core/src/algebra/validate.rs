use alloc::vec;
use alloc::vec::Vec;

use super::{decode_radix, GammaSemiring};
use crate::caps::{pow_sat, Caps};
use crate::Result;

/// Which axiom instance failed. Slots are 0-based T-positions (or Γ-positions
/// for [`Axiom::GammaAdditive`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    AddCommutative,
    AddAssociative,
    AddIdentity,
    GammaCommutative,
    GammaAssociative,
    /// μ(…, a+b, …) = μ(…, a, …) + μ(…, b, …) in T-slot `slot`.
    MuAdditive { slot: usize },
    /// μ with 0 in T-slot `slot` is 0.
    ZeroAbsorption { slot: usize },
    /// Nesting at position `slot` agrees with nesting at position 0.
    MuAssociative { slot: usize },
    /// μ(…; …, γ+γ′, …) = μ(…; …, γ, …) + μ(…; …, γ′, …) in Γ-slot `slot`.
    GammaAdditive { slot: usize },
    /// μ(1, …, x, …, 1; δ) = x with x in T-slot `slot`.
    Unit { slot: usize },
}

/// One failing instance. `t` and `g` hold the witness arguments; for the
/// additivity axioms the second summand is appended as the last entry of
/// `t` (or `g`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub t: Vec<usize>,
    pub g: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, axiom: Axiom) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }
}

/// Exhaustive axiom check. An empty report certifies the structure.
pub fn validate(s: &GammaSemiring, caps: &Caps) -> Result<ValidationReport> {
    caps.check_carrier("validate", s.card() as u64)?;
    let mut out = Vec::new();
    check_addition(s, &mut out);
    check_gamma_op(s, &mut out);
    check_mu_additive(s, &mut out);
    check_zero_absorption(s, &mut out);
    check_associative(s, &mut out);
    check_gamma_additive(s, &mut out);
    check_unit(s, &mut out);
    Ok(ValidationReport { violations: out })
}

fn push(out: &mut Vec<Violation>, axiom: Axiom, t: Vec<usize>, g: Vec<usize>) {
    out.push(Violation { axiom, t, g });
}

fn check_addition(s: &GammaSemiring, out: &mut Vec<Violation>) {
    let n = s.card();
    for a in 0..n {
        if s.add(0, a) != a || s.add(a, 0) != a {
            push(out, Axiom::AddIdentity, vec![a], vec![]);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if s.add(a, b) != s.add(b, a) {
                push(out, Axiom::AddCommutative, vec![a, b], vec![]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = s.add(a, b);
            for c in 0..n {
                if s.add(ab, c) != s.add(a, s.add(b, c)) {
                    push(out, Axiom::AddAssociative, vec![a, b, c], vec![]);
                }
            }
        }
    }
}

fn check_gamma_op(s: &GammaSemiring, out: &mut Vec<Violation>) {
    let Some(op) = s.g_op_table() else { return };
    let n = s.gamma_card();
    let at = |a: usize, b: usize| op[a * n + b];
    for a in 0..n {
        for b in a + 1..n {
            if at(a, b) != at(b, a) {
                push(out, Axiom::GammaCommutative, vec![], vec![a, b]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if at(at(a, b), c) != at(a, at(b, c)) {
                    push(out, Axiom::GammaAssociative, vec![], vec![a, b, c]);
                }
            }
        }
    }
}

/// Iterates over every `(ts, gs)` with `ts.len() = tl`, `gs.len() = gl`.
fn for_each_args(s: &GammaSemiring, tl: usize, gl: usize, mut f: impl FnMut(&[usize], &[usize])) {
    let nt = s.card();
    let ng = s.gamma_card();
    let tcount = pow_sat(nt, tl) as usize;
    let gcount = pow_sat(ng, gl) as usize;
    let mut ts = vec![0; tl];
    let mut gs = vec![0; gl];
    for ti in 0..tcount {
        decode_radix(ti, nt, tl, &mut ts);
        for gi in 0..gcount {
            decode_radix(gi, ng, gl, &mut gs);
            f(&ts, &gs);
        }
    }
}

fn check_mu_additive(s: &GammaSemiring, out: &mut Vec<Violation>) {
    let n = s.arity();
    let nt = s.card();
    let mut args = vec![0; n];
    for slot in 0..n {
        // `rest` enumerates the other n-1 slots.
        for_each_args(s, n - 1, n - 1, |rest, gs| {
            fill_except(&mut args, rest, slot);
            for a in 0..nt {
                args[slot] = a;
                let ma = s.mu(&args, gs);
                for b in 0..nt {
                    args[slot] = b;
                    let mb = s.mu(&args, gs);
                    args[slot] = s.add(a, b);
                    let mab = s.mu(&args, gs);
                    if mab != s.add(ma, mb) {
                        let mut t = args.clone();
                        t[slot] = a;
                        t.push(b);
                        push(out, Axiom::MuAdditive { slot }, t, gs.to_vec());
                    }
                }
            }
        });
    }
}

fn fill_except(args: &mut [usize], rest: &[usize], skip: usize) {
    let mut r = rest.iter();
    for (i, slot) in args.iter_mut().enumerate() {
        if i != skip {
            *slot = *r.next().unwrap();
        }
    }
}

fn check_zero_absorption(s: &GammaSemiring, out: &mut Vec<Violation>) {
    let n = s.arity();
    let mut args = vec![0; n];
    for slot in 0..n {
        for_each_args(s, n - 1, n - 1, |rest, gs| {
            fill_except(&mut args, rest, slot);
            args[slot] = 0;
            if s.mu(&args, gs) != 0 {
                push(out, Axiom::ZeroAbsorption { slot }, args.clone(), gs.to_vec());
            }
        });
    }
}

/// Evaluates `a₁ γ₁ … a_{2n-1}` with the inner product at T-position `j`.
fn nested(s: &GammaSemiring, ts: &[usize], gs: &[usize], j: usize, inner: &mut [usize], outer: &mut [usize], og: &mut [usize]) -> usize {
    let n = s.arity();
    inner.copy_from_slice(&ts[j..j + n]);
    let v = s.mu(inner, &gs[j..j + n - 1]);
    outer[..j].copy_from_slice(&ts[..j]);
    outer[j] = v;
    outer[j + 1..].copy_from_slice(&ts[j + n..]);
    og[..j].copy_from_slice(&gs[..j]);
    og[j..].copy_from_slice(&gs[j + n - 1..]);
    s.mu(outer, og)
}

fn check_associative(s: &GammaSemiring, out: &mut Vec<Violation>) {
    let n = s.arity();
    if n == 2 {
        let nt = s.card();
        let ng = s.gamma_card();
        for a in 0..nt {
            for g in 0..ng {
                for b in 0..nt {
                    let ab = s.mul(a, g, b);
                    for h in 0..ng {
                        for c in 0..nt {
                            if s.mul(ab, h, c) != s.mul(a, g, s.mul(b, h, c)) {
                                push(out, Axiom::MuAssociative { slot: 1 }, vec![a, b, c], vec![g, h]);
                            }
                        }
                    }
                }
            }
        }
        return;
    }
    let mut inner = vec![0; n];
    let mut outer = vec![0; n];
    let mut og = vec![0; n - 1];
    for_each_args(s, 2 * n - 1, 2 * n - 2, |ts, gs| {
        let base = nested(s, ts, gs, 0, &mut inner, &mut outer, &mut og);
        for j in 1..n {
            if nested(s, ts, gs, j, &mut inner, &mut outer, &mut og) != base {
                push(out, Axiom::MuAssociative { slot: j }, ts.to_vec(), gs.to_vec());
            }
        }
    });
}

fn check_gamma_additive(s: &GammaSemiring, out: &mut Vec<Violation>) {
    if s.g_op_table().is_none() {
        return;
    }
    let n = s.arity();
    let ng = s.gamma_card();
    let mut gargs = vec![0; n - 1];
    for slot in 0..n - 1 {
        for_each_args(s, n, n - 2, |ts, grest| {
            fill_except(&mut gargs, grest, slot);
            for a in 0..ng {
                gargs[slot] = a;
                let ma = s.mu(ts, &gargs);
                for b in 0..ng {
                    gargs[slot] = b;
                    let mb = s.mu(ts, &gargs);
                    gargs[slot] = s.g_add(a, b).unwrap();
                    if s.mu(ts, &gargs) != s.add(ma, mb) {
                        let mut g = gargs.clone();
                        g[slot] = a;
                        g.push(b);
                        push(out, Axiom::GammaAdditive { slot }, ts.to_vec(), g);
                    }
                }
            }
        });
    }
}

fn check_unit(s: &GammaSemiring, out: &mut Vec<Violation>) {
    let Some(u) = s.unit() else { return };
    let n = s.arity();
    let mut args = vec![u.one; n];
    for slot in 0..n {
        for x in 0..s.card() {
            args.iter_mut().for_each(|a| *a = u.one);
            args[slot] = x;
            if s.mu(&args, &u.delta) != x {
                push(out, Axiom::Unit { slot }, args.clone(), u.delta.clone());
            }
        }
    }
}
