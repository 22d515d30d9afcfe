//! Subcommands and dispatch.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use gammak_core::algebra::{
    diagonal_inclusion, diagonal_projection, make_builtin, matrix_semiring, power, product, triangular_semiring,
    validate, validate_hom, HomViolation,
};
use gammak_core::ktheory::{
    aut_tower, base_change_k0, base_change_k1, block_triangular_diagnostic, check_additivity, check_base_change,
    check_matrix_morita, check_product, check_triangular_theorem, contractible_complexes, euler_characteristic, k0,
    k0_class, k1, random_additivity_trials, relation_diagnostics, zero_twist, BoundedComplex,
};
use gammak_core::{BuiltinKind, GammaSemiring};
use serde_json::{json, Value};

use crate::config::{Format, GlobalOpts, Settings};
use crate::exit::{Failure, CAP_EXHAUSTED, CHECK_FAILED, INVALID_INPUT, PASS};
use crate::io::{
    load_hom, load_structure, load_valid_structure, read_json, violations_json, ComplexFile, HomFile, StructureFile,
};
use crate::{report, text};

#[derive(Debug, Parser)]
#[command(name = "gammak", version, about = "K₀ and K₁ of finite Γ-semirings")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a built-in structure as JSON, e.g. `boolean` or `modular(3)`.
    Builtin { kind: String },
    /// Exhaustively check the axioms of a structure.
    Validate { structure: String },
    /// Build a derived structure or homomorphism and print it as JSON.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Grothendieck group of the projectives within the rank cap.
    K0 { structure: String },
    /// Whitehead group from the automorphism tower.
    K1 {
        structure: String,
        /// Also check elementary classes, the product law and block-triangular classes.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Euler characteristic of a bounded complex of projectives.
    Euler { structure: String, complex: PathBuf },
    /// Validate a homomorphism and report its induced maps.
    Map {
        hom: PathBuf,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
        /// Also push the automorphism towers forward.
        #[arg(long)]
        k1: bool,
    },
    /// Run a theorem-check suite; exit 4 if any assertion fails.
    Check {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    Product { left: String, right: String },
    Power {
        base: String,
        #[arg(long)]
        copies: usize,
    },
    Matrix {
        base: String,
        #[arg(long)]
        m: usize,
    },
    Triangular {
        base: String,
        #[arg(long)]
        size: usize,
    },
    /// Diagonal projection 𝒯ₙ(S) → Sⁿ as a hom file.
    Projection {
        base: String,
        #[arg(long)]
        size: usize,
    },
    /// Diagonal inclusion Sⁿ → 𝒯ₙ(S) as a hom file.
    Inclusion {
        base: String,
        #[arg(long)]
        size: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// K(𝒯ₙ(S)) against K(S)ⁿ, π∗, and idempotent lifting.
    Triangular {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long)]
        skip_k1: bool,
    },
    /// K(M_m(T)) against K(T).
    MatrixMorita {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        skip_k1: bool,
    },
    /// K(A×B) against K(A) ⊕ K(B).
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        skip_k1: bool,
    },
    /// χ(B) = χ(A) + χ(C) on seeded random split assemblies, and χ = 0 on
    /// contractible two-term complexes.
    Additivity {
        /// Repeatable; defaults to modular(2) and boolean.
        #[arg(long)]
        base: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Identity, composite and π∗∘ι∗ laws over S, S² and 𝒯₂(S).
    BaseChange {
        #[arg(long)]
        base: String,
        #[arg(long)]
        skip_k1: bool,
    },
}

/// A finished command: the report and its exit status.
pub struct Outcome {
    pub report: Value,
    pub code: u8,
    pub reason: Option<String>,
}

impl Outcome {
    fn pass(report: Value) -> Self {
        Outcome {
            report,
            code: PASS,
            reason: None,
        }
    }

    fn verdict(report: Value, holds: bool, code: u8, reason: &str) -> Self {
        if holds {
            Outcome::pass(report)
        } else {
            Outcome {
                report,
                code,
                reason: Some(reason.into()),
            }
        }
    }
}

/// Runs a parsed command. Returns the exit code and what goes to stdout.
pub fn execute(cli: &Cli) -> (u8, String, Option<String>) {
    let settings = match Settings::resolve(&cli.global) {
        Ok(s) => s,
        Err(f) => return finish(Format::Json, None, Err(f)),
    };
    let result = dispatch(&cli.command, &settings);
    finish(settings.format, Some(&settings), result)
}

fn finish(format: Format, settings: Option<&Settings>, result: Result<Outcome, Failure>) -> (u8, String, Option<String>) {
    let (code, mut body, stderr) = match result {
        Ok(o) => {
            let line = o.reason.as_ref().map(|r| format!("gammak: exit {} [{r}]", o.code));
            let mut body = o.report;
            if let Value::Object(map) = &mut body {
                if map.contains_key("command") {
                    map.insert("status".into(), json!(if o.code == PASS { "pass" } else { "fail" }));
                    map.insert("exit_code".into(), json!(o.code));
                    map.insert("reason".into(), o.reason.map_or(Value::Null, Value::String));
                }
            }
            (o.code, body, line)
        }
        Err(f) => {
            let line = format!("gammak: exit {} [{}]: {}", f.code, f.reason, f.message);
            (f.code, f.to_json(), Some(line))
        }
    };
    if let (Some(s), Value::Object(map)) = (settings, &mut body) {
        if map.contains_key("command") || map.contains_key("status") {
            map.insert("config".into(), s.to_json());
        }
    }
    // structure and hom dumps are data files, so always JSON
    let dump = body.get("command").is_none() && body.get("status").is_none();
    let out = match format {
        _ if dump => serde_json::to_string_pretty(&body).expect("JSON values serialize") + "\n",
        Format::Json => serde_json::to_string_pretty(&body).expect("JSON values serialize") + "\n",
        Format::Text => text::render(&body),
    };
    (code, out, stderr)
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "command": command });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

fn dispatch(cmd: &Command, s: &Settings) -> Result<Outcome, Failure> {
    let caps = &s.caps;
    match cmd {
        Command::Builtin { kind } => {
            let kind: BuiltinKind = kind.parse().map_err(|e: gammak_core::Error| Failure::invalid("invalid-input", e.to_string()))?;
            Ok(Outcome::pass(structure_json(&make_builtin(kind, caps)?)))
        }
        Command::Validate { structure } => {
            let st = load_structure(structure, caps)?;
            let r = validate(&st, caps)?;
            let body = json!({
                "structure": report::structure_summary(&st),
                "valid": r.is_valid(),
                "violation_count": r.violations.len(),
                "violations": violations_json(&st, &r.violations),
            });
            Ok(Outcome::verdict(envelope("validate", body), r.is_valid(), INVALID_INPUT, "axiom-violation"))
        }
        Command::Construct { what } => construct(what, s),
        Command::K0 { structure } => {
            let st = load_valid_structure(structure, caps)?;
            let k = k0(&st, caps, s.mode)?;
            Ok(Outcome::pass(envelope("k0", report::k0(&k, s.mode))))
        }
        Command::K1 { structure, diagnostics } => {
            let st = load_valid_structure(structure, caps)?;
            let r = k1(&st, caps.k1_levels, caps, s.mode)?;
            let mut body = report::k1(&r, caps, s.mode);
            let mut holds = true;
            if *diagnostics {
                let (d, ok) = k1_diagnostics(&r.tower, caps.budget)?;
                body["diagnostics"] = d;
                holds = ok;
            }
            if let Some(n) = r.tower.truncated_at {
                body["partial"] = json!(true);
                return Ok(Outcome {
                    report: envelope("k1", body),
                    code: CAP_EXHAUSTED,
                    reason: Some(format!("budget-exhausted at level {n}")),
                });
            }
            Ok(Outcome::verdict(envelope("k1", body), holds, CHECK_FAILED, "relation-diagnostic-failed"))
        }
        Command::Euler { structure, complex } => {
            let st = load_valid_structure(structure, caps)?;
            let file: ComplexFile = read_json(complex)?;
            let c = file.into_complex(&st)?;
            let k = k0(&st, caps, s.mode)?;
            let chi = euler_characteristic(&c, &k)?;
            let terms: Vec<Value> = c
                .modules
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    Ok(json!({
                        "degree": c.lo + i as i64,
                        "module_size": m.size(),
                        "class": report::ints(&k0_class(m, &k)?),
                    }))
                })
                .collect::<Result<_, Failure>>()?;
            let body = json!({
                "structure": st.name(),
                "group": report::group(&k.group),
                "terms": terms,
                "chi": report::ints(&chi),
                "chi_is_zero": k.group.is_zero_elem(&chi),
                "k0_complete": k.complete,
            });
            Ok(Outcome::pass(envelope("euler", body)))
        }
        Command::Map { hom, source, target, k1: with_k1 } => {
            let (name, f) = load_hom(hom, source.as_deref(), target.as_deref(), caps)?;
            let violations = validate_hom(&f);
            if !violations.is_empty() {
                let body = json!({
                    "hom": name,
                    "valid": false,
                    "violations": violations.iter().map(hom_violation).collect::<Vec<_>>(),
                });
                return Ok(Outcome::verdict(envelope("map", body), false, INVALID_INPUT, "hom-violation"));
            }
            let ks = k0(&f.source, caps, s.mode)?;
            let kt = k0(&f.target, caps, s.mode)?;
            let r = base_change_k0(&f, &ks, &kt, caps, s.mode)?;
            let mut body = json!({
                "hom": name,
                "valid": true,
                "source": f.source.name(),
                "target": f.target.name(),
                "k0": {
                    "map": report::group_hom(&r.map),
                    "pushed_generators": r.pushed,
                    "relations_respected": r.relations_respected,
                    "well_defined": r.well_defined,
                    "source_complete": ks.complete,
                    "target_complete": kt.complete,
                },
            });
            let mut holds = r.relations_respected && r.well_defined;
            if *with_k1 {
                let ts = aut_tower(&f.source, caps.k1_levels, caps, s.mode)?;
                let tt = aut_tower(&f.target, caps.k1_levels, caps, s.mode)?;
                let r1 = base_change_k1(&f, &ts, &tt)?;
                holds &= r1.commutes;
                body["k1"] = json!({
                    "maps": r1.maps.iter().map(report::group_hom).collect::<Vec<_>>(),
                    "commutes_with_stabilization": r1.commutes,
                });
            }
            Ok(Outcome::verdict(envelope("map", body), holds, CHECK_FAILED, "functoriality-failed"))
        }
        Command::Check { suite } => check(suite, s),
    }
}

fn structure_json(s: &GammaSemiring) -> Value {
    serde_json::to_value(StructureFile::from_structure(s)).expect("structure serializes")
}

fn hom_violation(v: &HomViolation) -> Value {
    match v {
        HomViolation::Zero { image } => json!({ "law": "zero", "witness": { "image": image } }),
        HomViolation::Add { a, b } => json!({ "law": "additive", "witness": { "a": a, "b": b } }),
        HomViolation::Mu { t, g } => json!({ "law": "product", "witness": { "t": t, "g": g } }),
        HomViolation::Unit => json!({ "law": "unit", "witness": Value::Null }),
    }
}

fn k1_diagnostics(tower: &gammak_core::ktheory::AutTower, budget: u64) -> Result<(Value, bool), Failure> {
    let mut levels = Vec::new();
    let mut ok = true;
    for level in &tower.levels {
        let d = relation_diagnostics(level, budget)?;
        ok &= d.holds();
        levels.push(json!({
            "level": d.level,
            "automorphisms": d.group_order,
            "elementary": d.elementary,
            "nontrivial_elementary": d.nontrivial_elementary.iter().map(|&x| report::matrix(level.group.element(x))).collect::<Vec<_>>(),
            "product_failures": d.product_failures.len(),
            "pairs_checked": d.pairs_checked,
            "holds": d.holds(),
        }));
    }
    let block = block_triangular_diagnostic(tower)?.map(|b| {
        let level = tower.level(2).expect("level 2 exists when the diagnostic ran");
        json!({
            "checked": b.checked,
            "discrepancies": b.discrepancies.iter().map(|&x| report::matrix(level.group.element(x))).collect::<Vec<_>>(),
        })
    });
    Ok((json!({ "relations": levels, "block_triangular": block }), ok))
}

fn construct(what: &Construct, s: &Settings) -> Result<Outcome, Failure> {
    let caps = &s.caps;
    let out = match what {
        Construct::Product { left, right } => {
            structure_json(&product(&*load_valid_structure(left, caps)?, &*load_valid_structure(right, caps)?, caps)?)
        }
        Construct::Power { base, copies } => structure_json(&power(&*load_valid_structure(base, caps)?, *copies, caps)?),
        Construct::Matrix { base, m } => structure_json(&matrix_semiring(&*load_valid_structure(base, caps)?, *m, caps)?),
        Construct::Triangular { base, size } => {
            structure_json(&triangular_semiring(&*load_valid_structure(base, caps)?, *size, caps)?)
        }
        Construct::Projection { base, size } => {
            let tri = Arc::new(triangular_semiring(&*load_valid_structure(base, caps)?, *size, caps)?);
            let pi = diagonal_projection(&tri, caps)?;
            serde_json::to_value(HomFile::from_hom("π", &pi)).expect("hom serializes")
        }
        Construct::Inclusion { base, size } => {
            let tri = Arc::new(triangular_semiring(&*load_valid_structure(base, caps)?, *size, caps)?);
            let iota = diagonal_inclusion(&tri, caps)?;
            serde_json::to_value(HomFile::from_hom("ι", &iota)).expect("hom serializes")
        }
    };
    Ok(Outcome::pass(out))
}

fn default_additivity_bases() -> Vec<String> {
    vec!["modular(2)".into(), "boolean".into()]
}

fn check(suite: &Suite, s: &Settings) -> Result<Outcome, Failure> {
    let (caps, mode) = (&s.caps, s.mode);
    let (name, body, holds) = match suite {
        Suite::Triangular { base, size, skip_k1 } => {
            let b = load_valid_structure(base, caps)?;
            let r = check_triangular_theorem(&b, *size, caps, mode, !skip_k1)?;
            let body = json!({
                "base": r.base,
                "size": r.size,
                "k0_triangular": report::k0(&r.k0_triangular, mode),
                "k0_product": report::k0(&r.k0_product, mode),
                "k0_base": report::group(&r.k0_base.group),
                "expected": report::group(&r.expected),
                "groups_iso": r.groups_iso,
                "pi_star": {
                    "map": report::group_hom(&r.pi_star.map),
                    "pushed_generators": r.pi_star.pushed,
                    "well_defined": r.pi_star.well_defined,
                    "relations_respected": r.pi_star.relations_respected,
                },
                "pi_star_iso": r.pi_star_iso,
                "lifting": {
                    "checked": r.lifting.checked,
                    "lifted": r.lifting.lifted,
                    "failures": r.lifting.failures.iter().map(report::matrix).collect::<Vec<_>>(),
                },
                "k1": r.k1.as_ref().map(report::k1_comparison),
                "holds": r.holds,
            });
            ("triangular", body, r.holds)
        }
        Suite::MatrixMorita { base, m, skip_k1 } => {
            let b = load_valid_structure(base, caps)?;
            let r = check_matrix_morita(&b, *m, caps, mode, !skip_k1)?;
            let body = json!({
                "base": r.base,
                "m": r.m,
                "matrix_rank_cap": r.matrix_rank_cap,
                "base_rank_cap": r.m * r.matrix_rank_cap,
                "k0_matrix": report::k0(&r.k0_matrix, mode),
                "k0_base": report::k0(&r.k0_base, mode),
                "k0_iso": r.k0_iso,
                "k1": r.k1.as_ref().map(report::k1_comparison),
                "holds": r.holds,
            });
            ("matrix-morita", body, r.holds)
        }
        Suite::Product { left, right, skip_k1 } => {
            let a = load_valid_structure(left, caps)?;
            let b = load_valid_structure(right, caps)?;
            let r = check_product(&a, &b, caps, mode, !skip_k1)?;
            let levels: Vec<Value> = r
                .k1_levels
                .iter()
                .enumerate()
                .map(|(i, (x, y))| {
                    json!({
                        "level": i + 1,
                        "product": report::group(x),
                        "expected": report::group(y),
                        "iso": gammak_core::intlinalg::abelian_iso(x, y),
                    })
                })
                .collect();
            let body = json!({
                "left": r.left,
                "right": r.right,
                "k0_product": report::k0(&r.k0_product, mode),
                "k0_left": report::group(&r.k0_left.group),
                "k0_right": report::group(&r.k0_right.group),
                "expected": report::group(&r.expected),
                "k0_iso": r.k0_iso,
                "k1_levels": levels,
                "k1_iso": r.k1_iso,
                "holds": r.holds,
            });
            ("product", body, r.holds)
        }
        Suite::Additivity { base, trials } => {
            let bases = if base.is_empty() { default_additivity_bases() } else { base.clone() };
            let mut all = true;
            let mut per = Vec::new();
            for b in &bases {
                let st = load_valid_structure(b, caps)?;
                let k = k0(&st, caps, mode)?;
                let t = random_additivity_trials(&k, *trials, s.seed, caps)?;
                let (checked, failures) = contractible_zero(&k, caps, mode)?;
                let ok = t.holds() && failures.is_empty();
                all &= ok;
                per.push(json!({
                    "base": st.name(),
                    "trials": t.trials,
                    "passed": t.passed,
                    "twisted": t.twisted,
                    "failed_trials": t.failures,
                    "contractible_checked": checked,
                    "contractible_failures": failures,
                    "holds": ok,
                }));
            }
            ("additivity", json!({ "seed": s.seed, "bases": per, "holds": all }), all)
        }
        Suite::BaseChange { base, skip_k1 } => {
            let b = load_valid_structure(base, caps)?;
            let r = check_base_change(&b, caps, mode, !skip_k1)?;
            let body = json!({
                "base": r.base,
                "homs": r.homs.iter().map(|(n, ok, m)| json!({ "name": n, "ok": ok, "k0_map": report::group_hom(m) })).collect::<Vec<_>>(),
                "identities_hold": r.identities_hold,
                "composites": r.composites.iter().map(|c| json!({ "outer": c.outer, "inner": c.inner, "holds": c.holds })).collect::<Vec<_>>(),
                "pi_iota_identity": r.pi_iota_identity,
                "k1_holds": r.k1_holds,
                "holds": r.holds,
            });
            ("base-change", body, r.holds)
        }
    };
    let body = envelope("check", {
        let mut v = json!({ "suite": name });
        if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
            dst.extend(src);
        }
        v
    });
    Ok(Outcome::verdict(body, holds, CHECK_FAILED, "theorem-violation"))
}

/// χ of every contractible two-term complex, plus their pairwise split
/// assemblies; returns the count checked and the indices with χ ≠ 0.
fn contractible_zero(
    k: &gammak_core::ktheory::K0Result,
    caps: &gammak_core::Caps,
    mode: gammak_core::ModuleMode,
) -> Result<(usize, Vec<usize>), Failure> {
    let cs: Vec<BoundedComplex> = contractible_complexes(k, caps, mode)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for c in &cs {
        if !k.group.is_zero_elem(&euler_characteristic(c, k)?) {
            failures.push(checked);
        }
        checked += 1;
    }
    for a in &cs {
        for c in &cs {
            if a.lo != c.lo || a.modules.iter().zip(&c.modules).any(|(x, y)| x.size() * y.size() > caps.iso) {
                continue;
            }
            let r = check_additivity(a, c, &zero_twist(a, c)?, k, caps)?;
            if !(r.holds && k.group.is_zero_elem(&r.chi_b)) {
                failures.push(checked);
            }
            checked += 1;
        }
    }
    Ok((checked, failures))
}
