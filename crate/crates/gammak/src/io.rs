//! JSON file formats for structures, semimodules, homomorphisms and complexes.

use std::path::Path;
use std::sync::Arc;

use gammak_core::algebra::{make_builtin, validate, Axiom, Violation};
use gammak_core::ktheory::BoundedComplex;
use gammak_core::semimodule::{ModuleMap, Provenance, Semimodule};
use gammak_core::{BuiltinKind, Caps, GammaHomomorphism, GammaSemiring, Unit};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::exit::Failure;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub name: String,
    pub arity: usize,
    pub t_elems: Vec<String>,
    pub t_add: Vec<Vec<usize>>,
    pub g_elems: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_op: Option<Vec<Vec<usize>>>,
    /// Keys are comma-joined `t₁,…,tₙ,γ₁,…,γₙ₋₁` index tuples.
    pub mu: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<(usize, Vec<usize>)>,
}

fn square(name: &str, rows: &[Vec<usize>], n: usize) -> Result<Vec<usize>, Failure> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Failure::parse(format!("{name} must be a {n}×{n} array")));
    }
    Ok(rows.concat())
}

fn rows_of(flat: &[usize], n: usize) -> Vec<Vec<usize>> {
    flat.chunks(n.max(1)).map(<[usize]>::to_vec).collect()
}

/// Mixed-radix digits of `idx`, most significant first.
fn digits(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = idx % r;
        idx /= r;
    }
    out
}

fn mu_radices(arity: usize, nt: usize, ng: usize) -> Vec<usize> {
    let mut r = vec![nt; arity];
    r.extend(std::iter::repeat(ng).take(arity - 1));
    r
}

impl StructureFile {
    pub fn from_structure(s: &GammaSemiring) -> Self {
        let (nt, ng) = (s.card(), s.gamma_card());
        let radices = mu_radices(s.arity(), nt, ng);
        let mut mu = Map::new();
        for (i, &v) in s.mu_table().iter().enumerate() {
            let key = digits(i, &radices)
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",");
            mu.insert(key, json!(v));
        }
        StructureFile {
            name: s.name().to_string(),
            arity: s.arity(),
            t_elems: s.t_elems().to_vec(),
            t_add: rows_of(s.t_add_table(), nt),
            g_elems: s.g_elems().to_vec(),
            g_op: s.g_op_table().map(|t| rows_of(t, ng)),
            mu,
            unit: s.unit().map(|u| (u.one, u.delta.clone())),
        }
    }

    pub fn into_structure(self) -> Result<GammaSemiring, Failure> {
        let (nt, ng) = (self.t_elems.len(), self.g_elems.len());
        if self.arity < 2 {
            return Err(Failure::parse(format!("arity must be >= 2, got {}", self.arity)));
        }
        if nt == 0 || ng == 0 {
            return Err(Failure::parse("t_elems and g_elems must be nonempty"));
        }
        let t_add = square("t_add", &self.t_add, nt)?;
        let g_op = self.g_op.as_ref().map(|g| square("g_op", g, ng)).transpose()?;
        let radices = mu_radices(self.arity, nt, ng);
        let total: usize = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Failure::parse("mu table too large"))?;
        let mut mu: Vec<Option<usize>> = vec![None; total];
        for (key, v) in &self.mu {
            let idx: Vec<usize> = key
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::parse(format!("mu key `{key}` is not a comma-joined index tuple")))?;
            if idx.len() != radices.len() || idx.iter().zip(&radices).any(|(&i, &r)| i >= r) {
                return Err(Failure::parse(format!("mu key `{key}` out of range")));
            }
            let flat = idx.iter().zip(&radices).fold(0, |acc, (&i, &r)| acc * r + i);
            let val = v
                .as_u64()
                .ok_or_else(|| Failure::parse(format!("mu[{key}] is not an index")))?;
            if mu[flat].replace(val as usize).is_some() {
                return Err(Failure::parse(format!("mu key `{key}` given twice")));
            }
        }
        let mu: Vec<usize> = mu
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    let key: Vec<String> = digits(i, &radices).iter().map(usize::to_string).collect();
                    Failure::parse(format!("mu entry `{}` missing", key.join(",")))
                })
            })
            .collect::<Result<_, _>>()?;
        let unit = self.unit.map(|(one, delta)| Unit { one, delta });
        GammaSemiring::from_tables(self.name, self.arity, self.t_elems, t_add, self.g_elems, g_op, mu, unit)
            .map_err(|e| Failure::parse(e.to_string()))
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

/// A built-in name such as `modular(3)`, or a path to a structure file.
pub fn load_structure(reference: &str, caps: &Caps) -> Result<Arc<GammaSemiring>, Failure> {
    let path = Path::new(reference);
    if !path.exists() {
        if let Ok(kind) = reference.parse::<BuiltinKind>() {
            return Ok(Arc::new(make_builtin(kind, caps)?));
        }
        return Err(Failure::parse(format!("`{reference}` is neither a built-in nor a readable file")));
    }
    let file: StructureFile = read_json(path)?;
    Ok(Arc::new(file.into_structure()?))
}

/// Loads and validates; axiom failures are invalid input.
pub fn load_valid_structure(reference: &str, caps: &Caps) -> Result<Arc<GammaSemiring>, Failure> {
    let s = load_structure(reference, caps)?;
    let report = validate(&s, caps)?;
    if !report.is_valid() {
        return Err(Failure::invalid(
            "axiom-violation",
            format!("`{}` fails {} axiom instance(s)", s.name(), report.violations.len()),
        )
        .with_details(json!({ "violations": violations_json(&s, &report.violations) })));
    }
    Ok(s)
}

pub fn axiom_name(a: Axiom) -> String {
    match a {
        Axiom::AddCommutative => "add-commutative".into(),
        Axiom::AddAssociative => "add-associative".into(),
        Axiom::AddIdentity => "add-identity".into(),
        Axiom::GammaCommutative => "gamma-commutative".into(),
        Axiom::GammaAssociative => "gamma-associative".into(),
        Axiom::MuAdditive { slot } => format!("mu-additive[{slot}]"),
        Axiom::ZeroAbsorption { slot } => format!("zero-absorption[{slot}]"),
        Axiom::MuAssociative { slot } => format!("mu-associative[{slot}]"),
        Axiom::GammaAdditive { slot } => format!("gamma-additive[{slot}]"),
        Axiom::Unit { slot } => format!("unit[{slot}]"),
    }
}

pub fn violations_json(s: &GammaSemiring, vs: &[Violation]) -> Value {
    Value::Array(
        vs.iter()
            .map(|v| {
                let label = |i: &usize| s.t_elems().get(*i).cloned().unwrap_or_else(|| i.to_string());
                let glabel = |i: &usize| s.g_elems().get(*i).cloned().unwrap_or_else(|| i.to_string());
                json!({
                    "axiom": axiom_name(v.axiom),
                    "witness": {
                        "t": v.t,
                        "g": v.g,
                        "t_labels": v.t.iter().map(label).collect::<Vec<_>>(),
                        "g_labels": v.g.iter().map(glabel).collect::<Vec<_>>(),
                    }
                })
            })
            .collect(),
    )
}

/// Semimodule container: tables indexed like the structure's, with
/// `act[x][γ][t] = x γ t` and the optional `left[x][γ][t] = t γ x`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub act: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<Vec<Vec<usize>>>>,
    /// Informational on output, ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

fn cube(name: &str, t: &[Vec<Vec<usize>>], a: usize, b: usize, c: usize) -> Result<Vec<usize>, Failure> {
    if t.len() != a || t.iter().any(|r| r.len() != b || r.iter().any(|s| s.len() != c)) {
        return Err(Failure::parse(format!("{name} must be a {a}×{b}×{c} array")));
    }
    Ok(t.iter().flatten().flatten().copied().collect())
}

pub fn provenance_label(p: &Provenance) -> String {
    match p {
        Provenance::Free(k) => format!("free({k})"),
        Provenance::Image(e) => format!("image({:?})", e.matrix().entries()),
        Provenance::DirectSum(a, b) => {
            format!("sum({}, {})", provenance_label(a.provenance()), provenance_label(b.provenance()))
        }
        Provenance::PushedForward { hom, .. } => format!("pushed({hom})"),
        Provenance::Table => "table".into(),
    }
}

impl ModuleFile {
    pub fn from_module(m: &Semimodule) -> Self {
        let (n, nt, ng) = (m.size(), m.base().card(), m.base().gamma_card());
        let grid = |f: &dyn Fn(usize, usize, usize) -> usize| {
            (0..n)
                .map(|x| (0..ng).map(|g| (0..nt).map(|t| f(x, g, t)).collect()).collect())
                .collect()
        };
        ModuleFile {
            size: n,
            add: (0..n).map(|x| (0..n).map(|y| m.add(x, y)).collect()).collect(),
            act: grid(&|x, g, t| m.act(x, g, t)),
            left: m.has_left_action().then(|| grid(&|x, g, t| m.left_act(t, g, x).unwrap())),
            provenance: Some(provenance_label(m.provenance())),
        }
    }

    pub fn into_module(self, base: &Arc<GammaSemiring>) -> Result<Semimodule, Failure> {
        let (n, nt, ng) = (self.size, base.card(), base.gamma_card());
        let add = square("add", &self.add, n)?;
        let act = cube("act", &self.act, n, ng, nt)?;
        let left = self.left.as_ref().map(|l| cube("left", l, n, ng, nt)).transpose()?;
        let m = Semimodule::from_tables(base.clone(), n, add, act, left, Provenance::Table)
            .map_err(|e| Failure::parse(e.to_string()))?;
        let bad = m.axiom_violations();
        if !bad.is_empty() {
            return Err(Failure::invalid("module-axiom-violation", "module tables violate the semimodule axioms")
                .with_details(json!({ "violations": bad })));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub f_t: Vec<usize>,
    pub f_g: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<StructureFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<StructureFile>,
}

impl HomFile {
    pub fn from_hom(name: &str, f: &GammaHomomorphism) -> Self {
        HomFile {
            name: Some(name.into()),
            f_t: f.f_t.clone(),
            f_g: f.f_g.clone(),
            source: Some(StructureFile::from_structure(&f.source)),
            target: Some(StructureFile::from_structure(&f.target)),
        }
    }
}

/// Differentials go from degree `lo + i` to `lo + i + 1`; `table[x]` is the
/// image of element `x`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub lo: i64,
    pub modules: Vec<ModuleFile>,
    pub differentials: Vec<Vec<usize>>,
}

impl ComplexFile {
    pub fn from_complex(c: &BoundedComplex) -> Self {
        ComplexFile {
            lo: c.lo,
            modules: c.modules.iter().map(|m| ModuleFile::from_module(m)).collect(),
            differentials: c
                .differentials
                .iter()
                .map(|d| (0..d.domain.size()).map(|x| d.apply(x)).collect())
                .collect(),
        }
    }

    pub fn into_complex(self, base: &Arc<GammaSemiring>) -> Result<BoundedComplex, Failure> {
        let modules: Vec<Arc<Semimodule>> = self
            .modules
            .into_iter()
            .map(|m| m.into_module(base).map(Arc::new))
            .collect::<Result<_, _>>()?;
        if self.differentials.len() + 1 != modules.len() {
            return Err(Failure::parse(format!(
                "{} modules need {} differentials",
                modules.len(),
                modules.len().saturating_sub(1)
            )));
        }
        let mut ds = Vec::new();
        for (i, table) in self.differentials.into_iter().enumerate() {
            let map = ModuleMap::new(modules[i].clone(), modules[i + 1].clone(), table)
                .map_err(|e| Failure::parse(format!("differential {i}: {e}")))?;
            ds.push(map);
        }
        Ok(BoundedComplex::new(base.clone(), self.lo, modules, ds)?)
    }
}

/// Reads a hom file; explicit `source`/`target` references win over the
/// embedded structures.
pub fn load_hom(
    path: &Path,
    source: Option<&str>,
    target: Option<&str>,
    caps: &Caps,
) -> Result<(String, GammaHomomorphism), Failure> {
    let file: HomFile = read_json(path)?;
    let end = |r: Option<&str>, embedded: Option<StructureFile>, which: &str| -> Result<Arc<GammaSemiring>, Failure> {
        match (r, embedded) {
            (Some(r), _) => load_valid_structure(r, caps),
            (None, Some(s)) => {
                let s = Arc::new(s.into_structure()?);
                let report = validate(&s, caps)?;
                if !report.is_valid() {
                    return Err(Failure::invalid("axiom-violation", format!("embedded {which} fails validation")));
                }
                Ok(s)
            }
            (None, None) => Err(Failure::parse(format!("no {which} structure given"))),
        }
    };
    let src = end(source, file.source, "source")?;
    let tgt = end(target, file.target, "target")?;
    let name = file.name.unwrap_or_else(|| path.display().to_string());
    let f = GammaHomomorphism::new(src, tgt, file.f_t, file.f_g).map_err(|e| Failure::parse(e.to_string()))?;
    Ok((name, f))
}

