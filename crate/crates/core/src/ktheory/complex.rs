use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::monoid::{k0_class, K0Result};
use crate::algebra::GammaSemiring;
use crate::caps::{Caps, ModuleMode};
use crate::semimodule::{direct_sum, free_module, matrix_map_between, IsoClass, Matrix, ModuleMap, Semimodule};
use crate::{Error, Result};

/// `P^lo → P^{lo+1} → … → P^hi` with `d ∘ d = 0`.
#[derive(Debug, Clone)]
pub struct BoundedComplex {
    pub base: Arc<GammaSemiring>,
    pub lo: i64,
    pub modules: Vec<Arc<Semimodule>>,
    /// `differentials[i]: modules[i] → modules[i + 1]`
    pub differentials: Vec<ModuleMap>,
}

fn same(a: &Arc<Semimodule>, b: &Arc<Semimodule>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl BoundedComplex {
    pub fn new(
        base: Arc<GammaSemiring>,
        lo: i64,
        modules: Vec<Arc<Semimodule>>,
        differentials: Vec<ModuleMap>,
    ) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::InvalidComplex("a complex needs at least one module".into()));
        }
        if differentials.len() + 1 != modules.len() {
            return Err(Error::InvalidComplex(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len() - 1,
                differentials.len()
            )));
        }
        for (i, m) in modules.iter().enumerate() {
            if !(Arc::ptr_eq(m.base(), &base) || **m.base() == *base) {
                return Err(Error::InvalidComplex(format!("module in degree {} has another base", lo + i as i64)));
            }
        }
        for (i, d) in differentials.iter().enumerate() {
            let deg = lo + i as i64;
            if !same(&d.domain, &modules[i]) || !same(&d.codomain, &modules[i + 1]) {
                return Err(Error::InvalidComplex(format!("differential in degree {deg} has the wrong ends")));
            }
            if !(d.additive && d.right_equivariant) {
                return Err(Error::InvalidComplex(format!("differential in degree {deg} is not a module map")));
            }
        }
        for i in 1..differentials.len() {
            let (d0, d1) = (&differentials[i - 1], &differentials[i]);
            if let Some(x) = (0..d0.domain.size()).find(|&x| d1.apply(d0.apply(x)) != 0) {
                return Err(Error::InvalidComplex(format!(
                    "d∘d ≠ 0 in degree {}: element {x} maps to {}",
                    lo + i as i64 - 1,
                    d1.apply(d0.apply(x))
                )));
            }
        }
        Ok(BoundedComplex {
            base,
            lo,
            modules,
            differentials,
        })
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    /// `P` in degree `deg`.
    pub fn concentrated(p: Arc<Semimodule>, deg: i64) -> Self {
        BoundedComplex {
            base: p.base().clone(),
            lo: deg,
            modules: vec![p],
            differentials: Vec::new(),
        }
    }

    /// The same complex one degree up.
    pub fn shifted(&self) -> Self {
        let mut c = self.clone();
        c.lo += 1;
        c
    }
}

/// `χ = Σ (−1)^i [P^i]`
pub fn euler_characteristic(c: &BoundedComplex, k: &K0Result) -> Result<Vec<BigInt>> {
    let mut acc = k.group.zero();
    for (i, p) in c.modules.iter().enumerate() {
        let class = k0_class(p, k)?;
        let class = if (c.lo + i as i64).rem_euclid(2) == 0 {
            class
        } else {
            k.group.neg(&class)
        };
        acc = k.group.add(&acc, &class);
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct AdditivityReport {
    pub chi_a: Vec<BigInt>,
    pub chi_b: Vec<BigInt>,
    pub chi_c: Vec<BigInt>,
    /// The inclusion, projection, section and retraction all check out.
    pub split_verified: bool,
    pub twisted: bool,
    pub holds: bool,
}

/// `B^i = A^i ⊕ C^i` with `d_B(a, c) = (d_A a + h c, d_C c)`. Both complexes
/// must span the same degrees; `twist[i]: C^i → A^{i+1}`.
pub fn assemble(a: &BoundedComplex, c: &BoundedComplex, twist: &[ModuleMap], caps: &Caps) -> Result<BoundedComplex> {
    if a.lo != c.lo || a.modules.len() != c.modules.len() {
        return Err(Error::InvalidComplex("complexes span different degrees".into()));
    }
    if twist.len() != a.differentials.len() {
        return Err(Error::InvalidComplex(format!(
            "need {} twist maps, got {}",
            a.differentials.len(),
            twist.len()
        )));
    }
    let modules: Vec<Arc<Semimodule>> = a
        .modules
        .iter()
        .zip(&c.modules)
        .map(|(x, y)| direct_sum(x, y, caps).map(Arc::new))
        .collect::<Result<_>>()?;
    let mut differentials = Vec::new();
    for (i, h) in twist.iter().enumerate() {
        if !same(&h.domain, &c.modules[i]) || !same(&h.codomain, &a.modules[i + 1]) {
            return Err(Error::InvalidComplex(format!("twist in degree {} has the wrong ends", a.lo + i as i64)));
        }
        let (da, dc) = (&a.differentials[i], &c.differentials[i]);
        let (nc, nc1) = (c.modules[i].size(), c.modules[i + 1].size());
        let a1 = &a.modules[i + 1];
        let table = (0..modules[i].size())
            .map(|z| {
                let (x, y) = (z / nc, z % nc);
                a1.add(da.apply(x), h.apply(y)) * nc1 + dc.apply(y)
            })
            .collect();
        differentials.push(ModuleMap::new(modules[i].clone(), modules[i + 1].clone(), table)?);
    }
    BoundedComplex::new(a.base.clone(), a.lo, modules, differentials)
}

/// Assembles B from A, C and the twist, verifies the degreewise split
/// sequence `A → B → C`, and compares χ(B) with χ(A) + χ(C).
pub fn check_additivity(
    a: &BoundedComplex,
    c: &BoundedComplex,
    twist: &[ModuleMap],
    k: &K0Result,
    caps: &Caps,
) -> Result<AdditivityReport> {
    let b = assemble(a, c, twist, caps)?;
    let mut split = true;
    for (i, bm) in b.modules.iter().enumerate() {
        let nc = c.modules[i].size();
        let incl = ModuleMap::new(a.modules[i].clone(), bm.clone(), (0..a.modules[i].size()).map(|x| x * nc).collect())?;
        let proj = ModuleMap::new(bm.clone(), c.modules[i].clone(), (0..bm.size()).map(|z| z % nc).collect())?;
        let sect = ModuleMap::new(c.modules[i].clone(), bm.clone(), (0..nc).collect())?;
        let retr = ModuleMap::new(bm.clone(), a.modules[i].clone(), (0..bm.size()).map(|z| z / nc).collect())?;
        split &= [&incl, &proj, &sect, &retr].iter().all(|m| m.additive && m.right_equivariant);
        split &= proj.after(&incl)?.table.iter().all(|&y| y == 0);
        split &= proj.after(&sect)?.is_identity();
        split &= retr.after(&incl)?.is_identity();
        if i + 1 < b.modules.len() {
            // inclusion and projection are chain maps
            let nc1 = c.modules[i + 1].size();
            split &= (0..a.modules[i].size()).all(|x| b.differentials[i].apply(x * nc) == a.differentials[i].apply(x) * nc1);
            split &= (0..bm.size()).all(|z| b.differentials[i].apply(z) % nc1 == c.differentials[i].apply(z % nc));
        }
    }
    let chi_a = euler_characteristic(a, k)?;
    let chi_b = euler_characteristic(&b, k)?;
    let chi_c = euler_characteristic(c, k)?;
    let holds = split && chi_b == k.group.add(&chi_a, &chi_c);
    Ok(AdditivityReport {
        chi_a,
        chi_b,
        chi_c,
        split_verified: split,
        twisted: twist.iter().any(|h| h.table.iter().any(|&y| y != 0)),
        holds,
    })
}

/// Zero maps for [`assemble`].
pub fn zero_twist(a: &BoundedComplex, c: &BoundedComplex) -> Result<Vec<ModuleMap>> {
    (0..a.differentials.len())
        .map(|i| {
            ModuleMap::new(
                c.modules[i].clone(),
                a.modules[i + 1].clone(),
                vec![0; c.modules[i].size()],
            )
        })
        .collect()
}

/// `x ↦ e′ ∘ m ∘ x` between two image modules; always a module map.
fn random_map(rng: &mut ChaCha8Rng, base: &GammaSemiring, from: &IsoClass, to: &IsoClass) -> Result<ModuleMap> {
    let (k_from, k_to) = (from.representative.idempotent.size(), to.representative.idempotent.size());
    let mut m = Matrix::zero(k_to, k_from);
    for r in 0..k_to {
        for col in 0..k_from {
            // zero half the time so that d∘d = 0 is reachable
            if rng.gen_bool(0.5) {
                m.set(r, col, rng.gen_range(0..base.card()));
            }
        }
    }
    let e = to.representative.idempotent.matrix();
    let em = crate::semimodule::mat_mul(base, e, &m)?;
    matrix_map_between(base, &em, from.module().clone(), to.module().clone())
}

/// A random complex of length `len` from small classified projectives.
fn random_complex(
    rng: &mut ChaCha8Rng,
    k: &K0Result,
    pool: &[usize],
    len: usize,
    attempts: usize,
) -> Result<Option<(BoundedComplex, Vec<usize>)>> {
    let cl = &k.monoid.classification;
    let base = &cl.base;
    for _ in 0..attempts {
        let picks: Vec<usize> = (0..len).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
        let mut ds = Vec::new();
        for w in picks.windows(2) {
            ds.push(random_map(rng, base, &cl.classes[w[0]], &cl.classes[w[1]])?);
        }
        let modules = picks.iter().map(|&p| cl.classes[p].module().clone()).collect();
        match BoundedComplex::new(base.clone(), 0, modules, ds) {
            Ok(c) => return Ok(Some((c, picks))),
            Err(Error::InvalidComplex(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrialSummary {
    pub trials: usize,
    pub passed: usize,
    /// Trials whose twist was nonzero.
    pub twisted: usize,
    pub failures: Vec<usize>,
}

impl TrialSummary {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.passed == self.trials
    }
}

/// Seeded random split assemblies. Twists are drawn by rejection sampling
/// and fall back to zero when no valid one turns up.
pub fn random_additivity_trials(k: &K0Result, trials: usize, seed: u64, caps: &Caps) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cl = &k.monoid.classification;
    // small projectives keep every B^i within the iso cap
    let pool: Vec<usize> = (0..cl.classes.len())
        .filter(|&c| cl.classes[c].size() * cl.classes[c].size() <= caps.iso)
        .collect();
    let mut summary = TrialSummary {
        trials,
        ..TrialSummary::default()
    };
    for t in 0..trials {
        let len = rng.gen_range(1..=3);
        let (Some((a, pa)), Some((c, pc))) = (
            random_complex(&mut rng, k, &pool, len, 64)?,
            random_complex(&mut rng, k, &pool, len, 64)?,
        ) else {
            return Err(Error::BudgetExhausted {
                what: "random complex generation",
                limit: 64,
                found: t,
            });
        };
        let mut twist = zero_twist(&a, &c)?;
        for _ in 0..64 {
            let candidate: Vec<ModuleMap> = (0..a.differentials.len())
                .map(|i| random_map(&mut rng, &cl.base, &cl.classes[pc[i]], &cl.classes[pa[i + 1]]))
                .collect::<Result<_>>()?;
            match assemble(&a, &c, &candidate, caps) {
                Ok(_) => {
                    twist = candidate;
                    break;
                }
                Err(Error::InvalidComplex(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        let report = check_additivity(&a, &c, &twist, k, caps)?;
        if report.twisted {
            summary.twisted += 1;
        }
        if report.holds {
            summary.passed += 1;
        } else {
            summary.failures.push(t);
        }
    }
    Ok(summary)
}

/// `0 → P →φ Q → 0` for every classified P, with φ an isomorphism onto a
/// differently presented copy of P; each must have χ = 0.
pub fn contractible_complexes(k: &K0Result, caps: &Caps, mode: ModuleMode) -> Result<Vec<BoundedComplex>> {
    let cl = &k.monoid.classification;
    let mut out = Vec::new();
    for class in &cl.classes {
        let p = class.module().clone();
        out.push(BoundedComplex::new(cl.base.clone(), 0, vec![p.clone(), p.clone()], vec![ModuleMap::identity(p.clone())])?);
        // P → P ⊕ 0 through the obvious isomorphism
        let zero = Arc::new(free_module(&cl.base, 0, caps, mode)?);
        let q = Arc::new(direct_sum(&p, &zero, caps)?);
        let phi = ModuleMap::new(p.clone(), q.clone(), (0..p.size()).collect())?;
        out.push(BoundedComplex::new(cl.base.clone(), 1, vec![p, q], vec![phi])?);
    }
    Ok(out)
}
