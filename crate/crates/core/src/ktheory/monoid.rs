use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::GammaSemiring;
use crate::caps::{Caps, ModuleMode};
use crate::intlinalg::{group_from_presentation, FgAbelianGroup, IntMatrix, Presentation};
use crate::semimodule::{
    classify_projectives, direct_sum, is_isomorphic, Classification, Fingerprint, ModuleMap, Provenance,
    Semimodule,
};
use crate::{Error, Result};

/// `lhs ≅ rhs` as multiplicity vectors over the generators.
#[derive(Debug, Clone)]
pub struct Relation {
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
    pub witness: ModuleMap,
}

/// Iso classes of projectives under ⊕, presented by indecomposable
/// generators and observed isomorphisms between sums of them.
#[derive(Debug, Clone)]
pub struct IsoClassMonoid {
    pub classification: Classification,
    /// Class ids of the generators.
    pub generators: Vec<usize>,
    pub relations: Vec<Relation>,
    /// A decomposition of every class into generators.
    pub class_vectors: Vec<Vec<u64>>,
    pub rank_cap: usize,
}

impl IsoClassMonoid {
    pub fn base(&self) -> &Arc<GammaSemiring> {
        &self.classification.base
    }

    pub fn generator_module(&self, i: usize) -> &Arc<Semimodule> {
        self.classification.classes[self.generators[i]].module()
    }

    pub fn relation_matrix(&self) -> IntMatrix {
        let g = self.generators.len();
        let mut m = IntMatrix::zeros(0, g);
        for r in &self.relations {
            let row: Vec<BigInt> = (0..g)
                .map(|i| BigInt::from(r.lhs[i]) - BigInt::from(r.rhs[i]))
                .collect();
            m.push_row(&row);
        }
        m
    }

    /// Data that two windows must share to count as the same presentation.
    fn shape(&self) -> (Vec<Fingerprint>, Vec<(Vec<u64>, Vec<u64>)>) {
        (
            (0..self.generators.len())
                .map(|i| self.classification.classes[self.generators[i]].fingerprint.clone())
                .collect(),
            self.relations.iter().map(|r| (r.lhs.clone(), r.rhs.clone())).collect(),
        )
    }
}

fn sum_module(gens: &[Arc<Semimodule>], v: &[u64], zero: &Arc<Semimodule>, caps: &Caps) -> Result<Arc<Semimodule>> {
    let mut acc: Option<Arc<Semimodule>> = None;
    for (g, &mult) in gens.iter().zip(v) {
        for _ in 0..mult {
            acc = Some(match acc {
                None => g.clone(),
                Some(a) => Arc::new(direct_sum(&a, g, caps)?),
            });
        }
    }
    Ok(acc.unwrap_or_else(|| zero.clone()))
}

/// Multiplicity vectors whose sums have at most `limit` elements, in
/// lexicographic order.
fn bounded_vectors(sizes: &[usize], limit: usize) -> Vec<Vec<u64>> {
    fn go(sizes: &[usize], i: usize, room: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == sizes.len() {
            out.push(cur.clone());
            return;
        }
        let mut r = room;
        let mut m = 0;
        loop {
            cur[i] = m;
            go(sizes, i + 1, r, cur, out);
            if r / sizes[i] == 0 || sizes[i] < 2 {
                break;
            }
            r /= sizes[i];
            m += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; sizes.len()];
    go(sizes, 0, limit, &mut cur, &mut out);
    out
}

pub fn build_monoid(base: &Arc<GammaSemiring>, rank_cap: usize, caps: &Caps, mode: ModuleMode) -> Result<IsoClassMonoid> {
    caps.check_carrier("K-theory base carrier", base.card() as u64)?;
    let classification = classify_projectives(base, rank_cap, caps, mode)?;
    let classes = &classification.classes;
    let generators = classification.indecomposables();
    let g = generators.len();

    let mut class_vectors: Vec<Option<Vec<u64>>> = vec![None; classes.len()];
    let mut by_size: Vec<usize> = (0..classes.len()).collect();
    by_size.sort_by_key(|&c| (classes[c].size(), c));
    for c in by_size {
        let v = if classes[c].is_zero() {
            vec![0; g]
        } else if let Some(i) = generators.iter().position(|&x| x == c) {
            let mut v = vec![0; g];
            v[i] = 1;
            v
        } else {
            // factors are strictly smaller, so already done
            let (a, b) = classes[c].decompositions[0];
            let (va, vb) = (class_vectors[a].as_ref().unwrap(), class_vectors[b].as_ref().unwrap());
            va.iter().zip(vb).map(|(x, y)| x + y).collect()
        };
        class_vectors[c] = Some(v);
    }
    let class_vectors: Vec<Vec<u64>> = class_vectors.into_iter().map(Option::unwrap).collect();

    let gen_modules: Vec<Arc<Semimodule>> = generators.iter().map(|&c| classes[c].module().clone()).collect();
    let sizes: Vec<usize> = gen_modules.iter().map(|m| m.size()).collect();
    let zero = classes[classification.zero_class()].module().clone();
    let mut relations = Vec::new();
    // sums seen so far, grouped by fingerprint: (vector, module) of each iso class
    let mut seen: BTreeMap<Fingerprint, Vec<(Vec<u64>, Arc<Semimodule>)>> = BTreeMap::new();
    for v in bounded_vectors(&sizes, caps.iso) {
        let m = sum_module(&gen_modules, &v, &zero, caps)?;
        let bucket = seen.entry(m.fingerprint(mode)).or_default();
        let mut matched = false;
        for (w, other) in bucket.iter() {
            if let Some(witness) = is_isomorphic(&m, other, caps, mode)? {
                relations.push(Relation {
                    lhs: v.clone(),
                    rhs: w.clone(),
                    witness,
                });
                matched = true;
                break;
            }
        }
        if !matched {
            bucket.push((v, m));
        }
    }
    Ok(IsoClassMonoid {
        classification,
        generators,
        relations,
        class_vectors,
        rank_cap,
    })
}

/// Outcome of recomputing the presentation one rank higher.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Probe {
    /// Same presentation at `rank_cap + 1`.
    Unchanged,
    Changed,
    /// The larger window could not be computed.
    Unavailable(String),
    NotRun,
}

#[derive(Debug, Clone)]
pub struct K0Result {
    pub group: FgAbelianGroup,
    /// `[P]` in canonical coordinates for each monoid generator.
    pub generator_images: Vec<Vec<BigInt>>,
    pub rank_cap: usize,
    pub complete: bool,
    pub probe: Probe,
    pub monoid: IsoClassMonoid,
    pub presentation: Presentation,
    pub caps: Caps,
}

impl K0Result {
    pub fn base(&self) -> &Arc<GammaSemiring> {
        self.monoid.base()
    }

    /// Class of a multiplicity vector over the generators.
    pub fn project(&self, v: &[u64]) -> Vec<BigInt> {
        let x: Vec<BigInt> = v.iter().map(|&m| BigInt::from(m)).collect();
        self.presentation.project(&x)
    }

    pub fn project_signed(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.presentation.project(v)
    }
}

pub fn grothendieck_group(m: IsoClassMonoid, caps: &Caps) -> K0Result {
    let g = m.generators.len();
    let presentation = group_from_presentation(g, &m.relation_matrix());
    let generator_images = (0..g)
        .map(|i| {
            let mut e = vec![BigInt::zero(); g];
            e[i] = BigInt::from(1);
            presentation.project(&e)
        })
        .collect();
    K0Result {
        group: presentation.group.clone(),
        generator_images,
        rank_cap: m.rank_cap,
        complete: false,
        probe: Probe::NotRun,
        monoid: m,
        presentation,
        caps: *caps,
    }
}

/// K₀ at `caps.rank`, with the completeness probe at `caps.rank + 1`.
pub fn k0(base: &Arc<GammaSemiring>, caps: &Caps, mode: ModuleMode) -> Result<K0Result> {
    k0_at(base, caps.rank, caps, mode, true)
}

pub fn k0_at(base: &Arc<GammaSemiring>, rank_cap: usize, caps: &Caps, mode: ModuleMode, probe: bool) -> Result<K0Result> {
    let mut r = grothendieck_group(build_monoid(base, rank_cap, caps, mode)?, caps);
    if probe {
        r.probe = match build_monoid(base, rank_cap + 1, caps, mode) {
            Ok(bigger) if bigger.shape() == r.monoid.shape() => Probe::Unchanged,
            Ok(_) => Probe::Changed,
            Err(e) if e.is_limit() => Probe::Unavailable(e.to_string()),
            Err(e) => return Err(e),
        };
        r.complete = r.probe == Probe::Unchanged;
    }
    Ok(r)
}

/// Multiplicity vector of `p` over the generators: by classification, or
/// through its direct-sum provenance.
pub fn k0_vector(p: &Arc<Semimodule>, k: &K0Result) -> Result<Vec<u64>> {
    let cl = &k.monoid.classification;
    if !(Arc::ptr_eq(p.base(), &cl.base) || **p.base() == *cl.base) {
        return Err(Error::Mismatch("module and K₀ over different bases".into()));
    }
    if p.size() <= k.caps.iso {
        if let Some((c, _)) = cl.find(p, &k.caps)? {
            return Ok(k.monoid.class_vectors[c].clone());
        }
    }
    if let Provenance::DirectSum(a, b) = p.provenance() {
        let (va, vb) = (k0_vector(a, k)?, k0_vector(b, k)?);
        return Ok(va.iter().zip(&vb).map(|(x, y)| x + y).collect());
    }
    Err(Error::Unclassified(format!(
        "{}-element module over `{}` (rank cap {}, iso cap {})",
        p.size(),
        cl.base.name(),
        k.rank_cap,
        k.caps.iso
    )))
}

/// `[P]` in canonical coordinates.
pub fn k0_class(p: &Arc<Semimodule>, k: &K0Result) -> Result<Vec<BigInt>> {
    Ok(k.project(&k0_vector(p, k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_builtin, product, BuiltinKind};
    use crate::semimodule::free_module;

    fn base(kind: BuiltinKind) -> Arc<GammaSemiring> {
        Arc::new(make_builtin(kind, &Caps::default()).unwrap())
    }

    #[test]
    fn bounded_vectors_respect_the_limit() {
        let v = bounded_vectors(&[2, 3], 12);
        assert_eq!(
            v,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![2, 0],
                vec![2, 1],
                vec![3, 0]
            ]
        );
    }

    #[test]
    fn field_monoid_is_free_on_one_generator() {
        let m = build_monoid(&base(BuiltinKind::Modular(2)), 2, &Caps::default(), ModuleMode::Right).unwrap();
        assert_eq!(m.generators.len(), 1);
        assert!(m.relations.is_empty());
        let k = grothendieck_group(m, &Caps::default());
        assert_eq!(k.group, FgAbelianGroup::free(1));
    }

    #[test]
    fn field_k0_is_complete() {
        for kind in [BuiltinKind::Modular(2), BuiltinKind::Modular(3)] {
            let k = k0(&base(kind), &Caps::default(), ModuleMode::Right).unwrap();
            assert_eq!(k.group, FgAbelianGroup::free(1));
            assert!(k.complete, "{kind}");
        }
    }

    #[test]
    fn boolean_k0_window() {
        let k = k0(&base(BuiltinKind::Boolean), &Caps::default(), ModuleMode::Right).unwrap();
        assert_eq!(k.group, FgAbelianGroup::free(2));
        assert_eq!(k.probe, Probe::Changed);
        assert!(!k.complete);
    }

    #[test]
    fn product_has_coordinate_generators() {
        let caps = Caps::default();
        let b = make_builtin(BuiltinKind::Boolean, &caps).unwrap();
        let bb = Arc::new(product(&b, &b, &caps).unwrap());
        let m = build_monoid(&bb, 2, &caps, ModuleMode::Right).unwrap();
        let sizes: Vec<usize> = (0..m.generators.len()).map(|i| m.generator_module(i).size()).collect();
        // (1,0) and (0,1) give the two 2-element coordinate modules
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 2);
    }

    #[test]
    fn classes_of_free_modules() {
        let caps = Caps::default();
        let f = base(BuiltinKind::Modular(2));
        let k = k0(&f, &caps, ModuleMode::Right).unwrap();
        let zero = Arc::new(free_module(&f, 0, &caps, ModuleMode::Right).unwrap());
        let two = Arc::new(free_module(&f, 2, &caps, ModuleMode::Right).unwrap());
        assert_eq!(k0_class(&zero, &k).unwrap(), vec![BigInt::zero()]);
        assert_eq!(k0_class(&two, &k).unwrap(), vec![BigInt::from(2)]);
    }

    #[test]
    fn sums_beyond_the_iso_cap_use_provenance() {
        let caps = Caps::default().with_iso(8);
        let f = base(BuiltinKind::Modular(2));
        let k = k0(&f, &caps, ModuleMode::Right).unwrap();
        let two = Arc::new(free_module(&f, 2, &caps, ModuleMode::Right).unwrap());
        let four = Arc::new(direct_sum(&two, &two, &caps.with_iso(16)).unwrap());
        assert_eq!(k0_class(&four, &k).unwrap(), vec![BigInt::from(4)]);
    }
}
