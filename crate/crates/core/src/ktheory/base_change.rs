use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::monoid::{k0_vector, K0Result};
use super::tower::AutTower;
use crate::algebra::{GammaHomomorphism, GammaSemiring};
use crate::caps::{Caps, ModuleMode};
use crate::intlinalg::{GroupHom, IntMatrix};
use crate::semimodule::{free_module, image_in, IdempotentMatrix, Provenance};
use crate::{Error, Result};

fn same(a: &Arc<GammaSemiring>, b: &Arc<GammaSemiring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone)]
pub struct K0BaseChange {
    pub map: GroupHom,
    /// Multiplicity vector in the target of each pushed source generator.
    pub pushed: Vec<Vec<u64>>,
    /// Every source monoid relation goes to zero.
    pub relations_respected: bool,
    pub well_defined: bool,
}

/// `f∗` on K₀: push each generator's idempotent through `f` entrywise and
/// classify the image in the target.
pub fn base_change_k0(
    f: &GammaHomomorphism,
    src: &K0Result,
    tgt: &K0Result,
    caps: &Caps,
    mode: ModuleMode,
) -> Result<K0BaseChange> {
    if !same(&f.source, src.base()) || !same(&f.target, tgt.base()) {
        return Err(Error::Mismatch("homomorphism does not match the K₀ results".into()));
    }
    let target = &f.target;
    let mut pushed = Vec::new();
    for i in 0..src.monoid.generators.len() {
        let class = &src.monoid.classification.classes[src.monoid.generators[i]];
        let e = class.representative.idempotent.matrix().map_entries(|x| f.f_t[x]);
        let e = IdempotentMatrix::new(target, e)
            .map_err(|_| Error::Structure(format!("pushed idempotent of generator {i} is not idempotent")))?;
        let free = Arc::new(free_module(target, e.size(), caps, mode)?);
        let provenance = Provenance::PushedForward {
            hom: format!("{} → {}", f.source.name(), target.name()),
            source: class.module().clone(),
        };
        let img = image_in(target, &e, &free, mode, provenance)?;
        pushed.push(k0_vector(&img.module, tgt)?);
    }
    let apply = |x: &[BigInt]| -> Vec<BigInt> {
        let mut acc = alloc::vec![BigInt::zero(); tgt.monoid.generators.len()];
        for (c, v) in x.iter().zip(&pushed) {
            for (a, &m) in acc.iter_mut().zip(v) {
                *a += c * BigInt::from(m);
            }
        }
        tgt.project_signed(&acc)
    };
    let ns = src.group.ngens();
    let mut matrix = IntMatrix::zeros(tgt.group.ngens(), ns);
    for j in 0..ns {
        for (i, v) in apply(&src.presentation.lift(j)).into_iter().enumerate() {
            matrix[(i, j)] = v;
        }
    }
    let map = GroupHom::new(src.group.clone(), tgt.group.clone(), matrix);
    let relations_respected = src.monoid.relations.iter().all(|r| {
        let d: Vec<BigInt> = r
            .lhs
            .iter()
            .zip(&r.rhs)
            .map(|(&a, &b)| BigInt::from(a) - BigInt::from(b))
            .collect();
        tgt.group.is_zero_elem(&apply(&d))
    });
    // the induced map must agree with the pushes on every generator
    let consistent = (0..pushed.len()).all(|i| map.apply(&src.generator_images[i]) == tgt.project(&pushed[i]));
    Ok(K0BaseChange {
        well_defined: map.is_well_defined() && consistent,
        map,
        pushed,
        relations_respected,
    })
}

#[derive(Debug, Clone)]
pub struct K1BaseChange {
    /// `Qₙ → Q′ₙ` for n = 1..=levels.
    pub maps: Vec<GroupHom>,
    /// The maps commute with stabilization.
    pub commutes: bool,
}

pub fn base_change_k1(f: &GammaHomomorphism, src: &AutTower, tgt: &AutTower) -> Result<K1BaseChange> {
    if !same(&f.source, &src.base) || !same(&f.target, &tgt.base) {
        return Err(Error::Mismatch("homomorphism does not match the towers".into()));
    }
    let levels = src.levels.len().min(tgt.levels.len());
    let mut maps = Vec::new();
    for n in 1..=levels {
        let (ls, lt) = (src.level(n).unwrap(), tgt.level(n).unwrap());
        let mut m = IntMatrix::zeros(lt.quotient.group.ngens(), ls.quotient.group.ngens());
        for (k, x) in ls.generator_preimages().into_iter().enumerate() {
            let a = ls.group.element(x);
            let pushed = a.map_entries(|v| f.f_t[v]);
            let class = lt.class_of(&pushed).ok_or_else(|| {
                Error::NotInvertible(format!("{:?} ↦ {:?} at level {n}", a.entries(), pushed.entries()))
            })?;
            for (i, v) in class.iter().enumerate() {
                m[(i, k)] = v.clone();
            }
        }
        maps.push(GroupHom::new(ls.quotient.group.clone(), lt.quotient.group.clone(), m));
    }
    let commutes = (0..levels.saturating_sub(1)).all(|i| {
        tgt.stabilization[i].after(&maps[i]).same_map(&maps[i + 1].after(&src.stabilization[i]))
    });
    Ok(K1BaseChange { maps, commutes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{compose_homs, diagonal_inclusion, diagonal_projection, make_builtin, triangular_semiring, BuiltinKind};
    use crate::ktheory::{aut_tower, k0};

    #[test]
    fn identity_induces_identity() {
        let caps = Caps::default();
        let b = Arc::new(make_builtin(BuiltinKind::Boolean, &caps).unwrap());
        let k = k0(&b, &caps, ModuleMode::Right).unwrap();
        let id = GammaHomomorphism::identity(b.clone());
        let r = base_change_k0(&id, &k, &k, &caps, ModuleMode::Right).unwrap();
        assert!(r.map.same_map(&GroupHom::identity(&k.group)));
        assert!(r.relations_respected && r.well_defined);
        let t = aut_tower(&b, 2, &caps, ModuleMode::Right).unwrap();
        let r = base_change_k1(&id, &t, &t).unwrap();
        assert!(r.commutes);
        for (m, l) in r.maps.iter().zip(&t.levels) {
            assert!(m.same_map(&GroupHom::identity(&l.quotient.group)));
        }
    }

    #[test]
    fn projection_on_triangular_f3_level_one() {
        let caps = Caps::default().with_carrier(27);
        let f3 = make_builtin(BuiltinKind::Modular(3), &caps).unwrap();
        let tri = Arc::new(triangular_semiring(&f3, 2, &caps).unwrap());
        let pi = diagonal_projection(&tri, &caps).unwrap();
        let ts = aut_tower(&tri, 1, &caps, ModuleMode::Right).unwrap();
        let tt = aut_tower(&pi.target, 1, &caps, ModuleMode::Right).unwrap();
        let r = base_change_k1(&pi, &ts, &tt).unwrap();
        // units of 𝒯₂(F₃) mod commutators map onto (F₃^×)² by their diagonal
        assert!(r.maps[0].is_surjective());
        assert_eq!(r.maps[0].target.torsion().len(), 2);
    }

    #[test]
    fn projection_after_inclusion_on_k0() {
        let caps = Caps::default();
        let b = make_builtin(BuiltinKind::Boolean, &caps).unwrap();
        let tri = Arc::new(triangular_semiring(&b, 2, &caps).unwrap());
        let pi = diagonal_projection(&tri, &caps).unwrap();
        let iota = diagonal_inclusion(&tri, &caps).unwrap();
        let kt = k0(&tri, &caps, ModuleMode::Right).unwrap();
        let kp = k0(&pi.target, &caps, ModuleMode::Right).unwrap();
        let p = base_change_k0(&pi, &kt, &kp, &caps, ModuleMode::Right).unwrap();
        let i = base_change_k0(&iota, &kp, &kt, &caps, ModuleMode::Right).unwrap();
        assert!(p.map.after(&i.map).same_map(&GroupHom::identity(&kp.group)));
        let pi_iota = compose_homs(&pi, &iota).unwrap();
        let c = base_change_k0(&pi_iota, &kp, &kp, &caps, ModuleMode::Right).unwrap();
        assert!(c.map.same_map(&p.map.after(&i.map)));
    }
}
