use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::base_change::{base_change_k0, base_change_k1, K0BaseChange};
use super::monoid::{k0, k0_at, K0Result};
use super::tower::{k1, K1Result};
use crate::algebra::{
    compose_homs, diagonal_inclusion, diagonal_projection, matrix_semiring, product, triangular_semiring,
    validate_hom, GammaHomomorphism, GammaSemiring,
};
use crate::caps::{Caps, ModuleMode};
use crate::intlinalg::{abelian_direct_sum, abelian_iso, FgAbelianGroup, GroupHom};
use crate::semimodule::{enumerate_idempotents, mat_mul, IdempotentMatrix, Matrix};
use crate::{Error, Result};

/// Comparison of two K₁ towers at their top levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K1Verdict {
    Agree,
    /// Different groups, both towers stationary.
    Disagree,
    /// Different groups, but at least one tower has not settled.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct K1Comparison {
    pub left: Vec<FgAbelianGroup>,
    pub right: Vec<FgAbelianGroup>,
    pub left_stationary: bool,
    pub right_stationary: bool,
    pub verdict: K1Verdict,
}

fn compare_k1(left: &K1Result, right: &K1Result) -> K1Comparison {
    let verdict = if abelian_iso(&left.value, &right.value) {
        K1Verdict::Agree
    } else if left.stationary && right.stationary {
        K1Verdict::Disagree
    } else {
        K1Verdict::Inconclusive
    };
    K1Comparison {
        left: left.quotients.clone(),
        right: right.quotients.clone(),
        left_stationary: left.stationary,
        right_stationary: right.stationary,
        verdict,
    }
}

#[derive(Debug, Clone, Default)]
pub struct LiftingReport {
    pub checked: usize,
    pub lifted: usize,
    /// Idempotents over the product with no idempotent preimage found.
    pub failures: Vec<Matrix>,
}

#[derive(Debug, Clone)]
pub struct TriangularReport {
    pub base: String,
    pub size: usize,
    pub k0_triangular: K0Result,
    pub k0_product: K0Result,
    pub k0_base: K0Result,
    /// K₀(base)^size.
    pub expected: FgAbelianGroup,
    pub groups_iso: bool,
    pub pi_star: K0BaseChange,
    pub pi_star_iso: bool,
    pub lifting: LiftingReport,
    pub k1: Option<K1Comparison>,
    pub holds: bool,
}

fn nfold(g: &FgAbelianGroup, n: usize) -> FgAbelianGroup {
    (0..n).fold(FgAbelianGroup::trivial(), |acc, _| abelian_direct_sum(&acc, g))
}

/// Every idempotent over `S^n` of size ≤ rank lifts through π to one over 𝒯ₙ(S).
fn lifting(pi: &GammaHomomorphism, iota: Option<&GammaHomomorphism>, rank: usize, caps: &Caps, mode: ModuleMode) -> Result<LiftingReport> {
    let mut r = LiftingReport::default();
    let (tri, prod) = (&pi.source, &pi.target);
    for k in 1..=rank {
        let mut tri_idem: Option<Vec<IdempotentMatrix>> = None;
        for e in enumerate_idempotents(prod, k, caps, mode)? {
            r.checked += 1;
            let via_inclusion = iota.and_then(|i| {
                let up = e.matrix().map_entries(|x| i.f_t[x]);
                let ok = mat_mul(tri, &up, &up).ok()? == up && up.map_entries(|x| pi.f_t[x]) == *e.matrix();
                ok.then_some(())
            });
            let lifted = via_inclusion.is_some() || {
                if tri_idem.is_none() {
                    tri_idem = Some(enumerate_idempotents(tri, k, caps, mode)?);
                }
                tri_idem
                    .as_ref()
                    .unwrap()
                    .iter()
                    .any(|x| x.matrix().map_entries(|v| pi.f_t[v]) == *e.matrix())
            };
            if lifted {
                r.lifted += 1;
            } else {
                r.failures.push(e.into_matrix());
            }
        }
    }
    Ok(r)
}

pub fn check_triangular_theorem(
    base: &Arc<GammaSemiring>,
    size: usize,
    caps: &Caps,
    mode: ModuleMode,
    with_k1: bool,
) -> Result<TriangularReport> {
    let tri = Arc::new(triangular_semiring(base, size, caps)?);
    let pi = diagonal_projection(&tri, caps)?;
    let iota = match diagonal_inclusion(&tri, caps) {
        Ok(i) => Some(i),
        Err(Error::Mismatch(_)) => None,
        Err(e) => return Err(e),
    };
    let k0_triangular = k0(&tri, caps, mode)?;
    let k0_product = k0(&pi.target, caps, mode)?;
    let k0_base = k0(base, caps, mode)?;
    let expected = nfold(&k0_base.group, size);
    let groups_iso = abelian_iso(&k0_triangular.group, &k0_product.group) && abelian_iso(&k0_product.group, &expected);
    let pi_star = base_change_k0(&pi, &k0_triangular, &k0_product, caps, mode)?;
    let pi_star_iso = pi_star.well_defined && pi_star.map.is_iso();
    let lifting = lifting(&pi, iota.as_ref(), caps.rank, caps, mode)?;
    let k1 = if with_k1 {
        let kt = k1(&tri, caps.k1_levels, caps, mode)?;
        let kp = k1(&pi.target, caps.k1_levels, caps, mode)?;
        Some(compare_k1(&kt, &kp))
    } else {
        None
    };
    let holds = groups_iso
        && pi_star_iso
        && lifting.failures.is_empty()
        && k1.as_ref().map_or(true, |c| c.verdict != K1Verdict::Disagree);
    Ok(TriangularReport {
        base: base.name().into(),
        size,
        k0_triangular,
        k0_product,
        k0_base,
        expected,
        groups_iso,
        pi_star,
        pi_star_iso,
        lifting,
        k1,
        holds,
    })
}

#[derive(Debug, Clone)]
pub struct MoritaReport {
    pub base: String,
    pub m: usize,
    /// Rank cap used on the matrix side; the base side uses `m` times it.
    pub matrix_rank_cap: usize,
    pub k0_matrix: K0Result,
    pub k0_base: K0Result,
    pub k0_iso: bool,
    pub k1: Option<K1Comparison>,
    pub holds: bool,
}

/// K₀(M_m(T)) at rank cap r against K₀(T) at rank cap m·r, where
/// r = max(1, caps.rank / m); K₁ at level L against level m·L.
pub fn check_matrix_morita(
    base: &Arc<GammaSemiring>,
    m: usize,
    caps: &Caps,
    mode: ModuleMode,
    with_k1: bool,
) -> Result<MoritaReport> {
    if m == 0 {
        return Err(Error::Structure("matrix size must be positive".into()));
    }
    let mat = Arc::new(matrix_semiring(base, m, caps)?);
    let r = (caps.rank / m).max(1);
    let k0_matrix = k0_at(&mat, r, caps, mode, true)?;
    let k0_base = k0_at(base, m * r, caps, mode, true)?;
    let k0_iso = abelian_iso(&k0_matrix.group, &k0_base.group);
    let k1 = if with_k1 {
        let levels = caps.k1_levels.max(1);
        let km = k1(&mat, levels, caps, mode)?;
        let kb = k1(base, m * levels, caps, mode)?;
        Some(compare_k1(&km, &kb))
    } else {
        None
    };
    let holds = k0_iso && k1.as_ref().map_or(true, |c| c.verdict != K1Verdict::Disagree);
    Ok(MoritaReport {
        base: base.name().into(),
        m,
        matrix_rank_cap: r,
        k0_matrix,
        k0_base,
        k0_iso,
        k1,
        holds,
    })
}

#[derive(Debug, Clone)]
pub struct ProductReport {
    pub left: String,
    pub right: String,
    pub k0_product: K0Result,
    pub k0_left: K0Result,
    pub k0_right: K0Result,
    pub expected: FgAbelianGroup,
    pub k0_iso: bool,
    /// Per level: Qₙ(A×B) against Qₙ(A) ⊕ Qₙ(B).
    pub k1_levels: Vec<(FgAbelianGroup, FgAbelianGroup)>,
    pub k1_iso: bool,
    pub holds: bool,
}

pub fn check_product(
    a: &Arc<GammaSemiring>,
    b: &Arc<GammaSemiring>,
    caps: &Caps,
    mode: ModuleMode,
    with_k1: bool,
) -> Result<ProductReport> {
    let ab = Arc::new(product(a, b, caps)?);
    let k0_product = k0(&ab, caps, mode)?;
    let k0_left = k0(a, caps, mode)?;
    let k0_right = k0(b, caps, mode)?;
    let expected = abelian_direct_sum(&k0_left.group, &k0_right.group);
    let k0_iso = abelian_iso(&k0_product.group, &expected);
    let mut k1_levels = Vec::new();
    if with_k1 {
        let (kab, ka, kb) = (
            k1(&ab, caps.k1_levels, caps, mode)?,
            k1(a, caps.k1_levels, caps, mode)?,
            k1(b, caps.k1_levels, caps, mode)?,
        );
        for n in 0..kab.quotients.len().min(ka.quotients.len()).min(kb.quotients.len()) {
            k1_levels.push((kab.quotients[n].clone(), abelian_direct_sum(&ka.quotients[n], &kb.quotients[n])));
        }
    }
    let k1_iso = k1_levels.iter().all(|(x, y)| abelian_iso(x, y));
    Ok(ProductReport {
        left: a.name().into(),
        right: b.name().into(),
        k0_product,
        k0_left,
        k0_right,
        expected,
        k0_iso,
        k1_levels,
        k1_iso,
        holds: k0_iso && k1_iso,
    })
}

#[derive(Debug, Clone)]
pub struct NamedHom {
    pub name: String,
    pub hom: GammaHomomorphism,
}

/// Homomorphisms among S, S² and 𝒯₂(S): identities, π, ι, their
/// composites, the swap, the diagonal S → S² and the first projection.
pub fn hom_family(base: &Arc<GammaSemiring>, caps: &Caps) -> Result<Vec<NamedHom>> {
    let tri = Arc::new(triangular_semiring(base, 2, caps)?);
    let pi = diagonal_projection(&tri, caps)?;
    let sq = pi.target.clone();
    let mut iota = diagonal_inclusion(&tri, caps)?;
    iota.source = sq.clone();
    let (nt, ng) = (base.card(), base.gamma_card());
    let swap = GammaHomomorphism::new(
        sq.clone(),
        sq.clone(),
        (0..nt * nt).map(|x| (x % nt) * nt + x / nt).collect(),
        (0..ng * ng).map(|g| (g % ng) * ng + g / ng).collect(),
    )?;
    let diag = GammaHomomorphism::new(
        base.clone(),
        sq.clone(),
        (0..nt).map(|x| x * nt + x).collect(),
        (0..ng).map(|g| g * ng + g).collect(),
    )?;
    let first = GammaHomomorphism::new(sq.clone(), base.clone(), (0..nt * nt).map(|x| x / nt).collect(), (0..ng * ng).map(|g| g / ng).collect())?;
    let named = |name: &str, hom: GammaHomomorphism| NamedHom { name: name.into(), hom };
    Ok(vec![
        named("id(S)", GammaHomomorphism::identity(base.clone())),
        named("id(S²)", GammaHomomorphism::identity(sq.clone())),
        named("id(T₂)", GammaHomomorphism::identity(tri.clone())),
        named("π", pi.clone()),
        named("ι", iota.clone()),
        named("π∘ι", compose_homs(&pi, &iota)?),
        named("ι∘π", compose_homs(&iota, &pi)?),
        named("swap", swap),
        named("diag", diag),
        named("pr₁", first),
    ])
}

#[derive(Debug, Clone)]
pub struct CompositeCheck {
    pub outer: String,
    pub inner: String,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct BaseChangeReport {
    pub base: String,
    /// Name, validity and induced K₀ map of each homomorphism.
    pub homs: Vec<(String, bool, GroupHom)>,
    pub identities_hold: bool,
    pub composites: Vec<CompositeCheck>,
    pub pi_iota_identity: bool,
    /// K₁ identity and composite laws per level, when computed.
    pub k1_holds: Option<bool>,
    pub holds: bool,
}

pub fn check_base_change(base: &Arc<GammaSemiring>, caps: &Caps, mode: ModuleMode, with_k1: bool) -> Result<BaseChangeReport> {
    let family = hom_family(base, caps)?;
    let tri = family[2].hom.source.clone();
    let sq = family[1].hom.source.clone();
    let k_base = k0(base, caps, mode)?;
    let k_sq = k0(&sq, caps, mode)?;
    let k_tri = k0(&tri, caps, mode)?;
    let pick = |s: &Arc<GammaSemiring>| -> &K0Result {
        if **s == **base {
            &k_base
        } else if **s == *sq {
            &k_sq
        } else {
            &k_tri
        }
    };
    let mut induced = Vec::new();
    let mut homs = Vec::new();
    let mut identities_hold = true;
    for nh in &family {
        let valid = validate_hom(&nh.hom).is_empty();
        let r = base_change_k0(&nh.hom, pick(&nh.hom.source), pick(&nh.hom.target), caps, mode)?;
        let ok = r.well_defined && r.relations_respected;
        if nh.hom.is_identity() {
            identities_hold &= r.map.same_map(&GroupHom::identity(&pick(&nh.hom.source).group));
        }
        homs.push((nh.name.clone(), valid && ok, r.map.clone()));
        induced.push(r.map);
    }
    let mut composites = Vec::new();
    for (i, f) in family.iter().enumerate() {
        for (j, g) in family.iter().enumerate() {
            let Ok(gf) = compose_homs(&g.hom, &f.hom) else {
                continue;
            };
            let r = base_change_k0(&gf, pick(&gf.source), pick(&gf.target), caps, mode)?;
            composites.push(CompositeCheck {
                outer: g.name.clone(),
                inner: f.name.clone(),
                holds: r.map.same_map(&induced[j].after(&induced[i])),
            });
        }
    }
    // π∗ ∘ ι∗ on K₀(S²)
    let pi_iota_identity = induced[3].after(&induced[4]).same_map(&GroupHom::identity(&k_sq.group));
    let k1_holds = if with_k1 {
        let levels = caps.k1_levels;
        let towers = [
            k1(base, levels, caps, mode)?.tower,
            k1(&sq, levels, caps, mode)?.tower,
            k1(&tri, levels, caps, mode)?.tower,
        ];
        let tower = |s: &Arc<GammaSemiring>| {
            if **s == **base {
                &towers[0]
            } else if **s == *sq {
                &towers[1]
            } else {
                &towers[2]
            }
        };
        let mut ok = true;
        let maps: Vec<_> = family
            .iter()
            .map(|nh| base_change_k1(&nh.hom, tower(&nh.hom.source), tower(&nh.hom.target)))
            .collect::<Result<_>>()?;
        for (nh, m) in family.iter().zip(&maps) {
            ok &= m.commutes;
            if nh.hom.is_identity() {
                ok &= m.maps.iter().all(|x| x.same_map(&GroupHom::identity(&x.source)));
            }
        }
        for (i, f) in family.iter().enumerate() {
            for (j, g) in family.iter().enumerate() {
                let Ok(gf) = compose_homs(&g.hom, &f.hom) else {
                    continue;
                };
                let r = base_change_k1(&gf, tower(&gf.source), tower(&gf.target))?;
                for (n, x) in r.maps.iter().enumerate() {
                    ok &= x.same_map(&maps[j].maps[n].after(&maps[i].maps[n]));
                }
            }
        }
        Some(ok)
    } else {
        None
    };
    let holds = homs.iter().all(|h| h.1)
        && identities_hold
        && composites.iter().all(|c| c.holds)
        && pi_iota_identity
        && k1_holds != Some(false);
    Ok(BaseChangeReport {
        base: base.name().into(),
        homs,
        identities_hold,
        composites,
        pi_iota_identity,
        k1_holds,
        holds,
    })
}
