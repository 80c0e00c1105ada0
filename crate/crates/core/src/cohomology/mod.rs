//! Sheaf cohomology of module sheaves on finite congruence schemes, computed
//! on carriers with the Godement resolution and checked against derived
//! limits over the poset.

mod carrier;
mod complex;
mod godement;
mod oracle;

use crate::error::{Error, Result};
use crate::intlin::module::{map_is_injective, map_is_surjective, subquotient};
use crate::intlin::{FgModule, GroupInvariants, IntMatrix, Vector};
use crate::scheme::ModuleSheaf;
use crate::smodule::SesquiadModule;

pub use carrier::{ascend, ascend_hom, CarrierSheaf};
pub use complex::CochainComplex;
pub use godement::{godement, godement_sheaf, GodementSheaf, Resolution};
pub use oracle::higher_limits;

/// Largest finite `H^p` whose elements all become points.
pub const POINT_ENUMERATION_LIMIT: usize = 4096;

#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub degree: usize,
    pub group: GroupInvariants,
    /// `H^p` as a module over `O(X)`. In degree 0 the points are the global
    /// point families; above, every element (or the orbit closure of the
    /// generators when infinite) is a point.
    pub module: SesquiadModule,
}

/// Resolution length covering every degree up to `dim X + 1`.
fn resolution_length(f: &CarrierSheaf) -> usize {
    f.scheme().dimension() + 3
}

/// `H^p(X, F)` of a carrier sheaf for `p <= dim X + 1`, via Godement.
pub fn carrier_cohomology(f: &CarrierSheaf) -> Result<Vec<FgModule>> {
    let r = godement(f, resolution_length(f))?;
    (0..=f.scheme().dimension() + 1)
        .map(|p| r.complex.cohomology(p))
        .collect()
}

/// The same groups from the higher-limit complex.
pub fn oracle_cohomology(f: &CarrierSheaf) -> Result<Vec<FgModule>> {
    let c = higher_limits(f)?;
    (0..=f.scheme().dimension() + 1)
        .map(|p| c.cohomology(p))
        .collect()
}

fn full_module(
    base: &std::sync::Arc<crate::sesquiad::Sesquiad>,
    group: FgModule,
) -> Result<SesquiadModule> {
    let points = match group.elements(POINT_ENUMERATION_LIMIT) {
        Some(all) => all,
        None => {
            let mut pts: Vec<Vector> = vec![vec![0.into(); group.rank()]];
            for i in 0..group.rank() {
                let mut e = vec![0.into(); group.rank()];
                e[i] = 1.into();
                for a in 0..base.len() {
                    let v = group.act(a, &e)?;
                    if !pts.contains(&v) {
                        pts.push(v);
                    }
                }
            }
            pts
        }
    };
    SesquiadModule::new(base.clone(), group, points)
}

/// `Γ(X, F)` as a sesquiad module: point families spanning `M_{Γ(F)}`.
pub fn global_section_module(f: &ModuleSheaf) -> Result<SesquiadModule> {
    let s = f.global_sections()?;
    let c = ascend(f)?;
    let all: Vec<usize> = (0..f.stalks().len()).collect();
    let action = c.global_action(&all);
    let (carrier, _) = subquotient(&s.span, s.product.relations(), action.as_deref())?;
    let points = s
        .families
        .iter()
        .map(|fam| {
            s.span
                .coordinates(&s.vector(f, fam))
                .expect("families lie in their span")
        })
        .collect();
    let m = SesquiadModule::new(f.scheme().global().clone(), carrier, points)?;
    Ok(m.minimized().0)
}

/// `H^p(X, F)` for `p <= dim X + 1`. Checks vanishing above the dimension
/// and agreement with the higher-limit complex.
pub fn cohomology(f: &ModuleSheaf) -> Result<Vec<CohomologyResult>> {
    let c = ascend(f)?;
    let groups = carrier_cohomology(&c)?;
    let oracle = oracle_cohomology(&c)?;
    let dim = f.scheme().dimension();
    let mut out = Vec::with_capacity(groups.len());
    for (p, (h, o)) in groups.into_iter().zip(oracle).enumerate() {
        let inv = h.invariants();
        if inv != o.invariants() {
            return Err(Error::InternalInconsistency(format!(
                "H^{p}: Godement gives {inv:?}, higher limits give {:?}",
                o.invariants()
            )));
        }
        if p > dim && !h.is_zero_module() {
            return Err(Error::InternalInconsistency(format!(
                "H^{p} is nonzero above dimension {dim}"
            )));
        }
        let module = if p == 0 {
            global_section_module(f)?
        } else {
            full_module(f.scheme().global(), h)?
        };
        out.push(CohomologyResult {
            degree: p,
            group: inv,
            module,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: usize,
    /// `H^p(X, F)_Z`.
    pub source: GroupInvariants,
    /// `H^p(X_Z, F_Z)`.
    pub target: GroupInvariants,
    pub injective: bool,
    pub surjective: bool,
}

/// `H^p(X, F)_Z -> H^p(X_Z, F_Z)` degreewise, with `X_Z` the same space
/// carrying the carrier sheaf. In degree 0 this is `M_{Γ(F)} ⊆ Γ(M_F)`;
/// above, both sides are computed from the same carrier complex.
pub fn base_change_compare(f: &ModuleSheaf) -> Result<Vec<DegreeComparison>> {
    let c = ascend(f)?;
    let groups = carrier_cohomology(&c)?;
    let s = f.global_sections()?;
    let rels = s.product.relations();
    let (span, span_basis) = subquotient(&s.span, rels, None)?;
    let (limit, _) = subquotient(&s.limit, rels, None)?;
    let cols: Vec<Vector> = span_basis
        .columns()
        .iter()
        .map(|v| {
            s.limit
                .coordinates(v)
                .ok_or_else(|| Error::InternalInconsistency("M_Γ(F) is not inside Γ(M_F)".into()))
        })
        .collect::<Result<_>>()?;
    let inclusion = IntMatrix::from_columns(limit.rank(), &cols);
    let mut out = vec![DegreeComparison {
        degree: 0,
        source: span.invariants(),
        target: limit.invariants(),
        injective: map_is_injective(&span, &limit, &inclusion),
        surjective: map_is_surjective(&limit, &inclusion),
    }];
    for (p, h) in groups.iter().enumerate().skip(1) {
        let id = IntMatrix::identity(h.rank());
        out.push(DegreeComparison {
            degree: p,
            source: h.invariants(),
            target: h.invariants(),
            injective: map_is_injective(h, h, &id),
            surjective: map_is_surjective(h, &id),
        });
    }
    Ok(out)
}

/// Flabby sheaves have no higher cohomology; a nonzero `H^{>=1}` is a bug.
pub fn flabby_acyclicity_check(f: &CarrierSheaf) -> Result<bool> {
    if !f.is_flabby() {
        return Err(Error::NotFlabby(
            "a restriction to a punctured neighbourhood is not onto".into(),
        ));
    }
    for (p, h) in carrier_cohomology(f)?.iter().enumerate().skip(1) {
        if !h.is_zero_module() {
            return Err(Error::InternalInconsistency(format!(
                "flabby sheaf has H^{p} = {:?}",
                h.invariants()
            )));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::scheme::{CongruenceScheme, FiniteSpace};
    use crate::sesquiad::catalog::*;

    fn constant(space: FiniteSpace, m: &SesquiadModule) -> ModuleSheaf {
        let x = Arc::new(CongruenceScheme::constant(space, m.base().clone()).unwrap());
        ModuleSheaf::constant(x, m).unwrap()
    }

    #[test]
    fn pseudocircle_constant_z() {
        let z = SesquiadModule::free(Arc::new(f1()), 1);
        let h = cohomology(&constant(FiniteSpace::pseudocircle(), &z)).unwrap();
        let ranks: Vec<usize> = h.iter().map(|r| r.group.free_rank).collect();
        assert_eq!(ranks, vec![1, 1, 0]);
        assert!(h.iter().all(|r| r.group.torsion.is_empty()));
    }

    #[test]
    fn sierpinski_has_no_higher_cohomology() {
        let m = SesquiadModule::cyclic(Arc::new(f1()), 6, &[0, 1, 2]).unwrap();
        let h = cohomology(&constant(FiniteSpace::sierpinski(), &m)).unwrap();
        assert_eq!(h[0].group.torsion, vec![6.into()]);
        assert!(h[1..].iter().all(|r| r.group == GroupInvariants::free(0)));
    }

    #[test]
    fn pseudocircle_is_not_flabby() {
        let z = SesquiadModule::free(Arc::new(f1()), 1);
        let c = ascend(&constant(FiniteSpace::pseudocircle(), &z)).unwrap();
        assert!(matches!(
            flabby_acyclicity_check(&c),
            Err(Error::NotFlabby(_))
        ));
        let r = godement(&c, 3).unwrap();
        for g in &r.stages {
            assert!(flabby_acyclicity_check(&g.sheaf).unwrap());
        }
    }

    #[test]
    fn wedge_base_change_is_strict_in_degree_zero() {
        let a = Arc::new(f1());
        let z = SesquiadModule::cyclic(a.clone(), 0, &[0, 1]).unwrap();
        let z2 = SesquiadModule::cyclic(a.clone(), 2, &[0, 1]).unwrap();
        let x = Arc::new(CongruenceScheme::constant(FiniteSpace::wedge(), a).unwrap());
        let f = ModuleSheaf::new(x, vec![z2, z.clone(), z], |_, _| Ok(vec![0, 1])).unwrap();
        let cmp = base_change_compare(&f).unwrap();
        assert!(cmp.iter().all(|d| d.injective));
        assert!(!cmp[0].surjective);
        assert!(cmp[1..].iter().all(|d| d.surjective));
    }
}
