use super::hom::ModuleHom;
use crate::error::{Error, Result};

/// Composable homomorphisms `S_0 -> S_1 -> ... -> S_n`.
pub type Sequence = Vec<ModuleHom>;

/// `M_K -> M_S -> M_T` exact at `M_S`, with `k: K -> S` and `f: S -> T`.
pub fn carrier_exact(k: &ModuleHom, f: &ModuleHom) -> bool {
    let image = f.source.carrier().relations().extend(k.extension.columns());
    image == f.carrier_kernel()
}

/// `βα = 0` and `im α -> ker β` is an isomorphism.
pub fn is_exact_pair(alpha: &ModuleHom, beta: &ModuleHom) -> Result<bool> {
    if alpha.target != beta.source {
        return Err(Error::NotComposable("target and source differ".into()));
    }
    if !alpha.then(beta)?.is_zero() {
        return Ok(false);
    }
    let im = alpha.image()?;
    let ker = beta.kernel()?;
    let map = im
        .point_map
        .iter()
        .map(|&t| ker.point_map.iter().position(|&x| x == t))
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(|| {
            Error::InternalInconsistency("image point outside the kernel although βα = 0".into())
        })?;
    let ensuing = ModuleHom::new(&im.source, &ker.source, map)?;
    let c = ensuing.classify();
    Ok(c.iso && ensuing.is_full())
}

/// Exactness at the target of `seq[i]`, between `seq[i]` and `seq[i + 1]`.
pub fn is_exact_at(seq: &[ModuleHom], i: usize) -> Result<bool> {
    if i + 1 >= seq.len() {
        return Err(Error::DimensionMismatch {
            expected: i + 2,
            found: seq.len(),
        });
    }
    is_exact_pair(&seq[i], &seq[i + 1])
}

/// Every map strong and the sequence exact at every inner object.
pub fn is_strong_exact(seq: &[ModuleHom]) -> Result<bool> {
    for w in seq.windows(2) {
        if w[0].target != w[1].source {
            return Err(Error::NotComposable("target and source differ".into()));
        }
    }
    for f in seq {
        if !f.is_strong()? {
            return Ok(false);
        }
    }
    for i in 0..seq.len().saturating_sub(1) {
        if !is_exact_at(seq, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `0 -> K -> S -> S/K -> 0` padded with zero maps at both ends.
pub fn short_exact(inclusion: &ModuleHom, projection: &ModuleHom) -> Result<Sequence> {
    let base = inclusion.source.base().clone();
    let zero = super::SesquiadModule::zero(base);
    Ok(vec![
        ModuleHom::zero(&zero, &inclusion.source)?,
        inclusion.clone(),
        projection.clone(),
        ModuleHom::zero(&projection.target, &zero)?,
    ])
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sesquiad::catalog::f1;
    use crate::smodule::{full_closure, submodule, SesquiadModule};

    #[test]
    fn identity_is_exact() {
        let a = Arc::new(f1());
        let s = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        let id = ModuleHom::identity(&s);
        let z = SesquiadModule::zero(a);
        let seq = vec![
            ModuleHom::zero(&z, &s).unwrap(),
            id.clone(),
            ModuleHom::zero(&s, &z).unwrap(),
        ];
        assert!(is_exact_at(&seq, 0).unwrap());
        assert!(is_exact_at(&seq, 1).unwrap());
        assert!(!is_exact_pair(&id, &id).unwrap());
    }

    #[test]
    fn even_numbers_sequence() {
        let a = Arc::new(f1());
        let t = SesquiadModule::cyclic(a, 0, &[0, 1, 2, 4]).unwrap();
        let two = t.index_of(&[2.into()]).unwrap();
        // {0, 2} is not full in T: 4 lies in 2Z
        let small = submodule(&t, &[two]).unwrap();
        assert_eq!(small.source.len(), 2);
        let proj = small.cokernel().unwrap();
        let seq = short_exact(&small, &proj).unwrap();
        assert!(is_exact_at(&seq, 1).unwrap());
        assert!(!is_strong_exact(&seq).unwrap());
        let k = submodule(&t, &full_closure(&t, &[two])).unwrap();
        assert_eq!(k.source.len(), 3);
        let seq = short_exact(&k, &proj).unwrap();
        assert!(is_strong_exact(&seq).unwrap());
        assert!(carrier_exact(&k, &proj));
    }
}
