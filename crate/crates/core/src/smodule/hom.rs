use std::collections::BTreeSet;

use num_traits::Zero;

use super::exact::carrier_exact;
use super::{tensor, SesquiadModule, TensorProduct};
use crate::error::{Error, Result};
use crate::intlin::matrix::{unit_vector, zero_vector};
use crate::intlin::module::{
    map_image, map_is_injective, map_is_surjective, map_kernel, subquotient,
};
use crate::intlin::{FgModule, IntMatrix, Lattice, Vector};

/// A module homomorphism: a point map together with its (unique) linear
/// extension `M_f`, a `target.rank() x source.rank()` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    pub source: SesquiadModule,
    pub target: SesquiadModule,
    pub point_map: Vec<usize>,
    pub extension: IntMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub mono: bool,
    pub epi: bool,
    pub iso: bool,
}

impl ModuleHom {
    /// Extends a point map linearly, failing when it is not `A`-equivariant or
    /// admits no `R_A`-linear extension.
    pub fn new(
        source: &SesquiadModule,
        target: &SesquiadModule,
        point_map: Vec<usize>,
    ) -> Result<Self> {
        if *source.base != *target.base {
            return Err(Error::BaseMismatch);
        }
        if point_map.len() != source.len() || point_map.iter().any(|&j| j >= target.len()) {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                found: point_map.len(),
            });
        }
        if point_map[source.zero_index()] != target.zero_index() {
            return Err(Error::NotEquivariant("0 is not sent to 0".into()));
        }
        let base = &source.base;
        for i in 0..source.len() {
            for a in 0..base.len() {
                if point_map[source.act_point(a, i)] != target.act_point(a, point_map[i]) {
                    return Err(Error::NotEquivariant(format!(
                        "f({} * x{i}) != {} * f(x{i})",
                        base.name(a),
                        base.name(a)
                    )));
                }
            }
        }
        let images: Vec<&Vector> = point_map.iter().map(|&j| target.point(j)).collect();
        let cols: Vec<Vector> = source
            .basis_in_points()
            .iter()
            .map(|coeffs| {
                let mut v = zero_vector(target.rank());
                for (c, img) in coeffs.iter().zip(&images) {
                    if !c.is_zero() {
                        for (o, x) in v.iter_mut().zip(img.iter()) {
                            *o += c * x;
                        }
                    }
                }
                target.carrier().reduce(&v)
            })
            .collect();
        let extension = IntMatrix::from_columns(target.rank(), &cols);
        let h = ModuleHom {
            source: source.clone(),
            target: target.clone(),
            point_map,
            extension,
        };
        if !h.extension_is_consistent() {
            return Err(Error::NoLinearExtension);
        }
        Ok(h)
    }

    fn extension_is_consistent(&self) -> bool {
        let (s, t, m) = (&self.source, &self.target, &self.extension);
        let tc = t.carrier();
        if !s
            .carrier()
            .relations()
            .basis()
            .iter()
            .all(|r| tc.is_zero_element(&m.mul_vec(r)))
        {
            return false;
        }
        if !(0..s.len()).all(|i| tc.equal(&m.mul_vec(s.point(i)), t.point(self.point_map[i]))) {
            return false;
        }
        let (sa, ta) = (s.carrier().action().unwrap(), tc.action().unwrap());
        sa.iter().zip(ta).all(|(x, y)| {
            (0..s.rank()).all(|j| {
                let e = unit_vector(s.rank(), j);
                tc.equal(&m.mul_vec(&x.mul_vec(&e)), &y.mul_vec(&m.mul_vec(&e)))
            })
        })
    }

    /// Homomorphism given by a carrier matrix; points must land on points.
    pub fn from_matrix(
        source: &SesquiadModule,
        target: &SesquiadModule,
        m: IntMatrix,
    ) -> Result<Self> {
        let point_map = source
            .points()
            .iter()
            .map(|p| {
                target
                    .index_of(&m.mul_vec(p))
                    .ok_or_else(|| Error::NotEquivariant("a point is not sent to a point".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, point_map)
    }

    pub fn identity(s: &SesquiadModule) -> Self {
        Self::new(s, s, (0..s.len()).collect()).expect("identity")
    }

    pub fn zero(s: &SesquiadModule, t: &SesquiadModule) -> Result<Self> {
        Self::new(s, t, vec![t.zero_index(); s.len()])
    }

    pub fn apply(&self, i: usize) -> usize {
        self.point_map[i]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ModuleHom) -> Result<ModuleHom> {
        if self.target != next.source {
            return Err(Error::NotComposable("target and source differ".into()));
        }
        let point_map = self.point_map.iter().map(|&j| next.point_map[j]).collect();
        Self::new(&self.source, &next.target, point_map)
    }

    pub fn is_zero(&self) -> bool {
        let z = self.target.zero_index();
        self.point_map.iter().all(|&j| j == z)
    }

    pub fn is_point_injective(&self) -> bool {
        let set: BTreeSet<usize> = self.point_map.iter().copied().collect();
        set.len() == self.point_map.len()
    }

    pub fn is_point_surjective(&self) -> bool {
        let set: BTreeSet<usize> = self.point_map.iter().copied().collect();
        set.len() == self.target.len()
    }

    pub fn carrier_injective(&self) -> bool {
        map_is_injective(
            self.source.carrier(),
            self.target.carrier(),
            &self.extension,
        )
    }

    pub fn carrier_surjective(&self) -> bool {
        map_is_surjective(self.target.carrier(), &self.extension)
    }

    /// Mono iff `M_f` injective, epi iff `M_f` surjective, iso iff the point
    /// map is onto and `M_f` injective.
    pub fn classify(&self) -> Classification {
        let inj = self.carrier_injective();
        Classification {
            mono: inj,
            epi: self.carrier_surjective(),
            iso: inj && self.is_point_surjective(),
        }
    }

    /// Indices of the image points.
    pub fn image_points(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.point_map.iter().copied().collect();
        set.into_iter().collect()
    }

    /// `f(S) = M_f(M_S) ∩ T`.
    pub fn is_full(&self) -> bool {
        self.image_points() == full_closure(&self.target, &self.image_points())
    }

    /// `f^{-1}(0)` with carrier generated by those points, and its inclusion.
    pub fn kernel(&self) -> Result<ModuleHom> {
        let z = self.target.zero_index();
        let idx: Vec<usize> = (0..self.source.len())
            .filter(|&i| self.point_map[i] == z)
            .collect();
        submodule(&self.source, &idx)
    }

    /// Image of `T` in `M_T / M_{f(S)}`, and the projection.
    pub fn cokernel(&self) -> Result<ModuleHom> {
        quotient(&self.target, &self.image_points())
    }

    /// `ker(coker f)`: the full closure of `f(S)` inside `T`.
    pub fn image(&self) -> Result<ModuleHom> {
        self.cokernel()?.kernel()
    }

    /// `coker(ker f)`.
    pub fn coimage(&self) -> Result<ModuleHom> {
        self.kernel()?.cokernel()
    }

    /// The natural morphism `coim f -> im f`.
    pub fn coimage_to_image(&self) -> Result<ModuleHom> {
        let coim = self.coimage()?;
        let im = self.image()?;
        let mut map = vec![usize::MAX; coim.target.len()];
        for i in 0..self.source.len() {
            let c = coim.point_map[i];
            let t = self.point_map[i];
            let j = im.point_map.iter().position(|&x| x == t).ok_or_else(|| {
                Error::InternalInconsistency("image point missing from im f".into())
            })?;
            map[c] = j;
        }
        ModuleHom::new(&coim.target, &im.source, map)
    }

    /// Strongness decided by the coimage/image comparison and, independently,
    /// by fullness plus exactness of `M_{ker f} -> M_S -> M_T`.
    pub fn is_strong(&self) -> Result<bool> {
        let categorial = self.coimage_to_image()?.classify().iso;
        let criterial = self.is_full() && carrier_exact(&self.kernel()?, self);
        if categorial != criterial {
            return Err(Error::InternalInconsistency(format!(
                "strongness: coimage/image test says {categorial}, criterion says {criterial}"
            )));
        }
        Ok(categorial)
    }

    /// `f ⊙ g` between tensor products.
    pub fn tensor(&self, other: &ModuleHom) -> Result<(TensorProduct, TensorProduct, ModuleHom)> {
        let src = tensor(&self.source, &other.source)?;
        let tgt = tensor(&self.target, &other.target)?;
        let mut map = vec![usize::MAX; src.module.len()];
        for (i, row) in src.simple.iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                map[k] = tgt.simple[self.point_map[i]][other.point_map[j]];
            }
        }
        let h = ModuleHom::new(&src.module, &tgt.module, map)?;
        Ok((src, tgt, h))
    }

    /// Restriction to a carrier-level statement: lattice preimage of `ker M_f`.
    pub fn carrier_kernel(&self) -> Lattice {
        map_kernel(
            self.source.carrier(),
            self.target.carrier(),
            &self.extension,
        )
    }

    /// Lattice preimage of `im M_f` in the target coordinates.
    pub fn carrier_image(&self) -> Lattice {
        map_image(self.target.carrier(), &self.extension)
    }

    /// Cover by the free module on the nonzero points.
    pub fn cover(s: &SesquiadModule) -> Result<ModuleHom> {
        let nonzero: Vec<usize> = (0..s.len()).filter(|&i| i != s.zero_index()).collect();
        let free = SesquiadModule::free_presented(s.base.clone(), nonzero.len());
        let m = s.base.len();
        let cols: Vec<Vector> = (0..nonzero.len())
            .flat_map(|i| (0..m).map(move |a| (i, a)))
            .map(|(i, a)| s.carrier().act(a, s.point(nonzero[i])).expect("action"))
            .collect();
        let mat = IntMatrix::from_columns(s.rank(), &cols);
        let (small, coords) = free.minimized();
        ModuleHom::from_matrix(&small, s, mat.mul(&coords.from))
    }
}

/// Points of `t` in the span of the given points: the full closure.
pub fn full_closure(t: &SesquiadModule, idx: &[usize]) -> Vec<usize> {
    let span = t
        .carrier()
        .relations()
        .extend(idx.iter().map(|&i| t.point(i).clone()));
    (0..t.len())
        .filter(|&i| span.contains(t.point(i)))
        .collect()
}

pub(crate) fn check_submodule(t: &SesquiadModule, idx: &[usize]) -> Result<Vec<usize>> {
    let mut set: BTreeSet<usize> = idx.iter().copied().collect();
    if set.iter().any(|&i| i >= t.len()) {
        return Err(Error::NotASubmodule("index out of range".into()));
    }
    set.insert(t.zero_index());
    for &i in &set {
        for a in 0..t.base.len() {
            if !set.contains(&t.act_point(a, i)) {
                return Err(Error::NotASubmodule("not stable under A".into()));
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// The submodule on the given points with carrier their span, as an inclusion.
pub fn submodule(t: &SesquiadModule, idx: &[usize]) -> Result<ModuleHom> {
    let idx = check_submodule(t, idx)?;
    let points: Vec<Vector> = idx.iter().map(|&i| t.point(i).clone()).collect();
    let numerator = t.carrier().relations().extend(points.iter().cloned());
    let (carrier, inclusion) =
        subquotient(&numerator, t.carrier().relations(), t.carrier().action())?;
    let coords = points
        .iter()
        .map(|p| numerator.coordinates(p).expect("point in span"))
        .collect();
    let u = SesquiadModule::new(t.base.clone(), carrier, coords)?;
    let (u, c) = u.minimized();
    ModuleHom::from_matrix(&u, t, inclusion.mul(&c.from))
}

/// `T / U` with carrier `M_T / M_U`, and the projection.
pub fn quotient(t: &SesquiadModule, idx: &[usize]) -> Result<ModuleHom> {
    let idx = check_submodule(t, idx)?;
    let rels = t
        .carrier()
        .relations()
        .extend(idx.iter().map(|&i| t.point(i).clone()));
    let carrier =
        FgModule::from_lattice(rels).with_action(t.carrier().action().unwrap().to_vec())?;
    let q = SesquiadModule::new(t.base.clone(), carrier, t.points().to_vec())?;
    let (q, c) = q.minimized();
    ModuleHom::from_matrix(t, &q, c.to)
}

/// `T / U` with the kernel of the projection checked against the full closure.
pub fn quotient_checked(t: &SesquiadModule, idx: &[usize]) -> Result<ModuleHom> {
    let p = quotient(t, idx)?;
    let z = p.target.zero_index();
    let ker: Vec<usize> = (0..t.len()).filter(|&i| p.point_map[i] == z).collect();
    if ker != full_closure(t, &check_submodule(t, idx)?) {
        return Err(Error::InternalInconsistency(
            "kernel of a quotient map is not the full closure".into(),
        ));
    }
    Ok(p)
}

/// Every bilinear table `S x T -> U` factors through `S ⊙ T`.
pub fn factor_bilinear(
    s: &SesquiadModule,
    t: &SesquiadModule,
    u: &SesquiadModule,
    table: &[Vec<usize>],
) -> Result<ModuleHom> {
    if table.len() != s.len() || table.iter().any(|r| r.len() != t.len()) {
        return Err(Error::NotBilinear("table has wrong shape".into()));
    }
    for (i, row) in table.iter().enumerate() {
        ModuleHom::new(t, u, row.clone())
            .map_err(|e| Error::NotBilinear(format!("b(s{i}, .) fails: {e}")))?;
    }
    for j in 0..t.len() {
        let col = table.iter().map(|r| r[j]).collect();
        ModuleHom::new(s, u, col)
            .map_err(|e| Error::NotBilinear(format!("b(., t{j}) fails: {e}")))?;
    }
    let st = tensor(s, t)?;
    let mut map = vec![usize::MAX; st.module.len()];
    for (i, row) in st.simple.iter().enumerate() {
        for (j, &k) in row.iter().enumerate() {
            if map[k] != usize::MAX && map[k] != table[i][j] {
                return Err(Error::NotBilinear(
                    "two equal simple tensors have different values".into(),
                ));
            }
            map[k] = table[i][j];
        }
    }
    ModuleHom::new(&st.module, u, map)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;

    use super::*;
    use crate::intlin::GroupInvariants;
    use crate::sesquiad::catalog::*;
    use crate::smodule::{product, SesquiadModule};

    fn f1a() -> Arc<crate::sesquiad::Sesquiad> {
        Arc::new(f1())
    }

    fn pos(m: &SesquiadModule, v: i64) -> usize {
        m.index_of(&[BigInt::from(v)]).unwrap()
    }

    #[test]
    fn inclusion_is_mono_and_epi_but_not_iso() {
        let a = f1a();
        let s = SesquiadModule::cyclic(a.clone(), 0, &[0, 1]).unwrap();
        let t = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        let f = ModuleHom::from_matrix(&s, &t, IntMatrix::identity(1)).unwrap();
        let c = f.classify();
        assert!(c.mono && c.epi && !c.iso);
        assert!(!f.is_full());
        assert!(!f.is_strong().unwrap());
    }

    #[test]
    fn reduction_mod_two() {
        let a = f1a();
        let s = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        let t = SesquiadModule::cyclic(a.clone(), 2, &[0, 1]).unwrap();
        let f = ModuleHom::from_matrix(&s, &t, IntMatrix::identity(1)).unwrap();
        assert_eq!(f.point_map, vec![pos(&t, 0), pos(&t, 1), pos(&t, 0)]);
        let k = f.kernel().unwrap();
        assert_eq!(k.source.len(), 2);
        assert_eq!(k.source.carrier().invariants(), GroupInvariants::free(1));
        assert!(k.is_strong().unwrap());
        assert!(f.cokernel().unwrap().target.is_zero_module());
    }

    #[test]
    fn cokernel_of_even_inclusion() {
        let a = f1a();
        let t = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2, 4]).unwrap();
        let inc = submodule(&t, &[pos(&t, 0), pos(&t, 2)]).unwrap();
        let c = inc.cokernel().unwrap();
        assert_eq!(c.target.len(), 2);
        assert_eq!(
            c.target.carrier().invariants().order(),
            Some(BigInt::from(2))
        );
        assert!(c.is_strong().unwrap());
        // closure of {0, 2} picks up 4
        assert_eq!(full_closure(&t, &[pos(&t, 2)]).len(), 3);
        let q = quotient_checked(&t, &[pos(&t, 2)]).unwrap();
        assert_eq!(q.target.len(), 2);
        assert!(q.is_strong().unwrap());
    }

    #[test]
    fn non_equivariant_and_non_linear_maps() {
        let a = f1a();
        let s = SesquiadModule::cyclic(a.clone(), 0, &[0, 1]).unwrap();
        let t = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        assert!(matches!(
            ModuleHom::new(&s, &t, vec![pos(&t, 1), pos(&t, 1)]),
            Err(Error::NotEquivariant(_))
        ));
        // {0,1,2} -> {0,1,2} swapping 1 and 2 is equivariant but not additive
        let swap = vec![pos(&t, 0), pos(&t, 2), pos(&t, 1)];
        assert!(matches!(
            ModuleHom::new(&t, &t, swap),
            Err(Error::NoLinearExtension)
        ));
    }

    #[test]
    fn identity_and_cover() {
        let a = f1a();
        let s = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        let id = ModuleHom::identity(&s);
        assert!(id.classify().iso);
        assert!(id.kernel().unwrap().source.is_zero_module());
        let c = ModuleHom::cover(&s).unwrap();
        assert!(c.is_point_surjective());
        assert!(c.is_full());
        assert_eq!(c.source.rank(), 2);
        let z = SesquiadModule::zero(a);
        let cz = ModuleHom::cover(&z).unwrap();
        assert_eq!(cz.source.rank(), 0);
    }

    #[test]
    fn bilinear_factorization() {
        let a = f1a();
        let s = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        let t = SesquiadModule::cyclic(a.clone(), 0, &[0, 1]).unwrap();
        let u = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        let table: Vec<Vec<usize>> = s
            .points()
            .iter()
            .map(|x| {
                t.points()
                    .iter()
                    .map(|y| u.index_of(&[&x[0] * &y[0]]).unwrap())
                    .collect()
            })
            .collect();
        let alpha = factor_bilinear(&s, &t, &u, &table).unwrap();
        assert_eq!(alpha.target, u);
        let mut bad = table.clone();
        bad[pos(&s, 1)][pos(&t, 1)] = u.zero_index();
        assert!(matches!(
            factor_bilinear(&s, &t, &u, &bad),
            Err(Error::NotBilinear(_))
        ));
    }

    #[test]
    fn products_project() {
        let a = f1a();
        let s = SesquiadModule::cyclic(a.clone(), 3, &[0, 1]).unwrap();
        let t = SesquiadModule::cyclic(a.clone(), 2, &[0, 1]).unwrap();
        let (p, ps, pt) = product(&s, &t).unwrap();
        assert_eq!(p.len(), 4);
        assert!(ps.is_point_surjective() && pt.is_point_surjective());
    }
}
