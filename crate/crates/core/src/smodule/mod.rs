//! Modules over a sesquiad: a finite, `A`-stable, generating point set inside
//! an `R_A`-module, and the full-morphism category they form.

mod exact;
mod flat;
mod hom;
pub mod random;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intlin::lattice::solve;
use crate::intlin::matrix::{kron_vectors, unit_vector, zero_vector};
use crate::intlin::module::{subquotient, tensor as carrier_tensor};
use crate::intlin::{Coordinates, FgModule, IntMatrix, Vector};
use crate::sesquiad::{Sesquiad, SesquiadHom};

pub use exact::{
    carrier_exact, is_exact_at, is_exact_pair, is_strong_exact, short_exact, Sequence,
};
pub use flat::{
    finite_ring_ideals, ideal_criterion_fails, integer_multiple_ideal, is_flat,
    is_flat_with_ideals, Flatness, IDEAL_ENUMERATION_BOUND,
};
pub use hom::{
    factor_bilinear, full_closure, quotient, quotient_checked, submodule, Classification, ModuleHom,
};

#[derive(Clone, Debug)]
pub struct SesquiadModule {
    base: Arc<Sesquiad>,
    carrier: FgModule,
    points: Vec<Vector>,
    index: HashMap<Vector, usize>,
    /// Each carrier basis vector as an integer combination of the points.
    basis_in_points: Vec<Vector>,
}

impl PartialEq for SesquiadModule {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.points == other.points && *self.base == *other.base
    }
}

impl Eq for SesquiadModule {}

impl SesquiadModule {
    /// Validates the carrier action and the point set; the zero point is added
    /// when missing.
    pub fn new(base: Arc<Sesquiad>, carrier: FgModule, points: Vec<Vector>) -> Result<Self> {
        let action = carrier.require_action()?;
        if action.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: action.len(),
            });
        }
        if !carrier.satisfies_algebra(base.universal()) {
            return Err(Error::Invalid("carrier is not a module over R_A".into()));
        }
        let n = carrier.rank();
        let mut pts: Vec<Vector> = points
            .iter()
            .map(|p| {
                if p.len() != n {
                    Err(Error::DimensionMismatch {
                        expected: n,
                        found: p.len(),
                    })
                } else {
                    Ok(carrier.reduce(p))
                }
            })
            .collect::<Result<_>>()?;
        pts.push(zero_vector(n));
        pts.sort();
        pts.dedup();
        let index: HashMap<Vector, usize> = pts
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        for p in &pts {
            for a in 0..base.len() {
                if !index.contains_key(&carrier.act(a, p)?) {
                    return Err(Error::NotASubmodule("points are not stable under A".into()));
                }
            }
        }
        let mut cols = pts.clone();
        cols.extend(carrier.relations().basis().iter().cloned());
        let span = IntMatrix::from_columns(n, &cols);
        let basis_in_points = (0..n)
            .map(|j| {
                solve(&span, &unit_vector(n, j))
                    .map(|x| x[..pts.len()].to_vec())
                    .ok_or_else(|| Error::Invalid("points do not generate the carrier".into()))
            })
            .collect::<Result<_>>()?;
        Ok(SesquiadModule {
            base,
            carrier,
            points: pts,
            index,
            basis_in_points,
        })
    }

    /// Module on a group where every element of `A` acts by an integer
    /// scalar. Requires `R_A` to be additively generated by 1.
    pub fn scalar(base: Arc<Sesquiad>, group: FgModule, points: Vec<Vector>) -> Result<Self> {
        let action = scalar_action(&base, group.rank())?;
        let carrier =
            FgModule::new(group.rank(), group.relations().basis().to_vec()).with_action(action)?;
        Self::new(base, carrier, points)
    }

    /// Integer points `values` in the cyclic group `Z/order` (`Z` for 0).
    pub fn cyclic(base: Arc<Sesquiad>, order: i64, values: &[i64]) -> Result<Self> {
        let pts = values.iter().map(|&v| vec![BigInt::from(v)]).collect();
        Self::scalar(base, FgModule::cyclic(order), pts)
    }

    pub fn zero(base: Arc<Sesquiad>) -> Self {
        let action = vec![IntMatrix::zeros(0, 0); base.len()];
        let carrier = FgModule::free(0).with_action(action).expect("empty action");
        Self::new(base, carrier, vec![]).expect("zero module")
    }

    /// `R_A^n` with points `A * basis`, in the monoid basis of each block.
    pub fn free_presented(base: Arc<Sesquiad>, n: usize) -> Self {
        let m = base.len();
        let r = base.universal();
        let rels = (0..n).flat_map(|i| {
            r.relations().basis().iter().map(move |v| {
                let mut w = zero_vector(n * m);
                w[i * m..(i + 1) * m].clone_from_slice(v);
                w
            })
        });
        let action = (0..m)
            .map(|a| {
                let block = r.left_mult_matrix(&unit_vector(m, a));
                (0..n).fold(IntMatrix::zeros(0, 0), |acc, _| acc.direct_sum(&block))
            })
            .collect();
        let carrier = FgModule::new(n * m, rels)
            .with_action(action)
            .expect("free module");
        let points = (0..n)
            .flat_map(|i| (0..m).map(move |a| unit_vector(n * m, i * m + a)))
            .collect();
        Self::new(base, carrier, points).expect("free module")
    }

    /// The free module of rank `n`, in a minimal presentation.
    pub fn free(base: Arc<Sesquiad>, n: usize) -> Self {
        Self::free_presented(base, n).minimized().0
    }

    /// Submodule of `ambient` (a carrier with action) generated by `A`-orbits
    /// of `gens`, with the inclusion of its carrier basis into `ambient`.
    pub fn generated_in(
        base: Arc<Sesquiad>,
        ambient: &FgModule,
        gens: &[Vector],
    ) -> Result<(Self, IntMatrix)> {
        let points = orbit_closure(&base, ambient, gens)?;
        let numerator = ambient.relations().extend(points.iter().cloned());
        let (carrier, inclusion) = subquotient(&numerator, ambient.relations(), ambient.action())?;
        let coords = points
            .iter()
            .map(|p| numerator.coordinates(p).expect("points lie in their span"))
            .collect();
        Ok((Self::new(base, carrier, coords)?, inclusion))
    }

    pub fn base(&self) -> &Arc<Sesquiad> {
        &self.base
    }

    pub fn carrier(&self) -> &FgModule {
        &self.carrier
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Vector {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.carrier.rank()
    }

    pub fn index_of(&self, v: &[BigInt]) -> Option<usize> {
        self.index.get(&self.carrier.reduce(v)).copied()
    }

    pub fn zero_index(&self) -> usize {
        self.index[&zero_vector(self.rank())]
    }

    /// Index of `a * points[i]`.
    pub fn act_point(&self, a: usize, i: usize) -> usize {
        let v = self
            .carrier
            .act(a, &self.points[i])
            .expect("carrier has an action");
        self.index[&v]
    }

    pub fn basis_in_points(&self) -> &[Vector] {
        &self.basis_in_points
    }

    /// True when the point set is the whole (finite) carrier.
    pub fn is_full_module(&self) -> bool {
        self.carrier
            .order()
            .is_some_and(|o| o == BigInt::from(self.points.len()))
    }

    /// Zero module check: only the zero point.
    pub fn is_zero_module(&self) -> bool {
        self.carrier.is_zero_module()
    }

    /// Same module in a presentation with one generator per nontrivial
    /// invariant factor.
    pub fn minimized(&self) -> (Self, Coordinates) {
        let (carrier, coords) = self.carrier.minimized();
        let points = self.points.iter().map(|p| coords.to.mul_vec(p)).collect();
        let m = Self::new(self.base.clone(), carrier, points)
            .expect("change of coordinates keeps a module");
        (m, coords)
    }

    /// `(M_S, M_S)` for a finite carrier.
    pub fn full_module(base: Arc<Sesquiad>, carrier: FgModule, limit: usize) -> Result<Self> {
        let points = carrier
            .elements(limit)
            .ok_or_else(|| Error::Invalid("carrier is infinite or too large".into()))?;
        Self::new(base, carrier, points)
    }

    /// The module with the same points and every element of the finite
    /// carrier added.
    pub fn with_all_points(&self, limit: usize) -> Result<Self> {
        Self::full_module(self.base.clone(), self.carrier.clone(), limit)
    }

    /// Same carrier, extra points: the `A`-orbits of `extra` are added.
    pub fn with_extra_points(&self, extra: &[Vector]) -> Result<Self> {
        let mut pts = self.points.clone();
        pts.extend(orbit_closure(&self.base, &self.carrier, extra)?);
        Self::new(self.base.clone(), self.carrier.clone(), pts)
    }

    /// Points as an `A`-module restricted along `h: B -> A`.
    pub fn restrict_scalars(&self, h: &SesquiadHom) -> Result<Self> {
        if *h.target != *self.base {
            return Err(Error::BaseMismatch);
        }
        let action = self.carrier.require_action()?;
        let new_action = h.map.iter().map(|&b| action[b].clone()).collect();
        let carrier = FgModule::new(self.rank(), self.carrier.relations().basis().to_vec())
            .with_action(new_action)?;
        Self::new(h.source.clone(), carrier, self.points.clone())
    }

    /// `R_B ⊗_{R_A} M` with points `B * (1 ⊗ S)`, for `h: A -> B`; returns the
    /// module and the matrix of `x -> 1 ⊗ x` in minimized coordinates.
    pub fn extend_scalars(&self, h: &SesquiadHom) -> Result<(Self, IntMatrix)> {
        if *h.source != *self.base {
            return Err(Error::BaseMismatch);
        }
        let b = &h.target;
        let rb = b.universal();
        let nb = b.len();
        // R_B as an R_A-module through h
        let rb_over_a: Vec<IntMatrix> = (0..self.base.len())
            .map(|a| rb.left_mult_matrix(b.embed(h.apply(a))))
            .collect();
        let rb_module = FgModule::from_lattice(rb.relations().clone()).with_action(rb_over_a)?;
        let t = carrier_tensor(&rb_module, &self.carrier, self.base.universal())?;
        let n = self.rank();
        let b_action: Vec<IntMatrix> = (0..nb)
            .map(|x| {
                rb.left_mult_matrix(&unit_vector(nb, x))
                    .kron(&IntMatrix::identity(n))
            })
            .collect();
        let carrier =
            FgModule::new(t.rank(), t.relations().basis().to_vec()).with_action(b_action)?;
        let one = b.embed(b.one()).clone();
        let unit_map_cols: Vec<Vector> = (0..n)
            .map(|j| kron_vectors(&one, &unit_vector(n, j)))
            .collect();
        let unit_map = IntMatrix::from_columns(nb * n, &unit_map_cols);
        let gens: Vec<Vector> = self.points.iter().map(|p| unit_map.mul_vec(p)).collect();
        let points = orbit_closure(b, &carrier, &gens)?;
        let m = Self::new(b.clone(), carrier, points)?;
        let (small, coords) = m.minimized();
        Ok((small, coords.to.mul(&unit_map)))
    }
}

/// Action of `A` on `Z^n` through integer scalars, one matrix per element.
/// Requires `R_A` to be additively generated by 1.
pub fn scalar_action(base: &Sesquiad, n: usize) -> Result<Vec<IntMatrix>> {
    let r = base.universal();
    let mut cols = vec![r.reduce(r.unit())];
    cols.extend(r.relations().basis().iter().cloned());
    let m = IntMatrix::from_columns(r.rank(), &cols);
    (0..base.len())
        .map(|a| {
            let c = solve(&m, base.embed(a))
                .ok_or_else(|| Error::Invalid("R_A is not cyclic".into()))?;
            Ok(IntMatrix::identity(n).scale(&c[0]))
        })
        .collect()
}

/// `A`-orbit closure of `gens` in `carrier`, reduced, with zero.
pub fn orbit_closure(base: &Sesquiad, carrier: &FgModule, gens: &[Vector]) -> Result<Vec<Vector>> {
    let mut out: Vec<Vector> = vec![zero_vector(carrier.rank())];
    for g in gens {
        for a in 0..base.len() {
            let v = carrier.act(a, g)?;
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Cartesian product with its two projections.
pub fn product(
    s: &SesquiadModule,
    t: &SesquiadModule,
) -> Result<(SesquiadModule, ModuleHom, ModuleHom)> {
    if *s.base != *t.base {
        return Err(Error::BaseMismatch);
    }
    let carrier = s.carrier.direct_sum(&t.carrier);
    let points = s
        .points
        .iter()
        .flat_map(|x| {
            t.points
                .iter()
                .map(move |y| x.iter().chain(y).cloned().collect::<Vector>())
        })
        .collect();
    let p = SesquiadModule::new(s.base.clone(), carrier, points)?;
    let (ns, nt) = (s.rank(), t.rank());
    let ps = IntMatrix::identity(ns + nt).select_rows(&(0..ns).collect::<Vec<_>>());
    let pt = IntMatrix::identity(ns + nt).select_rows(&(ns..ns + nt).collect::<Vec<_>>());
    let proj_s = ModuleHom::from_matrix(&p, s, ps)?;
    let proj_t = ModuleHom::from_matrix(&p, t, pt)?;
    Ok((p, proj_s, proj_t))
}

/// `S ⊙ T` and the table of simple tensors `s_i ⊗ t_j`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: SesquiadModule,
    pub simple: Vec<Vec<usize>>,
}

pub fn tensor(s: &SesquiadModule, t: &SesquiadModule) -> Result<TensorProduct> {
    if *s.base != *t.base {
        return Err(Error::BaseMismatch);
    }
    let (sm, cs) = s.minimized();
    let (tm, ct) = t.minimized();
    let carrier = carrier_tensor(&sm.carrier, &tm.carrier, s.base.universal())?;
    let sp: Vec<Vector> = s.points.iter().map(|p| cs.to.mul_vec(p)).collect();
    let tp: Vec<Vector> = t.points.iter().map(|p| ct.to.mul_vec(p)).collect();
    let simple_vecs: Vec<Vec<Vector>> = sp
        .iter()
        .map(|x| tp.iter().map(|y| kron_vectors(x, y)).collect())
        .collect();
    let all: Vec<Vector> = simple_vecs.iter().flatten().cloned().collect();
    let raw = SesquiadModule::new(s.base.clone(), carrier, all)?;
    let (module, coords) = raw.minimized();
    let simple = simple_vecs
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    module
                        .index_of(&coords.to.mul_vec(v))
                        .expect("simple tensor is a point")
                })
                .collect()
        })
        .collect();
    Ok(TensorProduct { module, simple })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::GroupInvariants;
    use crate::sesquiad::catalog::*;

    #[test]
    fn cyclic_modules_over_f1() {
        let a = Arc::new(f1());
        let m = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        assert_eq!(m.len(), 3);
        assert!(SesquiadModule::cyclic(a.clone(), 0, &[0, 2]).is_err());
        let free = SesquiadModule::free(a.clone(), 1);
        assert_eq!(free.len(), 2);
        assert_eq!(free.carrier().invariants(), GroupInvariants::free(1));
    }

    #[test]
    fn free_module_over_ring_z4() {
        let a = Arc::new(ring_z4());
        let f = SesquiadModule::free(a, 2);
        assert_eq!(f.carrier().order(), Some(BigInt::from(16)));
        assert_eq!(f.len(), 7);
    }

    #[test]
    fn tensor_of_integer_point_sets() {
        let a = Arc::new(f1());
        let s = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        let t = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 3]).unwrap();
        let st = tensor(&s, &t).unwrap();
        assert_eq!(st.module.carrier().invariants(), GroupInvariants::free(1));
        let mut values: Vec<BigInt> = st.module.points().iter().map(|p| p[0].clone()).collect();
        values
            .iter_mut()
            .for_each(|v| *v = num_traits::Signed::abs(v));
        values.sort();
        assert_eq!(values, [0, 1, 2, 3, 6].map(BigInt::from).to_vec());
        let unit = SesquiadModule::free(a, 1);
        let uu = tensor(&unit, &unit).unwrap();
        assert_eq!(uu.module.len(), 2);
    }

    #[test]
    fn product_has_pairs_as_points() {
        let a = Arc::new(f1());
        let s = SesquiadModule::cyclic(a.clone(), 2, &[0, 1]).unwrap();
        let (p, _, _) = product(&s, &s).unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn extension_of_scalars_to_a_quotient() {
        let a = Arc::new(idempotent());
        let c = crate::sesquiad::congruence_generated(&a, &[(1, 2)]);
        let (q, h) = c.quotient(&a);
        let free = SesquiadModule::free(a, 1);
        let (ext, _) = free.extend_scalars(&h).unwrap();
        assert_eq!(*ext.base(), q);
        assert_eq!(ext.carrier().invariants(), GroupInvariants::free(1));
    }
}
