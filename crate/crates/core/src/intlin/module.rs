//! Finitely generated abelian groups presented as `Z^n / L`, optionally with
//! the action of a finite-rank algebra.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::algebra::ZAlgebra;
use super::lattice::{integer_kernel, Lattice};
use super::matrix::{
    is_zero_vector, kron_vectors, sub_vectors, unit_vector, zero_vector, IntMatrix, Vector,
};
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// Isomorphism type of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl GroupInvariants {
    pub fn zero() -> Self {
        GroupInvariants {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        GroupInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Invariants of a direct sum.
    pub fn direct_sum(&self, other: &GroupInvariants) -> GroupInvariants {
        let rank = self.torsion.len() + other.torsion.len();
        let mut diag: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        diag.resize(rank, BigInt::zero());
        let m = IntMatrix::diagonal(rank, rank, &diag);
        let torsion = smith_normal_form(&m)
            .invariant_factors
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        GroupInvariants {
            free_rank: self.free_rank + other.free_rank,
            torsion,
        }
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Change of coordinates between two presentations of the same group.
#[derive(Clone, Debug)]
pub struct Coordinates {
    /// Old coordinates to new.
    pub to: IntMatrix,
    /// New coordinates to old.
    pub from: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgModule {
    rank: usize,
    relations: Lattice,
    action: Option<Vec<IntMatrix>>,
}

impl FgModule {
    pub fn new<I: IntoIterator<Item = Vector>>(rank: usize, relations: I) -> Self {
        FgModule {
            rank,
            relations: Lattice::from_generators(rank, relations),
            action: None,
        }
    }

    pub fn from_lattice(relations: Lattice) -> Self {
        FgModule {
            rank: relations.dim(),
            relations,
            action: None,
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::from_lattice(Lattice::zero(rank))
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `Z/n`, or `Z` for `n = 0`.
    pub fn cyclic(n: i64) -> Self {
        Self::new(1, [vec![BigInt::from(n)]])
    }

    /// Attaches action matrices, one per algebra basis element; each must
    /// preserve the relation lattice.
    pub fn with_action(mut self, action: Vec<IntMatrix>) -> Result<Self> {
        for a in &action {
            if a.rows() != self.rank || a.cols() != self.rank {
                return Err(Error::DimensionMismatch {
                    expected: self.rank,
                    found: a.rows(),
                });
            }
            if !self
                .relations
                .basis()
                .iter()
                .all(|r| self.relations.contains(&a.mul_vec(r)))
            {
                return Err(Error::ActionNotPreserved);
            }
        }
        self.action = Some(action);
        Ok(self)
    }

    /// Attaches the action of `Z` itself (the identity).
    pub fn with_integer_action(self) -> Self {
        let n = self.rank;
        self.with_action(vec![IntMatrix::identity(n)])
            .expect("identity preserves relations")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn action(&self) -> Option<&[IntMatrix]> {
        self.action.as_deref()
    }

    pub fn require_action(&self) -> Result<&[IntMatrix]> {
        self.action().ok_or(Error::MissingAction)
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vector {
        self.relations.reduce(v)
    }

    pub fn equal(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        self.relations.contains(&sub_vectors(a, b))
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.relations.contains(v)
    }

    /// Applies basis action `k`, returning the canonical representative.
    pub fn act(&self, k: usize, v: &[BigInt]) -> Result<Vector> {
        let action = self.require_action()?;
        Ok(self.reduce(&action[k].mul_vec(v)))
    }

    /// Applies an algebra element given in basis coordinates.
    pub fn act_element(&self, r: &[BigInt], v: &[BigInt]) -> Result<Vector> {
        let action = self.require_action()?;
        let mut out = zero_vector(self.rank);
        for (k, c) in r.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = action[k].mul_vec(v);
            for (o, x) in out.iter_mut().zip(w) {
                *o += c * x;
            }
        }
        Ok(self.reduce(&out))
    }

    pub fn invariants(&self) -> GroupInvariants {
        let basis = self.relations.basis_matrix();
        let snf = smith_normal_form(&basis);
        let torsion: Vec<BigInt> = snf
            .invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        GroupInvariants {
            free_rank: self.rank - snf.rank(),
            torsion,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.relations.rank() == self.rank
    }

    pub fn order(&self) -> Option<BigInt> {
        self.relations.index()
    }

    pub fn is_zero_module(&self) -> bool {
        self.relations.is_full()
    }

    /// All canonical element representatives of a finite module, in
    /// lexicographic order of the reduced coordinates; `None` when infinite or
    /// larger than `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vector>> {
        let order = self.order()?.to_usize()?;
        if order > limit {
            return None;
        }
        // reduced representatives have coordinate p in [0, pivot) and zero
        // contribution freedom elsewhere; enumerate the box of pivots.
        let pivots: Vec<BigInt> = self
            .relations
            .basis()
            .iter()
            .enumerate()
            .map(|(i, r)| r[i].clone())
            .collect();
        let mut out = Vec::with_capacity(order);
        let mut digits = vec![BigInt::zero(); self.rank];
        loop {
            out.push(self.reduce(&digits));
            let mut i = self.rank;
            loop {
                if i == 0 {
                    out.sort();
                    out.dedup();
                    return Some(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < pivots[i] {
                    break;
                }
                digits[i] = BigInt::zero();
            }
        }
    }

    /// Direct sum, with actions block-diagonal when both have them.
    pub fn direct_sum(&self, other: &FgModule) -> FgModule {
        let n = self.rank + other.rank;
        let rels = self
            .relations
            .basis()
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.extend(zero_vector(other.rank));
                v
            })
            .chain(other.relations.basis().iter().map(|r| {
                let mut v = zero_vector(self.rank);
                v.extend(r.iter().cloned());
                v
            }));
        let mut m = FgModule::new(n, rels);
        if let (Some(a), Some(b)) = (&self.action, &other.action) {
            if a.len() == b.len() {
                m.action = Some(a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect());
            }
        }
        m
    }

    /// Smallest presentation: one generator per invariant factor other than 1.
    pub fn minimized(&self) -> (FgModule, Coordinates) {
        let basis = self.relations.basis_matrix();
        let snf = smith_normal_form(&basis);
        let n = self.rank;
        let keep: Vec<usize> = (0..n)
            .filter(|&i| i >= snf.rank() || !snf.invariant_factors[i].is_one())
            .collect();
        let to = snf.u.select_rows(&keep);
        let from = snf.u_inv.select_columns(&keep);
        let m = keep.len();
        let rels: Vec<Vector> = keep
            .iter()
            .enumerate()
            .filter(|(_, &i)| i < snf.rank())
            .map(|(k, &i)| {
                let mut v = zero_vector(m);
                v[k] = snf.invariant_factors[i].clone();
                v
            })
            .collect();
        let mut out = FgModule::new(m, rels);
        if let Some(action) = &self.action {
            out.action = Some(action.iter().map(|a| to.mul(a).mul(&from)).collect());
        }
        (out, Coordinates { to, from })
    }

    /// Checks that the action satisfies the relations of `alg`: every relation
    /// of the algebra acts as zero and the unit acts as identity.
    pub fn satisfies_algebra(&self, alg: &ZAlgebra) -> bool {
        let Some(action) = &self.action else {
            return false;
        };
        if action.len() != alg.rank() {
            return false;
        }
        let gens: Vec<Vector> = (0..self.rank).map(|i| unit_vector(self.rank, i)).collect();
        let zero_on_all = |r: &[BigInt]| {
            gens.iter().all(|g| {
                self.act_element(r, g)
                    .map(|w| is_zero_vector(&w))
                    .unwrap_or(false)
            })
        };
        if !alg.relations().basis().iter().all(|r| zero_on_all(r)) {
            return false;
        }
        gens.iter().all(|g| {
            self.act_element(alg.unit(), g)
                .map(|w| self.equal(&w, g))
                .unwrap_or(false)
        })
    }
}

/// A subgroup of an [`FgModule`], given by generators; canonical form is the
/// Hermite basis of generators plus ambient relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ambient_rank: usize,
    generators: Vec<Vector>,
    lattice: Lattice,
}

impl Subgroup {
    pub fn generated(ambient: &FgModule, generators: Vec<Vector>) -> Result<Self> {
        for g in &generators {
            if g.len() != ambient.rank() {
                return Err(Error::DimensionMismatch {
                    expected: ambient.rank(),
                    found: g.len(),
                });
            }
        }
        let lattice = ambient.relations().extend(generators.iter().cloned());
        Ok(Subgroup {
            ambient_rank: ambient.rank(),
            generators,
            lattice,
        })
    }

    pub fn zero(ambient: &FgModule) -> Self {
        Subgroup {
            ambient_rank: ambient.rank(),
            generators: Vec::new(),
            lattice: ambient.relations().clone(),
        }
    }

    pub fn from_lattice(lattice: Lattice) -> Self {
        Subgroup {
            ambient_rank: lattice.dim(),
            generators: lattice.basis().to_vec(),
            lattice,
        }
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    /// Preimage lattice in the covering free module.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn member(&self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_rank,
                found: v.len(),
            });
        }
        Ok(self.lattice.contains(v))
    }

    pub fn is_action_stable(&self, ambient: &FgModule) -> bool {
        match ambient.action() {
            None => true,
            Some(action) => action.iter().all(|a| {
                self.lattice
                    .basis()
                    .iter()
                    .all(|b| self.lattice.contains(&a.mul_vec(b)))
            }),
        }
    }
}

/// `m / s` with its projection (identity on covering coordinates).
pub fn quotient(m: &FgModule, s: &Subgroup) -> Result<(FgModule, IntMatrix)> {
    if s.ambient_rank != m.rank() {
        return Err(Error::DimensionMismatch {
            expected: m.rank(),
            found: s.ambient_rank,
        });
    }
    if m.action().is_some() && !s.is_action_stable(m) {
        return Err(Error::ActionNotPreserved);
    }
    let q = FgModule {
        rank: m.rank(),
        relations: s.lattice.clone(),
        action: m.action.clone(),
    };
    Ok((q, IntMatrix::identity(m.rank())))
}

/// Presentation of `numerator / denominator` for lattices
/// `denominator ⊆ numerator ⊆ Z^n`, together with the inclusion of the
/// numerator basis (`n x r` matrix sending new coordinates to old ones).
/// Action matrices on `Z^n` that preserve both lattices descend.
pub fn subquotient(
    numerator: &Lattice,
    denominator: &Lattice,
    action: Option<&[IntMatrix]>,
) -> Result<(FgModule, IntMatrix)> {
    let basis = numerator.basis_matrix();
    let r = numerator.rank();
    let coords = |v: &[BigInt]| {
        numerator.coordinates(v).ok_or_else(|| {
            Error::InternalInconsistency("vector outside subquotient numerator".into())
        })
    };
    let rels = denominator
        .basis()
        .iter()
        .map(|v| coords(v))
        .collect::<Result<Vec<_>>>()?;
    let mut module = FgModule::new(r, rels);
    if let Some(action) = action {
        let mut mats = Vec::with_capacity(action.len());
        for a in action {
            let cols = numerator
                .basis()
                .iter()
                .map(|b| coords(&a.mul_vec(b)))
                .collect::<Result<Vec<_>>>()?;
            mats.push(IntMatrix::from_columns(r, &cols));
        }
        module = module.with_action(mats)?;
    }
    Ok((module, basis))
}

/// True iff `map` sends the relations of `source` into those of `target`.
pub fn map_is_well_defined(source: &FgModule, target: &FgModule, map: &IntMatrix) -> bool {
    source
        .relations()
        .basis()
        .iter()
        .all(|r| target.relations().contains(&map.mul_vec(r)))
}

/// Preimage lattice in `Z^{n_s}` of the kernel of the induced group map.
pub fn map_kernel(source: &FgModule, target: &FgModule, map: &IntMatrix) -> Lattice {
    let t_basis = target.relations().basis_matrix();
    let mut cols = map.columns();
    cols.extend(t_basis.columns());
    let joint = IntMatrix::from_columns(target.rank(), &cols);
    let k = integer_kernel(&joint);
    let ns = source.rank();
    source
        .relations()
        .extend(k.basis().iter().map(|v| v[..ns].to_vec()))
}

/// Preimage lattice in `Z^{n_t}` of the image of the induced group map.
pub fn map_image(target: &FgModule, map: &IntMatrix) -> Lattice {
    target.relations().extend(map.columns())
}

pub fn map_is_injective(source: &FgModule, target: &FgModule, map: &IntMatrix) -> bool {
    source
        .relations()
        .contains_lattice(&map_kernel(source, target, map))
}

pub fn map_is_surjective(target: &FgModule, map: &IntMatrix) -> bool {
    map_image(target, map).is_full()
}

/// `a ⊗_R b` where both carry actions of the algebra `over`.
pub fn tensor(a: &FgModule, b: &FgModule, over: &ZAlgebra) -> Result<FgModule> {
    let act_a = a.require_action()?;
    let act_b = b.require_action()?;
    if act_a.len() != over.rank() || act_b.len() != over.rank() {
        return Err(Error::DimensionMismatch {
            expected: over.rank(),
            found: act_a.len().min(act_b.len()),
        });
    }
    let (na, nb) = (a.rank(), b.rank());
    let ea: Vec<Vector> = (0..na).map(|i| unit_vector(na, i)).collect();
    let eb: Vec<Vector> = (0..nb).map(|j| unit_vector(nb, j)).collect();
    let mut rels: Vec<Vector> = Vec::new();
    for r in a.relations().basis() {
        for y in &eb {
            rels.push(kron_vectors(r, y));
        }
    }
    for x in &ea {
        for r in b.relations().basis() {
            rels.push(kron_vectors(x, r));
        }
    }
    for k in 0..over.rank() {
        for x in &ea {
            let rx = act_a[k].mul_vec(x);
            for y in &eb {
                let ry = act_b[k].mul_vec(y);
                rels.push(sub_vectors(&kron_vectors(&rx, y), &kron_vectors(x, &ry)));
            }
        }
    }
    let id_b = IntMatrix::identity(nb);
    let action = act_a.iter().map(|m| m.kron(&id_b)).collect();
    FgModule::new(na * nb, rels).with_action(action)
}

/// Sign-normalized vector; used to compare invariant factor lists.
pub fn abs_all(v: &[BigInt]) -> Vector {
    v.iter().map(Signed::abs).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::matrix::vector;

    #[test]
    fn quotient_of_z2_by_2e1() {
        let m = FgModule::free(2);
        let s = Subgroup::generated(&m, vec![vector(&[2, 0])]).unwrap();
        let (q, _) = quotient(&m, &s).unwrap();
        assert_eq!(
            q.invariants(),
            GroupInvariants {
                free_rank: 1,
                torsion: vec![BigInt::from(2)]
            }
        );
    }

    #[test]
    fn quotient_by_everything_is_zero() {
        let m = FgModule::new(2, [vector(&[3, 0])]);
        let s = Subgroup::generated(&m, vec![vector(&[1, 0]), vector(&[0, 1])]).unwrap();
        let (q, _) = quotient(&m, &s).unwrap();
        assert!(q.invariants().is_zero());
        let (z, _) = quotient(
            &FgModule::free(1),
            &Subgroup::generated(&FgModule::free(1), vec![vector(&[2])]).unwrap(),
        )
        .unwrap();
        assert_eq!(z.order(), Some(BigInt::from(2)));
    }

    #[test]
    fn member_examples() {
        let z = FgModule::free(1);
        let two = Subgroup::generated(&z, vec![vector(&[2])]).unwrap();
        assert!(two.member(&vector(&[4])).unwrap());
        assert!(!two.member(&vector(&[3])).unwrap());
        let m = FgModule::new(2, [vector(&[0, 2])]);
        let s = Subgroup::generated(&m, vec![vector(&[1, 1])]).unwrap();
        assert!(s.member(&vector(&[1, 3])).unwrap());
        assert!(matches!(
            s.member(&vector(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let z = ZAlgebra::integers();
        let zz = FgModule::free(1).with_integer_action();
        assert_eq!(
            tensor(&zz, &zz, &z).unwrap().invariants(),
            GroupInvariants::free(1)
        );
        let z2 = FgModule::cyclic(2).with_integer_action();
        let z3 = FgModule::cyclic(3).with_integer_action();
        assert!(tensor(&z2, &z3, &z).unwrap().invariants().is_zero());
        let z4 = ZAlgebra::zmod(4);
        let half = FgModule::cyclic(2)
            .with_action(vec![IntMatrix::identity(1)])
            .unwrap();
        assert!(half.satisfies_algebra(&z4));
        let t = tensor(&half, &half, &z4).unwrap();
        assert_eq!(
            t.invariants(),
            GroupInvariants {
                free_rank: 0,
                torsion: vec![BigInt::from(2)]
            }
        );
        assert!(matches!(
            tensor(&FgModule::free(1), &zz, &z),
            Err(Error::MissingAction)
        ));
    }

    #[test]
    fn minimized_preserves_invariants() {
        let m = FgModule::new(
            3,
            [vector(&[2, 4, 0]), vector(&[6, 8, 0]), vector(&[0, 0, 1])],
        );
        let (small, c) = m.minimized();
        assert_eq!(small.invariants(), m.invariants());
        assert_eq!(small.rank(), 2);
        let v = vector(&[1, 1, 5]);
        let back = c.from.mul_vec(&c.to.mul_vec(&v));
        assert!(m.equal(&back, &v));
    }

    #[test]
    fn enumerate_finite_module() {
        let m = FgModule::new(2, [vector(&[2, 0]), vector(&[1, 3])]);
        let els = m.elements(100).unwrap();
        assert_eq!(els.len(), 6);
    }
}
