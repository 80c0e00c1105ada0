use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::SesquiadModule;
use crate::error::Result;
use crate::intlin::matrix::unit_vector;
use crate::intlin::module::{map_is_injective, subquotient, tensor};
use crate::intlin::{GroupInvariants, IntMatrix, Lattice, Vector, ZAlgebra};

/// Largest finite ring whose ideals are enumerated exhaustively.
pub const IDEAL_ENUMERATION_BOUND: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flatness {
    Flat,
    /// `ideal ⊗ M -> M` is not injective; the ideal is a lattice in the
    /// coordinates of `R_A` containing its relations.
    NotFlat {
        ideal: Lattice,
    },
    Unknown,
}

impl Flatness {
    pub fn label(&self) -> &'static str {
        match self {
            Flatness::Flat => "flat",
            Flatness::NotFlat { .. } => "not-flat",
            Flatness::Unknown => "unknown",
        }
    }
}

/// True when `J ⊗_{R_A} M_F -> M_F` fails to be injective.
pub fn ideal_criterion_fails(f: &SesquiadModule, ideal: &Lattice) -> Result<bool> {
    let r = f.base().universal();
    let regular: Vec<IntMatrix> = (0..r.rank())
        .map(|k| r.left_mult_matrix(&unit_vector(r.rank(), k)))
        .collect();
    let (j, inclusion) = subquotient(ideal, r.relations(), Some(&regular))?;
    let m = f.carrier();
    let t = tensor(&j, m, r)?;
    let nm = m.rank();
    let mut cols = Vec::with_capacity(j.rank() * nm);
    for a in 0..j.rank() {
        let x = inclusion.column(a);
        for b in 0..nm {
            cols.push(m.act_element(&x, &unit_vector(nm, b))?);
        }
    }
    let mult = IntMatrix::from_columns(nm, &cols);
    Ok(!map_is_injective(&t, m, &mult))
}

/// All ideals of a finite ring, as lattices containing the relations; `None`
/// when the ring is infinite or has more than `limit` elements.
pub fn finite_ring_ideals(r: &ZAlgebra, limit: usize) -> Option<Vec<Lattice>> {
    let elements = r.elements(limit)?;
    let mut ideals: Vec<Lattice> = Vec::new();
    for x in &elements {
        let l = r.ideal_generated(std::slice::from_ref(x)).lattice().clone();
        if !ideals.contains(&l) {
            ideals.push(l);
        }
    }
    let mut i = 0;
    while i < ideals.len() {
        for j in 0..i {
            let s = ideals[i].sum(&ideals[j]);
            if !ideals.contains(&s) {
                ideals.push(s);
            }
        }
        i += 1;
    }
    ideals.sort_by_key(|l| std::cmp::Reverse(l.index()));
    Some(ideals)
}

fn integer_ideal(r: &ZAlgebra, n: &BigInt) -> Lattice {
    let g: Vector = r.unit().iter().map(|c| c * n).collect();
    r.ideal_generated(&[g]).lattice().clone()
}

fn smallest_prime_factor(n: &BigInt) -> BigInt {
    let n = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            return p;
        }
        p += 1;
    }
    n
}

/// Tests the supplied ideals: `NotFlat` on the first failure, otherwise
/// `Unknown`.
pub fn is_flat_with_ideals(f: &SesquiadModule, ideals: &[Lattice]) -> Result<Flatness> {
    for l in ideals {
        if ideal_criterion_fails(f, l)? {
            return Ok(Flatness::NotFlat { ideal: l.clone() });
        }
    }
    Ok(Flatness::Unknown)
}

fn heuristic_ideals(f: &SesquiadModule) -> Vec<Lattice> {
    let a = f.base();
    let r = a.universal();
    let mut out: Vec<Lattice> = Vec::new();
    let mut push = |l: Lattice| {
        if !out.contains(&l) {
            out.push(l);
        }
    };
    for x in 0..a.len() {
        push(r.ideal_generated(&[a.embed(x).clone()]).lattice().clone());
    }
    for p in [2, 3, 5, 7] {
        push(integer_ideal(r, &BigInt::from(p)));
    }
    for t in f.carrier().invariants().torsion {
        push(integer_ideal(r, &smallest_prime_factor(&t)));
    }
    out
}

/// Flatness of `M_F` over `R_A`. Decided exactly when `R_A = Z` (torsion)
/// or when `R_A` is finite (all ideals); otherwise a heuristic ideal list
/// can only refute.
pub fn is_flat(f: &SesquiadModule) -> Result<Flatness> {
    let r = f.base().universal();
    let ring = r.as_module().invariants();
    if ring == GroupInvariants::free(1) {
        let torsion = f.carrier().invariants().torsion;
        return Ok(match torsion.first() {
            None => Flatness::Flat,
            Some(t) => Flatness::NotFlat {
                ideal: integer_ideal(r, &smallest_prime_factor(t)),
            },
        });
    }
    if let Some(ideals) = finite_ring_ideals(r, IDEAL_ENUMERATION_BOUND) {
        return Ok(match is_flat_with_ideals(f, &ideals)? {
            Flatness::Unknown => Flatness::Flat,
            other => other,
        });
    }
    is_flat_with_ideals(f, &heuristic_ideals(f))
}

/// The ideal generated by `n * 1`.
pub fn integer_multiple_ideal(r: &ZAlgebra, n: i64) -> Lattice {
    integer_ideal(r, &BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sesquiad::catalog::*;

    #[test]
    fn over_f1_flat_iff_torsion_free() {
        let a = Arc::new(f1());
        let z = SesquiadModule::free(a.clone(), 1);
        assert_eq!(is_flat(&z).unwrap(), Flatness::Flat);
        let t = SesquiadModule::cyclic(a.clone(), 2, &[0, 1]).unwrap();
        let Flatness::NotFlat { ideal } = is_flat(&t).unwrap() else {
            panic!("torsion module is flat")
        };
        assert!(ideal_criterion_fails(&t, &ideal).unwrap());
        assert!(!ideal_criterion_fails(&z, &ideal).unwrap());
    }

    #[test]
    fn z2_over_z4_is_not_flat() {
        let a = Arc::new(ring_z4());
        let m = SesquiadModule::cyclic(a.clone(), 2, &[0, 1]).unwrap();
        let two = integer_multiple_ideal(a.universal(), 2);
        assert!(ideal_criterion_fails(&m, &two).unwrap());
        let Flatness::NotFlat { ideal } = is_flat(&m).unwrap() else {
            panic!("Z/2 is flat over Z/4")
        };
        assert_eq!(ideal, two);
        assert_eq!(
            is_flat(&SesquiadModule::free(a, 1)).unwrap(),
            Flatness::Flat
        );
    }

    #[test]
    fn ideals_of_small_rings() {
        assert_eq!(finite_ring_ideals(&ZAlgebra::zmod(4), 64).unwrap().len(), 3);
        assert_eq!(finite_ring_ideals(&ZAlgebra::zmod(6), 64).unwrap().len(), 4);
        assert_eq!(finite_ring_ideals(&ZAlgebra::f4(), 64).unwrap().len(), 2);
        assert!(finite_ring_ideals(&ZAlgebra::integers(), 64).is_none());
    }
}
