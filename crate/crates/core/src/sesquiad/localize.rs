//! Localization at a prime congruence and residue sesquiads.
//!
//! For a finite monoid every element has eventually periodic powers, so
//! inverting `S_E` amounts to setting the idempotent power `ε` of the product
//! of `S_E` equal to 1: `S_E^{-1} R_A = R_A / (1 - ε)`. The elements `a / s`
//! are already images of elements of `A`, so `A_E` is the quotient
//! `A / <1 ~ ε>`.

use std::sync::Arc;

use super::congruence::{congruence_generated, Congruence};
use super::hom::SesquiadHom;
use super::Sesquiad;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Localization {
    /// `S_E`: elements not in the zero class of `E`.
    pub multiplicative_set: Vec<usize>,
    /// Idempotent power of the product of `S_E`.
    pub idempotent: usize,
    pub local: Arc<Sesquiad>,
    pub to_local: SesquiadHom,
    /// The prime induced on `A_E`.
    pub local_prime: Congruence,
    /// `A_E / E_E`.
    pub residue: Arc<Sesquiad>,
    /// `(A / E)_Δ`.
    pub residue_via_quotient: Arc<Sesquiad>,
    /// Isomorphism `A_E / E_E -> (A / E)_Δ`, compatible with the maps from `A`.
    pub comparison: SesquiadHom,
    /// `A -> A_E / E_E`.
    pub to_residue: SesquiadHom,
}

fn idempotent_power(a: &Sesquiad, x: usize) -> usize {
    let mut p = x;
    loop {
        if a.mul(p, p) == p {
            return p;
        }
        p = a.mul(p, x);
    }
}

/// `(ε, S)` for the set `S` of elements outside the zero class.
fn inverted(a: &Sesquiad, c: &Congruence) -> (usize, Vec<usize>) {
    let z = c.labels()[a.zero()];
    let s: Vec<usize> = (0..a.len()).filter(|&x| c.labels()[x] != z).collect();
    let product = s.iter().fold(a.one(), |acc, &x| a.mul(acc, x));
    (idempotent_power(a, product), s)
}

/// Total localization `A_Δ` of an integral sesquiad with its structure map.
pub(crate) fn localize_diagonal(a: &Arc<Sesquiad>) -> (Arc<Sesquiad>, SesquiadHom) {
    let (eps, _) = inverted(a, &Congruence::diagonal(a));
    congruence_generated(a, &[(a.one(), eps)]).quotient(a)
}

pub fn localize(a: &Arc<Sesquiad>, e: &Congruence) -> Result<Localization> {
    if !e.is_prime(a) {
        return Err(Error::NotPrime);
    }
    let (eps, s) = inverted(a, e);
    let (local, to_local) = congruence_generated(a, &[(a.one(), eps)]).quotient(a);
    let pairs: Vec<(usize, usize)> = e
        .generating_pairs(a)
        .into_iter()
        .map(|(x, y)| (to_local.apply(x), to_local.apply(y)))
        .collect();
    let local_prime = congruence_generated(&local, &pairs);
    let (residue, residue_proj) = local_prime.quotient(&local);
    let to_residue = to_local.compose(&residue_proj)?;

    let (quot, quot_map) = e.quotient(a);
    let (residue_via_quotient, loc2) = localize_diagonal(&quot);
    let other = quot_map.compose(&loc2)?;

    // both residues are quotients of A; they agree iff the induced
    // partitions of A agree, and then the comparison is read off
    let mut map = vec![usize::MAX; residue.len()];
    for x in 0..a.len() {
        let (i, j) = (to_residue.apply(x), other.apply(x));
        if map[i] != usize::MAX && map[i] != j {
            return Err(Error::InternalInconsistency(
                "residue sesquiads induce different partitions".into(),
            ));
        }
        map[i] = j;
    }
    let mut seen = vec![false; residue_via_quotient.len()];
    for &j in &map {
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::InternalInconsistency(
                "residue comparison is not injective".into(),
            ));
        }
    }
    let comparison = SesquiadHom::new(residue.clone(), residue_via_quotient.clone(), map.clone())?;
    let mut inverse = vec![0; map.len()];
    for (i, &j) in map.iter().enumerate() {
        inverse[j] = i;
    }
    // the inverse must be a homomorphism too, so the rings match
    SesquiadHom::new(residue_via_quotient.clone(), residue.clone(), inverse)?;
    Ok(Localization {
        multiplicative_set: s,
        idempotent: eps,
        local,
        to_local,
        local_prime,
        residue,
        residue_via_quotient,
        comparison,
        to_residue,
    })
}

#[cfg(test)]
mod tests {
    use super::super::catalog::*;
    use super::*;
    use crate::intlin::GroupInvariants;
    use num_bigint::BigInt;

    #[test]
    fn f1_at_diagonal() {
        let a = Arc::new(f1());
        let l = localize(&a, &Congruence::diagonal(&a)).unwrap();
        assert_eq!(l.local.len(), 2);
        assert_eq!(l.residue.len(), 2);
        assert_eq!(
            l.residue.universal().as_module().invariants(),
            GroupInvariants::free(1)
        );
    }

    #[test]
    fn signs_at_diagonal_adds_no_elements() {
        let a = Arc::new(signs_f5());
        let l = localize(&a, &Congruence::diagonal(&a)).unwrap();
        assert_eq!(l.residue.len(), 3);
        assert_eq!(
            l.residue.universal().as_module().invariants().order(),
            Some(BigInt::from(5))
        );
    }

    #[test]
    fn idempotent_primes() {
        let a = Arc::new(idempotent());
        let (primes, _) = a.spec_c(8).unwrap();
        for p in &primes {
            let l = localize(&a, p).unwrap();
            assert_eq!(l.residue.len(), 2);
        }
        let at_e_one = congruence_generated(&a, &[(1, 2)]);
        let l = localize(&a, &at_e_one).unwrap();
        // e is inverted, hence becomes 1
        assert_eq!(l.local.len(), 2);
    }

    #[test]
    fn rejects_non_prime() {
        let a = Arc::new(ring_z4());
        assert!(matches!(
            localize(&a, &Congruence::diagonal(&a)),
            Err(Error::NotPrime)
        ));
        let total = congruence_generated(&a, &[(0, 1)]);
        assert!(matches!(localize(&a, &total), Err(Error::NotPrime)));
    }
}
