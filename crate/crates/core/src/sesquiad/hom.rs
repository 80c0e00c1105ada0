use std::sync::Arc;

use num_traits::Zero;

use super::Sesquiad;
use crate::error::{Error, Result};
use crate::intlin::matrix::unit_vector;
use crate::intlin::module::{map_is_injective, map_kernel};
use crate::intlin::{IntMatrix, Lattice, Vector};

/// Multiplicative map of sesquiads together with the ring map `R_A -> R_B`
/// extending it.
#[derive(Clone, Debug)]
pub struct SesquiadHom {
    pub source: Arc<Sesquiad>,
    pub target: Arc<Sesquiad>,
    pub map: Vec<usize>,
    /// `|B| x |A|` matrix in the monoid bases.
    pub ring_map: IntMatrix,
}

/// Finiteness report for `R_A -> R_B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismClass {
    pub finite: bool,
    pub finite_type: bool,
    pub finitely_presented: bool,
    /// Elements of `B` generating `R_B` as an `R_A`-module.
    pub module_generators: Vec<usize>,
    /// Kernel of `R_A -> R_B`, as a lattice in the monoid basis of `R_A`.
    pub kernel: Lattice,
}

impl SesquiadHom {
    pub fn new(source: Arc<Sesquiad>, target: Arc<Sesquiad>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&b| b >= target.len()) {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                found: map.len(),
            });
        }
        if map[source.zero()] != target.zero() {
            return Err(Error::NotMultiplicative("0 is not sent to 0".into()));
        }
        if map[source.one()] != target.one() {
            return Err(Error::NotMultiplicative("1 is not sent to 1".into()));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::NotMultiplicative(format!(
                        "f({}*{}) != f({})*f({})",
                        source.name(a),
                        source.name(b),
                        source.name(a),
                        source.name(b)
                    )));
                }
            }
        }
        let ring_map = Sesquiad::basis_map(&map, target.len());
        for f in source.facts() {
            let mut image = f.clone();
            image.arguments = f.arguments.iter().map(|&a| map[a]).collect();
            image.result = map[f.result];
            if !target.fact_holds(&image) {
                return Err(Error::NoRingExtension(source.describe_fact(f)));
            }
        }
        // facts generate the relations together with e_0, so this cannot
        // fail once the facts are respected; kept as a cheap guard
        for r in source.relations().basis() {
            if !target.relations().contains(&ring_map.mul_vec(r)) {
                return Err(Error::NoRingExtension(
                    "relation of R_A not preserved".into(),
                ));
            }
        }
        Ok(SesquiadHom {
            source,
            target,
            map,
            ring_map,
        })
    }

    pub fn identity(a: Arc<Sesquiad>) -> Self {
        let map = (0..a.len()).collect();
        Self::new(a.clone(), a, map).expect("identity is a homomorphism")
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// Image of a ring element, reduced in `R_B`.
    pub fn apply_ring(&self, r: &[num_bigint::BigInt]) -> Vector {
        self.target.universal().reduce(&self.ring_map.mul_vec(r))
    }

    pub fn compose(&self, next: &SesquiadHom) -> Result<SesquiadHom> {
        if self.target.as_ref() != next.source.as_ref() {
            return Err(Error::NotComposable("target and source differ".into()));
        }
        let map = self.map.iter().map(|&b| next.map[b]).collect();
        SesquiadHom::new(self.source.clone(), next.target.clone(), map)
    }

    pub fn is_injective_on_elements(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map
            .iter()
            .all(|&b| !std::mem::replace(&mut seen[b], true))
    }

    pub fn is_ring_map_injective(&self) -> bool {
        let s = self.source.universal().as_module();
        let t = self.target.universal().as_module();
        map_is_injective(&s, &t, &self.ring_map)
    }

    /// Whether `A = R_A ∩ B` inside `R_B`: every element of `B` lying in the
    /// image of `R_A` comes from `A`.
    pub fn is_full_subsesquiad(&self) -> Result<bool> {
        if !self.is_injective_on_elements() {
            return Err(Error::NotInjective("element map".into()));
        }
        if !self.is_ring_map_injective() {
            return Err(Error::NotInjective("ring map R_A -> R_B".into()));
        }
        let image = self.target.relations().extend(self.ring_map.columns());
        let hit: Vec<bool> = {
            let mut h = vec![false; self.target.len()];
            for &b in &self.map {
                h[b] = true;
            }
            h
        };
        Ok((0..self.target.len()).all(|b| hit[b] || !image.contains(self.target.embed(b))))
    }

    /// `R_B` over `R_A`: module generators chosen greedily among the elements
    /// of `B` in index order, and the kernel of the ring map.
    pub fn morphism_class(&self) -> MorphismClass {
        let (a, b) = (&self.source, &self.target);
        let images: Vec<Vector> = (0..a.len())
            .map(|i| self.ring_map.mul_vec(&unit_vector(a.len(), i)))
            .collect();
        let rb = b.universal();
        let mut span = b.relations().clone();
        let mut gens = Vec::new();
        for e in 0..b.len() {
            if span.is_full() {
                break;
            }
            let v = b.embed(e);
            if v.iter().all(Zero::is_zero) || span.contains(v) {
                continue;
            }
            gens.push(e);
            span = span.extend(images.iter().map(|r| rb.mul(r, v)));
        }
        let finite = span.is_full();
        let kernel = map_kernel(
            &a.universal().as_module(),
            &b.universal().as_module(),
            &self.ring_map,
        );
        // R_B is generated as a ring by the image of B, so of finite type;
        // noetherian base makes finite type imply finite presentation
        MorphismClass {
            finite,
            finite_type: true,
            finitely_presented: true,
            module_generators: gens,
            kernel,
        }
    }
}
