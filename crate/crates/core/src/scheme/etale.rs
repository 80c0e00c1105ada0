use super::congruence_name;
use crate::error::{Error, Result};
use crate::intlin::matrix::unit_vector;
use crate::intlin::module::map_is_injective;
use crate::intlin::{IntMatrix, Vector};
use crate::sesquiad::{localize, Congruence, Polynomial, Separability, SesquiadHom};
use crate::smodule::{is_flat, Flatness, SesquiadModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Unknown,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

/// The residue map `κ(f*E) -> κ(E)` at one prime `E` of the target.
#[derive(Clone, Debug)]
pub struct ResidueCheck {
    pub prime: String,
    pub pulled_back: String,
    pub injective: bool,
    pub finite: bool,
    pub separable: Verdict,
    /// Element of `κ(E)` and polynomial deciding separability; for a
    /// `No` verdict the polynomial has a repeated root there.
    pub witness: Option<(String, String)>,
    /// Elements of `κ(E)` with no annihilating polynomial up to the cap;
    /// they impose no condition.
    pub not_algebraic: Vec<String>,
}

impl ResidueCheck {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.injective && self.finite).and(self.separable)
    }
}

#[derive(Clone, Debug)]
pub struct EtaleReport {
    pub flat: Flatness,
    pub finitely_presented: bool,
    pub residues: Vec<ResidueCheck>,
    pub unramified: Verdict,
    pub etale: Verdict,
}

fn flat_verdict(f: &Flatness) -> Verdict {
    match f {
        Flatness::Flat => Verdict::Yes,
        Flatness::NotFlat { .. } => Verdict::No,
        Flatness::Unknown => Verdict::Unknown,
    }
}

/// `R_B` is a free `R_A`-module on the chosen module generators.
fn is_free_over_source(f: &SesquiadHom) -> bool {
    let class = f.morphism_class();
    if !class.finite {
        return false;
    }
    let (a, b) = (&f.source, &f.target);
    let rb = b.universal();
    let images: Vec<Vector> = (0..a.len())
        .map(|i| f.ring_map.mul_vec(&unit_vector(a.len(), i)))
        .collect();
    let cols: Vec<Vector> = class
        .module_generators
        .iter()
        .flat_map(|&g| images.iter().map(move |r| rb.mul(r, b.embed(g))))
        .collect();
    let source = SesquiadModule::free_presented(a.clone(), class.module_generators.len());
    map_is_injective(
        source.carrier(),
        &rb.as_module(),
        &IntMatrix::from_columns(b.len(), &cols),
    )
}

/// `R_B` is finitely presented over `R_A` on every affine piece.
pub fn locally_finite_presentation(pieces: &[SesquiadHom]) -> bool {
    pieces.iter().all(|f| f.morphism_class().finitely_presented)
}

fn residue_check(f: &SesquiadHom, e: &Congruence, cap: usize, limit: u128) -> Result<ResidueCheck> {
    let (a, b) = (&f.source, &f.target);
    let fiber: Vec<usize> = (0..a.len()).map(|x| e.labels()[f.apply(x)]).collect();
    let pulled = Congruence::saturation_of(a, &fiber);
    if !pulled.is_prime(a) {
        return Err(Error::InternalInconsistency(
            "pullback of a prime is not prime".into(),
        ));
    }
    let la = localize(a, &pulled)?;
    let lb = localize(b, e)?;
    let (ka, kb) = (la.to_residue.target.clone(), lb.to_residue.target.clone());
    // every element of κ(f*E) is the class of some element of A
    let mut map = vec![usize::MAX; ka.len()];
    for x in 0..a.len() {
        let (i, j) = (la.to_residue.apply(x), lb.to_residue.apply(f.apply(x)));
        if map[i] != usize::MAX && map[i] != j {
            return Err(Error::InternalInconsistency(
                "residue map is not well defined".into(),
            ));
        }
        map[i] = j;
    }
    if map.contains(&usize::MAX) {
        return Err(Error::InternalInconsistency(
            "A -> κ(f*E) is not surjective".into(),
        ));
    }
    let h = SesquiadHom::new(ka, kb.clone(), map)?;
    let injective = h.is_injective_on_elements() && h.is_ring_map_injective();
    let finite = h.morphism_class().finite;
    let mut check = ResidueCheck {
        prime: congruence_name(b, e),
        pulled_back: congruence_name(a, &pulled),
        injective,
        finite,
        separable: Verdict::Unknown,
        witness: None,
        not_algebraic: Vec::new(),
    };
    if !injective {
        return Ok(check);
    }
    let mut verdict = Verdict::Yes;
    for y in 0..kb.len() {
        let show = |p: &Polynomial| Some((kb.name(y).to_string(), p.display(&h.source)));
        match h.is_separable(y, cap, limit)? {
            Separability::Separable { .. } => {}
            Separability::Inseparable {
                witness,
                conclusive,
            } => {
                check.witness = show(&witness);
                verdict = if conclusive {
                    Verdict::No
                } else {
                    Verdict::Unknown
                };
                if conclusive {
                    break;
                }
            }
            Separability::NotAlgebraicUpToCap => check.not_algebraic.push(kb.name(y).to_string()),
        }
    }
    check.separable = verdict;
    Ok(check)
}

/// Unramified check for the affine morphism `spec B -> spec A` given by
/// `f: A -> B`.
pub fn is_unramified(
    f: &SesquiadHom,
    bound: usize,
    cap: usize,
    limit: u128,
) -> Result<EtaleReport> {
    let (primes, _) = f.target.spec_c(bound)?;
    let residues = primes
        .iter()
        .map(|e| residue_check(f, e, cap, limit))
        .collect::<Result<Vec<_>>>()?;
    let finitely_presented = f.morphism_class().finitely_presented;
    let unramified = residues
        .iter()
        .fold(Verdict::from_bool(finitely_presented), |acc, r| {
            acc.and(r.verdict())
        });
    let rb = SesquiadModule::free(f.target.clone(), 1).restrict_scalars(f)?;
    let flat = if is_free_over_source(f) {
        Flatness::Flat
    } else {
        is_flat(&rb)?
    };
    let etale = flat_verdict(&flat).and(unramified);
    Ok(EtaleReport {
        flat,
        finitely_presented,
        residues,
        unramified,
        etale,
    })
}

pub fn is_etale(f: &SesquiadHom, bound: usize, cap: usize, limit: u128) -> Result<Verdict> {
    Ok(is_unramified(f, bound, cap, limit)?.etale)
}
