use std::collections::BTreeSet;
use std::sync::Arc;

use super::hom::SesquiadHom;
use super::{AdditionFact, Sesquiad};
use crate::error::{Error, Result};
use crate::intlin::matrix::sub_vectors;
use crate::intlin::{Lattice, Vector};

/// Largest sesquiad the brute-force congruence enumeration accepts by default.
pub const DEFAULT_SPEC_BOUND: usize = 8;

/// A saturated congruence: the fibers of `A -> R_A / I` for an ideal `I`.
///
/// Classes are labelled by order of first appearance, so two congruences are
/// equal iff their label vectors are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Congruence {
    labels: Vec<usize>,
    ideal: Lattice,
}

fn canonical_labels(raw: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    raw.iter()
        .map(|x| {
            let next = map.len();
            *map.entry(*x).or_insert(next)
        })
        .collect()
}

/// Smallest saturated congruence relating every given pair.
pub fn congruence_generated(a: &Sesquiad, pairs: &[(usize, usize)]) -> Congruence {
    let gens: Vec<Vector> = pairs
        .iter()
        .map(|&(x, y)| sub_vectors(a.embed(x), a.embed(y)))
        .collect();
    Congruence::from_ideal(a, a.universal().ideal_generated(&gens).lattice().clone())
}

impl Congruence {
    /// Fibers of `A -> R_A / ideal`.
    pub fn from_ideal(a: &Sesquiad, ideal: Lattice) -> Self {
        let reps: Vec<Vector> = (0..a.len()).map(|x| ideal.reduce(a.embed(x))).collect();
        let labels = canonical_labels(&{
            let mut seen: Vec<&Vector> = Vec::new();
            reps.iter()
                .map(|r| match seen.iter().position(|s| *s == r) {
                    Some(i) => i,
                    None => {
                        seen.push(r);
                        seen.len() - 1
                    }
                })
                .collect::<Vec<_>>()
        });
        Congruence { labels, ideal }
    }

    pub fn diagonal(a: &Sesquiad) -> Self {
        Congruence {
            labels: (0..a.len()).collect(),
            ideal: a.relations().clone(),
        }
    }

    /// Saturation of an arbitrary partition given by labels.
    pub fn saturation_of(a: &Sesquiad, labels: &[usize]) -> Self {
        let pairs: Vec<(usize, usize)> = (0..a.len())
            .filter_map(|y| (0..y).find(|&x| labels[x] == labels[y]).map(|x| (x, y)))
            .collect();
        congruence_generated(a, &pairs)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn ideal(&self) -> &Lattice {
        &self.ideal
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn class_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.class_count() == self.labels.len()
    }

    /// True when `0 ~ 1`, i.e. everything is identified.
    pub fn is_total(&self, a: &Sesquiad) -> bool {
        self.related(a.zero(), a.one())
    }

    /// Inclusion as relations: every class of `self` lies in a class of `other`.
    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        (0..self.labels.len()).all(|y| (0..y).all(|x| !self.related(x, y) || other.related(x, y)))
    }

    /// Integrality of the quotient monoid, with `0 !~ 1`. This is the notion
    /// of prime congruence used throughout.
    pub fn is_prime(&self, a: &Sesquiad) -> bool {
        if self.is_total(a) {
            return false;
        }
        let z = self.labels[a.zero()];
        (0..a.len()).all(|x| {
            (0..a.len()).all(|y| {
                self.labels[x] == z || self.labels[y] == z || self.labels[a.mul(x, y)] != z
            })
        })
    }

    /// Pairs generating this congruence, picked greedily in index order.
    pub fn generating_pairs(&self, a: &Sesquiad) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        let mut current = Congruence::diagonal(a);
        for y in 0..a.len() {
            for x in 0..y {
                if self.related(x, y) && !current.related(x, y) {
                    pairs.push((x, y));
                    current = congruence_generated(a, &pairs);
                }
            }
        }
        debug_assert_eq!(current.ideal, self.ideal);
        pairs
    }

    /// `A / C` with its projection.
    pub fn quotient(&self, a: &Arc<Sesquiad>) -> (Arc<Sesquiad>, SesquiadHom) {
        let classes = self.classes();
        let k = classes.len();
        let names = classes.iter().map(|c| a.name(c[0]).to_string()).collect();
        let mult = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| self.labels[a.mul(classes[i][0], classes[j][0])])
                    .collect()
            })
            .collect();
        let facts: Vec<AdditionFact> = a
            .facts()
            .iter()
            .map(|f| AdditionFact {
                coefficients: f.coefficients.clone(),
                arguments: f.arguments.iter().map(|&x| self.labels[x]).collect(),
                result: self.labels[f.result],
            })
            .collect();
        let to_classes = Sesquiad::basis_map(&self.labels, k);
        let rels = a
            .relations()
            .basis()
            .iter()
            .map(|r| to_classes.mul_vec(r))
            .collect();
        let mut q = Sesquiad::from_relations(
            names,
            self.labels[a.zero()],
            self.labels[a.one()],
            mult,
            rels,
        )
        .expect("quotient by a saturated congruence is a sesquiad");
        q.facts = facts;
        let q = Arc::new(q);
        let proj = SesquiadHom::new(a.clone(), q.clone(), self.labels.clone())
            .expect("projection is a homomorphism");
        (q, proj)
    }
}

/// Restricted growth strings of length `n`: every set partition once.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max {
            cur.push(l);
            rec(i + 1, n, max.max(l + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![vec![]];
    }
    rec(0, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

fn compatible(a: &Sesquiad, labels: &[usize]) -> bool {
    let n = a.len();
    (0..n).all(|x| {
        (0..x).all(|y| {
            labels[x] != labels[y] || (0..n).all(|b| labels[a.mul(x, b)] == labels[a.mul(y, b)])
        })
    })
}

impl Sesquiad {
    fn check_bound(&self, bound: usize) -> Result<()> {
        if self.len() > bound {
            return Err(Error::BoundExceeded {
                size: self.len(),
                bound,
            });
        }
        Ok(())
    }

    /// Every saturated congruence, found by enumerating all multiplication
    /// compatible partitions and saturating each. Sorted by labels.
    pub fn all_congruences(&self, bound: usize) -> Result<Vec<Congruence>> {
        self.check_bound(bound)?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for p in set_partitions(self.len()) {
            if !compatible(self, &p) {
                continue;
            }
            let c = Congruence::saturation_of(self, &p);
            if seen.insert(c.labels.clone()) {
                out.push(c);
            }
        }
        out.sort_by(|x, y| x.labels.cmp(&y.labels));
        Ok(out)
    }

    /// Prime congruences with the inclusion order `leq[i][j] <=> p_i ⊆ p_j`.
    pub fn spec_c(&self, bound: usize) -> Result<(Vec<Congruence>, Vec<Vec<bool>>)> {
        let primes: Vec<Congruence> = self
            .all_congruences(bound)?
            .into_iter()
            .filter(|c| c.is_prime(self))
            .collect();
        let leq = primes
            .iter()
            .map(|p| primes.iter().map(|q| p.is_finer_than(q)).collect())
            .collect();
        Ok((primes, leq))
    }

    /// Every difference of distinct elements is a unit of `R_A`.
    pub fn differences_are_units(&self) -> bool {
        let r = self.universal();
        (0..self.len())
            .all(|y| (0..y).all(|x| r.is_unit(&sub_vectors(self.embed(y), self.embed(x)))))
    }

    /// Nonzero and without proper congruences other than the diagonal.
    /// Brute force over the congruence lattice, checked against the unit
    /// criterion on differences.
    pub fn is_simple(&self, bound: usize) -> Result<bool> {
        let brute = !self.is_zero_sesquiad()
            && self
                .all_congruences(bound)?
                .iter()
                .all(|c| c.is_total(self) || c.is_diagonal());
        let fast = !self.is_zero_sesquiad() && self.differences_are_units();
        if brute != fast {
            return Err(Error::InternalInconsistency(format!(
                "simplicity: congruence lattice says {brute}, units of differences say {fast}"
            )));
        }
        Ok(brute)
    }

    /// `A / C` simple, checked against maximality among congruences with `0 !~ 1`.
    pub fn is_maximal(self: &Arc<Self>, c: &Congruence, bound: usize) -> Result<bool> {
        let (q, _) = c.quotient(self);
        let by_quotient = q.is_simple(bound)?;
        let all = self.all_congruences(bound)?;
        let by_lattice = !c.is_total(self)
            && all
                .iter()
                .all(|d| d.is_total(self) || !c.is_finer_than(d) || d == c);
        if by_quotient != by_lattice {
            return Err(Error::InternalInconsistency(
                "maximality: quotient and lattice disagree".into(),
            ));
        }
        Ok(by_quotient)
    }
}

#[cfg(test)]
mod tests {
    use super::super::catalog::*;
    use super::*;

    #[test]
    fn partitions_are_counted_by_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b);
        }
    }

    #[test]
    fn generated_examples() {
        let a = idempotent();
        assert!(congruence_generated(&a, &[]).is_diagonal());
        let c = congruence_generated(&a, &[(2, 1)]);
        assert_eq!(c.labels(), &[0, 1, 1]);
        let full = congruence_generated(&a, &[(1, 0)]);
        assert_eq!(full.class_count(), 1);
        assert_eq!(full.generating_pairs(&a), vec![(0, 1)]);
        assert_eq!(c.generating_pairs(&a), vec![(1, 2)]);
        assert!(Congruence::diagonal(&a).generating_pairs(&a).is_empty());
    }

    #[test]
    fn quotient_of_idempotent_is_f1() {
        let a = Arc::new(idempotent());
        let c = congruence_generated(&a, &[(1, 2)]);
        let (q, proj) = c.quotient(&a);
        assert_eq!(q.len(), 2);
        assert_eq!(
            q.universal().as_module().invariants(),
            crate::intlin::GroupInvariants::free(1)
        );
        assert_eq!(proj.map, vec![0, 1, 1]);
        let (z, _) = congruence_generated(&a, &[(0, 1)]).quotient(&a);
        assert!(z.is_zero_sesquiad());
    }

    #[test]
    fn spectra() {
        let (pts, _) = f1().spec_c(8).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].is_diagonal());
        assert!(Sesquiad::zero_sesquiad().spec_c(8).unwrap().0.is_empty());
        let (pts, leq) = idempotent().spec_c(8).unwrap();
        let labels: Vec<&[usize]> = pts.iter().map(|p| p.labels()).collect();
        assert!(labels.contains(&&[0usize, 1, 1][..]));
        assert!(labels.contains(&&[0usize, 1, 0][..]));
        assert!(leq.iter().enumerate().all(|(i, row)| row[i]));
    }

    #[test]
    fn simplicity() {
        assert!(f1().is_simple(8).unwrap());
        assert!(signs_f5().is_simple(8).unwrap());
        assert!(f2().is_simple(8).unwrap());
        assert!(!idempotent().is_simple(8).unwrap());
        assert!(!ring_z4().is_simple(8).unwrap());
        // {0, 1} inside Z/4 has only the trivial partitions
        assert!(f1_mod4().is_simple(8).unwrap());
        assert!(!Sesquiad::zero_sesquiad().is_simple(8).unwrap());
        assert!(matches!(
            ring_z4().is_simple(2),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn maximality() {
        let f1 = Arc::new(f1());
        assert!(f1.is_maximal(&Congruence::diagonal(&f1), 8).unwrap());
        let e = Arc::new(idempotent());
        assert!(e
            .is_maximal(&congruence_generated(&e, &[(1, 2)]), 8)
            .unwrap());
        assert!(!e.is_maximal(&Congruence::diagonal(&e), 8).unwrap());
        let z4 = Arc::new(ring_z4());
        assert!(!z4.is_maximal(&Congruence::diagonal(&z4), 8).unwrap());
    }
}
