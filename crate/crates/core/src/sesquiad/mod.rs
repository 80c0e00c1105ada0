//! Finite sesquiads: a commutative monoid with zero together with the partial
//! addition it inherits from its universal ring `R_A`.
//!
//! `R_A` is kept in the monoid basis: basis vector `e_a` for every element `a`,
//! with `e_0` among the relations. Embedding an element is then just taking
//! its basis vector modulo relations, and action matrices of modules are
//! indexed by elements.

mod congruence;
mod hom;
mod localize;
mod poly;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlin::matrix::{unit_vector, zero_vector};
use crate::intlin::{IntMatrix, Lattice, Vector, ZAlgebra};

pub use congruence::{congruence_generated, Congruence, DEFAULT_SPEC_BOUND};
pub use hom::{MorphismClass, SesquiadHom};
pub use localize::{localize, Localization};
pub use poly::{
    divide_ring, eval_ring, linear_factor, multiply_ring, Polynomial, Separability, UnitInclusions,
    DEFAULT_SEPARABILITY_LIMIT,
};

/// `sum_j k_j * a_j = result`, elements referred to by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdditionFact {
    pub coefficients: Vec<i64>,
    pub arguments: Vec<usize>,
    pub result: usize,
}

impl AdditionFact {
    pub fn new(terms: &[(i64, usize)], result: usize) -> Self {
        AdditionFact {
            coefficients: terms.iter().map(|t| t.0).collect(),
            arguments: terms.iter().map(|t| t.1).collect(),
            result,
        }
    }

    /// The relation `sum k_j e_{a_j} - e_result` in the monoid basis.
    fn relation(&self, n: usize) -> Vector {
        let mut v = zero_vector(n);
        for (k, &a) in self.coefficients.iter().zip(&self.arguments) {
            v[a] += *k;
        }
        v[self.result] -= 1;
        v
    }
}

/// Completeness horizon used when recomputing the addition relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationBound {
    pub max_arity: usize,
    /// Coefficients range over `1..=max_coefficient` when the additive group is
    /// finite and over `-max_coefficient..=max_coefficient` otherwise.
    pub max_coefficient: i64,
}

impl SaturationBound {
    /// Arity at most `min(|A| - 1, 3)`; coefficients up to the additive
    /// exponent minus one (capped at 8) for finite `R_A`, else `|k| <= 2`.
    pub fn default_for(a: &Sesquiad) -> Self {
        let max_arity = a.len().saturating_sub(1).min(3);
        let max_coefficient = match a.universal.characteristic().to_i64() {
            Some(0) | None => 2,
            Some(e) => (e - 1).clamp(1, 8),
        };
        SaturationBound {
            max_arity,
            max_coefficient,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sesquiad {
    names: Vec<String>,
    zero: usize,
    one: usize,
    mult: Vec<Vec<usize>>,
    facts: Vec<AdditionFact>,
    universal: ZAlgebra,
    embed: Vec<Vector>,
    lookup: HashMap<Vector, usize>,
}

impl PartialEq for Sesquiad {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.zero == other.zero
            && self.one == other.one
            && self.mult == other.mult
            && self.universal == other.universal
    }
}

impl Eq for Sesquiad {}

fn check_monoid(mult: &[Vec<usize>], zero: usize, one: usize) -> Result<()> {
    let n = mult.len();
    if n == 0 {
        return Err(Error::NotAMonoid("no elements".into()));
    }
    if zero >= n || one >= n {
        return Err(Error::NotAMonoid("zero or one out of range".into()));
    }
    for (i, row) in mult.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotAMonoid(format!(
                "row {i} has length {}",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|&x| x >= n) {
            return Err(Error::NotAMonoid(format!("entry ({i},{j}) out of range")));
        }
    }
    for a in 0..n {
        if mult[one][a] != a {
            return Err(Error::NotAMonoid(format!("1*{a} != {a}")));
        }
        if mult[zero][a] != zero {
            return Err(Error::NotAMonoid(format!("0*{a} != 0")));
        }
        for b in 0..n {
            if mult[a][b] != mult[b][a] {
                return Err(Error::NotAMonoid(format!("not commutative at ({a},{b})")));
            }
            for c in 0..n {
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(Error::NotAMonoid(format!(
                        "not associative at ({a},{b},{c})"
                    )));
                }
            }
        }
    }
    Ok(())
}

impl Sesquiad {
    /// Builds the universal ring `Z[A] / (e_0, fact relations)` and embeds `A`.
    pub fn build(
        names: Vec<String>,
        zero: usize,
        one: usize,
        mult: Vec<Vec<usize>>,
        facts: Vec<AdditionFact>,
    ) -> Result<Self> {
        let n = mult.len();
        for f in &facts {
            if f.coefficients.len() != f.arguments.len()
                || f.arguments.iter().chain([&f.result]).any(|&x| x >= n)
            {
                return Err(Error::Invalid(format!("malformed addition fact {f:?}")));
            }
        }
        let rels: Vec<Vector> = facts.iter().map(|f| f.relation(n)).collect();
        let mut s = Self::from_relations(names, zero, one, mult, rels)?;
        s.facts = facts;
        Ok(s)
    }

    /// The pair `(A, Z[A] / (e_0, relations))`, for relations given directly
    /// as vectors in the monoid basis.
    pub fn from_relations(
        names: Vec<String>,
        zero: usize,
        one: usize,
        mult: Vec<Vec<usize>>,
        relations: Vec<Vector>,
    ) -> Result<Self> {
        check_monoid(&mult, zero, one)?;
        let n = mult.len();
        if names.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: names.len(),
            });
        }
        if let Some(r) = relations.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let mut rels = vec![unit_vector(n, zero)];
        rels.extend(relations);
        let universal = ZAlgebra::monoid_algebra(&mult, one, rels)?;
        let embed: Vec<Vector> = (0..n)
            .map(|a| universal.reduce(&unit_vector(n, a)))
            .collect();
        let mut lookup: HashMap<Vector, usize> = HashMap::new();
        for (a, v) in embed.iter().enumerate() {
            if let Some(&b) = lookup.get(v) {
                return Err(Error::NotEmbeddable(names[b].clone(), names[a].clone()));
            }
            lookup.insert(v.clone(), a);
        }
        Ok(Sesquiad {
            names,
            zero,
            one,
            mult,
            facts: Vec::new(),
            universal,
            embed,
            lookup,
        })
    }

    /// The sesquiad `(A, R)` for a multiplicatively closed set of elements of
    /// a ring, with addition facts read off inside `R` up to `bound`.
    pub fn from_ring_subset(
        ring: &ZAlgebra,
        elements: &[Vector],
        names: Vec<String>,
        bound: SaturationBound,
    ) -> Result<Self> {
        let reduced: Vec<Vector> = elements.iter().map(|e| ring.reduce(e)).collect();
        let index: HashMap<&Vector, usize> =
            reduced.iter().enumerate().map(|(i, v)| (v, i)).collect();
        if index.len() != reduced.len() {
            return Err(Error::Invalid("repeated element".into()));
        }
        let find = |v: &Vector| {
            index
                .get(&ring.reduce(v))
                .copied()
                .ok_or_else(|| Error::NotAMonoid("set not closed under multiplication".into()))
        };
        let zero = find(&ring.zero())?;
        let one = find(&ring.unit().to_vec())?;
        let mut mult = vec![vec![0; reduced.len()]; reduced.len()];
        for i in 0..reduced.len() {
            for j in 0..reduced.len() {
                mult[i][j] = find(&ring.mul(&reduced[i], &reduced[j]))?;
            }
        }
        let facts = enumerate_facts(
            &reduced,
            zero,
            |v| index.get(&ring.reduce(v)).copied(),
            bound,
            ring.characteristic(),
        );
        Self::build(names, zero, one, mult, facts)
    }

    /// `(R, R)` for a finite ring: every sum of two elements is a fact.
    pub fn ring_sesquiad(ring: &ZAlgebra, basis_names: &[&str]) -> Result<Self> {
        let mut elements = ring
            .elements(4096)
            .ok_or_else(|| Error::Invalid("ring sesquiads need a finite ring".into()))?;
        elements.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
        let names = elements
            .iter()
            .map(|e| element_name(e, basis_names))
            .collect();
        let n = elements.len();
        let index: HashMap<&Vector, usize> =
            elements.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let zero = index[&ring.zero()];
        let one = index[&ring.reduce(ring.unit())];
        let mut mult = vec![vec![0; n]; n];
        let mut facts = Vec::new();
        for i in 0..n {
            for j in 0..n {
                mult[i][j] = index[&ring.mul(&elements[i], &elements[j])];
                if i <= j && i != zero && j != zero {
                    let s = index[&ring.add(&elements[i], &elements[j])];
                    let terms: Vec<(i64, usize)> = if i == j {
                        vec![(2, i)]
                    } else {
                        vec![(1, i), (1, j)]
                    };
                    facts.push(AdditionFact::new(&terms, s));
                }
            }
        }
        Self::build(names, zero, one, mult, facts)
    }

    /// The sesquiad with a single element, `0 = 1`.
    pub fn zero_sesquiad() -> Self {
        Self::build(vec!["0".into()], 0, 0, vec![vec![0]], vec![]).expect("zero sesquiad")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_zero_sesquiad(&self) -> bool {
        self.zero == self.one
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn facts(&self) -> &[AdditionFact] {
        &self.facts
    }

    pub fn universal(&self) -> &ZAlgebra {
        &self.universal
    }

    pub fn embed(&self, a: usize) -> &Vector {
        &self.embed[a]
    }

    /// The element whose embedding equals `v` in `R_A`, if any.
    pub fn element_of(&self, v: &[BigInt]) -> Option<usize> {
        self.lookup.get(&self.universal.reduce(v)).copied()
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&a| a != self.zero)
    }

    /// `A^x`: elements with a multiplicative inverse inside `A`.
    pub fn monoid_units(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).any(|b| self.mult[a][b] == self.one))
            .collect()
    }

    /// Adds every addition fact that holds in `R_A` within `bound`. Facts hold
    /// in `R_A` by construction, so the universal ring is unchanged and a
    /// second pass adds nothing new.
    pub fn saturate_with(&self, bound: SaturationBound) -> Self {
        let mut facts = enumerate_facts(
            &self.embed,
            self.zero,
            |v| self.element_of(v),
            bound,
            self.universal.characteristic(),
        );
        for f in &self.facts {
            if !facts.contains(f) {
                facts.push(f.clone());
            }
        }
        facts.sort();
        facts.dedup();
        Self::build(
            self.names.clone(),
            self.zero,
            self.one,
            self.mult.clone(),
            facts,
        )
        .expect("facts holding in R_A keep A embedded")
    }

    pub fn saturate(&self) -> Self {
        self.saturate_with(SaturationBound::default_for(self))
    }

    /// Whether `sum k_j a_j = c` holds in `R_A`.
    pub fn fact_holds(&self, f: &AdditionFact) -> bool {
        self.universal.is_zero_element(&f.relation(self.len()))
    }

    /// Renames elements, keeping everything else.
    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.len());
        self.names = names;
        self
    }

    /// Matrix of `R_A -> R_A`, `e_a -> e_{map(a)}` for an element map into a
    /// sesquiad with `n` elements.
    pub(crate) fn basis_map(map: &[usize], n: usize) -> IntMatrix {
        let cols: Vec<Vector> = map.iter().map(|&b| unit_vector(n, b)).collect();
        IntMatrix::from_columns(n, &cols)
    }

    pub fn relations(&self) -> &Lattice {
        self.universal.relations()
    }

    /// Human-readable fact, e.g. `1*a + 4*b = c`.
    pub fn describe_fact(&self, f: &AdditionFact) -> String {
        let lhs: Vec<String> = f
            .coefficients
            .iter()
            .zip(&f.arguments)
            .map(|(k, &a)| format!("{k}*{}", self.names[a]))
            .collect();
        format!("{} = {}", lhs.join(" + "), self.names[f.result])
    }
}

impl fmt::Display for Sesquiad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(", "))
    }
}

/// Enumerates facts `sum k_j a_j = c` among nonzero arguments with strictly
/// increasing indices, skipping the trivial `1*a = a`.
fn enumerate_facts<F>(
    embed: &[Vector],
    zero: usize,
    find: F,
    bound: SaturationBound,
    characteristic: BigInt,
) -> Vec<AdditionFact>
where
    F: Fn(&Vector) -> Option<usize>,
{
    let n = embed.len();
    let args: Vec<usize> = (0..n).filter(|&a| a != zero).collect();
    let coeffs: Vec<i64> = if characteristic.is_positive() {
        (1..=bound.max_coefficient).collect()
    } else {
        (-bound.max_coefficient..=bound.max_coefficient)
            .filter(|&k| k != 0)
            .collect()
    };
    let dim = embed.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut ks: Vec<i64> = Vec::new();
    fn rec<F: Fn(&Vector) -> Option<usize>>(
        start: usize,
        args: &[usize],
        coeffs: &[i64],
        embed: &[Vector],
        dim: usize,
        max_arity: usize,
        find: &F,
        chosen: &mut Vec<usize>,
        ks: &mut Vec<i64>,
        out: &mut Vec<AdditionFact>,
    ) {
        if !chosen.is_empty() {
            let mut sum = zero_vector(dim);
            for (k, &a) in ks.iter().zip(chosen.iter()) {
                for (s, x) in sum.iter_mut().zip(&embed[a]) {
                    *s += x * *k;
                }
            }
            if let Some(c) = find(&sum) {
                if !(chosen.len() == 1 && ks[0] == 1) {
                    out.push(AdditionFact {
                        coefficients: ks.clone(),
                        arguments: chosen.clone(),
                        result: c,
                    });
                }
            }
        }
        if chosen.len() == max_arity {
            return;
        }
        for i in start..args.len() {
            for &k in coeffs {
                chosen.push(args[i]);
                ks.push(k);
                rec(
                    i + 1,
                    args,
                    coeffs,
                    embed,
                    dim,
                    max_arity,
                    find,
                    chosen,
                    ks,
                    out,
                );
                chosen.pop();
                ks.pop();
            }
        }
    }
    rec(
        0,
        &args,
        &coeffs,
        embed,
        dim,
        bound.max_arity,
        &find,
        &mut chosen,
        &mut ks,
        &mut out,
    );
    out.sort();
    out
}

fn element_name(v: &[BigInt], basis_names: &[&str]) -> String {
    if v.len() == 1 {
        return v[0].to_string();
    }
    let mut terms = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = basis_names
            .get(i)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("e{i}"));
        terms.push(match (name.as_str(), c.to_i64()) {
            ("1", _) => c.to_string(),
            (_, Some(1)) => name,
            _ => format!("{c}{name}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.reverse();
        terms.join("+")
    }
}

/// Small sesquiads used throughout the tests and the example corpus.
pub mod catalog {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    /// `{0, 1}` with trivial addition; `R_A = Z`.
    pub fn f1() -> Sesquiad {
        Sesquiad::build(
            names(&["0", "1"]),
            0,
            1,
            vec![vec![0, 0], vec![0, 1]],
            vec![],
        )
        .unwrap()
    }

    /// `{0, 1}` with `1 + 1 = 0`; `R_A = F_2`.
    pub fn f2() -> Sesquiad {
        let facts = vec![AdditionFact::new(&[(1, 1), (1, 1)], 0)];
        Sesquiad::build(
            names(&["0", "1"]),
            0,
            1,
            vec![vec![0, 0], vec![0, 1]],
            facts,
        )
        .unwrap()
    }

    /// `{0, 1}` with `4*1 = 0`; `R_A = Z/4`.
    pub fn f1_mod4() -> Sesquiad {
        let facts = vec![AdditionFact::new(&[(4, 1)], 0)];
        Sesquiad::build(
            names(&["0", "1"]),
            0,
            1,
            vec![vec![0, 0], vec![0, 1]],
            facts,
        )
        .unwrap()
    }

    /// `{0, 1, -1}` with `1 + (-1) = 0` and `5*1 = 0`; `R_A = F_5`.
    pub fn signs_f5() -> Sesquiad {
        let mult = vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]];
        let facts = vec![
            AdditionFact::new(&[(1, 1), (1, 2)], 0),
            AdditionFact::new(&[(5, 1)], 0),
        ];
        Sesquiad::build(names(&["0", "1", "-1"]), 0, 1, mult, facts).unwrap()
    }

    /// `{0, 1, e}` with `e^2 = e` and no addition; `R_A = Z[e]/(e^2 - e)`.
    pub fn idempotent() -> Sesquiad {
        let mult = vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]];
        Sesquiad::build(names(&["0", "1", "e"]), 0, 1, mult, vec![]).unwrap()
    }

    pub fn ring_z4() -> Sesquiad {
        Sesquiad::ring_sesquiad(&ZAlgebra::zmod(4), &["1"]).unwrap()
    }

    pub fn ring_f2() -> Sesquiad {
        Sesquiad::ring_sesquiad(&ZAlgebra::zmod(2), &["1"]).unwrap()
    }

    pub fn ring_f5() -> Sesquiad {
        Sesquiad::ring_sesquiad(&ZAlgebra::zmod(5), &["1"]).unwrap()
    }

    /// `F_4` on basis `1, w`.
    pub fn ring_f4() -> Sesquiad {
        Sesquiad::ring_sesquiad(&ZAlgebra::f4(), &["1", "w"]).unwrap()
    }

    /// `F_2[b]/(b^2)` on basis `1, b`.
    pub fn ring_dual_f2() -> Sesquiad {
        Sesquiad::ring_sesquiad(&ZAlgebra::dual_numbers_f2(), &["1", "b"]).unwrap()
    }

    /// The five sesquiads every randomized suite runs over.
    pub fn test_sesquiads() -> Vec<(&'static str, Sesquiad)> {
        vec![
            ("F1", f1()),
            ("F2", f2()),
            ("signs_F5", signs_f5()),
            ("ring_Z4", ring_z4()),
            ("idempotent", idempotent()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;
    use crate::intlin::GroupInvariants;

    fn ring_invariants(a: &Sesquiad) -> GroupInvariants {
        a.universal().as_module().invariants()
    }

    #[test]
    fn universal_rings_of_small_sesquiads() {
        assert_eq!(ring_invariants(&f1()), GroupInvariants::free(1));
        assert_eq!(ring_invariants(&f2()).order(), Some(BigInt::from(2)));
        let s = signs_f5();
        assert_eq!(ring_invariants(&s).order(), Some(BigInt::from(5)));
        // -1 embeds as 4 = -1 in F_5
        let minus = s.embed(2);
        let one = s.embed(1);
        assert!(s
            .universal()
            .is_zero_element(&s.universal().add(minus, one)));
        assert_eq!(ring_invariants(&ring_z4()).order(), Some(BigInt::from(4)));
        assert_eq!(ring_invariants(&idempotent()), GroupInvariants::free(2));
    }

    #[test]
    fn build_rejects_bad_tables() {
        let r = Sesquiad::build(names_of(2), 0, 1, vec![vec![0, 1], vec![0, 1]], vec![]);
        assert!(matches!(r, Err(Error::NotAMonoid(_))));
        let facts = vec![AdditionFact::new(&[(1, 1)], 0)];
        let r = Sesquiad::build(names_of(2), 0, 1, vec![vec![0, 0], vec![0, 1]], facts);
        assert!(matches!(r, Err(Error::NotEmbeddable(_, _))));
    }

    fn names_of(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn saturation_is_stable() {
        for (_, a) in test_sesquiads() {
            let s = a.saturate();
            assert_eq!(s.universal(), a.universal());
            let t = s.saturate();
            assert_eq!(t.facts(), s.facts());
        }
        assert!(f1().saturate().facts().is_empty());
        let s = signs_f5().saturate();
        assert!(s.facts().contains(&AdditionFact::new(&[(4, 1)], 2)));
    }

    #[test]
    fn ring_subset_matches_fact_presentation() {
        let f5 = ZAlgebra::zmod(5);
        let els = vec![
            vec![BigInt::from(0)],
            vec![BigInt::from(1)],
            vec![BigInt::from(4)],
        ];
        let bound = SaturationBound {
            max_arity: 2,
            max_coefficient: 4,
        };
        let a = Sesquiad::from_ring_subset(&f5, &els, names_of(3), bound).unwrap();
        assert_eq!(ring_invariants(&a).order(), Some(BigInt::from(5)));
    }

    #[test]
    fn ring_sesquiad_names() {
        assert_eq!(ring_f4().names(), &["0", "1", "w", "w+1"]);
        assert_eq!(ring_z4().names(), &["0", "1", "2", "3"]);
    }
}
