use std::fmt;

use num_bigint::BigInt;

use super::hom::SesquiadHom;
use super::Sesquiad;
use crate::error::{Error, Result};
use crate::intlin::matrix::{add_vectors, zero_vector};
use crate::intlin::{Vector, ZAlgebra};

/// Default cap on the number of polynomials a separability search may visit.
pub const DEFAULT_SEPARABILITY_LIMIT: u128 = 1_000_000;

/// Polynomial with coefficients in a sesquiad, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    pub coefficients: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separability {
    Separable {
        witness: Polynomial,
    },
    /// Annihilating polynomials exist but every one found has `q(b) = 0`.
    /// Conclusive only when `R_B` is finite.
    Inseparable {
        witness: Polynomial,
        conclusive: bool,
    },
    NotAlgebraicUpToCap,
}

impl Polynomial {
    pub fn new(coefficients: Vec<usize>) -> Self {
        Polynomial { coefficients }
    }

    pub fn degree(&self, a: &Sesquiad) -> Option<usize> {
        self.coefficients.iter().rposition(|&c| c != a.zero())
    }

    /// Coefficients as elements of `R_B` through `h`.
    pub fn image(&self, h: &SesquiadHom) -> Vec<Vector> {
        self.coefficients
            .iter()
            .map(|&c| h.target.embed(h.apply(c)).clone())
            .collect()
    }

    pub fn in_ring(&self, a: &Sesquiad) -> Vec<Vector> {
        self.coefficients
            .iter()
            .map(|&c| a.embed(c).clone())
            .collect()
    }

    /// Value at `x` in `R_A`.
    pub fn eval(&self, a: &Sesquiad, x: &[BigInt]) -> Vector {
        eval_ring(a.universal(), &self.in_ring(a), x)
    }

    pub fn roots(&self, a: &Sesquiad) -> Vec<usize> {
        (0..a.len())
            .filter(|&x| a.universal().is_zero_element(&self.eval(a, a.embed(x))))
            .collect()
    }

    pub fn display(&self, a: &Sesquiad) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.coefficients.iter().enumerate().rev() {
            if c == a.zero() {
                continue;
            }
            let coef = if c == a.one() && i > 0 {
                String::new()
            } else {
                a.name(c).to_string()
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}X"),
                _ => format!("{coef}X^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coefficients)
    }
}

/// Horner evaluation of a polynomial with coefficients in `r`.
pub fn eval_ring(r: &ZAlgebra, coeffs: &[Vector], x: &[BigInt]) -> Vector {
    let mut acc = r.zero();
    for c in coeffs.iter().rev() {
        acc = r.add(&r.mul(&acc, x), c);
    }
    acc
}

/// `q` with `p(X) = (X - b) q(X)`, by synthetic division.
pub fn divide_ring(r: &ZAlgebra, coeffs: &[Vector], b: &[BigInt]) -> Result<Vec<Vector>> {
    let n = coeffs.len();
    if n < 2 {
        return Err(Error::Invalid(
            "division needs a nonconstant polynomial".into(),
        ));
    }
    let mut q = vec![r.zero(); n - 1];
    let mut carry = r.zero();
    for i in (1..n).rev() {
        carry = r.add(&coeffs[i], &r.mul(&carry, b));
        q[i - 1] = carry.clone();
    }
    let remainder = r.add(&coeffs[0], &r.mul(&carry, b));
    if !r.is_zero_element(&remainder) {
        return Err(Error::NotARoot);
    }
    Ok(q)
}

/// Calls `visit` on every polynomial of degree `1..=max_degree` over `a`,
/// lowest degree first and, within a degree, with the constant term varying
/// fastest. Stops early when `visit` returns `false`.
fn for_each_polynomial(
    a: &Sesquiad,
    max_degree: usize,
    mut visit: impl FnMut(&Polynomial) -> bool,
) {
    let n = a.len();
    let nonzero: Vec<usize> = a.nonzero_elements().collect();
    for deg in 1..=max_degree {
        for &lead in &nonzero {
            let mut digits = vec![0usize; deg];
            loop {
                let mut coefficients = digits.clone();
                coefficients.push(lead);
                if !visit(&Polynomial { coefficients }) {
                    return;
                }
                let mut i = 0;
                loop {
                    if i == deg {
                        break;
                    }
                    digits[i] += 1;
                    if digits[i] < n {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == deg {
                    break;
                }
            }
        }
    }
}

fn search_size(a: &Sesquiad, max_degree: usize) -> u128 {
    let n = a.len() as u128;
    (1..=max_degree as u32)
        .map(|d| n.saturating_pow(d).saturating_mul(n.saturating_sub(1)))
        .sum()
}

impl Sesquiad {
    /// Whether every nonconstant polynomial of degree at most `d` has a root
    /// in `A`, with the first polynomial that does not.
    pub fn is_algebraically_closed_upto(&self, d: usize) -> (bool, Option<Polynomial>) {
        let mut counterexample = None;
        for_each_polynomial(self, d, |p| {
            if p.roots(self).is_empty() {
                counterexample = Some(p.clone());
                false
            } else {
                true
            }
        });
        (counterexample.is_none(), counterexample)
    }

    /// `A^x ⊆ A \ {0} ⊆ R_A^x` for a simple sesquiad. Strictness of the second
    /// inclusion is `None` when `R_A` is infinite and a bounded search for an
    /// extra unit finds none.
    pub fn unit_inclusions(&self, bound: usize) -> Result<UnitInclusions> {
        if !self.is_simple(bound)? {
            return Err(Error::NotSimple);
        }
        let monoid_units = self.monoid_units();
        let nonzero: Vec<usize> = self.nonzero_elements().collect();
        let r = self.universal();
        let second_holds = nonzero.iter().all(|&a| r.is_unit(self.embed(a)));
        let second_strict = match r.elements(1 << 16) {
            Some(all) => Some(all.iter().filter(|x| r.is_unit(x)).count() > nonzero.len()),
            None => {
                let found = box_vectors(self.len(), 2)
                    .any(|v| r.is_unit(&v) && self.element_of(&v).is_none());
                if found {
                    Some(true)
                } else {
                    None
                }
            }
        };
        Ok(UnitInclusions {
            first_holds: monoid_units.iter().all(|&u| u != self.zero()),
            first_strict: monoid_units.len() < nonzero.len(),
            second_holds,
            second_strict,
            monoid_units,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitInclusions {
    pub monoid_units: Vec<usize>,
    pub first_holds: bool,
    pub first_strict: bool,
    pub second_holds: bool,
    pub second_strict: Option<bool>,
}

fn box_vectors(dim: usize, r: i64) -> impl Iterator<Item = Vector> {
    let side = (2 * r + 1) as usize;
    let total = side.pow(dim as u32);
    (0..total).map(move |mut k| {
        let mut v = zero_vector(dim);
        for x in v.iter_mut() {
            *x = BigInt::from((k % side) as i64 - r);
            k /= side;
        }
        v
    })
}

impl SesquiadHom {
    /// Searches polynomials over the source, up to `cap`, that vanish at `b`
    /// and have `q(b) != 0` where `p = (X - b) q`.
    pub fn is_separable(&self, b: usize, cap: usize, limit: u128) -> Result<Separability> {
        if !self.is_injective_on_elements() {
            return Err(Error::NotInjective("element map".into()));
        }
        if !self.is_ring_map_injective() {
            return Err(Error::NotInjective("ring map R_A -> R_B".into()));
        }
        let size = search_size(&self.source, cap);
        if size > limit {
            return Err(Error::CapTooLarge { size, cap: limit });
        }
        let r = self.target.universal();
        let x = self.target.embed(b).clone();
        let mut inseparable: Option<Polynomial> = None;
        let mut separable: Option<Polynomial> = None;
        for_each_polynomial(&self.source, cap, |p| {
            let coeffs = p.image(self);
            if !r.is_zero_element(&eval_ring(r, &coeffs, &x)) {
                return true;
            }
            let q = divide_ring(r, &coeffs, &x).expect("p(b) = 0");
            if r.is_zero_element(&eval_ring(r, &q, &x)) {
                inseparable.get_or_insert_with(|| p.clone());
                true
            } else {
                separable = Some(p.clone());
                false
            }
        });
        Ok(match (separable, inseparable) {
            (Some(witness), _) => Separability::Separable { witness },
            (None, Some(witness)) => Separability::Inseparable {
                witness,
                conclusive: self.target.universal().elements(1 << 16).is_some(),
            },
            (None, None) => Separability::NotAlgebraicUpToCap,
        })
    }
}

/// `X - b` as ring coefficients, used by callers building test polynomials.
pub fn linear_factor(r: &ZAlgebra, b: &[BigInt]) -> Vec<Vector> {
    let minus_b: Vector = b.iter().map(|x| -x).collect();
    vec![r.reduce(&minus_b), r.reduce(r.unit())]
}

/// Product of two ring polynomials.
pub fn multiply_ring(r: &ZAlgebra, p: &[Vector], q: &[Vector]) -> Vec<Vector> {
    if p.is_empty() || q.is_empty() {
        return vec![];
    }
    let mut out = vec![r.zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = r.reduce(&add_vectors(&out[i + j], &r.mul(a, b)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::catalog::*;
    use super::*;

    #[test]
    fn roots_of_x_plus_one_over_f1() {
        let a = f1();
        let p = Polynomial::new(vec![1, 1]);
        assert!(p.roots(&a).is_empty());
        let (closed, witness) = a.is_algebraically_closed_upto(1);
        assert!(!closed);
        assert_eq!(witness, Some(p));
        assert!(f2().is_algebraically_closed_upto(1).0);
        assert!(Sesquiad::zero_sesquiad().is_algebraically_closed_upto(3).0);
    }

    #[test]
    fn division_in_f4() {
        let f4 = ring_f4();
        let r = f4.universal();
        let h = SesquiadHom::new(Arc::new(ring_f2()), Arc::new(f4.clone()), vec![0, 1]).unwrap();
        let p = Polynomial::new(vec![1, 1, 1]);
        let coeffs = p.image(&h);
        let w = f4.embed(2).clone();
        assert!(r.is_zero_element(&eval_ring(r, &coeffs, &w)));
        assert!(!r.is_zero_element(&eval_ring(r, &coeffs, f4.embed(1))));
        let q = divide_ring(r, &coeffs, &w).unwrap();
        // q = X + (w + 1)
        assert_eq!(q[0], f4.embed(3).clone());
        assert!(r.equal(&eval_ring(r, &q, &w), r.unit()));
        assert!(matches!(
            divide_ring(r, &coeffs, f4.embed(1)),
            Err(Error::NotARoot)
        ));
        let x = vec![r.zero(), r.reduce(r.unit())];
        let q = divide_ring(r, &x, &r.zero()).unwrap();
        assert!(r.equal(&q[0], r.unit()));
    }

    #[test]
    fn separability_examples() {
        let f2 = Arc::new(ring_f2());
        let h = SesquiadHom::new(f2.clone(), Arc::new(ring_f4()), vec![0, 1]).unwrap();
        assert!(matches!(
            h.is_separable(2, 2, DEFAULT_SEPARABILITY_LIMIT).unwrap(),
            Separability::Separable { .. }
        ));
        let d = SesquiadHom::new(f2.clone(), Arc::new(ring_dual_f2()), vec![0, 1]).unwrap();
        match d.is_separable(2, 2, DEFAULT_SEPARABILITY_LIMIT).unwrap() {
            Separability::Inseparable {
                witness,
                conclusive,
            } => {
                assert_eq!(witness.coefficients, vec![0, 0, 1]);
                assert!(conclusive);
            }
            other => panic!("expected inseparable, got {other:?}"),
        }
        let id = SesquiadHom::identity(f2);
        assert_eq!(
            id.is_separable(1, 1, DEFAULT_SEPARABILITY_LIMIT).unwrap(),
            Separability::Separable {
                witness: Polynomial::new(vec![1, 1])
            }
        );
        assert!(matches!(
            h.is_separable(2, 40, 1000),
            Err(Error::CapTooLarge { .. })
        ));
    }

    #[test]
    fn unit_inclusions() {
        let u = f1().unit_inclusions(8).unwrap();
        assert!(!u.first_strict);
        assert_eq!(u.second_strict, Some(true));
        let u = signs_f5().unit_inclusions(8).unwrap();
        assert_eq!(u.second_strict, Some(true));
        let u = ring_f2().unit_inclusions(8).unwrap();
        assert!(!u.first_strict);
        assert_eq!(u.second_strict, Some(false));
        assert!(matches!(
            idempotent().unit_inclusions(8),
            Err(Error::NotSimple)
        ));
    }
}
