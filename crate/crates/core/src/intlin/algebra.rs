//! Commutative algebras of finite rank over `Z`, presented as `Z^n / I` with
//! structure constants on the basis.

use num_bigint::BigInt;
use num_traits::Zero;

use super::lattice::{solve, Lattice};
use super::matrix::{sub_vectors, unit_vector, zero_vector, IntMatrix, Vector};
use super::module::{FgModule, Subgroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZAlgebra {
    rank: usize,
    /// `products[i][j]` is `e_i * e_j` in basis coordinates.
    products: Vec<Vec<Vector>>,
    unit: Vector,
    relations: Lattice,
}

impl ZAlgebra {
    /// Builds an algebra from a symmetric product table. The relation lattice
    /// is closed under multiplication by basis elements before being stored.
    pub fn new(products: Vec<Vec<Vector>>, unit: Vector, relations: Vec<Vector>) -> Result<Self> {
        let n = unit.len();
        if products.len() != n
            || products
                .iter()
                .any(|row| row.len() != n || row.iter().any(|v| v.len() != n))
        {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: products.len(),
            });
        }
        let mut alg = ZAlgebra {
            rank: n,
            products,
            unit,
            relations: Lattice::zero(n),
        };
        alg.relations = alg.ideal_closure(Lattice::from_generators(n, relations));
        for i in 0..n {
            for j in 0..n {
                if !alg
                    .relations
                    .contains(&sub_vectors(&alg.products[i][j], &alg.products[j][i]))
                {
                    return Err(Error::Invalid("product table is not commutative".into()));
                }
            }
        }
        let e: Vec<Vector> = (0..n).map(|i| unit_vector(n, i)).collect();
        for x in &e {
            if !alg
                .relations
                .contains(&sub_vectors(&alg.mul_raw(&alg.unit, x), x))
            {
                return Err(Error::Invalid("unit does not act as identity".into()));
            }
            for y in &e {
                for z in &e {
                    let l = alg.mul_raw(&alg.mul_raw(x, y), z);
                    let r = alg.mul_raw(x, &alg.mul_raw(y, z));
                    if !alg.relations.contains(&sub_vectors(&l, &r)) {
                        return Err(Error::Invalid("product table is not associative".into()));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn integers() -> Self {
        Self::zmod(0)
    }

    /// `Z/n`, with `n = 0` giving `Z`.
    pub fn zmod(n: i64) -> Self {
        let rels = if n == 0 {
            vec![]
        } else {
            vec![vec![BigInt::from(n)]]
        };
        Self::new(
            vec![vec![vec![BigInt::from(1)]]],
            vec![BigInt::from(1)],
            rels,
        )
        .expect("Z/n is an algebra")
    }

    /// The field with four elements on basis `1, w` with `w^2 = w + 1`.
    pub fn f4() -> Self {
        let v = |a: i64, b: i64| vec![BigInt::from(a), BigInt::from(b)];
        Self::new(
            vec![vec![v(1, 0), v(0, 1)], vec![v(0, 1), v(1, 1)]],
            v(1, 0),
            vec![v(2, 0), v(0, 2)],
        )
        .expect("F4 is an algebra")
    }

    /// `F_2[b] / (b^2)`.
    pub fn dual_numbers_f2() -> Self {
        let v = |a: i64, b: i64| vec![BigInt::from(a), BigInt::from(b)];
        Self::new(
            vec![vec![v(1, 0), v(0, 1)], vec![v(0, 1), v(0, 0)]],
            v(1, 0),
            vec![v(2, 0), v(0, 2)],
        )
        .expect("dual numbers form an algebra")
    }

    /// Monoid algebra `Z[A]` of a finite commutative monoid given by its
    /// multiplication table, modulo the extra relations.
    pub fn monoid_algebra(mult: &[Vec<usize>], one: usize, relations: Vec<Vector>) -> Result<Self> {
        let n = mult.len();
        let products = (0..n)
            .map(|i| (0..n).map(|j| unit_vector(n, mult[i][j])).collect())
            .collect();
        Self::new(products, unit_vector(n, one), relations)
    }

    fn ideal_closure(&self, mut l: Lattice) -> Lattice {
        loop {
            let extra: Vec<Vector> = l
                .basis()
                .iter()
                .flat_map(|r| (0..self.rank).map(move |i| (r, i)))
                .map(|(r, i)| self.mul_raw(&unit_vector(self.rank, i), r))
                .filter(|v| !l.contains(v))
                .collect();
            if extra.is_empty() {
                return l;
            }
            l = l.extend(extra);
        }
    }

    fn mul_raw(&self, a: &[BigInt], b: &[BigInt]) -> Vector {
        let mut out = zero_vector(self.rank);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (o, p) in out.iter_mut().zip(&self.products[i][j]) {
                    if !p.is_zero() {
                        *o += &c * p;
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn unit(&self) -> &[BigInt] {
        &self.unit
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn reduce(&self, a: &[BigInt]) -> Vector {
        self.relations.reduce(a)
    }

    pub fn equal(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        self.relations.contains(&sub_vectors(a, b))
    }

    pub fn is_zero_element(&self, a: &[BigInt]) -> bool {
        self.relations.contains(a)
    }

    pub fn is_zero_ring(&self) -> bool {
        self.relations.is_full()
    }

    pub fn zero(&self) -> Vector {
        zero_vector(self.rank)
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vector {
        self.reduce(&self.mul_raw(a, b))
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vector {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vector>())
    }

    /// Matrix of multiplication by `a` in basis coordinates.
    pub fn left_mult_matrix(&self, a: &[BigInt]) -> IntMatrix {
        let cols: Vec<Vector> = (0..self.rank)
            .map(|j| self.mul_raw(a, &unit_vector(self.rank, j)))
            .collect();
        IntMatrix::from_columns(self.rank, &cols)
    }

    /// An inverse of `a` when `a` is a unit.
    pub fn inverse(&self, a: &[BigInt]) -> Option<Vector> {
        // a x + r = 1 with r in the relation lattice
        let mut cols = self.left_mult_matrix(a).columns();
        cols.extend(self.relations.basis().iter().cloned());
        let m = IntMatrix::from_columns(self.rank, &cols);
        solve(&m, &self.unit).map(|x| self.reduce(&x[..self.rank]))
    }

    pub fn is_unit(&self, a: &[BigInt]) -> bool {
        self.inverse(a).is_some()
    }

    /// The algebra as a module over itself.
    pub fn as_module(&self) -> FgModule {
        let action = (0..self.rank)
            .map(|i| self.left_mult_matrix(&unit_vector(self.rank, i)))
            .collect();
        FgModule::from_lattice(self.relations.clone())
            .with_action(action)
            .expect("relations form an ideal")
    }

    /// Ideal generated by the given elements, as a subgroup of the regular module.
    pub fn ideal_generated(&self, gens: &[Vector]) -> Subgroup {
        let l = self.relations.extend(gens.iter().flat_map(|g| {
            (0..self.rank).map(move |i| self.mul_raw(&unit_vector(self.rank, i), g))
        }));
        Subgroup::from_lattice(l)
    }

    /// Quotient by an ideal given by generators.
    pub fn quotient(&self, gens: &[Vector]) -> ZAlgebra {
        let l = self.ideal_generated(gens).lattice().clone();
        ZAlgebra {
            rank: self.rank,
            products: self.products.clone(),
            unit: self.unit.clone(),
            relations: l,
        }
    }

    /// Elements of a finite algebra, as canonical representatives.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vector>> {
        FgModule::from_lattice(self.relations.clone()).elements(limit)
    }

    /// Image of the integers; `None` when the characteristic is zero.
    pub fn characteristic(&self) -> BigInt {
        let mut l = Lattice::zero(1);
        // n * 1 lies in relations iff n lies in this 1-dimensional lattice
        let one = self.unit.clone();
        let m = IntMatrix::from_columns(self.rank, &[one]);
        let k = super::lattice::integer_kernel(&{
            let mut cols = m.columns();
            cols.extend(self.relations.basis().iter().cloned());
            IntMatrix::from_columns(self.rank, &cols)
        });
        for v in k.basis() {
            l.insert(vec![v[0].clone()]);
        }
        l.basis()
            .first()
            .map(|r| r[0].clone())
            .unwrap_or_else(BigInt::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::matrix::vector;

    #[test]
    fn units_in_small_rings() {
        let z4 = ZAlgebra::zmod(4);
        assert!(z4.is_unit(&vector(&[3])));
        assert!(!z4.is_unit(&vector(&[2])));
        let z = ZAlgebra::integers();
        assert!(z.is_unit(&vector(&[-1])));
        assert!(!z.is_unit(&vector(&[2])));
        assert_eq!(z4.characteristic(), BigInt::from(4));
        assert_eq!(z.characteristic(), BigInt::from(0));
    }

    #[test]
    fn f4_is_a_field() {
        let f = ZAlgebra::f4();
        let els = f.elements(16).unwrap();
        assert_eq!(els.len(), 4);
        for e in els.iter().filter(|e| !f.is_zero_element(e)) {
            let inv = f.inverse(e).unwrap();
            assert!(f.equal(&f.mul(e, &inv), f.unit()));
        }
        let w = vector(&[0, 1]);
        assert_eq!(f.mul(&w, &w), vector(&[1, 1]));
    }

    #[test]
    fn dual_numbers_have_nilpotent() {
        let d = ZAlgebra::dual_numbers_f2();
        let b = vector(&[0, 1]);
        assert!(d.is_zero_element(&d.mul(&b, &b)));
        assert!(!d.is_unit(&b));
        assert_eq!(
            d.ideal_generated(&[b]).lattice().index(),
            Some(BigInt::from(2))
        );
    }

    #[test]
    fn rejects_bad_tables() {
        let v = |a: i64, b: i64| vec![BigInt::from(a), BigInt::from(b)];
        let r = ZAlgebra::new(
            vec![vec![v(1, 0), v(0, 1)], vec![v(1, 0), v(0, 1)]],
            v(1, 0),
            vec![],
        );
        assert!(r.is_err());
    }
}
