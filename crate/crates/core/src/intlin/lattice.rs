//! Integer lattices in Hermite normal form.
//!
//! A [`Lattice`] is a subgroup of `Z^n` stored by its row-style Hermite basis:
//! pivots strictly increasing, pivot entries positive, and every entry sitting
//! above a later pivot reduced into `[0, pivot)`. The basis is unique, so two
//! lattices are equal iff their bases are equal, and [`Lattice::reduce`] yields
//! a canonical representative for every coset.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{is_zero_vector, IntMatrix, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

fn leading(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn axpy(dst: &mut [BigInt], k: &BigInt, src: &[BigInt]) {
    if k.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += k * s;
        }
    }
}

/// Extended gcd: returns (g, x, y) with x*a + y*b = g >= 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Self::from_generators(dim, (0..dim).map(|i| super::matrix::unit_vector(dim, i)))
    }

    pub fn from_generators<I>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut l = Self::zero(dim);
        for g in gens {
            l.insert_raw(g);
        }
        l.normalize();
        l
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_columns(m: &IntMatrix) -> Self {
        Self::from_generators(m.rows(), m.columns())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// True iff the lattice is all of `Z^n`.
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim && self.rows.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    /// Index `[Z^n : L]` when finite.
    pub fn index(&self) -> Option<BigInt> {
        if self.rows.len() != self.dim {
            return None;
        }
        Some(
            self.rows
                .iter()
                .enumerate()
                .map(|(i, r)| r[i].clone())
                .product(),
        )
    }

    /// Basis vectors as the columns of an `n x r` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.rows)
    }

    fn insert_raw(&mut self, mut v: Vector) {
        assert_eq!(v.len(), self.dim, "lattice generator has wrong length");
        let mut r = 0;
        loop {
            let Some(c) = leading(&v) else { return };
            while r < self.pivots.len() && self.pivots[r] < c {
                r += 1;
            }
            if r < self.pivots.len() && self.pivots[r] == c {
                let a = self.rows[r][c].clone();
                let b = v[c].clone();
                if b.is_multiple_of(&a) {
                    let q = -(&b / &a);
                    axpy(&mut v, &q, &self.rows[r]);
                } else {
                    let (g, x, y) = ext_gcd(&a, &b);
                    let row = &self.rows[r];
                    let new_row: Vector =
                        row.iter().zip(&v).map(|(p, q)| &x * p + &y * q).collect();
                    let ag = &a / &g;
                    let bg = &b / &g;
                    let new_v: Vector =
                        row.iter().zip(&v).map(|(p, q)| &bg * p - &ag * q).collect();
                    self.rows[r] = new_row;
                    v = new_v;
                }
            } else {
                if v[c].is_negative() {
                    for x in v.iter_mut() {
                        *x = -&*x;
                    }
                }
                self.rows.insert(r, v);
                self.pivots.insert(r, c);
                return;
            }
        }
    }

    fn normalize(&mut self) {
        for j in 0..self.rows.len() {
            let p = self.pivots[j];
            if self.rows[j][p].is_negative() {
                for x in self.rows[j].iter_mut() {
                    *x = -&*x;
                }
            }
            let piv = self.rows[j][p].clone();
            let (head, tail) = self.rows.split_at_mut(j);
            let row_j = &tail[0];
            for row_i in head.iter_mut() {
                let q = row_i[p].div_floor(&piv);
                if !q.is_zero() {
                    axpy(row_i, &-q, row_j);
                }
            }
        }
    }

    pub fn insert(&mut self, v: Vector) {
        self.insert_raw(v);
        self.normalize();
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[BigInt]) -> Vector {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let q = w[p].div_floor(&row[p]);
            axpy(&mut w, &-q, row);
        }
        w
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim, "vector has wrong length");
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            match leading(&w) {
                None => return true,
                Some(c) if c < p => return false,
                Some(c) if c > p => continue,
                Some(_) => {}
            }
            if !w[p].is_multiple_of(&row[p]) {
                return false;
            }
            let q = -(&w[p] / &row[p]);
            axpy(&mut w, &q, row);
        }
        is_zero_vector(&w)
    }

    /// Coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vector> {
        let mut w = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_multiple_of(&row[p]) {
                return None;
            }
            let q = &w[p] / &row[p];
            axpy(&mut w, &-&q, row);
            coords.push(q);
        }
        is_zero_vector(&w).then_some(coords)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut l = self.clone();
        for r in &other.rows {
            l.insert_raw(r.clone());
        }
        l.normalize();
        l
    }

    pub fn extend<I: IntoIterator<Item = Vector>>(&self, gens: I) -> Lattice {
        let mut l = self.clone();
        for g in gens {
            l.insert_raw(g);
        }
        l.normalize();
        l
    }

    /// Image of the lattice under `m`.
    pub fn image(&self, m: &IntMatrix) -> Lattice {
        Lattice::from_generators(m.rows(), self.rows.iter().map(|r| m.mul_vec(r)))
    }
}

/// `{x in Z^c : m x = 0}` for an `r x c` matrix.
pub fn integer_kernel(m: &IntMatrix) -> Lattice {
    let (r, c) = (m.rows(), m.cols());
    let augmented = augmented_rows(m);
    let h = Lattice::from_generators(r + c, augmented);
    Lattice::from_generators(
        c,
        h.rows
            .iter()
            .zip(&h.pivots)
            .filter(|(_, &p)| p >= r)
            .map(|(row, _)| row[r..].to_vec()),
    )
}

fn augmented_rows(m: &IntMatrix) -> Vec<Vector> {
    let c = m.cols();
    (0..c)
        .map(|j| {
            let mut row = m.column(j);
            row.extend((0..c).map(|k| {
                if k == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect()
}

/// Integer solution of `m x = b`, reduced to the canonical representative
/// modulo the Hermite basis of the solution lattice `ker m`.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vector> {
    let (r, c) = (m.rows(), m.cols());
    assert_eq!(b.len(), r, "right-hand side has wrong length");
    let h = Lattice::from_generators(r + c, augmented_rows(m));
    let mut w: Vector = b.to_vec();
    w.extend(std::iter::repeat_with(BigInt::zero).take(c));
    for (row, &p) in h.rows.iter().zip(&h.pivots) {
        if p >= r {
            break;
        }
        if w[..p].iter().any(|x| !x.is_zero()) {
            return None;
        }
        if !w[p].is_multiple_of(&row[p]) {
            return None;
        }
        let q = -(&w[p] / &row[p]);
        axpy(&mut w, &q, row);
    }
    if !is_zero_vector(&w[..r]) {
        return None;
    }
    let x: Vector = w[r..].iter().map(|v| -v).collect();
    let kernel = Lattice::from_generators(
        c,
        h.rows
            .iter()
            .zip(&h.pivots)
            .filter(|(_, &p)| p >= r)
            .map(|(row, _)| row[r..].to_vec()),
    );
    Some(kernel.reduce(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::matrix::vector;

    #[test]
    fn hermite_basis_is_canonical() {
        let a = Lattice::from_generators(2, vec![vector(&[2, 4]), vector(&[0, 6])]);
        let b =
            Lattice::from_generators(2, vec![vector(&[2, -2]), vector(&[2, 4]), vector(&[4, 2])]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[vector(&[2, 4]), vector(&[0, 6])]);
    }

    #[test]
    fn membership_in_even_integers() {
        let l = Lattice::from_generators(1, vec![vector(&[2])]);
        assert!(l.contains(&vector(&[4])));
        assert!(!l.contains(&vector(&[3])));
        assert_eq!(l.reduce(&vector(&[-3])), vector(&[1]));
    }

    #[test]
    fn kernel_of_row() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rank(), 2);
        for v in k.basis() {
            assert!(is_zero_vector(&m.mul_vec(v)));
        }
        assert!(k.contains(&vector(&[-2, 1, 0])));
        assert!(k.contains(&vector(&[-3, 0, 1])));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve(&IntMatrix::from_rows(&[vec![2]]), &vector(&[4])),
            Some(vector(&[2]))
        );
        assert_eq!(
            solve(&IntMatrix::from_rows(&[vec![2]]), &vector(&[3])),
            None
        );
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![0, 2]]);
        assert_eq!(solve(&m, &vector(&[3, 2])), Some(vector(&[2, 1])));
    }

    #[test]
    fn solve_is_deterministic_on_underdetermined_systems() {
        let m = IntMatrix::from_rows(&[vec![1, 1]]);
        let x = solve(&m, &vector(&[5])).unwrap();
        assert_eq!(m.mul_vec(&x), vector(&[5]));
        let kernel = integer_kernel(&m);
        assert_eq!(kernel.reduce(&x), x);
    }
}
