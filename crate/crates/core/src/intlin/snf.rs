//! Smith normal form with transformation matrices.
//!
//! Pivoting is deterministic: the entry of smallest nonzero absolute value in
//! the active block, ties broken by lowest row-major index. Together with the
//! fixed elimination order this makes `U`, `D` and `V` reproducible bit for bit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Left transform, unimodular.
    pub u: IntMatrix,
    /// Inverse of `u`.
    pub u_inv: IntMatrix,
    /// Diagonal result `u * m * v`.
    pub d: IntMatrix,
    /// Right transform, unimodular.
    pub v: IntMatrix,
    /// Nonzero diagonal entries, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row[dst] += k row[src]
    fn row_op(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn col_op(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }
}

fn smallest_in_block(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn smallest_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    for i in t..a.rows() {
        let x = &a[(i, t)];
        if !x.is_zero() && (a[best].is_zero() || x.abs() < a[best].abs()) {
            best = (i, t);
        }
    }
    for j in t..a.cols() {
        let x = &a[(t, j)];
        if !x.is_zero() && (a[best].is_zero() || x.abs() < a[best].abs()) {
            best = (t, j);
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = smallest_in_block(&w.a, t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let piv = w.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = w.a[(i, t)].div_floor(&piv);
                w.row_op(i, t, &-q);
                if !w.a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = w.a[(t, j)].div_floor(&piv);
                w.col_op(j, t, &-q);
                if !w.a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let (bi, bj) = smallest_in_cross(&w.a, t);
                w.swap_rows(t, bi);
                w.swap_cols(t, bj);
                continue;
            }
            let offender = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[(i, j)].is_multiple_of(&piv));
            match offender {
                Some((i, _)) => w.row_op(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors = (0..r.min(c))
        .map(|i| w.a[(i, i)].clone())
        .take_while(|x| !x.is_zero())
        .collect();
    SmithForm {
        u: w.u,
        u_inv: w.u_inv,
        d: w.a,
        v: w.v,
        invariant_factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
        assert!(s.invariant_factors.is_empty());
    }

    #[test]
    fn divisibility_fixup() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(1), BigInt::from(6)]);
    }
}
