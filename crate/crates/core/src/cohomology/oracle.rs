use std::collections::HashMap;

use num_bigint::BigInt;

use super::{CarrierSheaf, CochainComplex};
use crate::error::Result;
use crate::intlin::{FgModule, IntMatrix};

/// Normalized cosimplicial replacement: `C^n = ∏ F(x_n)` over strict chains
/// `x_0 > x_1 > ... > x_n`. Its cohomology is the derived limit of `F` over
/// the poset, which equals sheaf cohomology on the finite space.
pub fn higher_limits(c: &CarrierSheaf) -> Result<CochainComplex> {
    let space = c.scheme().space();
    let chains = space.chains();
    let mut groups = Vec::with_capacity(chains.len() + 1);
    let mut offsets: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(chains.len());
    for level in &chains {
        let mut g = FgModule::zero();
        let mut offs = HashMap::new();
        for ch in level {
            offs.insert(ch.clone(), g.rank());
            g = g.direct_sum(&FgModule::from_lattice(
                c.stalk(*ch.last().unwrap()).relations().clone(),
            ));
        }
        let all: Vec<usize> = level.iter().map(|ch| *ch.last().unwrap()).collect();
        if let Some(action) = c.global_action(&all) {
            g = g.with_action(action)?;
        }
        groups.push(g);
        offsets.push(offs);
    }
    let mut differentials = Vec::with_capacity(chains.len());
    for n in 1..chains.len() {
        let mut d = IntMatrix::zeros(groups[n].rank(), groups[n - 1].rank());
        for ch in &chains[n] {
            let row = offsets[n][ch];
            let last = ch[n];
            let rank = c.stalk(last).rank();
            for i in 0..n {
                let mut face = ch.clone();
                face.remove(i);
                let col = offsets[n - 1][&face];
                let sign = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
                for r in 0..rank {
                    d[(row + r, col + r)] += &sign;
                }
            }
            let face = ch[..n].to_vec();
            let col = offsets[n - 1][&face];
            let rho = c.restriction(ch[n - 1], last);
            let sign = BigInt::from(if n % 2 == 0 { 1 } else { -1 });
            for r in 0..rank {
                for k in 0..rho.cols() {
                    d[(row + r, col + k)] += &sign * &rho[(r, k)];
                }
            }
        }
        differentials.push(d);
    }
    // the top degree maps to zero
    if let Some(top) = groups.last() {
        let zero = FgModule::zero();
        differentials.push(IntMatrix::zeros(0, top.rank()));
        groups.push(match top.action() {
            Some(a) => zero.with_action(vec![IntMatrix::zeros(0, 0); a.len()])?,
            None => zero,
        });
    }
    CochainComplex::new(groups, differentials)
}
