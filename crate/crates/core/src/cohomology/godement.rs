use super::{CarrierSheaf, CochainComplex};
use crate::error::{Error, Result};
use crate::intlin::{FgModule, IntMatrix};

/// `G(F)_y = ⊕_{x <= y} F_x` with projections as restrictions, and the
/// embedding `F -> G(F)` sending `s` to its restrictions.
#[derive(Clone, Debug)]
pub struct GodementSheaf {
    pub sheaf: CarrierSheaf,
    pub embedding: Vec<IntMatrix>,
    /// `(x, offset)` for every block of `G(F)_y`.
    pub blocks: Vec<Vec<(usize, usize)>>,
}

pub fn godement_sheaf(c: &CarrierSheaf) -> Result<GodementSheaf> {
    let scheme = c.scheme().clone();
    let space = scheme.space().clone();
    let n = space.len();
    let mut blocks = Vec::with_capacity(n);
    let mut stalks = Vec::with_capacity(n);
    let mut embedding = Vec::with_capacity(n);
    for y in 0..n {
        let below = space.down(y);
        let mut offs = Vec::with_capacity(below.len());
        let mut stalk = FgModule::zero();
        for &x in &below {
            offs.push((x, stalk.rank()));
            stalk = stalk.direct_sum(&FgModule::from_lattice(c.stalk(x).relations().clone()));
        }
        if below.iter().all(|&x| c.stalk(x).action().is_some()) {
            let action = (0..scheme.stalk(y).len())
                .map(|b| {
                    below.iter().fold(IntMatrix::zeros(0, 0), |acc, &x| {
                        let bx = scheme.restriction(y, x).unwrap().apply(b);
                        acc.direct_sum(&c.stalk(x).action().unwrap()[bx])
                    })
                })
                .collect();
            stalk = stalk.with_action(action)?;
        }
        let rows: Vec<IntMatrix> = below.iter().map(|&x| c.restriction(y, x).clone()).collect();
        embedding.push(stack(&rows, stalk.rank(), c.stalk(y).rank()));
        stalks.push(stalk);
        blocks.push(offs);
    }
    let ranks: Vec<usize> = stalks.iter().map(FgModule::rank).collect();
    let sheaf = CarrierSheaf::new(scheme, stalks, |y, z| {
        let mut m = IntMatrix::zeros(ranks[z], ranks[y]);
        for &(x, oz) in &blocks[z] {
            let oy = blocks[y]
                .iter()
                .find(|(w, _)| *w == x)
                .expect("U_z inside U_y")
                .1;
            for i in 0..c.stalk(x).rank() {
                m[(oz + i, oy + i)] = 1.into();
            }
        }
        m
    })?;
    if !sheaf.is_flabby() {
        return Err(Error::InternalInconsistency(
            "Godement sheaf is not flabby".into(),
        ));
    }
    Ok(GodementSheaf {
        sheaf,
        embedding,
        blocks,
    })
}

fn stack(parts: &[IntMatrix], rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    let mut r0 = 0;
    for p in parts {
        for r in 0..p.rows() {
            for c in 0..cols {
                m[(r0 + r, c)] = p[(r, c)].clone();
            }
        }
        r0 += p.rows();
    }
    m
}

/// The canonical flabby resolution `F -> G^0 -> G^1 -> ...` cut after
/// `length` stages, with `C^0 = F` and `C^{k+1} = coker(C^k -> G^k)`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub cokernels: Vec<CarrierSheaf>,
    pub stages: Vec<GodementSheaf>,
    /// Global sections `Γ(G^k) = ⊕_x C^k_x` and the induced differentials.
    pub complex: CochainComplex,
}

fn global_product(c: &CarrierSheaf) -> FgModule {
    let n = c.scheme().space().len();
    let all: Vec<usize> = (0..n).collect();
    let sum = (0..n).fold(FgModule::zero(), |acc, x| {
        acc.direct_sum(&FgModule::from_lattice(c.stalk(x).relations().clone()))
    });
    match c.global_action(&all) {
        Some(action) => sum
            .with_action(action)
            .expect("blockwise action preserves relations"),
        None => sum,
    }
}

pub fn godement(f: &CarrierSheaf, length: usize) -> Result<Resolution> {
    let space = f.scheme().space().clone();
    let n = space.len();
    let mut cokernels = vec![f.clone()];
    let mut stages: Vec<GodementSheaf> = Vec::new();
    let mut groups = vec![global_product(f)];
    let mut differentials = Vec::new();
    for k in 0..length.saturating_sub(1) {
        let c = &cokernels[k];
        let g = godement_sheaf(c)?;
        let mut stalks = Vec::with_capacity(n);
        let mut to = Vec::with_capacity(n);
        let mut from = Vec::with_capacity(n);
        for y in 0..n {
            let gy = g.sheaf.stalk(y);
            let rels = gy.relations().extend(g.embedding[y].columns());
            let mut q = FgModule::from_lattice(rels);
            if let Some(action) = gy.action() {
                q = q.with_action(action.to_vec())?;
            }
            let (small, coords) = q.minimized();
            stalks.push(small);
            to.push(coords.to);
            from.push(coords.from);
        }
        let next = CarrierSheaf::new(f.scheme().clone(), stalks, |y, z| {
            to[z].mul(g.sheaf.restriction(y, z)).mul(&from[y])
        })?;
        // Γ(G^k) -> Γ(G^{k+1}): component x' is the class of (s_x)_{x <= x'}
        let src_offsets: Vec<usize> = (0..n)
            .scan(0, |acc, x| {
                let o = *acc;
                *acc += c.stalk(x).rank();
                Some(o)
            })
            .collect();
        let src_rank = src_offsets.last().map_or(0, |&o| o + c.stalk(n - 1).rank());
        let tgt_rank: usize = (0..n).map(|x| next.stalk(x).rank()).sum();
        let mut d = IntMatrix::zeros(tgt_rank, src_rank);
        let mut row0 = 0;
        for xp in 0..n {
            for &(x, off) in &g.blocks[xp] {
                for r in 0..next.stalk(xp).rank() {
                    for i in 0..c.stalk(x).rank() {
                        d[(row0 + r, src_offsets[x] + i)] = to[xp][(r, off + i)].clone();
                    }
                }
            }
            row0 += next.stalk(xp).rank();
        }
        groups.push(global_product(&next));
        differentials.push(d);
        stages.push(g);
        cokernels.push(next);
    }
    let complex = CochainComplex::new(groups, differentials)?;
    Ok(Resolution {
        cokernels,
        stages,
        complex,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::ascend;
    use super::*;
    use crate::scheme::{CongruenceScheme, FiniteSpace, ModuleSheaf};
    use crate::sesquiad::catalog::*;
    use crate::smodule::SesquiadModule;

    #[test]
    fn one_point_resolution_is_trivial() {
        let a = Arc::new(f1());
        let x = Arc::new(CongruenceScheme::constant(FiniteSpace::point(), a.clone()).unwrap());
        let m = SesquiadModule::cyclic(a, 0, &[0, 1, 2]).unwrap();
        let f = ascend(&ModuleSheaf::constant(x, &m).unwrap()).unwrap();
        let r = godement(&f, 3).unwrap();
        assert!(r.cokernels[1].is_zero());
        assert_eq!(r.complex.cohomology(0).unwrap().invariants().free_rank, 1);
        assert!(r.complex.cohomology(1).unwrap().is_zero_module());
    }
}
