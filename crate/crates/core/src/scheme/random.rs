//! Seeded module sheaves and sheaf homomorphisms on constant structures.

use std::sync::Arc;

use rand::Rng;

use super::{CongruenceScheme, ModuleSheaf, SheafHom};
use crate::error::{Error, Result};
use crate::smodule::random::{module, sub_points, Shape};
use crate::smodule::{quotient, ModuleHom, SesquiadModule};

/// Union of the chosen submodules over every point at or above `x`.
fn upward_union(x: &CongruenceScheme, picks: &[Vec<usize>], y: usize) -> Vec<usize> {
    let mut out: Vec<usize> = x
        .space()
        .up(y)
        .into_iter()
        .flat_map(|z| picks[z].iter().copied())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `F_x = P / N_x`, with `N_x` growing towards smaller points so that the
/// identity of `P` descends to every restriction. Returns the sheaf and the
/// projections `P -> F_x`.
pub fn quotient_sheaf(
    x: &Arc<CongruenceScheme>,
    p: &SesquiadModule,
    kill: &[Vec<usize>],
) -> Result<(ModuleSheaf, Vec<ModuleHom>)> {
    let n = x.space().len();
    let projections = (0..n)
        .map(|y| quotient(p, &upward_union(x, kill, y)))
        .collect::<Result<Vec<_>>>()?;
    let stalks = projections.iter().map(|q| q.target.clone()).collect();
    let sheaf = ModuleSheaf::new(x.clone(), stalks, |a, b| {
        let mut map = vec![usize::MAX; projections[a].target.len()];
        for i in 0..p.len() {
            map[projections[a].apply(i)] = projections[b].apply(i);
        }
        Ok(map)
    })?;
    Ok((sheaf, projections))
}

fn picks<R: Rng>(rng: &mut R, x: &CongruenceScheme, p: &SesquiadModule) -> Vec<Vec<usize>> {
    (0..x.space().len())
        .map(|_| {
            if rng.gen_bool(0.5) {
                sub_points(rng, p)
            } else {
                vec![p.zero_index()]
            }
        })
        .collect()
}

pub fn sheaf<R: Rng>(rng: &mut R, x: &Arc<CongruenceScheme>, shape: &Shape) -> Result<ModuleSheaf> {
    let a = constant_base(x)?;
    let p = module(rng, &a, shape);
    let kill = picks(rng, x, &p);
    Ok(quotient_sheaf(x, &p, &kill)?.0)
}

fn constant_base(x: &CongruenceScheme) -> Result<Arc<crate::sesquiad::Sesquiad>> {
    let a = x.global().clone();
    match x.stalks().first() {
        Some(s) if x.stalks().iter().all(|t| t == s) => Ok(s.clone()),
        None => Ok(a),
        _ => Err(Error::Invalid(
            "random sheaves need a constant structure".into(),
        )),
    }
}

/// `P/N -> P'/N'` where `P'` is `P` with extra points and `N' ⊇ N`.
pub fn sheaf_hom<R: Rng>(
    rng: &mut R,
    x: &Arc<CongruenceScheme>,
    shape: &Shape,
) -> Result<SheafHom> {
    let a = constant_base(x)?;
    let p = module(rng, &a, shape);
    let kill = picks(rng, x, &p);
    let (source, proj) = quotient_sheaf(x, &p, &kill)?;
    let big = if rng.gen_bool(0.5) {
        let extra: Vec<_> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let i = rng.gen_range(0..p.len());
                let j = rng.gen_range(0..p.len());
                p.carrier().reduce(
                    &p.point(i)
                        .iter()
                        .zip(p.point(j))
                        .map(|(u, v)| u + v)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        p.with_extra_points(&extra)?
    } else {
        p.clone()
    };
    let embed: Vec<usize> = p
        .points()
        .iter()
        .map(|v| big.index_of(v).expect("points are kept"))
        .collect();
    let more = picks(rng, x, &big);
    let kill2: Vec<Vec<usize>> = kill
        .iter()
        .zip(more)
        .map(|(k, m)| {
            let mut v: Vec<usize> = k.iter().map(|&i| embed[i]).chain(m).collect();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    let (target, proj2) = quotient_sheaf(x, &big, &kill2)?;
    let maps = (0..x.space().len())
        .map(|y| {
            let mut map = vec![usize::MAX; proj[y].target.len()];
            for i in 0..p.len() {
                map[proj[y].apply(i)] = proj2[y].apply(embed[i]);
            }
            ModuleHom::new(source.stalk(y), target.stalk(y), map)
        })
        .collect::<Result<Vec<_>>>()?;
    SheafHom::new(&source, &target, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::FiniteSpace;
    use crate::sesquiad::catalog::*;
    use crate::smodule::random::rng;

    #[test]
    fn random_sheaf_homs_build() {
        let a = Arc::new(f1());
        let mut r = rng(11);
        for space in FiniteSpace::all_posets(3) {
            let x = Arc::new(CongruenceScheme::constant(space, a.clone()).unwrap());
            for _ in 0..4 {
                let h = sheaf_hom(&mut r, &x, &Shape::default()).unwrap();
                h.is_full().unwrap();
            }
        }
    }
}
