//! Seeded generators of small modules, homomorphisms and short exact
//! sequences, for property suites.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hom::{full_closure, quotient, submodule, ModuleHom};
use super::{orbit_closure, SesquiadModule};
use crate::error::Result;
use crate::intlin::matrix::unit_vector;
use crate::intlin::module::map_kernel;
use crate::intlin::{FgModule, IntMatrix, Lattice, Vector};
use crate::sesquiad::Sesquiad;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_generators: usize,
    pub max_relations: usize,
    pub max_extra_points: usize,
    pub coefficient: i64,
    /// When set, carriers are forced finite with at most this many elements.
    pub finite_cap: Option<usize>,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_generators: 2,
            max_relations: 2,
            max_extra_points: 2,
            coefficient: 3,
            finite_cap: None,
        }
    }
}

impl Shape {
    pub fn finite(cap: usize) -> Self {
        Shape {
            finite_cap: Some(cap),
            ..Shape::default()
        }
    }
}

fn small_vector<R: Rng>(rng: &mut R, n: usize, c: i64) -> Vector {
    (0..n)
        .map(|_| BigInt::from(rng.gen_range(-c..=c)))
        .collect()
}

/// `A`-orbit span of `gens` together with `base`, an `R_A`-stable lattice.
fn stable_span(a: &Sesquiad, carrier: &FgModule, base: &Lattice, gens: &[Vector]) -> Lattice {
    let mut out = base.clone();
    for g in gens {
        for x in 0..a.len() {
            out.insert(carrier.act(x, g).expect("carrier has an action"));
        }
    }
    out
}

fn finite_order(m: &FgModule) -> Option<usize> {
    m.order().and_then(|o| usize::try_from(o).ok())
}

/// Quotient of a free module by random relations, with generator orbits and
/// a few extra orbits as points.
pub fn module<R: Rng>(rng: &mut R, a: &Arc<Sesquiad>, shape: &Shape) -> SesquiadModule {
    loop {
        if let Some(m) = try_module(rng, a, shape) {
            return m;
        }
    }
}

fn try_module<R: Rng>(rng: &mut R, a: &Arc<Sesquiad>, shape: &Shape) -> Option<SesquiadModule> {
    let n = rng.gen_range(1..=shape.max_generators.max(1));
    let free = SesquiadModule::free_presented(a.clone(), n);
    let dim = free.rank();
    let carrier = free.carrier();
    let rels: Vec<Vector> = (0..rng.gen_range(0..=shape.max_relations))
        .map(|_| small_vector(rng, dim, shape.coefficient))
        .collect();
    let mut lattice = stable_span(a, carrier, carrier.relations(), &rels);
    if let Some(cap) = shape.finite_cap {
        if !lattice.is_full() {
            let k = rng.gen_range(2..=4i64);
            lattice = lattice
                .extend((0..dim).map(|j| unit_vector(dim, j).into_iter().map(|x| x * k).collect()));
        }
        let order = finite_order(&FgModule::from_lattice(lattice.clone()))?;
        if order > cap {
            return None;
        }
    }
    let q = FgModule::from_lattice(lattice)
        .with_action(carrier.action().unwrap().to_vec())
        .ok()?;
    let extras: Vec<Vector> = (0..rng.gen_range(0..=shape.max_extra_points))
        .map(|_| small_vector(rng, dim, shape.coefficient.min(2)))
        .collect();
    let mut points = free.points().to_vec();
    points.extend(orbit_closure(a, &q, &extras).ok()?);
    let m = SesquiadModule::new(a.clone(), q, points).ok()?;
    Some(m.minimized().0)
}

/// A homomorphism into `target` from a module built on `gens` free
/// generators sent to random points. With `extra_points`, the source gets
/// additional points and the target is enlarged by their images.
pub fn hom_into<R: Rng>(
    rng: &mut R,
    target: &SesquiadModule,
    shape: &Shape,
    extra_points: bool,
) -> Result<ModuleHom> {
    let a = target.base().clone();
    let m = a.len();
    let n = rng.gen_range(1..=shape.max_generators.max(1));
    let free = SesquiadModule::free_presented(a.clone(), n);
    let dim = free.rank();
    let images: Vec<usize> = (0..n).map(|_| rng.gen_range(0..target.len())).collect();
    let cols: Vec<Vector> = (0..dim)
        .map(|c| {
            target
                .carrier()
                .act(c % m, target.point(images[c / m]))
                .expect("target has an action")
        })
        .collect();
    let mat = IntMatrix::from_columns(target.rank(), &cols);
    let kernel = map_kernel(free.carrier(), target.carrier(), &mat);
    let relations = if rng.gen_bool(0.5) {
        kernel
    } else {
        let mut picks: Vec<Vector> = Vec::new();
        for v in kernel.basis() {
            if rng.gen_bool(0.5) {
                let k = rng.gen_range(1..=2i64);
                picks.push(v.iter().map(|x| x * k).collect());
            }
        }
        stable_span(&a, free.carrier(), free.carrier().relations(), &picks)
    };
    let mut relations = relations;
    if shape.finite_cap.is_some() && !relations.is_full() {
        // keep the source finite: add multiples of generators that die in the target
        let order = finite_order(target.carrier()).unwrap_or(2).max(2) as i64;
        relations = relations
            .extend((0..dim).map(|j| unit_vector(dim, j).into_iter().map(|x| x * order).collect()));
    }
    let carrier =
        FgModule::from_lattice(relations).with_action(free.carrier().action().unwrap().to_vec())?;
    let mut points = free.points().to_vec();
    let mut target = target.clone();
    if extra_points {
        let extras: Vec<Vector> = (0..rng.gen_range(1..=shape.max_extra_points.max(1)))
            .map(|_| small_vector(rng, dim, 2))
            .collect();
        let orbits = orbit_closure(&a, &carrier, &extras)?;
        let imgs: Vec<Vector> = orbits.iter().map(|p| mat.mul_vec(p)).collect();
        target = target.with_extra_points(&imgs)?;
        points.extend(orbits);
    }
    let source = SesquiadModule::new(a, carrier, points)?;
    let (source, coords) = source.minimized();
    ModuleHom::from_matrix(&source, &target, mat.mul(&coords.from))
}

/// Random module and a random homomorphism into it.
pub fn hom<R: Rng>(rng: &mut R, a: &Arc<Sesquiad>, shape: &Shape) -> ModuleHom {
    loop {
        let t = module(rng, a, shape);
        let extra = rng.gen_bool(0.5);
        if let Ok(h) = hom_into(rng, &t, shape, extra) {
            if shape
                .finite_cap
                .is_none_or(|cap| finite_order(h.source.carrier()).is_some_and(|o| o <= cap))
            {
                return h;
            }
        }
    }
}

/// Random `A`-stable subset of points (orbits of a few points).
pub fn sub_points<R: Rng>(rng: &mut R, s: &SesquiadModule) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(0..=2.min(s.len()));
    let mut out = vec![s.zero_index()];
    for &i in &idx[..k] {
        for x in 0..s.base().len() {
            out.push(s.act_point(x, i));
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn inclusion<R: Rng>(rng: &mut R, s: &SesquiadModule) -> Result<ModuleHom> {
    submodule(s, &sub_points(rng, s))
}

pub fn projection<R: Rng>(rng: &mut R, s: &SesquiadModule) -> Result<ModuleHom> {
    quotient(s, &sub_points(rng, s))
}

/// `0 -> U -> T -> T/U -> 0` with `U` full, hence strong exact.
pub fn short_exact<R: Rng>(
    rng: &mut R,
    a: &Arc<Sesquiad>,
    shape: &Shape,
) -> Result<(ModuleHom, ModuleHom)> {
    let t = module(rng, a, shape);
    let u = full_closure(&t, &sub_points(rng, &t));
    let inc = submodule(&t, &u)?;
    let proj = quotient(&t, &u)?;
    Ok((inc, proj))
}

/// Every point map `S -> T` that is a homomorphism, when the search space
/// (`|T|^generators`) stays below `limit`.
pub fn all_homs(s: &SesquiadModule, t: &SesquiadModule, limit: usize) -> Option<Vec<ModuleHom>> {
    // points determined by images of a generating set of A-orbits
    let mut gens: Vec<usize> = Vec::new();
    let mut covered = vec![false; s.len()];
    covered[s.zero_index()] = true;
    for i in 0..s.len() {
        if !covered[i] {
            gens.push(i);
            for x in 0..s.base().len() {
                covered[s.act_point(x, i)] = true;
            }
        }
    }
    let total = (t.len() as u128).checked_pow(gens.len() as u32)?;
    if total > limit as u128 {
        return None;
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if let Some(map) = extend_orbits(s, t, &gens, &choice) {
            if let Ok(h) = ModuleHom::new(s, t, map) {
                out.push(h);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Some(out);
            }
            choice[k] += 1;
            if choice[k] < t.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend_orbits(
    s: &SesquiadModule,
    t: &SesquiadModule,
    gens: &[usize],
    choice: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; s.len()];
    map[s.zero_index()] = t.zero_index();
    for (&g, &c) in gens.iter().zip(choice) {
        for x in 0..s.base().len() {
            let (i, j) = (s.act_point(x, g), t.act_point(x, c));
            if map[i] != usize::MAX && map[i] != j {
                return None;
            }
            map[i] = j;
        }
    }
    Some(map)
}
