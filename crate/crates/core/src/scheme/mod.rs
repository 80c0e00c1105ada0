//! Finite congruence schemes: a finite poset with a sesquiad at every point,
//! module sheaves over it, and unramified/étale checks for affine morphisms.

mod dot;
mod etale;
pub mod random;
mod sheaf;
mod space;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::intlin::module::map_kernel;
use crate::intlin::{FgModule, IntMatrix, Vector};
use crate::sesquiad::{localize, Congruence, Sesquiad, SesquiadHom};

pub use dot::{poset_dot, scheme_dot};
pub use etale::{
    is_etale, is_unramified, locally_finite_presentation, EtaleReport, ResidueCheck, Verdict,
};
pub use sheaf::{ModuleSheaf, Sections, SheafHom};
pub use space::FiniteSpace;

/// Stalks `O_x = O(U_x)` with restrictions `O_x -> O_y` for `y <= x`, and the
/// global sesquiad `O(X)` as the limit over all points.
#[derive(Clone, Debug)]
pub struct CongruenceScheme {
    space: FiniteSpace,
    primes: Option<Vec<Congruence>>,
    stalks: Vec<Arc<Sesquiad>>,
    restrictions: Vec<Vec<Option<SesquiadHom>>>,
    global: Arc<Sesquiad>,
    /// Each global element as its family of stalk elements.
    families: Vec<Vec<usize>>,
    projections: Vec<SesquiadHom>,
}

impl CongruenceScheme {
    /// `restriction(x, y)` is called for every `y < x`; identities and
    /// functoriality are checked.
    pub fn new<F>(
        space: FiniteSpace,
        stalks: Vec<Arc<Sesquiad>>,
        mut restriction: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<SesquiadHom>,
    {
        let n = space.len();
        if stalks.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: stalks.len(),
            });
        }
        let mut restrictions = vec![vec![None; n]; n];
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    restrictions[x][y] = Some(SesquiadHom::identity(stalks[x].clone()));
                } else if space.leq(y, x) {
                    let h = restriction(x, y)?;
                    if *h.source != *stalks[x] || *h.target != *stalks[y] {
                        return Err(Error::BaseMismatch);
                    }
                    restrictions[x][y] = Some(h);
                }
            }
        }
        for x in 0..n {
            for y in space.down(x) {
                for z in space.down(y) {
                    let (xy, yz, xz) = (
                        restrictions[x][y].as_ref().unwrap(),
                        restrictions[y][z].as_ref().unwrap(),
                        restrictions[x][z].as_ref().unwrap(),
                    );
                    if (0..stalks[x].len()).any(|a| yz.apply(xy.apply(a)) != xz.apply(a)) {
                        return Err(Error::Invalid(format!(
                            "restrictions {} -> {} -> {} do not compose",
                            space.name(x),
                            space.name(y),
                            space.name(z)
                        )));
                    }
                }
            }
        }
        let (global, families) = limit(&space, &stalks, &restrictions)?;
        let global = Arc::new(global);
        let projections = (0..n)
            .map(|x| {
                SesquiadHom::new(
                    global.clone(),
                    stalks[x].clone(),
                    families.iter().map(|f| f[x]).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CongruenceScheme {
            space,
            primes: None,
            stalks,
            restrictions,
            global,
            families,
            projections,
        })
    }

    /// The same sesquiad at every point, identities as restrictions.
    pub fn constant(space: FiniteSpace, a: Arc<Sesquiad>) -> Result<Self> {
        let stalks = vec![a.clone(); space.len()];
        Self::new(space, stalks, |_, _| Ok(SesquiadHom::identity(a.clone())))
    }

    /// `spec_c(A)` ordered by inclusion, with stalks `A_E` and the induced
    /// maps `A_E -> A_E'` for `E' ⊆ E`.
    pub fn spec(a: &Arc<Sesquiad>, bound: usize) -> Result<Self> {
        let (primes, leq) = a.spec_c(bound)?;
        let names = primes.iter().map(|p| congruence_name(a, p)).collect();
        let space = FiniteSpace::new(names, leq)?;
        let locals = primes
            .iter()
            .map(|p| localize(a, p))
            .collect::<Result<Vec<_>>>()?;
        let stalks = locals.iter().map(|l| l.local.clone()).collect();
        let mut s = Self::new(space, stalks, |x, y| {
            // A_E and A_E' are quotients of A; the map is the identity on A
            let (from, to) = (&locals[x].to_local, &locals[y].to_local);
            let mut map = vec![usize::MAX; from.target.len()];
            for e in 0..a.len() {
                map[from.apply(e)] = to.apply(e);
            }
            SesquiadHom::new(from.target.clone(), to.target.clone(), map)
        })?;
        s.primes = Some(primes);
        Ok(s)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn primes(&self) -> Option<&[Congruence]> {
        self.primes.as_deref()
    }

    pub fn stalk(&self, x: usize) -> &Arc<Sesquiad> {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[Arc<Sesquiad>] {
        &self.stalks
    }

    /// `O_x -> O_y` for `y <= x`.
    pub fn restriction(&self, x: usize, y: usize) -> Option<&SesquiadHom> {
        self.restrictions[x][y].as_ref()
    }

    pub fn global(&self) -> &Arc<Sesquiad> {
        &self.global
    }

    pub fn global_families(&self) -> &[Vec<usize>] {
        &self.families
    }

    /// `O(X) -> O_x`.
    pub fn projection(&self, x: usize) -> &SesquiadHom {
        &self.projections[x]
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }
}

/// Canonical text for a congruence: its classes, e.g. `{0}{1,e}`.
pub fn congruence_name(a: &Sesquiad, c: &Congruence) -> String {
    c.classes()
        .iter()
        .map(|cl| {
            format!(
                "{{{}}}",
                cl.iter().map(|&x| a.name(x)).collect::<Vec<_>>().join(",")
            )
        })
        .collect()
}

/// Compatible families of stalk elements, as a sesquiad whose ring is the
/// image of `Z[families]` in the product of the stalk rings.
fn limit(
    space: &FiniteSpace,
    stalks: &[Arc<Sesquiad>],
    restrictions: &[Vec<Option<SesquiadHom>>],
) -> Result<(Sesquiad, Vec<Vec<usize>>)> {
    let n = space.len();
    let all: Vec<usize> = (0..n).collect();
    let sizes: Vec<usize> = stalks.iter().map(|s| s.len()).collect();
    let families = space.compatible_families(&all, &sizes, |x, y, v| {
        restrictions[x][y].as_ref().unwrap().apply(v)
    });
    let index = |f: &Vec<usize>| {
        families
            .binary_search(f)
            .expect("products of families are families")
    };
    let zero = index(&(0..n).map(|x| stalks[x].zero()).collect());
    let one = index(&(0..n).map(|x| stalks[x].one()).collect());
    let mult: Vec<Vec<usize>> = families
        .iter()
        .map(|f| {
            families
                .iter()
                .map(|g| index(&(0..n).map(|x| stalks[x].mul(f[x], g[x])).collect()))
                .collect()
        })
        .collect();
    let maximal = space.maximal_points();
    let names = families
        .iter()
        .map(|f| {
            let parts: Vec<&str> = maximal.iter().map(|&x| stalks[x].name(f[x])).collect();
            if parts.len() == 1 {
                parts[0].to_string()
            } else {
                format!("({})", parts.join(","))
            }
        })
        .collect();
    // relations: kernel of Z[families] -> prod_x R_x
    let total: usize = sizes.iter().sum();
    let mut product = FgModule::free(0);
    for s in stalks {
        product = product.direct_sum(&s.universal().as_module());
    }
    let cols: Vec<Vector> = families
        .iter()
        .map(|f| {
            let mut v = Vec::with_capacity(total);
            for x in 0..n {
                v.extend(stalks[x].embed(f[x]).iter().cloned());
            }
            v
        })
        .collect();
    let map = IntMatrix::from_columns(total, &cols);
    let kernel = map_kernel(&FgModule::free(families.len()), &product, &map);
    let g = Sesquiad::from_relations(names, zero, one, mult, kernel.basis().to_vec())?;
    Ok((g, families))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sesquiad::catalog::*;
    use crate::sesquiad::DEFAULT_SPEC_BOUND;

    #[test]
    fn spec_of_f1_is_a_point() {
        let a = Arc::new(f1());
        let x = CongruenceScheme::spec(&a, DEFAULT_SPEC_BOUND).unwrap();
        assert_eq!(x.space().len(), 1);
        assert_eq!(**x.stalk(0), *a);
        assert_eq!(x.global().len(), 2);
    }

    #[test]
    fn spec_of_zero_sesquiad_is_empty() {
        let a = Arc::new(Sesquiad::zero_sesquiad());
        let x = CongruenceScheme::spec(&a, DEFAULT_SPEC_BOUND).unwrap();
        assert!(x.space().is_empty());
        assert!(x.global().is_zero_sesquiad());
    }

    #[test]
    fn spec_of_idempotent_monoid() {
        let a = Arc::new(idempotent());
        let x = CongruenceScheme::spec(&a, DEFAULT_SPEC_BOUND).unwrap();
        assert_eq!(x.space().len(), 3);
        assert_eq!(x.space().maximal_points().len(), 2);
        // global sections recover {0, 1, e}
        assert_eq!(x.global().len(), 3);
        for (i, p) in x.primes().unwrap().iter().enumerate() {
            assert_eq!(**x.stalk(i), *localize(&a, p).unwrap().local);
        }
    }

    #[test]
    fn constant_structure_on_disconnected_space() {
        let space = FiniteSpace::from_relations(vec!["x".into(), "y".into()], &[]).unwrap();
        let x = CongruenceScheme::constant(space, Arc::new(f1())).unwrap();
        assert_eq!(x.global().len(), 4);
        assert_eq!(x.global().universal().as_module().invariants().free_rank, 2);
    }
}
