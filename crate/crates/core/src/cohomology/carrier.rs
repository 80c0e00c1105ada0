use std::sync::Arc;

use crate::error::{Error, Result};
use crate::intlin::module::{map_image, map_is_well_defined, map_kernel, subquotient};
use crate::intlin::{FgModule, IntMatrix, Lattice, Vector};
use crate::scheme::{CongruenceScheme, ModuleSheaf, SheafHom};

/// A sheaf of `R`-modules on the space of a scheme: a module over the
/// carrier ring of `O_x` at every point (actions indexed by the elements of
/// `O_x`, when present) and restriction matrices `F_x -> F_y` for `y <= x`.
#[derive(Clone, Debug)]
pub struct CarrierSheaf {
    scheme: Arc<CongruenceScheme>,
    stalks: Vec<FgModule>,
    restrictions: Vec<Vec<Option<IntMatrix>>>,
}

fn matrices_agree(target: &FgModule, a: &IntMatrix, b: &IntMatrix) -> bool {
    a.columns()
        .iter()
        .zip(b.columns())
        .all(|(u, v)| target.equal(u, &v))
}

impl CarrierSheaf {
    /// `restriction(x, y)` for every `y < x`; identities are filled in.
    pub fn new<F>(
        scheme: Arc<CongruenceScheme>,
        stalks: Vec<FgModule>,
        mut restriction: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, usize) -> IntMatrix,
    {
        let space = scheme.space().clone();
        let n = space.len();
        if stalks.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: stalks.len(),
            });
        }
        let mut restrictions = vec![vec![None; n]; n];
        for x in 0..n {
            for y in space.down(x) {
                let m = if x == y {
                    IntMatrix::identity(stalks[x].rank())
                } else {
                    restriction(x, y)
                };
                if m.cols() != stalks[x].rank() || m.rows() != stalks[y].rank() {
                    return Err(Error::DimensionMismatch {
                        expected: stalks[y].rank(),
                        found: m.rows(),
                    });
                }
                if !map_is_well_defined(&stalks[x], &stalks[y], &m) {
                    return Err(Error::InternalInconsistency(format!(
                        "restriction {} -> {} is not well defined",
                        space.name(x),
                        space.name(y)
                    )));
                }
                restrictions[x][y] = Some(m);
            }
        }
        let c = CarrierSheaf {
            scheme,
            stalks,
            restrictions,
        };
        for x in 0..n {
            for y in space.down(x) {
                for z in space.down(y) {
                    if !matrices_agree(
                        &c.stalks[z],
                        &c.restriction(y, z).mul(c.restriction(x, y)),
                        c.restriction(x, z),
                    ) {
                        return Err(Error::Invalid(format!(
                            "carrier restrictions {} -> {} -> {} do not compose",
                            space.name(x),
                            space.name(y),
                            space.name(z)
                        )));
                    }
                }
            }
        }
        Ok(c)
    }

    /// `M` at every point `y >= x`, zero elsewhere. `M` carries an action
    /// of `O_x`, pulled back to `O_y` along the restriction.
    pub fn skyscraper(scheme: Arc<CongruenceScheme>, x: usize, m: &FgModule) -> Result<Self> {
        let space = scheme.space().clone();
        let stalks = (0..space.len())
            .map(|y| {
                if !space.leq(x, y) {
                    return Ok(FgModule::zero());
                }
                match m.action() {
                    Some(action) => {
                        let rho = scheme.restriction(y, x).expect("x <= y");
                        let pulled = (0..scheme.stalk(y).len())
                            .map(|b| action[rho.apply(b)].clone())
                            .collect();
                        m.clone().with_action(pulled)
                    }
                    None => Ok(m.clone()),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ranks: Vec<usize> = stalks.iter().map(FgModule::rank).collect();
        Self::new(scheme, stalks, |a, b| {
            if space.leq(x, b) {
                IntMatrix::identity(ranks[a])
            } else {
                IntMatrix::zeros(ranks[b], ranks[a])
            }
        })
    }

    pub fn scheme(&self) -> &Arc<CongruenceScheme> {
        &self.scheme
    }

    pub fn stalk(&self, x: usize) -> &FgModule {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[FgModule] {
        &self.stalks
    }

    pub fn restriction(&self, x: usize, y: usize) -> &IntMatrix {
        self.restrictions[x][y].as_ref().expect("y <= x")
    }

    pub fn is_zero(&self) -> bool {
        self.stalks.iter().all(FgModule::is_zero_module)
    }

    fn has_actions(&self) -> bool {
        self.stalks.iter().all(|s| s.action().is_some())
    }

    /// Action of the global sesquiad on `⊕_{x in open} F_x`, one matrix per
    /// element of `O(X)`.
    pub fn global_action(&self, open: &[usize]) -> Option<Vec<IntMatrix>> {
        if !self.has_actions() {
            return None;
        }
        let g = self.scheme.global();
        Some(
            (0..g.len())
                .map(|e| {
                    open.iter().fold(IntMatrix::zeros(0, 0), |acc, &x| {
                        acc.direct_sum(
                            &self.stalks[x].action().unwrap()[self.scheme.projection(x).apply(e)],
                        )
                    })
                })
                .collect(),
        )
    }

    /// `⊕_{x in open} F_x`, its block offsets and the lattice of compatible
    /// families `Γ(open, F)`.
    pub fn sections(&self, open: &[usize]) -> (FgModule, Vec<usize>, Lattice) {
        let space = self.scheme.space();
        let mut offsets = Vec::with_capacity(open.len());
        let mut product = FgModule::zero();
        for &x in open {
            offsets.push(product.rank());
            product =
                product.direct_sum(&FgModule::from_lattice(self.stalks[x].relations().clone()));
        }
        let dim = product.rank();
        let mut target = FgModule::zero();
        let mut rows: Vec<Vector> = Vec::new();
        for (i, &x) in open.iter().enumerate() {
            for (j, &y) in open.iter().enumerate() {
                if x == y || !space.leq(y, x) {
                    continue;
                }
                let m = self.restriction(x, y);
                for r in 0..self.stalks[y].rank() {
                    let mut row = vec![0.into(); dim];
                    for c in 0..self.stalks[x].rank() {
                        row[offsets[i] + c] = m[(r, c)].clone();
                    }
                    row[offsets[j] + r] -= 1;
                    rows.push(row);
                }
                target =
                    target.direct_sum(&FgModule::from_lattice(self.stalks[y].relations().clone()));
            }
        }
        let diff = IntMatrix::from_big_rows(rows.len(), dim, &rows);
        let limit = map_kernel(&product, &target, &diff);
        (product, offsets, limit)
    }

    /// `Γ(X, F)` as a group with the action of `O(X)`.
    pub fn global_sections(&self) -> Result<FgModule> {
        let all: Vec<usize> = (0..self.stalks.len()).collect();
        let (product, _, limit) = self.sections(&all);
        let action = self.global_action(&all);
        Ok(subquotient(&limit, product.relations(), action.as_deref())?.0)
    }

    /// Flabby on a finite space: every `F_x -> Γ(U_x \ {x}, F)` is onto.
    pub fn is_flabby(&self) -> bool {
        let space = self.scheme.space();
        (0..space.len()).all(|x| {
            let punctured: Vec<usize> = space.down(x).into_iter().filter(|&y| y != x).collect();
            let (product, _, limit) = self.sections(&punctured);
            let cols: Vec<Vector> = (0..self.stalks[x].rank())
                .map(|c| {
                    let mut v = Vec::with_capacity(product.rank());
                    for &y in &punctured {
                        v.extend(self.restriction(x, y).column(c));
                    }
                    v
                })
                .collect();
            let map = IntMatrix::from_columns(product.rank(), &cols);
            map_image(&product, &map).contains_lattice(&limit)
        })
    }

    pub fn direct_sum(&self, other: &CarrierSheaf) -> Result<CarrierSheaf> {
        let stalks = self
            .stalks
            .iter()
            .zip(&other.stalks)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Self::new(self.scheme.clone(), stalks, |x, y| {
            self.restriction(x, y).direct_sum(other.restriction(x, y))
        })
    }
}

/// Carriers and carrier restrictions of a module sheaf.
pub fn ascend(f: &ModuleSheaf) -> Result<CarrierSheaf> {
    let stalks = f.stalks().iter().map(|s| s.carrier().clone()).collect();
    CarrierSheaf::new(f.scheme().clone(), stalks, |x, y| {
        f.restriction_matrix(x, y).clone()
    })
}

/// Carrier matrices of a sheaf homomorphism, one per point.
pub fn ascend_hom(phi: &SheafHom) -> Vec<IntMatrix> {
    phi.maps.iter().map(|h| h.extension.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::FiniteSpace;
    use crate::sesquiad::catalog::*;
    use crate::smodule::SesquiadModule;

    fn constant_z(space: FiniteSpace) -> CarrierSheaf {
        let a = Arc::new(f1());
        let x = Arc::new(CongruenceScheme::constant(space, a.clone()).unwrap());
        ascend(&ModuleSheaf::constant(x, &SesquiadModule::free(a, 1)).unwrap()).unwrap()
    }

    #[test]
    fn constant_sheaf_flabbiness() {
        assert!(constant_z(FiniteSpace::sierpinski()).is_flabby());
        assert!(!constant_z(FiniteSpace::pseudocircle()).is_flabby());
        let c = constant_z(FiniteSpace::pseudocircle());
        assert_eq!(c.global_sections().unwrap().invariants().free_rank, 1);
    }

    #[test]
    fn skyscrapers_are_flabby() {
        let a = Arc::new(f1());
        let x = Arc::new(CongruenceScheme::constant(FiniteSpace::pseudocircle(), a).unwrap());
        for p in 0..4 {
            let z = FgModule::free(1)
                .with_action(vec![IntMatrix::zeros(1, 1), IntMatrix::identity(1)])
                .unwrap();
            let s = CarrierSheaf::skyscraper(x.clone(), p, &z).unwrap();
            assert!(s.is_flabby());
            assert_eq!(s.global_sections().unwrap().invariants().free_rank, 1);
        }
    }
}
