use std::sync::Arc;

use super::CongruenceScheme;
use crate::error::{Error, Result};
use crate::intlin::matrix::zero_vector;
use crate::intlin::module::{map_kernel, subquotient};
use crate::intlin::{FgModule, IntMatrix, Lattice, Vector};
use crate::smodule::{product, ModuleHom, SesquiadModule};

/// A module sheaf on a finite congruence scheme: a module `F_x` over every
/// stalk `O_x` and restrictions `F_x -> F_y` for `y <= x`, each linear over
/// `O_x` acting on `F_y` through `O_x -> O_y`.
#[derive(Clone, Debug)]
pub struct ModuleSheaf {
    scheme: Arc<CongruenceScheme>,
    stalks: Vec<SesquiadModule>,
    restrictions: Vec<Vec<Option<ModuleHom>>>,
}

impl PartialEq for ModuleSheaf {
    fn eq(&self, other: &Self) -> bool {
        self.stalks == other.stalks
            && (0..self.stalks.len()).all(|x| {
                (0..self.stalks.len()).all(|y| {
                    self.restrictions[x][y].as_ref().map(|h| &h.point_map)
                        == other.restrictions[x][y].as_ref().map(|h| &h.point_map)
                })
            })
    }
}

/// Sections over an open set: compatible point families, the subgroup they
/// generate and the compatible carrier families, both inside the product of
/// the carriers over the open set.
#[derive(Clone, Debug)]
pub struct Sections {
    pub open: Vec<usize>,
    /// Point index at every point of the space, `usize::MAX` off the open set.
    pub families: Vec<Vec<usize>>,
    /// Product of the carriers over `open`, in the order of `open`.
    pub product: FgModule,
    pub offsets: Vec<usize>,
    /// Preimage lattice of `M_{F(U)}`.
    pub span: Lattice,
    /// Preimage lattice of `Γ(U, M_F)`.
    pub limit: Lattice,
}

impl Sections {
    pub fn vector(&self, sheaf: &ModuleSheaf, family: &[usize]) -> Vector {
        let mut v = Vec::with_capacity(self.product.rank());
        for &x in &self.open {
            v.extend(sheaf.stalks[x].point(family[x]).iter().cloned());
        }
        v
    }

    /// `M_{F(U)}` as a group.
    pub fn span_module(&self) -> FgModule {
        subquotient(&self.span, self.product.relations(), None)
            .expect("span contains the relations")
            .0
    }

    /// `Γ(U, M_F)` as a group.
    pub fn limit_module(&self) -> FgModule {
        subquotient(&self.limit, self.product.relations(), None)
            .expect("limit contains the relations")
            .0
    }
}

impl ModuleSheaf {
    /// `restriction(x, y)` gives the point map `F_x -> F_y` for `y < x`.
    pub fn new<F>(
        scheme: Arc<CongruenceScheme>,
        stalks: Vec<SesquiadModule>,
        mut restriction: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<Vec<usize>>,
    {
        let space = scheme.space().clone();
        let n = space.len();
        if stalks.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: stalks.len(),
            });
        }
        for (x, s) in stalks.iter().enumerate() {
            if **s.base() != **scheme.stalk(x) {
                return Err(Error::BaseMismatch);
            }
        }
        let mut restrictions = vec![vec![None; n]; n];
        for x in 0..n {
            for y in space.down(x) {
                let h = if x == y {
                    ModuleHom::identity(&stalks[x])
                } else {
                    let target = stalks[y].restrict_scalars(scheme.restriction(x, y).unwrap())?;
                    ModuleHom::new(&stalks[x], &target, restriction(x, y)?)?
                };
                restrictions[x][y] = Some(h);
            }
        }
        let sheaf = ModuleSheaf {
            scheme,
            stalks,
            restrictions,
        };
        for x in 0..n {
            for y in space.down(x) {
                for z in space.down(y) {
                    if (0..sheaf.stalks[x].len()).any(|i| {
                        sheaf.restrict(y, z, sheaf.restrict(x, y, i)) != sheaf.restrict(x, z, i)
                    }) {
                        return Err(Error::Invalid(format!(
                            "module restrictions {} -> {} -> {} do not compose",
                            space.name(x),
                            space.name(y),
                            space.name(z)
                        )));
                    }
                }
            }
        }
        Ok(sheaf)
    }

    /// The same module at every point of a constant scheme.
    pub fn constant(scheme: Arc<CongruenceScheme>, m: &SesquiadModule) -> Result<Self> {
        let stalks = (0..scheme.space().len())
            .map(|x| {
                if **scheme.stalk(x) != **m.base() {
                    Err(Error::BaseMismatch)
                } else {
                    Ok(m.clone())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let len = m.len();
        Self::new(scheme, stalks, |_, _| Ok((0..len).collect()))
    }

    /// `F_x = O_x ⊗ M` along `O(X) -> O_x`.
    pub fn from_global(scheme: Arc<CongruenceScheme>, m: &SesquiadModule) -> Result<Self> {
        if **m.base() != **scheme.global() {
            return Err(Error::BaseMismatch);
        }
        let n = scheme.space().len();
        let mut stalks = Vec::with_capacity(n);
        let mut units = Vec::with_capacity(n);
        for x in 0..n {
            let (s, u) = m.extend_scalars(scheme.projection(x))?;
            stalks.push(s);
            units.push(u);
        }
        let stalks_ref = stalks.clone();
        Self::new(scheme.clone(), stalks, |x, y| {
            let (fx, fy) = (&stalks_ref[x], &stalks_ref[y]);
            let rho = scheme.restriction(x, y).unwrap();
            let mut map = vec![usize::MAX; fx.len()];
            for p in m.points() {
                let (ux, uy) = (units[x].mul_vec(p), units[y].mul_vec(p));
                for b in 0..fx.base().len() {
                    let i = fx
                        .index_of(&fx.carrier().act(b, &ux)?)
                        .ok_or(Error::NoLinearExtension)?;
                    let j = fy
                        .index_of(&fy.carrier().act(rho.apply(b), &uy)?)
                        .ok_or(Error::NoLinearExtension)?;
                    if map[i] != usize::MAX && map[i] != j {
                        return Err(Error::NoLinearExtension);
                    }
                    map[i] = j;
                }
            }
            if map.contains(&usize::MAX) {
                return Err(Error::InternalInconsistency(
                    "extended module has points outside B * (1 ⊗ S)".into(),
                ));
            }
            Ok(map)
        })
    }

    pub fn zero(scheme: Arc<CongruenceScheme>) -> Self {
        let stalks = (0..scheme.space().len())
            .map(|x| SesquiadModule::zero(scheme.stalk(x).clone()))
            .collect();
        Self::new(scheme, stalks, |_, _| Ok(vec![0])).expect("zero sheaf")
    }

    pub fn scheme(&self) -> &Arc<CongruenceScheme> {
        &self.scheme
    }

    pub fn stalk(&self, x: usize) -> &SesquiadModule {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[SesquiadModule] {
        &self.stalks
    }

    /// `F_x -> F_y` for `y <= x`.
    pub fn restriction(&self, x: usize, y: usize) -> Option<&ModuleHom> {
        self.restrictions[x][y].as_ref()
    }

    /// Image of point `i` of `F_x` in `F_y`.
    pub fn restrict(&self, x: usize, y: usize, i: usize) -> usize {
        self.restrictions[x][y].as_ref().expect("y <= x").point_map[i]
    }

    /// Carrier matrix of `M_{F_x} -> M_{F_y}`.
    pub fn restriction_matrix(&self, x: usize, y: usize) -> &IntMatrix {
        &self.restrictions[x][y].as_ref().expect("y <= x").extension
    }

    pub fn is_zero(&self) -> bool {
        self.stalks.iter().all(SesquiadModule::is_zero_module)
    }

    pub fn sections(&self, open: &[usize]) -> Result<Sections> {
        let space = self.scheme.space();
        if !space.is_open(open) {
            return Err(Error::Invalid("not an open set".into()));
        }
        let mut open = open.to_vec();
        open.sort();
        let sizes: Vec<usize> = self.stalks.iter().map(SesquiadModule::len).collect();
        let families = space.compatible_families(&open, &sizes, |x, y, i| self.restrict(x, y, i));
        let mut offsets = Vec::with_capacity(open.len());
        let mut product = FgModule::free(0);
        for &x in &open {
            offsets.push(product.rank());
            product = product.direct_sum(self.stalks[x].carrier());
        }
        let dim = product.rank();
        let mut sections = Sections {
            open: open.clone(),
            families: Vec::new(),
            product: product.clone(),
            offsets: offsets.clone(),
            span: Lattice::zero(dim),
            limit: Lattice::zero(dim),
        };
        let vectors: Vec<Vector> = families.iter().map(|f| sections.vector(self, f)).collect();
        sections.span = product.relations().extend(vectors);
        // compatibility: for every y < x in the open set, rho(m_x) - m_y = 0
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        for (i, &x) in open.iter().enumerate() {
            for (j, &y) in open.iter().enumerate() {
                if x != y && space.leq(y, x) {
                    blocks.push((i, j));
                }
            }
        }
        let mut target = FgModule::free(0);
        let mut rows: Vec<Vector> = Vec::new();
        for &(i, j) in &blocks {
            let (x, y) = (open[i], open[j]);
            let m = self.restriction_matrix(x, y);
            let ry = self.stalks[y].rank();
            for r in 0..ry {
                let mut row = zero_vector(dim);
                for c in 0..self.stalks[x].rank() {
                    row[offsets[i] + c] = m[(r, c)].clone();
                }
                row[offsets[j] + r] -= 1;
                rows.push(row);
            }
            target = target.direct_sum(self.stalks[y].carrier());
        }
        let diff = if rows.is_empty() {
            IntMatrix::zeros(0, dim)
        } else {
            IntMatrix::from_big_rows(rows.len(), dim, &rows)
        };
        sections.limit = map_kernel(&product, &target, &diff);
        sections.families = families;
        Ok(sections)
    }

    pub fn global_sections(&self) -> Result<Sections> {
        self.sections(&(0..self.scheme.space().len()).collect::<Vec<_>>())
    }

    /// Pointwise direct sum.
    pub fn direct_sum(&self, other: &ModuleSheaf) -> Result<(ModuleSheaf, SheafHom, SheafHom)> {
        let n = self.stalks.len();
        let mut stalks = Vec::with_capacity(n);
        let mut proj = (Vec::with_capacity(n), Vec::with_capacity(n));
        for x in 0..n {
            let (p, a, b) = product(&self.stalks[x], &other.stalks[x])?;
            stalks.push(p);
            proj.0.push(a);
            proj.1.push(b);
        }
        let stalks_ref = stalks.clone();
        let sum = ModuleSheaf::new(self.scheme.clone(), stalks, |x, y| {
            let (px, py) = (&stalks_ref[x], &stalks_ref[y]);
            (0..px.len())
                .map(|i| {
                    let (s, t) = (
                        self.restrict(x, y, proj.0[x].apply(i)),
                        other.restrict(x, y, proj.1[x].apply(i)),
                    );
                    let v: Vector = self.stalks[y]
                        .point(s)
                        .iter()
                        .chain(other.stalks[y].point(t))
                        .cloned()
                        .collect();
                    py.index_of(&v)
                        .ok_or_else(|| Error::InternalInconsistency("pair is not a point".into()))
                })
                .collect()
        })?;
        let first = SheafHom::new(&sum, self, proj.0)?;
        let second = SheafHom::new(&sum, other, proj.1)?;
        Ok((sum, first, second))
    }
}

/// A morphism of module sheaves, given pointwise.
#[derive(Clone, Debug)]
pub struct SheafHom {
    pub source: ModuleSheaf,
    pub target: ModuleSheaf,
    pub maps: Vec<ModuleHom>,
}

impl SheafHom {
    pub fn new(source: &ModuleSheaf, target: &ModuleSheaf, maps: Vec<ModuleHom>) -> Result<Self> {
        let space = source.scheme.space();
        if maps.len() != space.len() || target.stalks.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: maps.len(),
            });
        }
        for (x, f) in maps.iter().enumerate() {
            if f.source != source.stalks[x] || f.target != target.stalks[x] {
                return Err(Error::NotComposable(format!(
                    "map at {} has the wrong ends",
                    space.name(x)
                )));
            }
        }
        for x in 0..space.len() {
            for y in space.down(x) {
                for i in 0..source.stalks[x].len() {
                    if target.restrict(x, y, maps[x].apply(i))
                        != maps[y].apply(source.restrict(x, y, i))
                    {
                        return Err(Error::NotEquivariant(format!(
                            "does not commute with restriction {} -> {}",
                            space.name(x),
                            space.name(y)
                        )));
                    }
                }
            }
        }
        Ok(SheafHom {
            source: source.clone(),
            target: target.clone(),
            maps,
        })
    }

    pub fn identity(f: &ModuleSheaf) -> Self {
        let maps = f.stalks.iter().map(ModuleHom::identity).collect();
        SheafHom {
            source: f.clone(),
            target: f.clone(),
            maps,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SheafHom) -> Result<SheafHom> {
        let maps = self
            .maps
            .iter()
            .zip(&next.maps)
            .map(|(f, g)| f.then(g))
            .collect::<Result<Vec<_>>>()?;
        SheafHom::new(&self.source, &next.target, maps)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(ModuleHom::is_zero)
    }

    /// Fullness of `φ_U: F(U) -> G(U)`.
    pub fn is_full_on(&self, open: &[usize]) -> Result<bool> {
        let fs = self.source.sections(open)?;
        let gs = self.target.sections(open)?;
        let image: Vec<Vec<usize>> = fs
            .families
            .iter()
            .map(|f| {
                f.iter()
                    .enumerate()
                    .map(|(x, &i)| {
                        if i == usize::MAX {
                            i
                        } else {
                            self.maps[x].apply(i)
                        }
                    })
                    .collect()
            })
            .collect();
        let span = gs
            .product
            .relations()
            .extend(image.iter().map(|f| gs.vector(&self.target, f)));
        Ok(gs
            .families
            .iter()
            .all(|g| !span.contains(&gs.vector(&self.target, g)) || image.contains(g)))
    }

    pub fn is_full_on_opens(&self) -> Result<bool> {
        for u in self.source.scheme.space().opens() {
            if !self.is_full_on(&u)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_full_on_stalks(&self) -> bool {
        self.maps.iter().all(ModuleHom::is_full)
    }

    /// Fullness on every open set, checked against fullness at every stalk.
    pub fn is_full(&self) -> Result<bool> {
        let opens = self.is_full_on_opens()?;
        let stalks = self.is_full_on_stalks();
        if opens != stalks {
            return Err(Error::InternalInconsistency(format!(
                "sheaf fullness: open sets say {opens}, stalks say {stalks}"
            )));
        }
        Ok(opens)
    }

    /// Pointwise kernel with its inclusion.
    pub fn kernel(&self) -> Result<SheafHom> {
        let incs = self
            .maps
            .iter()
            .map(ModuleHom::kernel)
            .collect::<Result<Vec<_>>>()?;
        let stalks = incs.iter().map(|h| h.source.clone()).collect();
        let f = &self.source;
        let k = ModuleSheaf::new(f.scheme.clone(), stalks, |x, y| {
            (0..incs[x].source.len())
                .map(|i| {
                    let j = f.restrict(x, y, incs[x].apply(i));
                    incs[y]
                        .point_map
                        .iter()
                        .position(|&p| p == j)
                        .ok_or_else(|| {
                            Error::InternalInconsistency(
                                "kernel not stable under restriction".into(),
                            )
                        })
                })
                .collect()
        })?;
        SheafHom::new(&k, f, incs)
    }

    /// Pointwise cokernel with its projection. On a finite space the sheaf
    /// is determined by the stalks, so no further gluing is needed.
    pub fn cokernel(&self) -> Result<SheafHom> {
        let projs = self
            .maps
            .iter()
            .map(ModuleHom::cokernel)
            .collect::<Result<Vec<_>>>()?;
        let stalks = projs.iter().map(|h| h.target.clone()).collect();
        let g = &self.target;
        let c = ModuleSheaf::new(g.scheme.clone(), stalks, |x, y| {
            let mut map = vec![usize::MAX; projs[x].target.len()];
            for i in 0..g.stalks[x].len() {
                map[projs[x].apply(i)] = projs[y].apply(g.restrict(x, y, i));
            }
            Ok(map)
        })?;
        SheafHom::new(g, &c, projs)
    }

    /// `G(U) / φ(F(U))` as a set of classes of `G(U)` families, for
    /// comparison with the sections of the cokernel sheaf.
    pub fn presheaf_cokernel_size(&self, open: &[usize]) -> Result<usize> {
        let fs = self.source.sections(open)?;
        let gs = self.target.sections(open)?;
        let image = fs.families.iter().map(|f| {
            let v: Vec<usize> = f
                .iter()
                .enumerate()
                .map(|(x, &i)| {
                    if i == usize::MAX {
                        i
                    } else {
                        self.maps[x].apply(i)
                    }
                })
                .collect();
            gs.vector(&self.target, &v)
        });
        let rel = gs.product.relations().extend(image);
        let mut classes: Vec<Vector> = gs
            .families
            .iter()
            .map(|g| rel.reduce(&gs.vector(&self.target, g)))
            .collect();
        classes.sort();
        classes.dedup();
        Ok(classes.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::FiniteSpace;
    use crate::sesquiad::catalog::*;

    fn constant(space: FiniteSpace, m: &SesquiadModule) -> ModuleSheaf {
        let x = Arc::new(CongruenceScheme::constant(space, m.base().clone()).unwrap());
        ModuleSheaf::constant(x, m).unwrap()
    }

    #[test]
    fn sections_of_constant_sheaf_on_pseudocircle() {
        let a = Arc::new(f1());
        let m = SesquiadModule::free(a, 1);
        let f = constant(FiniteSpace::pseudocircle(), &m);
        let g = f.global_sections().unwrap();
        assert_eq!(g.families.len(), 2);
        assert_eq!(g.limit_module().invariants().free_rank, 1);
        let ab = f.sections(&[0, 1]).unwrap();
        assert_eq!(ab.families.len(), 4);
        assert_eq!(ab.limit_module().invariants().free_rank, 2);
    }

    #[test]
    fn one_point_inclusion_is_not_full() {
        let a = Arc::new(f1());
        let s = SesquiadModule::cyclic(a.clone(), 0, &[0, 1]).unwrap();
        let t = SesquiadModule::cyclic(a.clone(), 0, &[0, 1, 2]).unwrap();
        let x = Arc::new(CongruenceScheme::constant(FiniteSpace::point(), a).unwrap());
        let fs = ModuleSheaf::constant(x.clone(), &s).unwrap();
        let ft = ModuleSheaf::constant(x, &t).unwrap();
        let h = ModuleHom::from_matrix(&s, &t, IntMatrix::identity(1)).unwrap();
        let phi = SheafHom::new(&fs, &ft, vec![h]).unwrap();
        assert!(!phi.is_full().unwrap());
        assert!(SheafHom::identity(&ft).is_full().unwrap());
        assert!(SheafHom::identity(&ft).kernel().unwrap().source.is_zero());
    }

    #[test]
    fn wedge_gluing() {
        // Z/2 at the open point, Z at both closed points; global sections
        // generated by points are the diagonal, compatible carriers are
        // pairs of equal parity
        let a = Arc::new(f1());
        let z = SesquiadModule::cyclic(a.clone(), 0, &[0, 1]).unwrap();
        let z2 = SesquiadModule::cyclic(a.clone(), 2, &[0, 1]).unwrap();
        let x = Arc::new(CongruenceScheme::constant(FiniteSpace::wedge(), a).unwrap());
        let f = ModuleSheaf::new(x, vec![z2, z.clone(), z], |_, _| Ok(vec![0, 1])).unwrap();
        let g = f.global_sections().unwrap();
        assert_eq!(g.families.len(), 2);
        let span = g.span_module();
        let limit = g.limit_module();
        assert_eq!(span.invariants().free_rank, 1);
        assert_eq!(limit.invariants().free_rank, 2);
        assert!(!g.span.contains_lattice(&g.limit) && g.limit.contains_lattice(&g.span));
    }

    #[test]
    fn from_global_on_a_point() {
        let a = Arc::new(f1());
        let x = Arc::new(CongruenceScheme::spec(&a, 8).unwrap());
        let m = SesquiadModule::cyclic(x.global().clone(), 0, &[0, 1, 2]).unwrap();
        let f = ModuleSheaf::from_global(x, &m).unwrap();
        assert_eq!(f.stalk(0).len(), 3);
        assert_eq!(f.stalk(0).carrier().invariants().free_rank, 1);
    }
}
