use crate::error::{Error, Result};
use crate::intlin::module::{map_image, map_is_well_defined, map_kernel, subquotient};
use crate::intlin::{FgModule, IntMatrix, Lattice};

/// `C^0 -> C^1 -> ...`, with `differentials[k]: C^k -> C^{k+1}`. The last
/// group maps to zero.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub groups: Vec<FgModule>,
    pub differentials: Vec<IntMatrix>,
}

impl CochainComplex {
    /// Checks that every differential is well defined and `d ∘ d = 0`.
    pub fn new(groups: Vec<FgModule>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if differentials.len() + 1 != groups.len().max(1) {
            return Err(Error::DimensionMismatch {
                expected: groups.len().saturating_sub(1),
                found: differentials.len(),
            });
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.cols() != groups[k].rank() || d.rows() != groups[k + 1].rank() {
                return Err(Error::DimensionMismatch {
                    expected: groups[k].rank(),
                    found: d.cols(),
                });
            }
            if !map_is_well_defined(&groups[k], &groups[k + 1], d) {
                return Err(Error::InternalInconsistency(format!(
                    "differential {k} is not well defined"
                )));
            }
        }
        for k in 1..differentials.len() {
            let dd = differentials[k].mul(&differentials[k - 1]);
            if !dd
                .columns()
                .iter()
                .all(|c| groups[k + 1].relations().contains(c))
            {
                return Err(Error::InternalInconsistency(format!(
                    "d∘d != 0 at degree {}",
                    k + 1
                )));
            }
        }
        Ok(CochainComplex {
            groups,
            differentials,
        })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// `ker d^p / im d^{p-1}`, carrying any action the groups have. Zero
    /// beyond the last group.
    pub fn cohomology(&self, p: usize) -> Result<FgModule> {
        let Some(c) = self.groups.get(p) else {
            return Ok(FgModule::zero());
        };
        let kernel = match self.differentials.get(p) {
            Some(d) => map_kernel(c, &self.groups[p + 1], d),
            None => Lattice::full(c.rank()),
        };
        let image = match p.checked_sub(1).and_then(|q| self.differentials.get(q)) {
            Some(d) => map_image(c, d),
            None => c.relations().clone(),
        };
        Ok(subquotient(&kernel, &image, c.action())?.0)
    }
}
