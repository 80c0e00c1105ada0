use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A finite T0 space as a poset. Open sets are the down-sets, so the smallest
/// open set around `x` is `U_x = {y : y <= x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FiniteSpace {
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: leq.len(),
            });
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(Error::Invalid(format!(
                    "order is not reflexive at {}",
                    names[x]
                )));
            }
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(Error::Invalid(format!(
                        "{} and {} are topologically indistinguishable",
                        names[x], names[y]
                    )));
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(Error::Invalid(format!(
                            "order is not transitive at {}, {}, {}",
                            names[x], names[y], names[z]
                        )));
                    }
                }
            }
        }
        Ok(FiniteSpace { names, leq })
    }

    /// Transitive closure of the given relations `x <= y`.
    pub fn from_relations(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x.max(y) + 1,
                });
            }
            leq[x][y] = true;
        }
        for k in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if leq[x][k] && leq[k][y] {
                        leq[x][y] = true;
                    }
                }
            }
        }
        Self::new(names, leq)
    }

    fn numbered(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    pub fn empty() -> Self {
        FiniteSpace {
            names: vec![],
            leq: vec![],
        }
    }

    pub fn point() -> Self {
        Self::from_relations(vec!["p".into()], &[]).unwrap()
    }

    /// Open point `o` below closed point `c`.
    pub fn sierpinski() -> Self {
        Self::from_relations(vec!["o".into(), "c".into()], &[(0, 1)]).unwrap()
    }

    /// Two open points `a`, `b`, each below both closed points `c`, `d`.
    pub fn pseudocircle() -> Self {
        let names = ["a", "b", "c", "d"].map(String::from).to_vec();
        Self::from_relations(names, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    /// One open point `o` below two closed points `l`, `r`.
    pub fn wedge() -> Self {
        let names = ["o", "l", "r"].map(String::from).to_vec();
        Self::from_relations(names, &[(0, 1), (0, 2)]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn order(&self) -> &[Vec<bool>] {
        &self.leq
    }

    /// `U_x`.
    pub fn down(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    pub fn up(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[x][y]).collect()
    }

    pub fn is_open(&self, u: &[usize]) -> bool {
        let set: BTreeSet<usize> = u.iter().copied().collect();
        set.iter()
            .all(|&x| (0..self.len()).all(|y| !self.leq[y][x] || set.contains(&y)))
    }

    /// Every open set, as sorted point lists, by increasing size.
    pub fn opens(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        assert!(n < 24, "too many points to enumerate open sets");
        let mut out: Vec<Vec<usize>> = (0u32..1 << n)
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|u| self.is_open(u))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn maximal_points(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| y == x || !self.leq[x][y]))
            .collect()
    }

    /// Pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y
                    && self.leq[x][y]
                    && !(0..n).any(|z| z != x && z != y && self.leq[x][z] && self.leq[z][y])
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Strictly decreasing chains `x_0 > x_1 > ... > x_k`, grouped by `k`.
    pub fn chains(&self) -> Vec<Vec<Vec<usize>>> {
        let n = self.len();
        let mut by_len: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|x| vec![x]).collect()];
        loop {
            let next: Vec<Vec<usize>> = by_len
                .last()
                .unwrap()
                .iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    (0..n)
                        .filter(move |&y| y != last && self.leq[y][last])
                        .map(move |y| {
                            let mut d = c.clone();
                            d.push(y);
                            d
                        })
                })
                .collect();
            if next.is_empty() {
                break;
            }
            by_len.push(next);
        }
        if n == 0 {
            by_len.clear();
        }
        by_len
    }

    /// Length of the longest strict chain; 0 for the empty space.
    pub fn dimension(&self) -> usize {
        self.chains().len().saturating_sub(1)
    }

    /// Points ordered so that larger points come first.
    pub fn top_down(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.len()).collect();
        pts.sort_by_key(|&x| self.up(x).len());
        pts
    }

    /// Families `(v_x)_{x in u}` with `v_x < sizes[x]` and
    /// `restrict(x, y, v_x) = v_y` for `y < x`, sorted; entries outside `u`
    /// are `usize::MAX`.
    pub fn compatible_families<F>(
        &self,
        u: &[usize],
        sizes: &[usize],
        restrict: F,
    ) -> Vec<Vec<usize>>
    where
        F: Fn(usize, usize, usize) -> usize,
    {
        let order: Vec<usize> = self
            .top_down()
            .into_iter()
            .filter(|x| u.contains(x))
            .collect();
        let mut out = Vec::new();
        let mut current = vec![usize::MAX; self.len()];
        self.extend_family(0, &order, sizes, &restrict, &mut current, &mut out);
        out.sort();
        out
    }

    fn extend_family<F>(
        &self,
        k: usize,
        order: &[usize],
        sizes: &[usize],
        restrict: &F,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) where
        F: Fn(usize, usize, usize) -> usize,
    {
        if k == order.len() {
            out.push(current.clone());
            return;
        }
        let y = order[k];
        let forced: Vec<usize> = order[..k]
            .iter()
            .filter(|&&x| self.leq[y][x])
            .map(|&x| restrict(x, y, current[x]))
            .collect();
        let candidates: Vec<usize> = match forced.first() {
            Some(&v) if forced.iter().all(|&w| w == v) => vec![v],
            Some(_) => vec![],
            None => (0..sizes[y]).collect(),
        };
        for v in candidates {
            current[y] = v;
            self.extend_family(k + 1, order, sizes, restrict, current, out);
        }
        current[y] = usize::MAX;
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if !seen[y] && (self.leq[x][y] || self.leq[y][x]) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// One representative of every poset on `n` points up to isomorphism.
    pub fn all_posets(n: usize) -> Vec<FiniteSpace> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .collect();
        let perms = permutations(n);
        let mut seen: BTreeSet<Vec<Vec<bool>>> = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u64..1 << pairs.len() {
            let chosen: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let Ok(space) = Self::from_relations(Self::numbered(n), &chosen) else {
                continue;
            };
            // only transitively reduced choices, so each order is produced once
            if space.covers().len() != chosen.len() {
                continue;
            }
            let canonical = perms
                .iter()
                .map(|p| {
                    (0..n)
                        .map(|x| (0..n).map(|y| space.leq[p[x]][p[y]]).collect())
                        .collect::<Vec<Vec<bool>>>()
                })
                .min()
                .unwrap_or_default();
            if seen.insert(canonical) {
                out.push(space);
            }
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}
