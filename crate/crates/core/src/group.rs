//! Permutation groups with a base and strong generating set (deterministic
//! Schreier-Sims). The base is a total order on all points; levels whose
//! stabilizer fixes the point are stored without transversals.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Clone, Debug, Default)]
struct Level {
    /// orbit of the base point; empty means the trivial orbit `{point}`
    orbit: Vec<usize>,
    reps: Vec<Perm>,
    inv: Vec<Perm>,
}

impl Level {
    fn find(&self, x: usize) -> Option<usize> {
        self.orbit.iter().position(|&y| y == x)
    }
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    n: usize,
    order_of_points: Vec<usize>,
    pos: Vec<usize>,
    gens: Vec<Perm>,
    /// first base position moved by each strong generator
    gen_level: Vec<usize>,
    levels: Arc<Vec<Level>>,
}

fn full_order(n: usize, prefix: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for &p in prefix {
        if p < n && !seen[p] {
            seen[p] = true;
            out.push(p);
        }
    }
    out.extend((0..n).filter(|&p| !seen[p]));
    out
}

impl PermGroup {
    pub fn trivial(n: usize) -> Self {
        PermGroup::build(n, full_order(n, &[]), Vec::new())
    }

    pub fn from_generators(n: usize, gens: &[Perm]) -> Result<Self> {
        PermGroup::with_base(n, gens, &[])
    }

    /// BSGS whose base starts with `prefix` and continues with the remaining points in ascending order.
    pub fn with_base(n: usize, gens: &[Perm], prefix: &[usize]) -> Result<Self> {
        for g in gens {
            if g.len() != n {
                return Err(Error::DomainMismatch(format!("generator on {} points, expected {n}", g.len())));
            }
        }
        Ok(PermGroup::build(n, full_order(n, prefix), gens.to_vec()))
    }

    /// Direct product of the symmetric groups on the given disjoint sets.
    pub fn young(n: usize, blocks: &[Vec<usize>], prefix: &[usize]) -> Self {
        let order_of_points = full_order(n, prefix);
        let mut pos = vec![0; n];
        for (i, &p) in order_of_points.iter().enumerate() {
            pos[p] = i;
        }
        let mut gens = Vec::new();
        let mut gen_level = Vec::new();
        let mut levels: Vec<Level> = vec![Level::default(); n];
        let mut depth = 0;
        for block in blocks {
            let mut b = block.clone();
            b.sort_by_key(|&p| pos[p]);
            for j in 0..b.len().saturating_sub(1) {
                gens.push(Perm::transposition(n, b[j], b[j + 1]));
                gen_level.push(pos[b[j]]);
                let lvl = &mut levels[pos[b[j]]];
                lvl.orbit = b[j..].to_vec();
                lvl.reps = b[j..].iter().map(|&c| Perm::transposition(n, b[j], c)).collect();
                lvl.inv = lvl.reps.clone();
                depth = depth.max(pos[b[j]] + 1);
            }
        }
        levels.truncate(depth);
        PermGroup { n, order_of_points, pos, gens, gen_level, levels: Arc::new(levels) }
    }

    /// Trusts that `gens` is a strong generating set relative to the base order `prefix`.
    pub(crate) fn from_strong_generators(n: usize, prefix: &[usize], gens: Vec<Perm>) -> Self {
        let order_of_points = full_order(n, prefix);
        let mut g = PermGroup::empty_shell(n, order_of_points);
        for s in gens {
            if !s.is_identity() {
                g.push_gen(s);
            }
        }
        for l in 0..g.levels.len() {
            g.rebuild_level(l);
        }
        g
    }

    fn empty_shell(n: usize, order_of_points: Vec<usize>) -> Self {
        let mut pos = vec![0; n];
        for (i, &p) in order_of_points.iter().enumerate() {
            pos[p] = i;
        }
        PermGroup { n, order_of_points, pos, gens: Vec::new(), gen_level: Vec::new(), levels: Arc::new(Vec::new()) }
    }

    fn push_gen(&mut self, s: Perm) -> usize {
        let lvl = (0..self.n)
            .filter(|&x| s.apply(x) != x)
            .map(|x| self.pos[x])
            .min()
            .expect("non-identity generator");
        if self.levels.len() <= lvl {
            Arc::make_mut(&mut self.levels).resize(lvl + 1, Level::default());
        }
        self.gens.push(s);
        self.gen_level.push(lvl);
        lvl
    }

    fn rebuild_level(&mut self, l: usize) {
        let b = self.order_of_points[l];
        let sgens: Vec<&Perm> =
            self.gens.iter().zip(&self.gen_level).filter(|(_, &gl)| gl >= l).map(|(g, _)| g).collect();
        let moves = sgens.iter().any(|g| g.apply(b) != b);
        let level = &mut Arc::make_mut(&mut self.levels)[l];
        *level = Level::default();
        if !moves {
            return;
        }
        level.orbit.push(b);
        level.reps.push(Perm::identity(self.n));
        let mut k = 0;
        while k < level.orbit.len() {
            let x = level.orbit[k];
            for s in &sgens {
                let y = s.apply(x);
                if !level.orbit.contains(&y) {
                    let r = level.reps[k].then(s);
                    level.orbit.push(y);
                    level.reps.push(r);
                }
            }
            k += 1;
        }
        level.inv = level.reps.iter().map(Perm::inverse).collect();
    }

    fn build(n: usize, order_of_points: Vec<usize>, gens: Vec<Perm>) -> Self {
        let mut g = PermGroup::empty_shell(n, order_of_points);
        let mut uniq: Vec<Perm> = gens.into_iter().filter(|s| !s.is_identity()).collect();
        uniq.sort();
        uniq.dedup();
        for s in uniq {
            g.push_gen(s);
        }
        g.complete();
        g
    }

    /// Schreier-Sims closure of the current generators.
    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let l = i as usize;
            self.rebuild_level(l);
            let b = self.order_of_points[l];
            if self.levels[l].orbit.is_empty() {
                i -= 1;
                continue;
            }
            let sgens: Vec<Perm> = self
                .gens
                .iter()
                .zip(&self.gen_level)
                .filter(|(_, &gl)| gl >= l)
                .map(|(g, _)| g.clone())
                .collect();
            let orbit = self.levels[l].orbit.clone();
            for (k, _) in orbit.iter().enumerate() {
                for s in &sgens {
                    let u = &self.levels[l].reps[k];
                    let us = u.then(s);
                    let d = us.apply(b);
                    let di = self.levels[l].find(d).expect("orbit closed under generators");
                    let h = us.then(&self.levels[l].inv[di]);
                    if h.is_identity() {
                        continue;
                    }
                    let (res, _) = self.sift_from(h, l + 1);
                    if !res.is_identity() {
                        let nl = self.push_gen(res);
                        i = nl as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }

    fn sift_from(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for l in start..self.levels.len() {
            let b = self.order_of_points[l];
            let x = g.apply(b);
            if x == b {
                continue;
            }
            match self.levels[l].find(x) {
                Some(k) => g = g.then(&self.levels[l].inv[k]),
                None => return (g, l),
            }
        }
        let depth = self.levels.len();
        (g, depth)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.len() == self.n && self.sift_from(g.clone(), 0).0.is_identity()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len().max(1)))
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    /// Strong generators.
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn base_order(&self) -> &[usize] {
        &self.order_of_points
    }

    pub(crate) fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Orbit of the `l`-th base point under the stabilizer of the earlier ones.
    pub(crate) fn level_orbit(&self, l: usize) -> Option<&[usize]> {
        self.levels.get(l).filter(|lv| !lv.orbit.is_empty()).map(|lv| lv.orbit.as_slice())
    }

    pub(crate) fn level_inverse_rep(&self, l: usize, x: usize) -> Option<&Perm> {
        let lv = self.levels.get(l)?;
        lv.find(x).map(|k| &lv.inv[k])
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut orb = vec![x];
        let mut k = 0;
        while k < orb.len() {
            for g in &self.gens {
                let y = g.apply(orb[k]);
                if !orb.contains(&y) {
                    orb.push(y);
                }
            }
            k += 1;
        }
        orb.sort_unstable();
        orb
    }

    /// Some element mapping `x` to `y`, if any.
    pub fn transporter(&self, x: usize, y: usize) -> Option<Perm> {
        let mut reps: Vec<(usize, Perm)> = vec![(x, Perm::identity(self.n))];
        let mut k = 0;
        while k < reps.len() {
            if reps[k].0 == y {
                return Some(reps[k].1.clone());
            }
            for g in &self.gens {
                let z = g.apply(reps[k].0);
                if !reps.iter().any(|(p, _)| *p == z) {
                    let r = reps[k].1.then(g);
                    reps.push((z, r));
                }
            }
            k += 1;
        }
        None
    }

    /// Same group with a different base order.
    pub fn rebase(&self, prefix: &[usize]) -> PermGroup {
        let order = full_order(self.n, prefix);
        if order == self.order_of_points {
            return self.clone();
        }
        PermGroup::build(self.n, order, self.gens.clone())
    }

    /// Group generated by `self` and extra elements.
    pub fn extend(&self, extra: &[Perm]) -> PermGroup {
        let mut g = self.clone();
        let mut changed = false;
        for e in extra {
            if !g.contains(e) {
                g.push_gen(e.clone());
                g.complete();
                changed = true;
            }
        }
        if changed {
            g.complete();
        }
        g
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.n == other.n && self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// All elements, when the order is at most `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Perm>> {
        let ord = self.order();
        if ord > BigUint::from(limit) {
            return None;
        }
        let mut out = vec![Perm::identity(self.n)];
        for l in (0..self.levels.len()).rev() {
            if self.levels[l].orbit.is_empty() {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * self.levels[l].orbit.len());
            for e in &out {
                for r in &self.levels[l].reps {
                    next.push(e.then(r));
                }
            }
            out = next;
        }
        out.sort();
        Some(out)
    }

    /// Image on `delta` (as permutations of the positions in `delta`) and
    /// pointwise stabilizer of `delta`.
    pub fn restriction(&self, delta: &[usize]) -> Result<(PermGroup, PermGroup)> {
        if self.gens.iter().any(|g| !g.fixes_set(delta)) {
            return Err(Error::NotInvariant);
        }
        let image_gens: Vec<Perm> = self.gens.iter().map(|g| g.restrict(delta)).collect::<Result<_>>()?;
        let image = PermGroup::from_generators(delta.len(), &image_gens)?;
        let chain = self.rebase(delta);
        let k = delta.len();
        let kernel_gens: Vec<Perm> = chain
            .gens
            .iter()
            .zip(&chain.gen_level)
            .filter(|(_, &l)| l >= k)
            .map(|(g, _)| g.clone())
            .collect();
        let kernel = PermGroup::from_generators(self.n, &kernel_gens)?;
        Ok((image, kernel))
    }
}

pub fn group_from_generators(gens: &[Perm]) -> Result<PermGroup> {
    let n = gens.first().map(Perm::len).unwrap_or(0);
    PermGroup::from_generators(n, gens)
}
