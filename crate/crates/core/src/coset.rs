//! Right cosets `G·r` (elements `g` followed by `r`) with backtrack search for
//! intersections.

use crate::error::{Error, Result};
use crate::graph::Coloring;
use crate::group::PermGroup;
use crate::perm::Perm;

#[derive(Clone, Debug)]
pub enum Coset {
    Empty,
    Nonempty { group: PermGroup, rep: Perm },
}

impl Coset {
    pub fn group(group: PermGroup) -> Coset {
        let rep = Perm::identity(group.degree());
        Coset::Nonempty { group, rep }
    }

    pub fn single(rep: Perm) -> Coset {
        Coset::Nonempty { group: PermGroup::trivial(rep.len()), rep }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Coset::Empty)
    }

    pub fn representative(&self) -> Option<&Perm> {
        match self {
            Coset::Empty => None,
            Coset::Nonempty { rep, .. } => Some(rep),
        }
    }

    pub fn underlying_group(&self) -> Option<&PermGroup> {
        match self {
            Coset::Empty => None,
            Coset::Nonempty { group, .. } => Some(group),
        }
    }

    pub fn contains(&self, x: &Perm) -> bool {
        match self {
            Coset::Empty => false,
            Coset::Nonempty { group, rep } => x.len() == rep.len() && group.contains(&x.then(&rep.inverse())),
        }
    }

    pub fn size(&self) -> num_bigint::BigUint {
        match self {
            Coset::Empty => 0u32.into(),
            Coset::Nonempty { group, .. } => group.order(),
        }
    }

    /// All elements, sorted, when there are at most `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Perm>> {
        match self {
            Coset::Empty => Some(Vec::new()),
            Coset::Nonempty { group, rep } => {
                let mut v: Vec<Perm> = group.elements(limit)?.iter().map(|g| g.then(rep)).collect();
                v.sort();
                Some(v)
            }
        }
    }

    /// Coset of inverses.
    pub fn inverse(&self) -> Coset {
        match self {
            Coset::Empty => Coset::Empty,
            Coset::Nonempty { group, rep } => {
                let gens: Vec<Perm> = group.generators().iter().map(|s| rep.conjugate(s)).collect();
                let group = PermGroup::from_generators(rep.len(), &gens).expect("conjugates share the domain");
                Coset::Nonempty { group, rep: rep.inverse() }
            }
        }
    }

    /// `{x·y : x ∈ self}`.
    pub fn then(&self, y: &Perm) -> Coset {
        match self {
            Coset::Empty => Coset::Empty,
            Coset::Nonempty { group, rep } => Coset::Nonempty { group: group.clone(), rep: rep.then(y) },
        }
    }

    /// Intersection, searching along the base order `base` (a prefix is enough).
    pub fn intersect(&self, other: &Coset, base: &[usize]) -> Coset {
        intersect_refs(&[self, other], base)
    }
}

/// Intersection of cosets, searching in the given base order.
pub fn intersect_all(cosets: &[Coset], base: &[usize]) -> Coset {
    let refs: Vec<&Coset> = cosets.iter().collect();
    intersect_refs(&refs, base)
}

fn intersect_refs(cosets: &[&Coset], base: &[usize]) -> Coset {
    let mut parts: Vec<(&PermGroup, &Perm)> = Vec::with_capacity(cosets.len());
    for c in cosets {
        match c {
            Coset::Empty => return Coset::Empty,
            Coset::Nonempty { group, rep } => parts.push((group, rep)),
        }
    }
    let Some(n) = parts.first().map(|p| p.1.len()) else {
        return Coset::Empty;
    };
    // a group contained in all others: the answer is its coset or nothing
    for (k, &(g, r)) in parts.iter().enumerate() {
        let inside = parts.iter().enumerate().all(|(j, &(h, _))| j == k || g.generators().iter().all(|x| h.contains(x)));
        if inside {
            let member = parts.iter().all(|&(h, s)| h.contains(&r.then(&s.inverse())));
            return if member { Coset::Nonempty { group: g.rebase(base), rep: r.clone() } } else { Coset::Empty };
        }
    }
    let aligned: Vec<(PermGroup, Perm)> = parts.into_iter().map(|(g, r)| (g.rebase(base), r.clone())).collect();
    let Some(x) = find_in_intersection(&aligned, &[]) else {
        return Coset::Empty;
    };
    let groups: Vec<PermGroup> = aligned.into_iter().map(|(g, _)| g).collect();
    let group = intersect_groups_aligned(n, &groups);
    Coset::Nonempty { group, rep: x }
}

/// `C1 ∩ C2` for cosets inside the color-preserving permutations of `classes`.
pub fn coset_intersection(c1: &Coset, c2: &Coset, classes: &Coloring) -> Result<Coset> {
    for c in [c1, c2] {
        if let Some(r) = c.representative() {
            if r.len() != classes.n() {
                return Err(Error::DomainMismatch(format!(
                    "coset on {} points, coloring on {}",
                    r.len(),
                    classes.n()
                )));
            }
        }
    }
    let base: Vec<usize> = classes.classes().iter().flatten().copied().collect();
    Ok(c1.intersect(c2, &base))
}

/// The coset whose element set is the union of `parts`, which must itself be a coset.
pub fn coset_union_as_coset(parts: &[Coset]) -> Coset {
    let mut nonempty = parts.iter().filter_map(|c| match c {
        Coset::Empty => None,
        Coset::Nonempty { group, rep } => Some((group, rep)),
    });
    let Some((g0, r0)) = nonempty.next() else {
        return Coset::Empty;
    };
    let r0_inv = r0.inverse();
    let mut gens: Vec<Perm> = g0.generators().to_vec();
    for (g, r) in nonempty {
        gens.extend(g.generators().iter().cloned());
        gens.push(r.then(&r0_inv));
    }
    let group = PermGroup::from_generators(r0.len(), &gens).expect("parts share the domain");
    Coset::Nonempty { group, rep: r0.clone() }
}

/// Pointwise intersection of subgroups.
pub fn intersect_groups(groups: &[PermGroup], base: &[usize]) -> PermGroup {
    let n = groups.first().map(PermGroup::degree).unwrap_or(0);
    let aligned: Vec<PermGroup> = groups.iter().map(|g| g.rebase(base)).collect();
    intersect_groups_aligned(n, &aligned)
}

struct Search<'a> {
    parts: &'a [(&'a PermGroup, Perm)],
    order: &'a [usize],
    n: usize,
    /// below this base position every group is trivial
    depth: usize,
}

impl Search<'_> {
    /// Transform `t` for a coset after the image `y` of base point `l` is fixed.
    fn step(&self, g: &PermGroup, t: &Perm, l: usize, y: usize) -> Option<Perm> {
        let b = self.order[l];
        let w = t.apply(y);
        if w == b {
            return Some(t.clone());
        }
        if l >= g.depth() {
            return None;
        }
        g.level_inverse_rep(l, w).map(|ui| t.then(ui))
    }

    fn candidates(&self, ts: &[Perm], l: usize) -> Vec<usize> {
        let b = self.order[l];
        let mut best: Option<(usize, Vec<usize>)> = None;
        for ((g, _), t) in self.parts.iter().zip(ts) {
            let orbit: &[usize] = if l < g.depth() { g.level_orbit(l).unwrap_or(std::slice::from_ref(&b)) } else { std::slice::from_ref(&b) };
            if best.as_ref().map_or(true, |(s, _)| orbit.len() < *s) {
                let tinv = t.inverse();
                best = Some((orbit.len(), orbit.iter().map(|&w| tinv.apply(w)).collect()));
            }
            if orbit.len() == 1 {
                break;
            }
        }
        let mut c = best.map(|b| b.1).unwrap_or_default();
        c.sort_unstable();
        c
    }

    fn dfs(&self, l: usize, ts: Vec<Perm>, images: &mut Vec<usize>) -> bool {
        if l == self.n {
            return true;
        }
        if l >= self.depth {
            let t0 = &ts[0];
            if ts.iter().any(|t| t != t0) {
                return false;
            }
            let inv = t0.inverse();
            images.extend(self.order[l..].iter().map(|&b| inv.apply(b)));
            return true;
        }
        for y in self.candidates(&ts, l) {
            let next: Option<Vec<Perm>> =
                self.parts.iter().zip(&ts).map(|((g, _), t)| self.step(g, t, l, y)).collect();
            if let Some(next) = next {
                images.push(y);
                if self.dfs(l + 1, next, images) {
                    return true;
                }
                images.pop();
            }
        }
        false
    }
}

/// Some element common to all cosets `G_i·r_i` whose groups share a base order,
/// mapping the first base points to `prefix`.
fn find_in_intersection(parts: &[(PermGroup, Perm)], prefix: &[usize]) -> Option<Perm> {
    let first = &parts.first()?.0;
    let n = first.degree();
    let order = first.base_order();
    let refs: Vec<(&PermGroup, Perm)> = parts.iter().map(|(g, r)| (g, r.clone())).collect();
    let depth = parts.iter().map(|(g, _)| g.depth()).max().unwrap_or(0);
    let s = Search { parts: &refs, order, n, depth };
    let mut ts: Vec<Perm> = parts.iter().map(|(_, r)| r.inverse()).collect();
    let mut images = Vec::with_capacity(n);
    for (l, &y) in prefix.iter().enumerate() {
        ts = refs.iter().zip(&ts).map(|((g, _), t)| s.step(g, t, l, y)).collect::<Option<_>>()?;
        images.push(y);
    }
    if !s.dfs(prefix.len(), ts, &mut images) {
        return None;
    }
    let mut x = vec![0; n];
    for (l, &y) in images.iter().enumerate() {
        x[order[l]] = y;
    }
    Some(Perm::from_images(x).expect("search yields a bijection"))
}

fn orbit_under(gens: &[Perm], x: usize) -> Vec<usize> {
    let mut orb = vec![x];
    let mut k = 0;
    while k < orb.len() {
        for g in gens {
            let y = g.apply(orb[k]);
            if !orb.contains(&y) {
                orb.push(y);
            }
        }
        k += 1;
    }
    orb
}

fn intersect_groups_aligned(n: usize, groups: &[PermGroup]) -> PermGroup {
    let Some(first) = groups.first() else {
        return PermGroup::trivial(n);
    };
    let order = first.base_order().to_vec();
    let depth = groups.iter().map(PermGroup::depth).min().unwrap_or(0);
    let parts: Vec<(PermGroup, Perm)> = groups.iter().map(|g| (g.clone(), Perm::identity(n))).collect();
    let mut found: Vec<Perm> = Vec::new();
    for l in (0..depth).rev() {
        let b = order[l];
        let deeper = found.clone();
        let mut orbit = orbit_under(&found, b);
        let mut failed: Vec<usize> = Vec::new();
        let mut cands: Vec<usize> = match groups.iter().map(|g| g.level_orbit(l)).collect::<Option<Vec<_>>>() {
            Some(orbits) => orbits[0].iter().copied().filter(|x| orbits[1..].iter().all(|o| o.contains(x))).collect(),
            None => continue,
        };
        cands.sort_unstable();
        for gamma in cands {
            if orbit.contains(&gamma) || failed.contains(&gamma) {
                continue;
            }
            let mut prefix: Vec<usize> = order[..l].to_vec();
            prefix.push(gamma);
            match find_in_intersection(&parts, &prefix) {
                Some(h) => {
                    found.push(h);
                    orbit = orbit_under(&found, b);
                }
                None => failed.extend(orbit_under(&deeper, gamma)),
            }
        }
    }
    PermGroup::from_strong_generators(n, &order, found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn cyc(n: usize, c: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, c).unwrap()
    }

    fn grp(n: usize, gens: &[Perm]) -> PermGroup {
        PermGroup::from_generators(n, gens).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let one = Coloring::unit(3);
        let c1 = Coset::group(grp(3, &[cyc(3, &[&[0, 1]])]));
        let c2 = Coset::group(grp(3, &[cyc(3, &[&[1, 2]])]));
        let i = coset_intersection(&c1, &c2, &one).unwrap();
        assert_eq!(i.elements(10).unwrap(), vec![Perm::identity(3)]);

        let i = coset_intersection(&c1, &c1, &one).unwrap();
        assert_eq!(i.elements(10), c1.elements(10));

        let shifted = c1.then(&cyc(3, &[&[0, 1]]));
        let i = coset_intersection(&c1, &shifted, &one).unwrap();
        assert_eq!(i.elements(10), c1.elements(10));

        let disjoint = Coset::single(cyc(3, &[&[0, 2]]));
        assert!(coset_intersection(&c1, &disjoint, &one).unwrap().is_empty());
        assert!(coset_intersection(&c1, &Coset::Empty, &one).unwrap().is_empty());
        assert!(coset_intersection(&c1, &c2, &Coloring::unit(4)).is_err());
    }

    #[test]
    fn union_examples() {
        let c1 = Coset::group(grp(3, &[cyc(3, &[&[0, 1]])]));
        assert_eq!(coset_union_as_coset(&[c1.clone()]).elements(10), c1.elements(10));

        let u = coset_union_as_coset(&[Coset::single(Perm::identity(3)), Coset::single(cyc(3, &[&[0, 1]]))]);
        assert_eq!(u.elements(10), c1.elements(10));

        let parts: Vec<Coset> =
            [Perm::identity(3), cyc(3, &[&[0, 2]]), cyc(3, &[&[1, 2]])].iter().map(|r| c1.then(r)).collect();
        let u = coset_union_as_coset(&parts);
        let mut all: Vec<Perm> = parts.iter().flat_map(|p| p.elements(10).unwrap()).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 6);
        assert_eq!(u.elements(10).unwrap(), all);
        assert!(coset_union_as_coset(&[Coset::Empty]).is_empty());
    }

    #[test]
    fn inverse_coset() {
        let c = Coset::group(grp(4, &[cyc(4, &[&[0, 1]])])).then(&cyc(4, &[&[1, 2, 3]]));
        let inv: BTreeSet<Perm> = c.elements(10).unwrap().iter().map(Perm::inverse).collect();
        let got: BTreeSet<Perm> = c.inverse().elements(10).unwrap().into_iter().collect();
        assert_eq!(inv, got);
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
    }

    fn coset_strategy(n: usize) -> impl Strategy<Value = Coset> {
        (proptest::collection::vec(perm_strategy(n), 0..3), perm_strategy(n))
            .prop_map(move |(gens, r)| Coset::Nonempty { group: grp(n, &gens), rep: r })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn intersection_matches_enumeration(a in coset_strategy(6), b in coset_strategy(6), base in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
            let ea: BTreeSet<Perm> = a.elements(1000).unwrap().into_iter().collect();
            let eb: BTreeSet<Perm> = b.elements(1000).unwrap().into_iter().collect();
            let want: Vec<Perm> = ea.intersection(&eb).cloned().collect();
            let got = a.intersect(&b, &base).elements(1000).unwrap();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn group_intersection_matches_enumeration(a in proptest::collection::vec(perm_strategy(6), 0..3), b in proptest::collection::vec(perm_strategy(6), 0..3)) {
            let ga = grp(6, &a);
            let gb = grp(6, &b);
            let ea: BTreeSet<Perm> = ga.elements(1000).unwrap().into_iter().collect();
            let eb: BTreeSet<Perm> = gb.elements(1000).unwrap().into_iter().collect();
            let want: Vec<Perm> = ea.intersection(&eb).cloned().collect();
            let got = intersect_groups(&[ga, gb], &[]).elements(1000).unwrap();
            prop_assert_eq!(got, want);
        }
    }
}
