//! Isomorphism cosets of colored higher-order hypergraphs whose vertex color
//! classes are small, computed block level by block level.
//!
//! For an i-block `A` of `H` and an i-block `A'` of `H'`, the table entry is the
//! coset of color-preserving permutations of the whole vertex set mapping the
//! edges of `A` onto those of `A'` with colors preserved. At the last level the
//! blocks are single edges; above it an entry is assembled from the entries of
//! the child blocks.

use std::collections::HashMap;

use crate::coset::{coset_union_as_coset, intersect_groups, Coset};
use crate::graph::Coloring;
use crate::group::PermGroup;
use crate::hypergraph::{block_hypergraph, member_hypergraph, BlockTable, EdgeColor, HyperEdge, Node, OrderKHypergraph, Shape};
use crate::perm::Perm;

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    /// Start each block matching from the isomorphisms of the member skeletons.
    pub skeleton_pruning: bool,
    /// For order-1 inputs, derive block matchings from the bijections of the next class.
    pub order1_enumeration: bool,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { skeleton_pruning: false, order1_enumeration: false }
    }
}

/// Largest class size for which order-1 levels enumerate class bijections.
const ENUMERATION_LIMIT: usize = 7;

type BlockRef = (usize, usize);
type BlockType = Vec<(EdgeColor, Shape)>;

struct Side<'a> {
    h: &'a OrderKHypergraph,
    table: BlockTable,
    shapes: Vec<Shape>,
}

pub struct IsoEngine<'a> {
    sides: [Side<'a>; 2],
    base: Vec<usize>,
    n: usize,
    m: usize,
    opts: IsoOptions,
    memo: HashMap<(usize, BlockRef, BlockRef), Coset>,
    aut_memo: HashMap<(usize, BlockRef), PermGroup>,
    types: HashMap<(usize, BlockRef), BlockType>,
}

fn same_class_sizes(a: &Coloring, b: &Coloring) -> bool {
    a.n() == b.n()
        && a.num_classes() == b.num_classes()
        && a.classes().iter().zip(b.classes()).all(|(x, y)| x.len() == y.len())
}

fn edge_color_multiset(h: &OrderKHypergraph) -> Vec<&EdgeColor> {
    let mut v: Vec<&EdgeColor> = h.colors().iter().collect();
    v.sort();
    v
}

/// Permutations mapping each class of `src` onto the class of `dst` with the
/// same color and the set `s` onto `t`.
fn set_coset(src: &Coloring, dst: &Coloring, base: &[usize], s: &[usize], t: &[usize]) -> Coset {
    let n = src.n();
    let mut in_s = vec![false; n];
    let mut in_t = vec![false; n];
    for &v in s {
        in_s[v] = true;
    }
    for &v in t {
        in_t[v] = true;
    }
    let mut images = vec![0; n];
    let mut parts = Vec::new();
    for (c, d) in src.classes().iter().zip(dst.classes()) {
        let (a, ac): (Vec<usize>, Vec<usize>) = c.iter().partition(|&&v| in_s[v]);
        let (b, bc): (Vec<usize>, Vec<usize>) = d.iter().partition(|&&v| in_t[v]);
        if a.len() != b.len() {
            return Coset::Empty;
        }
        for (x, y) in a.iter().zip(&b).chain(ac.iter().zip(&bc)) {
            images[*x] = *y;
        }
        parts.push(a);
        parts.push(ac);
    }
    let group = PermGroup::young(n, &parts, base);
    Coset::Nonempty { group, rep: Perm::from_images(images).expect("class-wise bijection") }
}

impl<'a> IsoEngine<'a> {
    pub fn new(h: &'a OrderKHypergraph, h2: &'a OrderKHypergraph, opts: IsoOptions) -> Self {
        let mk = |h: &'a OrderKHypergraph| Side {
            h,
            table: BlockTable::new(h),
            shapes: h.edges().iter().map(|e| e.shape(h.coloring().class_of())).collect(),
        };
        let classes = h.coloring().classes().to_vec();
        let base: Vec<usize> = classes.iter().flatten().copied().collect();
        IsoEngine {
            sides: [mk(h), mk(h2)],
            n: h.n(),
            m: classes.len(),
            base,
            opts,
            memo: HashMap::new(),
            aut_memo: HashMap::new(),
            types: HashMap::new(),
        }
    }

    fn coloring(&self, side: usize) -> &Coloring {
        self.sides[side].h.coloring()
    }

    /// All color-preserving maps from side `a` to side `b`.
    fn color_coset(&self, a: usize, b: usize) -> Coset {
        set_coset(self.coloring(a), self.coloring(b), &self.base, &[], &[])
    }

    fn compatible(&self) -> bool {
        let (a, b) = (self.sides[0].h, self.sides[1].h);
        same_class_sizes(a.coloring(), b.coloring())
            && a.edges().len() == b.edges().len()
            && edge_color_multiset(a) == edge_color_multiset(b)
    }

    /// The full isomorphism coset.
    pub fn run(&mut self) -> Coset {
        if !self.compatible() {
            return Coset::Empty;
        }
        if self.sides[0].h.edges().is_empty() {
            return self.color_coset(0, 1);
        }
        self.level(0, (0, 0), (1, 0))
    }

    fn block_type(&mut self, i: usize, r: BlockRef) -> BlockType {
        if let Some(t) = self.types.get(&(i, r)) {
            return t.clone();
        }
        let side = &self.sides[r.0];
        let mut t: BlockType =
            side.table.levels[i][r.1].iter().map(|&e| (side.h.color(e).clone(), side.shapes[e].clone())).collect();
        t.sort();
        self.types.insert((i, r), t.clone());
        t
    }

    fn children(&self, i: usize, r: BlockRef) -> Vec<BlockRef> {
        self.sides[r.0].table.children(i, r.1).into_iter().map(|b| (r.0, b)).collect()
    }

    /// Table entry for blocks `a` (of side `a.0`) and `b` at level `i`.
    pub fn level(&mut self, i: usize, a: BlockRef, b: BlockRef) -> Coset {
        if let Some(c) = self.memo.get(&(i, a, b)) {
            return c.clone();
        }
        let result = self.compute_level(i, a, b);
        self.memo.insert((i, a, b), result.clone());
        result
    }

    fn compute_level(&mut self, i: usize, a: BlockRef, b: BlockRef) -> Coset {
        if self.block_type(i, a) != self.block_type(i, b) {
            return Coset::Empty;
        }
        if i == self.m {
            let ea = self.sides[a.0].table.levels[i][a.1][0];
            let eb = self.sides[b.0].table.levels[i][b.1][0];
            return self.edge_coset(a.0, ea, b.0, eb);
        }
        let ca = self.children(i, a);
        let cb = self.children(i, b);
        if ca.len() != cb.len() {
            return Coset::Empty;
        }
        if ca.len() == 1 {
            return self.level(i + 1, ca[0], cb[0]);
        }
        let mut ta: Vec<BlockType> = ca.iter().map(|&c| self.block_type(i + 1, c)).collect();
        let mut tb: Vec<BlockType> = cb.iter().map(|&c| self.block_type(i + 1, c)).collect();
        ta.sort();
        tb.sort();
        if ta != tb {
            return Coset::Empty;
        }
        if self.opts.order1_enumeration && self.sides[0].h.order() <= 1 && self.coloring(0).class(i).len() <= ENUMERATION_LIMIT {
            return self.level_by_enumeration(i, &ca, &cb);
        }
        let start = self.start_coset(i, a, b);
        let Some(x) = self.match_blocks(i, start, &ca, &cb) else {
            return Coset::Empty;
        };
        let group = self.block_aut(i, a);
        Coset::Nonempty { group, rep: x }
    }

    fn start_coset(&mut self, i: usize, a: BlockRef, b: BlockRef) -> Coset {
        if !self.opts.skeleton_pruning || self.sides[0].h.order() < 2 {
            return self.color_coset(a.0, b.0);
        }
        let ha = self.sides[a.0].h;
        let hb = self.sides[b.0].h;
        let ya = block_hypergraph(ha, &self.sides[a.0].table.levels[i][a.1], i).map(|x| member_hypergraph(&x));
        let yb = block_hypergraph(hb, &self.sides[b.0].table.levels[i][b.1], i).map(|x| member_hypergraph(&x));
        match (ya, yb) {
            (Ok(ya), Ok(yb)) => IsoEngine::new(&ya, &yb, self.opts).run(),
            _ => self.color_coset(a.0, b.0),
        }
    }

    /// Some element of `start` mapping the blocks `src` onto the blocks `tgt`.
    fn match_blocks(&mut self, i: usize, start: Coset, src: &[BlockRef], tgt: &[BlockRef]) -> Option<Perm> {
        if start.is_empty() {
            return None;
        }
        let Some((&first, rest)) = src.split_first() else {
            return start.representative().cloned();
        };
        let ft = self.block_type(i + 1, first);
        for (k, &t) in tgt.iter().enumerate() {
            if self.block_type(i + 1, t) != ft {
                continue;
            }
            let entry = self.level(i + 1, first, t);
            let next = start.intersect(&entry, &self.base);
            if next.is_empty() {
                continue;
            }
            let mut remaining = tgt.to_vec();
            remaining.remove(k);
            if let Some(x) = self.match_blocks(i, next, rest, &remaining) {
                return Some(x);
            }
        }
        None
    }

    fn block_index_of_image(&self, i: usize, side: usize, blocks: &[BlockRef], f: &Perm, j: usize) -> Option<usize> {
        let s = &self.sides[side];
        let e = s.table.levels[i + 1][blocks[j].1][0];
        let img = s.h.edge_index(s.h.edges()[e].apply(f))?;
        let bi = s.table.block_of[i + 1][img];
        blocks.iter().position(|&(_, b)| b == bi)
    }

    fn block_orbit(&self, i: usize, side: usize, blocks: &[BlockRef], gens: &[Perm], j: usize) -> Vec<usize> {
        let mut orb = vec![j];
        let mut k = 0;
        while k < orb.len() {
            for g in gens {
                if let Some(t) = self.block_index_of_image(i, side, blocks, g, orb[k]) {
                    if !orb.contains(&t) {
                        orb.push(t);
                    }
                }
            }
            k += 1;
        }
        orb
    }

    /// Automorphisms of block `a` at level `i`.
    fn block_aut(&mut self, i: usize, a: BlockRef) -> PermGroup {
        if let Some(g) = self.aut_memo.get(&(i, a)) {
            return g.clone();
        }
        let g = self.compute_block_aut(i, a);
        self.aut_memo.insert((i, a), g.clone());
        g
    }

    fn compute_block_aut(&mut self, i: usize, a: BlockRef) -> PermGroup {
        if i == self.m {
            return match self.level(i, a, a) {
                Coset::Nonempty { group, .. } => group,
                Coset::Empty => unreachable!("a block is isomorphic to itself"),
            };
        }
        let ch = self.children(i, a);
        if ch.len() == 1 {
            return self.block_aut(i + 1, ch[0]);
        }
        let stabilizers: Vec<PermGroup> = ch.iter().map(|&c| self.block_aut(i + 1, c)).collect();
        let mut gens: Vec<Perm> = intersect_groups(&stabilizers, &self.base).generators().to_vec();
        let start = self.start_coset(i, a, a);
        // prefixes[j]: elements of `start` fixing the first j child blocks
        let mut prefixes = vec![start];
        for j in 0..ch.len() {
            let next = prefixes[j].intersect(&Coset::group(stabilizers[j].clone()), &self.base);
            prefixes.push(next);
        }
        let types: Vec<BlockType> = ch.iter().map(|&c| self.block_type(i + 1, c)).collect();
        for j in (0..ch.len()).rev() {
            let deeper = gens.clone();
            let mut orbit = self.block_orbit(i, a.0, &ch, &gens, j);
            let mut failed: Vec<usize> = Vec::new();
            for t in j + 1..ch.len() {
                if types[t] != types[j] || orbit.contains(&t) || failed.contains(&t) {
                    continue;
                }
                let entry = self.level(i + 1, ch[j], ch[t]);
                let c = prefixes[j].intersect(&entry, &self.base);
                let src: Vec<BlockRef> = ch[j + 1..].to_vec();
                let tgt: Vec<BlockRef> = ch[j..].iter().enumerate().filter(|&(k, _)| k + j != t).map(|(_, &b)| b).collect();
                match self.match_blocks(i, c, &src, &tgt) {
                    Some(x) => {
                        gens.push(x);
                        orbit = self.block_orbit(i, a.0, &ch, &gens, j);
                    }
                    None => failed.extend(self.block_orbit(i, a.0, &ch, &deeper, t)),
                }
            }
        }
        PermGroup::with_base(self.n, &gens, &self.base).expect("generators on the common domain")
    }

    /// Order-1 route: every color-preserving bijection of the next class induces
    /// a matching of the child blocks.
    fn level_by_enumeration(&mut self, i: usize, ca: &[BlockRef], cb: &[BlockRef]) -> Coset {
        let class = self.coloring(ca[0].0).class(i).to_vec();
        let class_b = self.coloring(cb[0].0).class(i).to_vec();
        let trace = |eng: &Self, r: BlockRef| -> Vec<usize> {
            let s = &eng.sides[r.0];
            let e = s.table.levels[i + 1][r.1][0];
            let mut t: Vec<usize> = s.h.edges()[e].atoms().into_iter().filter(|&v| s.h.coloring().color(v) == i).collect();
            t.sort_unstable();
            t
        };
        let tra: Vec<Vec<usize>> = ca.iter().map(|&r| trace(self, r)).collect();
        let trb: Vec<Vec<usize>> = cb.iter().map(|&r| trace(self, r)).collect();
        let mut matchings: Vec<Vec<usize>> = Vec::new();
        let mut perm: Vec<usize> = class_b.clone();
        let mut sigma_images = Vec::new();
        permutations(&mut perm, 0, &mut |img: &[usize]| sigma_images.push(img.to_vec()));
        for img in sigma_images {
            let map = |v: usize| img[class.iter().position(|&c| c == v).expect("in class")];
            let mut pi = Vec::with_capacity(ca.len());
            for t in &tra {
                let mut im: Vec<usize> = t.iter().map(|&v| map(v)).collect();
                im.sort_unstable();
                match trb.iter().position(|u| *u == im) {
                    Some(k) => pi.push(k),
                    None => break,
                }
            }
            if pi.len() == ca.len() && !matchings.contains(&pi) {
                matchings.push(pi);
            }
        }
        let mut parts = Vec::new();
        for pi in matchings {
            let mut c = self.color_coset(ca[0].0, cb[0].0);
            for (j, &k) in pi.iter().enumerate() {
                let entry = self.level(i + 1, ca[j], cb[k]);
                c = c.intersect(&entry, &self.base);
                if c.is_empty() {
                    break;
                }
            }
            if !c.is_empty() {
                parts.push(c);
            }
        }
        let u = coset_union_as_coset(&parts);
        match u {
            Coset::Nonempty { group, rep } => Coset::Nonempty { group: group.rebase(&self.base), rep },
            Coset::Empty => Coset::Empty,
        }
    }

    fn edge_coset(&mut self, sa: usize, ea: usize, sb: usize, eb: usize) -> Coset {
        let ha = self.sides[sa].h;
        let hb = self.sides[sb].h;
        if ha.color(ea) != hb.color(eb) || self.sides[sa].shapes[ea] != self.sides[sb].shapes[eb] {
            return Coset::Empty;
        }
        let (e, f) = (ha.edges()[ea], hb.edges()[eb]);
        edge_iso(e, f, ha.coloring(), hb.coloring(), &self.base, self.opts)
    }
}

/// Color-preserving permutations mapping edge `e` onto edge `f`.
fn edge_iso(e: HyperEdge, f: HyperEdge, ce: &Coloring, cf: &Coloring, base: &[usize], opts: IsoOptions) -> Coset {
    match (e.node(), f.node()) {
        (Node::Atom(v), Node::Atom(w)) => set_coset(ce, cf, base, &[v], &[w]),
        (Node::Nested(xe), Node::Nested(xf)) => {
            if xe.len() != xf.len() {
                return Coset::Empty;
            }
            let split = |ch: &[HyperEdge]| -> (Vec<usize>, Vec<HyperEdge>) {
                let mut atoms = Vec::new();
                let mut nested = Vec::new();
                for c in ch {
                    match c.node() {
                        Node::Atom(v) => atoms.push(v),
                        Node::Nested(_) => nested.push(*c),
                    }
                }
                (atoms, nested)
            };
            let (ae, ne) = split(&xe);
            let (af, nf) = split(&xf);
            if ae.len() != af.len() || ne.len() != nf.len() {
                return Coset::Empty;
            }
            if ne.is_empty() {
                return set_coset(ce, cf, base, &ae, &af);
            }
            let members = |coloring: &Coloring, atoms: &[usize], nested: &[HyperEdge]| -> OrderKHypergraph {
                let atom_edge = HyperEdge::set(atoms.iter().copied());
                let mut edges: Vec<(HyperEdge, EdgeColor)> = nested
                    .iter()
                    .map(|&c| (c, EdgeColor::pair(EdgeColor::Int(1), EdgeColor::Int((c == atom_edge) as i64))))
                    .collect();
                if !atoms.is_empty() && !nested.contains(&atom_edge) {
                    edges.push((atom_edge, EdgeColor::pair(EdgeColor::Int(0), EdgeColor::Int(1))));
                }
                OrderKHypergraph::new(coloring.clone(), edges).expect("members are distinct")
            };
            let he = members(ce, &ae, &ne);
            let hf = members(cf, &af, &nf);
            IsoEngine::new(&he, &hf, opts).run()
        }
        _ => Coset::Empty,
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        out(items);
        return;
    }
    for j in k..items.len() {
        items.swap(k, j);
        permutations(items, k + 1, out);
        items.swap(k, j);
    }
}

/// Coset of color-preserving isomorphisms `H → H'`. Both hypergraphs must be on
/// the same vertex index set with matching color ids; `_b` bounds the class size
/// and only affects cost.
pub fn iso_hypergraphs(h: &OrderKHypergraph, h2: &OrderKHypergraph, _b: usize) -> Coset {
    iso_hypergraphs_with(h, h2, IsoOptions::default())
}

pub fn iso_hypergraphs_with(h: &OrderKHypergraph, h2: &OrderKHypergraph, opts: IsoOptions) -> Coset {
    if h.n() != h2.n() {
        return Coset::Empty;
    }
    IsoEngine::new(h, h2, opts).run()
}

pub fn aut_hypergraph(h: &OrderKHypergraph) -> PermGroup {
    match iso_hypergraphs(h, h, h.coloring().max_class_size()) {
        Coset::Nonempty { group, .. } => group,
        Coset::Empty => unreachable!("the identity is an automorphism"),
    }
}

/// Order-1 inputs, with block matchings enumerated from class bijections.
pub fn iso_base_order1(h: &OrderKHypergraph, h2: &OrderKHypergraph, _b: usize) -> Coset {
    iso_hypergraphs_with(h, h2, IsoOptions { skeleton_pruning: false, order1_enumeration: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[usize]) -> HyperEdge {
        HyperEdge::set(vs.iter().copied())
    }

    fn hyp(col: &Coloring, es: &[(HyperEdge, i64)]) -> OrderKHypergraph {
        OrderKHypergraph::new(col.clone(), es.iter().map(|&(e, c)| (e, EdgeColor::Int(c))).collect()).unwrap()
    }

    #[test]
    fn single_edge_symmetry() {
        let col = Coloring::unit(2);
        let h = hyp(&col, &[(set(&[0, 1]), 0)]);
        let c = iso_hypergraphs(&h, &h, 2);
        assert_eq!(c.size(), 2u32.into());
        let h2 = hyp(&col, &[(set(&[0, 1]), 1)]);
        assert!(iso_hypergraphs(&h, &h2, 2).is_empty());
    }

    #[test]
    fn order1_base_examples() {
        let one = Coloring::unit(1);
        let h = hyp(&one, &[]);
        assert_eq!(iso_base_order1(&h, &h, 1).size(), 1u32.into());

        let col = Coloring::unit(2);
        let a = hyp(&col, &[(set(&[0]), 0)]);
        let b = hyp(&col, &[(set(&[1]), 0)]);
        let c = iso_base_order1(&a, &b, 2);
        assert_eq!(c.elements(10).unwrap(), vec![Perm::from_images(vec![1, 0]).unwrap()]);
    }

    #[test]
    fn skeleton_counterexample_pair() {
        // two order-2 edges that agree on every member trace but differ as a whole
        let col = Coloring::from_labels(&[0, 0, 1, 1]);
        let (a, b, p, q) = (0, 1, 2, 3);
        let e1 = HyperEdge::nested([set(&[a, p]), set(&[b, q])]);
        let e2 = HyperEdge::nested([set(&[a, q]), set(&[b, p])]);
        let h = hyp(&col, &[(e1, 0)]);
        let h2 = hyp(&col, &[(e2, 0)]);
        for opts in [IsoOptions::default(), IsoOptions { skeleton_pruning: true, order1_enumeration: false }] {
            let c = iso_hypergraphs_with(&h, &h2, opts);
            let els = c.elements(100).unwrap();
            assert_eq!(els.len(), 2);
            for f in els {
                assert!(h.is_isomorphism(&h2, &f));
            }
        }
    }

    fn check_against_brute(seed: u64, n: usize, k: usize, opts: IsoOptions) {
        use crate::testkit::{brute_hyper_iso, random_hypergraph, random_permutation};
        let h = random_hypergraph(seed, n, k, 3, 4);
        let copy = if seed % 2 == 0 {
            let p = random_permutation(n, seed);
            h.relabel(&p)
        } else {
            random_hypergraph(seed + 1000, n, k, 3, 4)
        };
        if copy.coloring().class_of().len() != n {
            return;
        }
        let want = brute_hyper_iso(&h, &copy).unwrap();
        let got = iso_hypergraphs_with(&h, &copy, opts).elements(100_000).unwrap();
        assert_eq!(got, want, "seed {seed} n {n} k {k}\n{}\n{}", h.describe(), copy.describe());
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..60 {
            for k in 1..=3 {
                check_against_brute(seed, 3 + (seed as usize % 4), k, IsoOptions::default());
            }
        }
    }

    #[test]
    fn pruning_and_enumeration_routes_agree() {
        for seed in 0..30 {
            for k in 1..=3 {
                check_against_brute(seed, 4 + (seed as usize % 3), k, IsoOptions { skeleton_pruning: true, order1_enumeration: false });
            }
            check_against_brute(seed, 5, 1, IsoOptions { skeleton_pruning: false, order1_enumeration: true });
        }
    }
}
