//! Canonical rooted trees of colored interval graphs, their automorphism
//! groups, and boundary hypergraphs of interval closures.
//!
//! The tree is built by a recursive decomposition. A disconnected graph gets a
//! `Union` node, a connected graph with universal vertices a `Universal` node,
//! and otherwise the maximal cliques admit an arrangement of atoms that is
//! unique up to reversal. That arrangement becomes an `Arrangement` node whose
//! two halves hang below interchangeable `Side` nodes, so that reversing the
//! arrangement is a tree automorphism exactly when it is a graph automorphism.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::graph::{boundary_and_closure, components_within, is_subset, maximal_cliques, Coloring, Graph};
use crate::group::PermGroup;
use crate::hypergraph::EdgeColor;
use crate::perm::Perm;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeLabel {
    /// A graph vertex of the given color.
    Leaf(usize),
    Union,
    /// Leaf children are adjacent to every vertex below the node.
    Universal,
    /// Arrangement of `p` atom positions.
    Arrangement(usize),
    Side,
    /// Position counted from the outer end of its side.
    Pos(usize),
    Mid,
    /// Vertex spanning positions `a..=b`, counted from the outer end of its side.
    Span(usize, usize),
    /// Vertex spanning `a..=p+1-a`.
    Centered(usize),
    Empty,
}

impl NodeLabel {
    fn as_color(&self) -> EdgeColor {
        let (k, a, b) = match *self {
            NodeLabel::Leaf(c) => (0, c, 0),
            NodeLabel::Union => (1, 0, 0),
            NodeLabel::Universal => (2, 0, 0),
            NodeLabel::Arrangement(p) => (3, p, 0),
            NodeLabel::Side => (4, 0, 0),
            NodeLabel::Pos(j) => (5, j, 0),
            NodeLabel::Mid => (6, 0, 0),
            NodeLabel::Span(a, b) => (7, a, b),
            NodeLabel::Centered(a) => (8, a, 0),
            NodeLabel::Empty => (9, 0, 0),
        };
        EdgeColor::Tuple(vec![EdgeColor::Int(k), EdgeColor::Int(a as i64), EdgeColor::Int(b as i64)])
    }
}

/// Interned isomorphism type of a rooted labeled subtree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeCode(u32);

#[derive(Default)]
struct CodeTable {
    ids: HashMap<(NodeLabel, Vec<TreeCode>), TreeCode>,
    entries: Vec<(NodeLabel, Vec<TreeCode>)>,
}

fn code_table() -> &'static RwLock<CodeTable> {
    static TABLE: OnceLock<RwLock<CodeTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(CodeTable::default()))
}

fn intern(label: NodeLabel, mut children: Vec<TreeCode>) -> TreeCode {
    children.sort_unstable();
    let key = (label, children);
    if let Some(&c) = code_table().read().expect("code table lock").ids.get(&key) {
        return c;
    }
    let mut t = code_table().write().expect("code table lock");
    if let Some(&c) = t.ids.get(&key) {
        return c;
    }
    let c = TreeCode(t.entries.len() as u32);
    t.entries.push(key.clone());
    t.ids.insert(key, c);
    c
}

impl TreeCode {
    pub fn id(self) -> u32 {
        self.0
    }

    /// Canonical string of the subtree: label followed by the sorted child strings.
    pub fn encoding(self) -> String {
        let (label, children) = code_table().read().expect("code table lock").entries[self.0 as usize].clone();
        let mut s = format!("{label:?}");
        if !children.is_empty() {
            let inner: Vec<String> = children.into_iter().map(TreeCode::encoding).collect();
            s.push('(');
            s.push_str(&inner.join(","));
            s.push(')');
        }
        s
    }
}

impl fmt::Display for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encoding())
    }
}

/// Rooted labeled tree whose leaves are the vertices of an interval graph.
#[derive(Clone, Debug)]
pub struct CanonicalTree {
    labels: Vec<NodeLabel>,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    codes: Vec<TreeCode>,
    leaf_of: Vec<usize>,
    vertex_at: Vec<Option<usize>>,
}

impl CanonicalTree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of leaves, i.e. graph vertices.
    pub fn n(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn label(&self, x: usize) -> &NodeLabel {
        &self.labels[x]
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn code(&self, x: usize) -> TreeCode {
        self.codes[x]
    }

    pub fn root_code(&self) -> TreeCode {
        self.codes[0]
    }

    pub fn leaf(&self, v: usize) -> usize {
        self.leaf_of[v]
    }

    pub fn vertex(&self, x: usize) -> Option<usize> {
        self.vertex_at[x]
    }

    /// Graph vertices below `x`.
    pub fn leaves_below(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            match self.vertex_at[y] {
                Some(v) => out.push(v),
                None => stack.extend(self.children[y].iter().copied()),
            }
        }
        out.sort_unstable();
        out
    }

    fn add(&mut self, label: NodeLabel, parent: Option<usize>) -> usize {
        let x = self.labels.len();
        self.labels.push(label);
        self.children.push(Vec::new());
        self.parent.push(parent);
        self.vertex_at.push(None);
        if let Some(p) = parent {
            self.children[p].push(x);
        }
        x
    }

    /// Edges of the graph encoded by the tree.
    pub fn realize(&self) -> Result<Graph> {
        let mut edges = Vec::new();
        self.realize_below(self.root(), &mut edges);
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Graph::from_edges(self.n(), &edges)
    }

    fn realize_below(&self, x: usize, edges: &mut Vec<(usize, usize)>) -> Vec<usize> {
        if let Some(v) = self.vertex_at[x] {
            return vec![v];
        }
        match self.labels[x] {
            NodeLabel::Universal => {
                let mut all = Vec::new();
                let mut hubs = Vec::new();
                for &c in &self.children[x] {
                    let below = self.realize_below(c, edges);
                    if let Some(v) = self.vertex_at[c] {
                        hubs.push(v);
                    }
                    all.extend(below);
                }
                for &u in &hubs {
                    edges.extend(all.iter().filter(|&&w| w != u).map(|&w| (u, w)));
                }
                all
            }
            NodeLabel::Arrangement(p) => {
                let mut positions: Vec<Vec<usize>> = vec![Vec::new(); p + 1];
                let mut spans: Vec<(usize, usize, usize)> = Vec::new();
                let mut side_index = 0;
                for &c in &self.children[x] {
                    match self.labels[c] {
                        NodeLabel::Side => {
                            let flip = |j: usize| if side_index == 0 { j } else { p + 1 - j };
                            for &d in &self.children[c] {
                                let inner = self.children[d][0];
                                match self.labels[d] {
                                    NodeLabel::Pos(j) => positions[flip(j)] = self.realize_below(inner, edges),
                                    NodeLabel::Span(a, b) => {
                                        let v = self.vertex_at[inner].expect("span wraps a leaf");
                                        let (lo, hi) = if side_index == 0 { (a, b) } else { (flip(b), flip(a)) };
                                        spans.push((v, lo, hi));
                                    }
                                    _ => {}
                                }
                            }
                            side_index += 1;
                        }
                        NodeLabel::Mid => positions[p.div_ceil(2)] = self.realize_below(self.children[c][0], edges),
                        NodeLabel::Centered(a) => {
                            let v = self.vertex_at[self.children[c][0]].expect("span wraps a leaf");
                            spans.push((v, a, p + 1 - a));
                        }
                        _ => {}
                    }
                }
                for (i, &(u, a, b)) in spans.iter().enumerate() {
                    for &(w, c, d) in &spans[i + 1..] {
                        if a <= d && c <= b {
                            edges.push((u, w));
                        }
                    }
                    for pos in &positions[a..=b] {
                        edges.extend(pos.iter().map(|&w| (u, w)));
                    }
                }
                let mut all: Vec<usize> = positions.into_iter().flatten().collect();
                all.extend(spans.iter().map(|s| s.0));
                all
            }
            _ => {
                let mut all = Vec::new();
                for &c in &self.children[x] {
                    all.extend(self.realize_below(c, edges));
                }
                all
            }
        }
    }

    /// Pairs the leaves of the equal-coded subtrees at `x` and `y` of `other`.
    fn match_into(&self, x: usize, other: &CanonicalTree, y: usize, map: &mut [usize]) {
        if let Some(v) = self.vertex_at[x] {
            map[v] = other.vertex_at[y].expect("equal codes");
            return;
        }
        let mut a: Vec<usize> = self.children[x].clone();
        let mut b: Vec<usize> = other.children[y].clone();
        a.sort_by_key(|&c| self.codes[c]);
        b.sort_by_key(|&c| other.codes[c]);
        for (c, d) in a.into_iter().zip(b) {
            self.match_into(c, other, d, map);
        }
    }

    /// Some isomorphism to `other` as a leaf map, if the root codes agree.
    pub fn isomorphism_to(&self, other: &CanonicalTree) -> Option<Perm> {
        if self.root_code() != other.root_code() {
            return None;
        }
        let mut map = vec![0; self.n()];
        self.match_into(self.root(), other, other.root(), &mut map);
        Some(Perm::from_images(map).expect("leaf bijection"))
    }

    /// Leaf restrictions of generators of the tree's automorphism group.
    pub fn automorphism_generators(&self) -> Vec<Perm> {
        let n = self.n();
        let mut gens = Vec::new();
        for x in 0..self.len() {
            let mut groups: BTreeMap<TreeCode, Vec<usize>> = BTreeMap::new();
            for &c in &self.children[x] {
                groups.entry(self.codes[c]).or_default().push(c);
            }
            for same in groups.values().filter(|g| g.len() >= 2) {
                let mut swap: Vec<usize> = (0..n).collect();
                self.match_into(same[0], self, same[1], &mut swap);
                self.match_into(same[1], self, same[0], &mut swap);
                gens.push(Perm::from_images(swap).expect("swap of isomorphic subtrees"));
                if same.len() >= 3 {
                    let mut cycle: Vec<usize> = (0..n).collect();
                    for (k, &c) in same.iter().enumerate() {
                        self.match_into(c, self, same[(k + 1) % same.len()], &mut cycle);
                    }
                    gens.push(Perm::from_images(cycle).expect("cycle of isomorphic subtrees"));
                }
            }
        }
        gens
    }
}

struct Builder<'a> {
    g: &'a Graph,
    colors: &'a [usize],
    tree: CanonicalTree,
}

impl Builder<'_> {
    fn leaf(&mut self, v: usize, parent: Option<usize>) -> usize {
        let x = self.tree.add(NodeLabel::Leaf(self.colors[v]), parent);
        self.tree.vertex_at[x] = Some(v);
        self.tree.leaf_of[v] = x;
        x
    }

    fn build(&mut self, vs: &[usize], parent: Option<usize>) -> Result<usize> {
        if vs.len() == 1 {
            return Ok(self.leaf(vs[0], parent));
        }
        let comps = components_within(self.g, vs);
        if comps.len() > 1 {
            let x = self.tree.add(NodeLabel::Union, parent);
            for c in comps {
                self.build(&c, Some(x))?;
            }
            return Ok(x);
        }
        let view = self.g.induced(vs);
        let k = vs.len();
        let (hubs, rest): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| view.graph.degree(i) + 1 == k);
        if !hubs.is_empty() {
            let x = self.tree.add(NodeLabel::Universal, parent);
            for &i in &hubs {
                self.leaf(view.parent(i), Some(x));
            }
            if !rest.is_empty() {
                let rest: Vec<usize> = rest.iter().map(|&i| view.parent(i)).collect();
                self.build(&rest, Some(x))?;
            }
            return Ok(x);
        }
        let arr = arrangement(&view.graph)?;
        let p = arr.positions.len();
        let x = self.tree.add(NodeLabel::Arrangement(p), parent);
        let sides = [self.tree.add(NodeLabel::Side, Some(x)), self.tree.add(NodeLabel::Side, Some(x))];
        for (j0, members) in arr.positions.iter().enumerate() {
            let j = j0 + 1;
            let slot = match (2 * j).cmp(&(p + 1)) {
                std::cmp::Ordering::Less => self.tree.add(NodeLabel::Pos(j), Some(sides[0])),
                std::cmp::Ordering::Greater => self.tree.add(NodeLabel::Pos(p + 1 - j), Some(sides[1])),
                std::cmp::Ordering::Equal => self.tree.add(NodeLabel::Mid, Some(x)),
            };
            if members.is_empty() {
                self.tree.add(NodeLabel::Empty, Some(slot));
            } else {
                let ws: Vec<usize> = members.iter().map(|&i| view.parent(i)).collect();
                self.build(&ws, Some(slot))?;
            }
        }
        for &(i, a, b) in &arr.spans {
            let wrap = match (a + b).cmp(&(p + 1)) {
                std::cmp::Ordering::Less => self.tree.add(NodeLabel::Span(a, b), Some(sides[0])),
                std::cmp::Ordering::Greater => self.tree.add(NodeLabel::Span(p + 1 - b, p + 1 - a), Some(sides[1])),
                std::cmp::Ordering::Equal => self.tree.add(NodeLabel::Centered(a), Some(x)),
            };
            self.leaf(view.parent(i), Some(wrap));
        }
        Ok(x)
    }
}

/// Top-level arrangement of a connected interval graph without universal vertices.
struct Arrangement {
    /// For each atom position, the vertices whose cliques lie inside that atom.
    positions: Vec<Vec<usize>>,
    /// Vertices of the spanning overlap component with their 1-based atom range.
    spans: Vec<(usize, usize, usize)>,
}

fn overlaps(a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|x| b.binary_search(x).is_ok()) && !is_subset(a, b) && !is_subset(b, a)
}

fn arrangement(g: &Graph) -> Result<Arrangement> {
    let cliques = maximal_cliques(g).map_err(|_| Error::NotInterval)?;
    let n = g.n();
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, q) in cliques.iter().enumerate() {
        for &v in q {
            sets[v].push(c);
        }
    }
    let mut distinct: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (v, s) in sets.iter().enumerate() {
        distinct.entry(s.clone()).or_default().push(v);
    }
    let keys: Vec<Vec<usize>> = distinct.keys().cloned().collect();
    let maximal: Vec<usize> = (0..keys.len())
        .filter(|&i| !(0..keys.len()).any(|j| j != i && is_subset(&keys[i], &keys[j])))
        .collect();
    let start = *maximal.first().ok_or(Error::NotInterval)?;
    let mut in_o = vec![false; keys.len()];
    in_o[start] = true;
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for j in 0..keys.len() {
            if !in_o[j] && overlaps(&keys[i], &keys[j]) {
                in_o[j] = true;
                order.push(j);
                queue.push_back(j);
            }
        }
    }
    if maximal.iter().any(|&i| !in_o[i]) {
        return Err(Error::NotInterval);
    }
    let mut atoms: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        insert_set(&mut atoms, &keys[i])?;
    }
    let mut atom_of = vec![usize::MAX; cliques.len()];
    for (a, atom) in atoms.iter().enumerate() {
        for &c in atom {
            atom_of[c] = a;
        }
    }
    if atom_of.contains(&usize::MAX) {
        return Err(Error::NotInterval);
    }
    let mut positions = vec![Vec::new(); atoms.len()];
    let mut spans = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        let lo = key.iter().map(|&c| atom_of[c]).min().ok_or(Error::NotInterval)?;
        let hi = key.iter().map(|&c| atom_of[c]).max().ok_or(Error::NotInterval)?;
        if in_o[i] {
            let covered: usize = atoms[lo..=hi].iter().map(Vec::len).sum();
            if covered != key.len() {
                return Err(Error::NotInterval);
            }
            spans.extend(distinct[key].iter().map(|&v| (v, lo + 1, hi + 1)));
        } else {
            if lo != hi {
                return Err(Error::NotInterval);
            }
            positions[lo].extend(distinct[key].iter().copied());
        }
    }
    Ok(Arrangement { positions, spans })
}

/// Refines the ordered partition `atoms` so that `b` becomes a consecutive run.
fn insert_set(atoms: &mut Vec<Vec<usize>>, b: &[usize]) -> Result<()> {
    if atoms.is_empty() {
        atoms.push(b.to_vec());
        return Ok(());
    }
    let inb = |c: &usize| b.binary_search(c).is_ok();
    let hits: Vec<usize> = atoms.iter().map(|a| a.iter().filter(|c| inb(c)).count()).collect();
    let touched: Vec<usize> = (0..atoms.len()).filter(|&i| hits[i] > 0).collect();
    let (Some(&i), Some(&k)) = (touched.first(), touched.last()) else {
        return Err(Error::NotInterval);
    };
    let full = |j: usize| hits[j] == atoms[j].len();
    if (i + 1..k).any(|j| !full(j)) {
        return Err(Error::NotInterval);
    }
    let known: Vec<usize> = atoms.iter().flatten().copied().collect();
    let mut fresh: Vec<usize> = b.iter().copied().filter(|c| !known.contains(c)).collect();
    fresh.sort_unstable();
    let last = atoms.len() - 1;
    let split = |a: &[usize]| -> (Vec<usize>, Vec<usize>) { a.iter().partition(|c| inb(c)) };
    if i == k {
        if fresh.is_empty() {
            return Err(Error::NotInterval);
        }
        let (inside, outside) = split(&atoms[i]);
        if atoms.len() == 1 {
            if outside.is_empty() {
                return Err(Error::NotInterval);
            }
            *atoms = vec![outside, inside, fresh];
        } else if i == last {
            let mut next = atoms[..i].to_vec();
            next.extend([outside, inside, fresh].into_iter().filter(|a| !a.is_empty()));
            *atoms = next;
        } else if i == 0 {
            let mut next: Vec<Vec<usize>> = [fresh, inside, outside].into_iter().filter(|a| !a.is_empty()).collect();
            next.extend(atoms[1..].iter().cloned());
            *atoms = next;
        } else {
            return Err(Error::NotInterval);
        }
        return Ok(());
    }
    let grow_right = !fresh.is_empty() && k == last && full(k);
    let grow_left = !fresh.is_empty() && i == 0 && full(i);
    if !fresh.is_empty() && grow_right == grow_left {
        return Err(Error::NotInterval);
    }
    let mut next: Vec<Vec<usize>> = atoms[..i].to_vec();
    if grow_left {
        next.push(fresh.clone());
    }
    let (inside, outside) = split(&atoms[i]);
    next.extend([outside, inside].into_iter().filter(|a| !a.is_empty()));
    next.extend(atoms[i + 1..k].iter().cloned());
    let (inside, outside) = split(&atoms[k]);
    next.extend([inside, outside].into_iter().filter(|a| !a.is_empty()));
    if grow_right {
        next.push(fresh);
    }
    next.extend(atoms[k + 1..].iter().cloned());
    *atoms = next;
    Ok(())
}

/// Canonical tree of `z` whose leaves carry the raw colors `colors[v]`.
pub fn canonical_tree_with(z: &Graph, colors: &[usize]) -> Result<CanonicalTree> {
    let n = z.n();
    if colors.len() != n {
        return Err(Error::DomainMismatch(format!("{} colors for {n} vertices", colors.len())));
    }
    if n == 0 {
        return Err(Error::Precondition("empty graph has no canonical tree".into()));
    }
    let mut b = Builder {
        g: z,
        colors,
        tree: CanonicalTree {
            labels: Vec::new(),
            children: Vec::new(),
            parent: Vec::new(),
            codes: Vec::new(),
            leaf_of: vec![0; n],
            vertex_at: Vec::new(),
        },
    };
    let all: Vec<usize> = (0..n).collect();
    b.build(&all, None)?;
    let mut tree = b.tree;
    tree.codes = vec![TreeCode(0); tree.len()];
    for x in (0..tree.len()).rev() {
        let ch: Vec<TreeCode> = tree.children[x].iter().map(|&c| tree.codes[c]).collect();
        tree.codes[x] = intern(tree.labels[x].clone(), ch);
    }
    if tree.realize()? != *z {
        return Err(Error::NotInterval);
    }
    Ok(tree)
}

/// Canonical tree of the colored interval graph `(z, pi)`.
pub fn canonical_tree(z: &Graph, pi: &Coloring) -> Result<CanonicalTree> {
    canonical_tree_with(z, pi.class_of())
}

pub fn aut_colored_interval(z: &Graph, pi: &Coloring) -> Result<PermGroup> {
    if z.n() == 0 {
        return Ok(PermGroup::trivial(0));
    }
    let t = canonical_tree(z, pi)?;
    PermGroup::from_generators(z.n(), &t.automorphism_generators())
}

/// Some color-preserving isomorphism `z → z2`. Colors are compared by id.
pub fn iso_colored_interval(z: &Graph, pi: &Coloring, z2: &Graph, pi2: &Coloring) -> Result<Option<Perm>> {
    if z.n() != z2.n() {
        return Ok(None);
    }
    if z.n() == 0 {
        return Ok(Some(Perm::identity(0)));
    }
    let t = canonical_tree(z, pi)?;
    let t2 = canonical_tree(z2, pi2)?;
    Ok(t.isomorphism_to(&t2))
}

/// Hypergraph on the boundary of a component whose closure is interval,
/// together with the closure's canonical tree.
#[derive(Clone, Debug)]
pub struct BoundaryHypergraph {
    /// Vertices of the component.
    pub component: Vec<usize>,
    /// Boundary vertices, sorted.
    pub boundary: Vec<usize>,
    /// Closure vertices, sorted; tree leaves are indices into this list.
    pub closure: Vec<usize>,
    /// Edges as sorted boundary vertex lists with colors, sorted.
    pub edges: Vec<(Vec<usize>, EdgeColor)>,
    tree: CanonicalTree,
}

impl BoundaryHypergraph {
    pub fn tree(&self) -> &CanonicalTree {
        &self.tree
    }

    /// Isomorphism type of the colored closure.
    pub fn closure_type(&self) -> TreeCode {
        self.tree.root_code()
    }

    /// Equal as colored hypergraphs on the same vertex set, with isomorphic closures.
    pub fn same_as(&self, other: &BoundaryHypergraph) -> bool {
        self.boundary == other.boundary && self.edges == other.edges && self.closure_type() == other.closure_type()
    }

    /// Image of the edges under the boundary map `g`, or `None` if `g` misses a vertex.
    fn mapped_edges(&self, g: &dyn Fn(usize) -> Option<usize>) -> Option<Vec<(Vec<usize>, EdgeColor)>> {
        let mut out = Vec::with_capacity(self.edges.len());
        for (e, c) in &self.edges {
            let mut img: Vec<usize> = e.iter().map(|&v| g(v)).collect::<Option<_>>()?;
            img.sort_unstable();
            out.push((img, c.clone()));
        }
        out.sort();
        Some(out)
    }

    /// Whether the boundary map `g` is an isomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &BoundaryHypergraph, g: &dyn Fn(usize) -> Option<usize>) -> bool {
        if self.boundary.len() != other.boundary.len() || self.closure_type() != other.closure_type() {
            return false;
        }
        let mut img: Vec<usize> = match self.boundary.iter().map(|&v| g(v)).collect::<Option<Vec<_>>>() {
            Some(i) => i,
            None => return false,
        };
        img.sort_unstable();
        img == other.boundary && self.mapped_edges(g).as_deref() == Some(&other.edges[..])
    }
}

/// `H_Y` for the component `y` of `x` minus the critical set, colored by `pi`.
pub fn boundary_hypergraph(x: &Graph, pi: &Coloring, y: &[usize]) -> Result<BoundaryHypergraph> {
    let (boundary, view) = boundary_and_closure(x, y);
    let colors: Vec<usize> = view.vertices.iter().map(|&v| pi.color(v)).collect();
    let tree = canonical_tree_with(&view.graph, &colors)?;
    let is_boundary: Vec<bool> = view.vertices.iter().map(|v| boundary.binary_search(v).is_ok()).collect();
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); tree.len()];
    let mut depth = vec![0usize; tree.len()];
    for x in 1..tree.len() {
        depth[x] = depth[tree.parent(x).expect("non-root")] + 1;
    }
    for x in (0..tree.len()).rev() {
        if let Some(v) = tree.vertex(x) {
            if is_boundary[v] {
                below[x].push(view.parent(v));
            }
        }
        let mut acc: Vec<usize> = tree.children(x).iter().flat_map(|&c| below[c].iter().copied()).collect();
        acc.sort_unstable();
        below[x].extend(acc);
    }
    let mut chains: BTreeMap<Vec<usize>, Vec<(usize, EdgeColor)>> = BTreeMap::new();
    for x in 0..tree.len() {
        if below[x].is_empty() {
            continue;
        }
        let pruned: Vec<EdgeColor> = tree
            .children(x)
            .iter()
            .filter(|&&c| below[c].is_empty())
            .map(|&c| EdgeColor::Int(tree.code(c).id() as i64))
            .collect();
        let color = EdgeColor::pair(tree.label(x).as_color(), EdgeColor::multiset(pruned));
        chains.entry(below[x].clone()).or_default().push((depth[x], color));
    }
    let edges = chains
        .into_iter()
        .map(|(e, mut chain)| {
            chain.sort_by(|a, b| b.0.cmp(&a.0));
            (e, EdgeColor::Tuple(chain.into_iter().map(|c| c.1).collect()))
        })
        .collect();
    let mut component = y.to_vec();
    component.sort_unstable();
    Ok(BoundaryHypergraph { component, boundary, closure: view.vertices, edges, tree })
}

/// Extends the boundary bijection `g` to an isomorphism of the closures,
/// returned as pairs of vertices of the ambient graph.
pub fn lift_boundary_iso(
    hy: &BoundaryHypergraph,
    hy2: &BoundaryHypergraph,
    g: &dyn Fn(usize) -> Option<usize>,
) -> Result<Vec<(usize, usize)>> {
    if !hy.is_isomorphism(hy2, g) {
        return Err(Error::NotIsomorphism("boundary map does not preserve the boundary hypergraph".into()));
    }
    let (t, t2) = (&hy.tree, &hy2.tree);
    let local2: HashMap<usize, usize> = hy2.closure.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut want: Vec<Option<usize>> = vec![None; t.n()];
    for (i, &v) in hy.closure.iter().enumerate() {
        if hy.boundary.binary_search(&v).is_ok() {
            let w = g(v).ok_or_else(|| Error::NotIsomorphism(format!("{v} has no image")))?;
            want[i] = Some(t2.leaf(local2[&w]));
        }
    }
    let mut map = vec![usize::MAX; t.n()];
    constrained_match(t, t.root(), t2, t2.root(), &want, &mut map)?;
    let pairs: Vec<(usize, usize)> = map.iter().enumerate().map(|(i, &j)| (hy.closure[i], hy2.closure[j])).collect();
    Ok(pairs)
}

fn constrained_match(
    t: &CanonicalTree,
    x: usize,
    t2: &CanonicalTree,
    y: usize,
    want: &[Option<usize>],
    map: &mut [usize],
) -> Result<()> {
    let fail = || Error::NotIsomorphism("boundary map does not extend to the closure".into());
    if t.code(x) != t2.code(y) {
        return Err(fail());
    }
    if let Some(v) = t.vertex(x) {
        if want[v].is_some_and(|leaf| leaf != y) {
            return Err(fail());
        }
        map[v] = t2.vertex(y).expect("equal codes");
        return Ok(());
    }
    let mut free2: Vec<usize> = t2.children(y).to_vec();
    let mut unconstrained = Vec::new();
    for &c in t.children(x) {
        let target = t.leaves_below(c).into_iter().find_map(|v| want[v]);
        match target {
            Some(mut leaf) => {
                while t2.parent(leaf) != Some(y) {
                    leaf = t2.parent(leaf).ok_or_else(fail)?;
                }
                let k = free2.iter().position(|&d| d == leaf).ok_or_else(fail)?;
                free2.remove(k);
                constrained_match(t, c, t2, leaf, want, map)?;
            }
            None => unconstrained.push(c),
        }
    }
    for c in unconstrained {
        let k = free2.iter().position(|&d| t2.code(d) == t.code(c)).ok_or_else(fail)?;
        let d = free2.remove(k);
        constrained_match(t, c, t2, d, want, map)?;
    }
    Ok(())
}
