//! Higher-order hyperedges (nested sets over atoms), projections, skeletons,
//! composition, and i-blocks.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::graph::Coloring;
use crate::perm::Perm;

/// Interned hyperedge; structurally equal edges share an id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperEdge(u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(usize),
    Nested(Vec<HyperEdge>),
}

#[derive(Default)]
struct Interner {
    nodes: Vec<(Node, usize)>,
    index: HashMap<Node, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| RwLock::new(Interner::default()))
}

fn intern(node: Node) -> HyperEdge {
    if let Some(&id) = interner().read().expect("interner lock").index.get(&node) {
        return HyperEdge(id);
    }
    let mut w = interner().write().expect("interner lock");
    if let Some(&id) = w.index.get(&node) {
        return HyperEdge(id);
    }
    let order = match &node {
        Node::Atom(_) => 0,
        Node::Nested(ch) => 1 + ch.iter().map(|c| w.nodes[c.0 as usize].1).max().unwrap_or(0),
    };
    let id = w.nodes.len() as u32;
    w.nodes.push((node.clone(), order));
    w.index.insert(node, id);
    HyperEdge(id)
}

/// Recursive structure with atoms kept, for canonical ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKey {
    Atom(usize),
    Set(Vec<EdgeKey>),
}

/// Structure with atoms replaced by their color; children form a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Leaf(usize),
    Set(Vec<Shape>),
}

impl HyperEdge {
    pub fn atom(v: usize) -> Self {
        intern(Node::Atom(v))
    }

    pub fn nested(children: impl IntoIterator<Item = HyperEdge>) -> Self {
        let mut ch: Vec<HyperEdge> = children.into_iter().collect();
        ch.sort_unstable();
        ch.dedup();
        intern(Node::Nested(ch))
    }

    /// Order-1 edge on the given vertices.
    pub fn set(vs: impl IntoIterator<Item = usize>) -> Self {
        HyperEdge::nested(vs.into_iter().map(HyperEdge::atom))
    }

    pub fn node(&self) -> Node {
        interner().read().expect("interner lock").nodes[self.0 as usize].0.clone()
    }

    pub fn order(&self) -> usize {
        interner().read().expect("interner lock").nodes[self.0 as usize].1
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.node(), Node::Atom(_))
    }

    pub fn children(&self) -> Vec<HyperEdge> {
        match self.node() {
            Node::Atom(_) => Vec::new(),
            Node::Nested(ch) => ch,
        }
    }

    /// All atoms reachable from this edge, sorted.
    pub fn atoms(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![*self];
        while let Some(e) = stack.pop() {
            match e.node() {
                Node::Atom(v) => out.push(v),
                Node::Nested(ch) => stack.extend(ch),
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn map_atoms(&self, f: &dyn Fn(usize) -> usize) -> HyperEdge {
        match self.node() {
            Node::Atom(v) => HyperEdge::atom(f(v)),
            Node::Nested(ch) => HyperEdge::nested(ch.iter().map(|c| c.map_atoms(f))),
        }
    }

    pub fn apply(&self, p: &Perm) -> HyperEdge {
        self.map_atoms(&|v| p.apply(v))
    }

    pub fn key(&self) -> EdgeKey {
        match self.node() {
            Node::Atom(v) => EdgeKey::Atom(v),
            Node::Nested(ch) => {
                let mut ks: Vec<EdgeKey> = ch.iter().map(HyperEdge::key).collect();
                ks.sort();
                EdgeKey::Set(ks)
            }
        }
    }

    pub fn shape(&self, class_of: &[usize]) -> Shape {
        match self.node() {
            Node::Atom(v) => Shape::Leaf(class_of[v]),
            Node::Nested(ch) => {
                let mut ks: Vec<Shape> = ch.iter().map(|c| c.shape(class_of)).collect();
                ks.sort();
                Shape::Set(ks)
            }
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKey::Atom(v) => write!(f, "{v}"),
            EdgeKey::Set(ch) => {
                write!(f, "{{")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Debug for HyperEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

impl fmt::Display for HyperEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// Opaque canonical edge color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeColor {
    Int(i64),
    Str(String),
    Tuple(Vec<EdgeColor>),
    Multiset(Vec<EdgeColor>),
}

impl EdgeColor {
    pub fn multiset(mut items: Vec<EdgeColor>) -> Self {
        items.sort();
        EdgeColor::Multiset(items)
    }

    pub fn pair(a: EdgeColor, b: EdgeColor) -> Self {
        EdgeColor::Tuple(vec![a, b])
    }
}

impl Default for EdgeColor {
    fn default() -> Self {
        EdgeColor::Int(0)
    }
}

/// Multiset projection of a hyperedge onto a vertex subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Projection {
    /// an atom outside the subset
    Dropped,
    Atom(usize),
    Multiset(Vec<Projection>),
}

impl Projection {
    /// The same structure as a set at every level.
    pub fn to_edge(&self) -> Option<HyperEdge> {
        match self {
            Projection::Dropped => None,
            Projection::Atom(v) => Some(HyperEdge::atom(*v)),
            Projection::Multiset(ch) => Some(HyperEdge::nested(ch.iter().filter_map(Projection::to_edge))),
        }
    }
}

fn project_with(e: HyperEdge, inside: &[bool], memo: &mut HashMap<HyperEdge, Projection>) -> Projection {
    if let Some(p) = memo.get(&e) {
        return p.clone();
    }
    let p = match e.node() {
        Node::Atom(v) => {
            if inside[v] {
                Projection::Atom(v)
            } else {
                Projection::Dropped
            }
        }
        Node::Nested(ch) => {
            let mut items: Vec<Projection> = ch
                .into_iter()
                .map(|c| project_with(c, inside, memo))
                .filter(|p| *p != Projection::Dropped)
                .collect();
            items.sort();
            Projection::Multiset(items)
        }
    };
    memo.insert(e, p.clone());
    p
}

pub fn project(e: HyperEdge, u: &[usize]) -> Projection {
    let n = e.atoms().into_iter().chain(u.iter().copied()).max().map_or(0, |m| m + 1);
    let mut inside = vec![false; n];
    for &v in u {
        inside[v] = true;
    }
    project_with(e, &inside, &mut HashMap::new())
}

#[derive(Clone, Debug)]
pub struct OrderKHypergraph {
    coloring: Coloring,
    edges: Vec<HyperEdge>,
    colors: Vec<EdgeColor>,
    index: HashMap<HyperEdge, usize>,
}

impl OrderKHypergraph {
    pub fn new(coloring: Coloring, edges: Vec<(HyperEdge, EdgeColor)>) -> Result<Self> {
        let n = coloring.n();
        let mut index = HashMap::new();
        let mut es = Vec::with_capacity(edges.len());
        let mut cs = Vec::with_capacity(edges.len());
        for (e, c) in edges {
            if e.atoms().iter().any(|&v| v >= n) {
                return Err(Error::DomainMismatch(format!("edge {e} mentions a vertex outside 0..{n}")));
            }
            if index.insert(e, es.len()).is_some() {
                return Err(Error::Precondition(format!("duplicate hyperedge {e}")));
            }
            es.push(e);
            cs.push(c);
        }
        Ok(OrderKHypergraph { coloring, edges: es, colors: cs, index })
    }

    /// Like `new`, merging duplicate edges into a multiset color.
    pub fn merged(coloring: Coloring, edges: Vec<(HyperEdge, EdgeColor)>) -> Result<Self> {
        let mut groups: Vec<(HyperEdge, Vec<EdgeColor>)> = Vec::new();
        let mut at: HashMap<HyperEdge, usize> = HashMap::new();
        for (e, c) in edges {
            match at.get(&e) {
                Some(&i) => groups[i].1.push(c),
                None => {
                    at.insert(e, groups.len());
                    groups.push((e, vec![c]));
                }
            }
        }
        let edges = groups
            .into_iter()
            .map(|(e, mut cs)| {
                let c = if cs.len() == 1 { cs.pop().expect("one color") } else { EdgeColor::multiset(cs) };
                (e, c)
            })
            .collect();
        OrderKHypergraph::new(coloring, edges)
    }

    pub fn n(&self) -> usize {
        self.coloring.n()
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn edges(&self) -> &[HyperEdge] {
        &self.edges
    }

    pub fn color(&self, i: usize) -> &EdgeColor {
        &self.colors[i]
    }

    pub fn colors(&self) -> &[EdgeColor] {
        &self.colors
    }

    pub fn edge_index(&self, e: HyperEdge) -> Option<usize> {
        self.index.get(&e).copied()
    }

    /// Maximum order over the edges.
    pub fn order(&self) -> usize {
        self.edges.iter().map(HyperEdge::order).max().unwrap_or(0)
    }

    /// Whether `f` maps the vertex and edge colorings of `self` onto those of `other`.
    pub fn is_isomorphism(&self, other: &OrderKHypergraph, f: &Perm) -> bool {
        if f.len() != self.n() || other.n() != self.n() || self.edges.len() != other.edges.len() {
            return false;
        }
        if (0..self.n()).any(|v| self.coloring.color(v) != other.coloring.color(f.apply(v))) {
            return false;
        }
        self.edges.iter().zip(&self.colors).all(|(e, c)| match other.edge_index(e.apply(f)) {
            Some(j) => other.colors[j] == *c,
            None => false,
        })
    }

    pub fn relabel(&self, f: &Perm) -> OrderKHypergraph {
        let inv = f.inverse();
        let labels: Vec<usize> = (0..self.n()).map(|v| self.coloring.color(inv.apply(v))).collect();
        let coloring = Coloring::from_labels(&labels);
        let edges = self.edges.iter().zip(&self.colors).map(|(e, c)| (e.apply(f), c.clone())).collect();
        OrderKHypergraph::new(coloring, edges).expect("relabeling keeps edges distinct")
    }

    /// Nested-brace listing in canonical order.
    pub fn describe(&self) -> String {
        let mut items: Vec<(EdgeKey, &EdgeColor)> = self.edges.iter().map(HyperEdge::key).zip(&self.colors).collect();
        items.sort();
        items.iter().map(|(k, c)| format!("{k}:{c:?}\n")).collect()
    }
}

/// Members of the edges, each colored by the multiset of colors of the edges containing it.
pub fn skeleton(h: &OrderKHypergraph) -> Result<OrderKHypergraph> {
    if h.order() < 2 {
        return Err(Error::Precondition("skeleton needs order at least 2".into()));
    }
    Ok(member_hypergraph(h))
}

pub(crate) fn member_hypergraph(h: &OrderKHypergraph) -> OrderKHypergraph {
    let mut members: Vec<(HyperEdge, EdgeColor)> = Vec::new();
    for (e, c) in h.edges.iter().zip(&h.colors) {
        for m in e.children() {
            members.push((m, c.clone()));
        }
    }
    let mut by: HashMap<HyperEdge, Vec<EdgeColor>> = HashMap::new();
    let mut order = Vec::new();
    for (m, c) in members {
        by.entry(m).or_insert_with(|| {
            order.push(m);
            Vec::new()
        });
        by.get_mut(&m).expect("inserted").push(c);
    }
    let edges = order.into_iter().map(|m| (m, EdgeColor::multiset(by.remove(&m).expect("present")))).collect();
    OrderKHypergraph::new(h.coloring.clone(), edges).expect("members are distinct")
}

/// `H1 ↑ H2`, where vertex `j` of `h2` stands for edge `j` of `h1`.
pub fn compose(h1: &OrderKHypergraph, h2: &OrderKHypergraph) -> Result<OrderKHypergraph> {
    if h2.n() != h1.edges.len() {
        return Err(Error::DomainMismatch(format!(
            "second hypergraph has {} vertices, first has {} edges",
            h2.n(),
            h1.edges.len()
        )));
    }
    let mut out: Vec<(HyperEdge, EdgeColor)> = Vec::new();
    let mut lifted: HashMap<HyperEdge, usize> = HashMap::new();
    for (k, e) in h2.edges.iter().enumerate() {
        lifted.insert(lift_edge(*e, &h1.edges), k);
    }
    for (e, c1) in h1.edges.iter().zip(&h1.colors) {
        match lifted.get(e) {
            Some(&k) => out.push((*e, EdgeColor::Tuple(vec![EdgeColor::Int(0), c1.clone(), h2.colors[k].clone()]))),
            None => out.push((*e, c1.clone())),
        }
    }
    for (k, e) in h2.edges.iter().enumerate() {
        let up = lift_edge(*e, &h1.edges);
        if h1.edge_index(up).is_some() {
            continue;
        }
        let inner: Vec<EdgeColor> = up.children().iter().filter_map(|m| h1.edge_index(*m)).map(|i| h1.colors[i].clone()).collect();
        out.push((up, EdgeColor::Tuple(vec![EdgeColor::Int(1), EdgeColor::multiset(inner), h2.colors[k].clone()])));
    }
    OrderKHypergraph::new(h1.coloring.clone(), out)
}

fn lift_edge(e: HyperEdge, base: &[HyperEdge]) -> HyperEdge {
    match e.node() {
        Node::Atom(j) => base[j],
        Node::Nested(ch) => HyperEdge::nested(ch.into_iter().map(|c| lift_edge(c, base))),
    }
}

/// Vertices of the first `i` color classes.
fn prefix_mask(h: &OrderKHypergraph, i: usize) -> Vec<bool> {
    (0..h.n()).map(|v| h.coloring.color(v) < i).collect()
}

/// Partition of edge indices into i-blocks, ordered by projection.
pub fn blocks(h: &OrderKHypergraph, i: usize) -> Result<Vec<Vec<usize>>> {
    let m = h.coloring.num_classes();
    if i > m {
        return Err(Error::Precondition(format!("level {i} exceeds the {m} color classes")));
    }
    if i == 0 {
        return Ok(if h.edges.is_empty() { Vec::new() } else { vec![(0..h.edges.len()).collect()] });
    }
    let inside = prefix_mask(h, i);
    let mut memo = HashMap::new();
    let mut keyed: Vec<(Projection, usize)> =
        h.edges.iter().enumerate().map(|(k, &e)| (project_with(e, &inside, &mut memo), k)).collect();
    keyed.sort();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<&Projection> = None;
    for (p, k) in &keyed {
        if last == Some(p) {
            out.last_mut().expect("block started").push(*k);
        } else {
            out.push(vec![*k]);
            last = Some(p);
        }
    }
    for b in &mut out {
        b.sort_unstable();
    }
    Ok(out)
}

/// Block table: for each level, the block id of every edge.
#[derive(Clone, Debug)]
pub struct BlockTable {
    pub levels: Vec<Vec<Vec<usize>>>,
    pub block_of: Vec<Vec<usize>>,
}

impl BlockTable {
    pub fn new(h: &OrderKHypergraph) -> Self {
        let m = h.coloring.num_classes();
        let mut levels = Vec::with_capacity(m + 1);
        let mut block_of = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let bl = if h.edges.is_empty() { Vec::new() } else { blocks(h, i).expect("level in range") };
            let mut of = vec![0; h.edges.len()];
            for (b, es) in bl.iter().enumerate() {
                for &e in es {
                    of[e] = b;
                }
            }
            levels.push(bl);
            block_of.push(of);
        }
        BlockTable { levels, block_of }
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Blocks of level `i+1` inside block `a` of level `i`.
    pub fn children(&self, i: usize, a: usize) -> Vec<usize> {
        let mut ch: Vec<usize> = self.levels[i][a].iter().map(|&e| self.block_of[i + 1][e]).collect();
        ch.sort_unstable();
        ch.dedup();
        ch
    }
}

/// `A[i]`: projections of the block onto the classes with color id `>= i-1` (as sets), colored by
/// the multiset of colors of the edges with that projection.
pub fn block_hypergraph(h: &OrderKHypergraph, block: &[usize], i: usize) -> Result<OrderKHypergraph> {
    let m = h.coloring.num_classes();
    if i > m {
        return Err(Error::Precondition(format!("level {i} exceeds the {m} color classes")));
    }
    let inside: Vec<bool> = (0..h.n()).map(|v| h.coloring.color(v) + 1 >= i).collect();
    let mut memo = HashMap::new();
    let mut items: Vec<(HyperEdge, EdgeColor)> = Vec::new();
    for &k in block {
        let p = project_with(h.edges[k], &inside, &mut memo);
        let e = p.to_edge().unwrap_or_else(|| HyperEdge::nested([]));
        items.push((e, h.colors[k].clone()));
    }
    let mut by: Vec<(HyperEdge, Vec<EdgeColor>)> = Vec::new();
    for (e, c) in items {
        match by.iter_mut().find(|(f, _)| *f == e) {
            Some((_, cs)) => cs.push(c),
            None => by.push((e, vec![c])),
        }
    }
    let edges = by.into_iter().map(|(e, cs)| (e, EdgeColor::multiset(cs))).collect();
    OrderKHypergraph::new(h.coloring.clone(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[usize]) -> HyperEdge {
        HyperEdge::set(vs.iter().copied())
    }

    #[test]
    fn interning_is_structural() {
        let a = HyperEdge::nested([set(&[1, 2]), set(&[0])]);
        let b = HyperEdge::nested([set(&[0]), set(&[2, 1]), set(&[0])]);
        assert_eq!(a, b);
        assert_eq!(a.order(), 2);
        assert_eq!(HyperEdge::atom(3).order(), 0);
        assert_eq!(a.to_string(), "{{0},{1,2}}");
        assert_eq!(a.atoms(), vec![0, 1, 2]);
    }

    #[test]
    fn projection_examples() {
        let (a, b, c) = (0, 1, 2);
        assert_eq!(project(set(&[a, b, c]), &[a, b]), Projection::Multiset(vec![Projection::Atom(a), Projection::Atom(b)]));
        let e = HyperEdge::nested([set(&[a, b]), set(&[b, c])]);
        let bb = Projection::Multiset(vec![Projection::Atom(b)]);
        assert_eq!(project(e, &[b]), Projection::Multiset(vec![bb.clone(), bb]));
        let e = HyperEdge::nested([set(&[a]), set(&[b])]);
        let empty = Projection::Multiset(vec![]);
        assert_eq!(project(e, &[]), Projection::Multiset(vec![empty.clone(), empty]));
    }

    #[test]
    fn skeleton_examples() {
        let col = Coloring::unit(3);
        let e = HyperEdge::nested([set(&[0]), set(&[1, 2])]);
        let h = OrderKHypergraph::new(col.clone(), vec![(e, EdgeColor::Int(0))]).unwrap();
        let s = skeleton(&h).unwrap();
        let mut got: Vec<String> = s.edges().iter().map(|e| e.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["{0}", "{1,2}"]);

        let h1 = OrderKHypergraph::new(col.clone(), vec![(set(&[0, 1]), EdgeColor::Int(0))]).unwrap();
        assert!(skeleton(&h1).is_err());

        let e3 = HyperEdge::nested([HyperEdge::nested([set(&[0])]), HyperEdge::nested([set(&[1])])]);
        let h3 = OrderKHypergraph::new(col, vec![(e3, EdgeColor::Int(0))]).unwrap();
        let s3 = skeleton(&h3).unwrap();
        assert!(s3.edges().iter().all(|e| e.order() == 2));
        assert_eq!(s3.edges().len(), 2);
    }

    #[test]
    fn composition_examples() {
        let col = Coloring::unit(2);
        let ea = set(&[0]);
        let eab = set(&[0, 1]);
        let h1 = OrderKHypergraph::new(col.clone(), vec![(ea, EdgeColor::Int(7)), (eab, EdgeColor::Int(8))]).unwrap();
        let h2 = OrderKHypergraph::new(Coloring::unit(2), vec![(set(&[0, 1]), EdgeColor::Int(9))]).unwrap();
        let h = compose(&h1, &h2).unwrap();
        assert_eq!(h.edges().len(), 3);
        assert_eq!(h.order(), 2);

        let empty = OrderKHypergraph::new(Coloring::unit(2), vec![]).unwrap();
        assert_eq!(compose(&h1, &empty).unwrap().edges(), h1.edges());

        // H2 edge {A} lifts to {{a}}; with {{a}} already in E1 the color gets a leading 0
        let eaa = HyperEdge::nested([ea]);
        let h1 = OrderKHypergraph::new(col, vec![(ea, EdgeColor::Int(1)), (eaa, EdgeColor::Int(2))]).unwrap();
        let h2 = OrderKHypergraph::new(Coloring::unit(2), vec![(set(&[0]), EdgeColor::Int(3))]).unwrap();
        let h = compose(&h1, &h2).unwrap();
        let k = h.edge_index(eaa).unwrap();
        assert_eq!(*h.color(k), EdgeColor::Tuple(vec![EdgeColor::Int(0), EdgeColor::Int(2), EdgeColor::Int(3)]));
        assert_eq!(h.edges().len(), 2);

        assert!(compose(&h1, &OrderKHypergraph::new(Coloring::unit(5), vec![]).unwrap()).is_err());
    }

    #[test]
    fn block_examples() {
        // a=0,b=1 in C1, c=2 in C2
        let col = Coloring::from_labels(&[0, 0, 1]);
        let es = vec![set(&[0, 2]), set(&[1, 2]), set(&[0, 1])];
        let h = OrderKHypergraph::new(col, es.iter().map(|&e| (e, EdgeColor::Int(0))).collect()).unwrap();
        let mut b1 = blocks(&h, 1).unwrap();
        b1.sort();
        assert_eq!(b1, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(blocks(&h, 0).unwrap(), vec![vec![0, 1, 2]]);
        assert!(blocks(&h, 3).is_err());

        let col = Coloring::from_labels(&[1, 1, 0]);
        let h = OrderKHypergraph::new(col, es.iter().map(|&e| (e, EdgeColor::Int(0))).collect()).unwrap();
        let mut b1 = blocks(&h, 1).unwrap();
        b1.sort();
        assert_eq!(b1, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn root_level_is_one_block() {
        let col = Coloring::from_labels(&[0, 1]);
        let h = OrderKHypergraph::new(
            col,
            vec![(HyperEdge::atom(1), EdgeColor::Int(0)), (HyperEdge::nested([set(&[0])]), EdgeColor::Int(0))],
        )
        .unwrap();
        assert_eq!(blocks(&h, 0).unwrap(), vec![vec![0, 1]]);
        assert_eq!(blocks(&h, 1).unwrap().len(), 2);
    }

    #[test]
    fn block_hypergraph_examples() {
        // a=0, b=1, c=2 in three classes
        let col = Coloring::from_labels(&[0, 1, 2]);
        let e1 = HyperEdge::nested([set(&[0, 1]), set(&[1, 2])]);
        let e2 = HyperEdge::nested([set(&[0, 1, 2]), set(&[1])]);
        let h = OrderKHypergraph::new(col, vec![(e1, EdgeColor::Int(1)), (e2, EdgeColor::Int(2))]).unwrap();
        assert_eq!(blocks(&h, 2).unwrap(), vec![vec![0, 1]]);
        let a = block_hypergraph(&h, &[0, 1], 2).unwrap();
        assert_eq!(a.edges().len(), 1);
        assert_eq!(a.edges()[0].to_string(), "{{1},{1,2}}");
        assert_eq!(*a.color(0), EdgeColor::multiset(vec![EdgeColor::Int(1), EdgeColor::Int(2)]));
        let single = block_hypergraph(&h, &[0], 3).unwrap();
        assert_eq!(single.edges()[0].to_string(), "{{},{2}}");
        assert_eq!(block_hypergraph(&h, &[0, 1], 0).unwrap().edges().len(), 2);
    }

    #[test]
    fn block_table_nests() {
        let col = Coloring::from_labels(&[0, 0, 1, 1]);
        let es = [set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1]), set(&[2, 3])];
        let h = OrderKHypergraph::new(col, es.iter().map(|&e| (e, EdgeColor::Int(0))).collect()).unwrap();
        let t = BlockTable::new(&h);
        assert_eq!(t.levels[0].len(), 1);
        assert_eq!(t.levels[2].len(), 5);
        for i in 0..t.depth() {
            for a in 0..t.levels[i].len() {
                let total: usize = t.children(i, a).iter().map(|&b| t.levels[i + 1][b].len()).sum();
                assert_eq!(total, t.levels[i][a].len());
            }
        }
    }
}
