//! Simple undirected graphs, vertex colorings, and the structural
//! helpers used throughout the pipeline.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect();
        Graph { adj }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Graph on the same vertices with `p` applied: edge `{u,v}` becomes `{p[u],p[v]}`.
    pub fn relabel(&self, p: &[usize]) -> Graph {
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (p[u], p[v])).collect();
        Graph::from_edges(self.n(), &edges).expect("relabeling keeps edges valid")
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut edges = self.edges();
        edges.extend(other.edges().into_iter().map(|(u, v)| (u + off, v + off)));
        Graph::from_edges(off + other.n(), &edges).expect("union edges are valid")
    }

    pub fn induced(&self, vertices: &[usize]) -> InducedView {
        InducedView::new(self, vertices, |_, _| true)
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Whether `p` maps edges onto edges.
    pub fn is_automorphism(&self, p: &[usize]) -> bool {
        p.len() == self.n() && self.edges().iter().all(|&(u, v)| self.has_edge(p[u], p[v]))
    }

    /// Whether `p: V(self) -> V(other)` is an isomorphism.
    pub fn is_isomorphism_to(&self, other: &Graph, p: &[usize]) -> bool {
        self.n() == other.n()
            && self.edge_count() == other.edge_count()
            && p.len() == self.n()
            && is_bijection(p)
            && self.edges().iter().all(|&(u, v)| other.has_edge(p[u], p[v]))
    }
}

pub(crate) fn is_bijection(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Ordered partition of `0..n` into color classes with dense ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Coloring {
    pub fn unit(n: usize) -> Self {
        Coloring::from_labels(&vec![0u8; n])
    }

    pub fn discrete(n: usize) -> Self {
        Coloring::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// Colors numbered by the sorted order of the distinct labels.
    pub fn from_labels<T: Ord + Clone>(labels: &[T]) -> Self {
        let mut distinct: Vec<T> = labels.to_vec();
        distinct.sort();
        distinct.dedup();
        let class_of: Vec<usize> = labels
            .iter()
            .map(|l| distinct.binary_search(l).expect("label present"))
            .collect();
        let mut classes = vec![Vec::new(); distinct.len()];
        for (v, &c) in class_of.iter().enumerate() {
            classes[c].push(v);
        }
        Coloring { class_of, classes }
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn color(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Every class of `self` lies inside one class of `coarser`.
    pub fn refines(&self, coarser: &Coloring) -> bool {
        self.classes.iter().all(|cl| cl.iter().all(|&v| coarser.color(v) == coarser.color(cl[0])))
    }

    /// Same partition, ignoring color ids.
    pub fn same_partition(&self, other: &Coloring) -> bool {
        self.n() == other.n()
            && self.num_classes() == other.num_classes()
            && self.refines(other)
    }

    /// Coloring of the index space of `vs` (position `i` gets the color of `vs[i]`),
    /// renumbered densely in the original color order.
    pub fn restrict(&self, vs: &[usize]) -> Coloring {
        let labels: Vec<usize> = vs.iter().map(|&v| self.class_of[v]).collect();
        Coloring::from_labels(&labels)
    }

    pub fn is_color_preserving(&self, p: &[usize]) -> bool {
        p.iter().enumerate().all(|(v, &w)| self.class_of[v] == self.class_of[w])
    }

    /// Common refinement; colors ordered by `(self, other)`.
    pub fn meet(&self, other: &Coloring) -> Coloring {
        let labels: Vec<(usize, usize)> = (0..self.n()).map(|v| (self.color(v), other.color(v))).collect();
        Coloring::from_labels(&labels)
    }
}

/// Host tree with one subtree ("bag") per graph vertex.
#[derive(Clone, Debug)]
pub struct TreeRepresentation {
    pub tree: Graph,
    pub root: Option<usize>,
    pub bags: Vec<Vec<usize>>,
}

impl TreeRepresentation {
    /// Number of leaves of the host tree (a single vertex counts as one leaf).
    pub fn leaf_bound(&self) -> usize {
        let t = &self.tree;
        if t.n() <= 1 {
            return t.n();
        }
        (0..t.n()).filter(|&v| t.degree(v) == 1).count()
    }

    fn validate(&self) -> Result<()> {
        let t = &self.tree;
        if t.n() == 0 {
            return Err(Error::InvalidRepresentation("empty host tree".into()));
        }
        if t.edge_count() + 1 != t.n() || components(t).len() != 1 {
            return Err(Error::InvalidRepresentation("host graph is not a tree".into()));
        }
        for (v, bag) in self.bags.iter().enumerate() {
            if bag.is_empty() || bag.iter().any(|&x| x >= t.n()) {
                return Err(Error::InvalidRepresentation(format!("bag {v} is empty or out of range")));
            }
            if components(&t.induced(bag).graph).len() != 1 {
                return Err(Error::InvalidRepresentation(format!("bag {v} does not induce a subtree")));
            }
        }
        Ok(())
    }
}

/// Intersection graph of the bags.
pub fn realize(rep: &TreeRepresentation) -> Result<Graph> {
    rep.validate()?;
    let m = rep.tree.n();
    let marks: Vec<Vec<bool>> = rep
        .bags
        .iter()
        .map(|b| {
            let mut row = vec![false; m];
            for &x in b {
                row[x] = true;
            }
            row
        })
        .collect();
    let n = rep.bags.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rep.bags[v].iter().any(|&x| marks[u][x]) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Subgraph induced (or filtered) on a vertex subset, with index maps.
#[derive(Clone, Debug)]
pub struct InducedView {
    pub graph: Graph,
    /// local index -> parent vertex (sorted ascending)
    pub vertices: Vec<usize>,
    local: BTreeMap<usize, usize>,
}

impl InducedView {
    fn new(parent: &Graph, vertices: &[usize], keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let local: BTreeMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &u) in vs.iter().enumerate() {
            for &w in parent.neighbors(u) {
                if let Some(&j) = local.get(&w) {
                    if i < j && keep(u, w) {
                        edges.push((i, j));
                    }
                }
            }
        }
        let graph = Graph::from_edges(vs.len(), &edges).expect("induced edges are valid");
        InducedView { graph, vertices: vs, local }
    }

    pub fn local(&self, parent_vertex: usize) -> Option<usize> {
        self.local.get(&parent_vertex).copied()
    }

    pub fn parent(&self, local: usize) -> usize {
        self.vertices[local]
    }
}

/// Lexicographic BFS order (first visited first).
pub fn lex_bfs(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| labels[a].cmp(&labels[b]).then(b.cmp(&a)))
            .expect("unvisited vertex remains");
        visited[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !visited[w] {
                labels[w].push(n - step);
            }
        }
    }
    order
}

/// Perfect elimination ordering, if one exists.
pub fn perfect_elimination_order(g: &Graph) -> Option<Vec<usize>> {
    let mut order = lex_bfs(g);
    order.reverse();
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for &v in &order {
        let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        if let Some(&parent) = later.iter().min_by_key(|&&w| pos[w]) {
            if later.iter().any(|&w| w != parent && !g.has_edge(parent, w)) {
                return None;
            }
        }
    }
    Some(order)
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_order(g).is_some()
}

/// Maximal cliques of a chordal graph, each sorted, in sorted order.
pub fn maximal_cliques(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let order = perfect_elimination_order(g).ok_or(Error::NotChordal)?;
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut cands: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            let mut c: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]).collect();
            c.push(v);
            c.sort_unstable();
            c
        })
        .collect();
    cands.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    cands.dedup();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for c in cands {
        if !out.iter().any(|big| is_subset(&c, big)) {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

pub fn is_interval(g: &Graph) -> bool {
    g.n() == 0 || crate::interval::canonical_tree(g, &Coloring::unit(g.n())).is_ok()
}

/// Connected components, each sorted, ordered by minimum vertex.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Components of the subgraph induced by `vs`, in parent vertex ids.
pub fn components_within(g: &Graph, vs: &[usize]) -> Vec<Vec<usize>> {
    let view = g.induced(vs);
    components(&view.graph)
        .into_iter()
        .map(|c| c.into_iter().map(|i| view.parent(i)).collect())
        .collect()
}

/// `u` and `v` have the same neighbors apart from each other.
pub fn are_twins(g: &Graph, u: usize, v: usize) -> bool {
    let a = g.neighbors(u).iter().filter(|&&w| w != v);
    let b = g.neighbors(v).iter().filter(|&&w| w != u);
    a.eq(b)
}

/// Maximal classes of pairwise twins.
pub fn twin_classes(g: &Graph) -> Result<Coloring> {
    twin_classes_colored(g, &Coloring::unit(g.n()))
}

/// Twin classes restricted to vertices of equal color.
pub fn twin_classes_colored(g: &Graph, pi: &Coloring) -> Result<Coloring> {
    let n = g.n();
    let mut rep: Vec<usize> = (0..n).collect();
    for v in 0..n {
        for u in 0..v {
            if rep[u] == u && pi.color(u) == pi.color(v) && are_twins(g, u, v) {
                rep[v] = u;
                break;
            }
        }
    }
    let coloring = Coloring::from_labels(&rep);
    for v in 0..n {
        for u in 0..v {
            if coloring.color(u) != coloring.color(v) && pi.color(u) == pi.color(v) && are_twins(g, u, v) {
                return Err(Error::TwinRelation(format!("{u} and {v} are twins in different classes")));
            }
        }
    }
    for class in coloring.classes() {
        for (i, &a) in class.iter().enumerate() {
            for &b in &class[i + 1..] {
                if !are_twins(g, a, b) {
                    return Err(Error::TwinRelation(format!("{a} and {b} share a twin but are not twins")));
                }
            }
        }
        if !(g.is_clique(class) || g.is_independent(class)) {
            return Err(Error::TwinRelation(format!("class {class:?} is neither complete nor empty")));
        }
    }
    Ok(coloring)
}

/// Vertices outside `delta` adjacent to it, and the induced subgraph on both.
pub fn boundary_and_closure(g: &Graph, delta: &[usize]) -> (Vec<usize>, InducedView) {
    let mut inside = vec![false; g.n()];
    for &v in delta {
        inside[v] = true;
    }
    let mut boundary: Vec<usize> = delta
        .iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .filter(|&w| !inside[w])
        .collect();
    boundary.sort_unstable();
    boundary.dedup();
    let mut all = delta.to_vec();
    all.extend_from_slice(&boundary);
    (boundary, g.induced(&all))
}

/// Graph on `delta ∪ gamma` keeping only edges with one end in each set.
pub fn bipartite_between(g: &Graph, delta: &[usize], gamma: &[usize]) -> InducedView {
    let mut in_d = vec![false; g.n()];
    let mut in_g = vec![false; g.n()];
    for &v in delta {
        in_d[v] = true;
    }
    for &v in gamma {
        in_g[v] = true;
    }
    let mut all = delta.to_vec();
    all.extend_from_slice(gamma);
    InducedView::new(g, &all, |u, w| (in_d[u] && in_g[w]) || (in_g[u] && in_d[w]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn realize_examples() {
        let rep = TreeRepresentation { tree: Graph::empty(1), root: Some(0), bags: vec![vec![0]; 3] };
        assert_eq!(realize(&rep).unwrap(), Graph::complete(3));

        let rep = TreeRepresentation { tree: Graph::path(2), root: None, bags: vec![vec![0], vec![1]] };
        assert_eq!(realize(&rep).unwrap().edge_count(), 0);

        let rep = TreeRepresentation {
            tree: Graph::path(3),
            root: None,
            bags: vec![vec![0, 1], vec![1, 2], vec![2]],
        };
        assert_eq!(realize(&rep).unwrap().edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn realize_rejects_disconnected_bag() {
        let rep = TreeRepresentation { tree: Graph::path(3), root: None, bags: vec![vec![0, 2]] };
        assert!(matches!(realize(&rep), Err(Error::InvalidRepresentation(_))));
    }

    #[test]
    fn chordality() {
        assert!(!is_chordal(&cycle(4)));
        assert!(is_chordal(&Graph::path(6)));
        let k4e = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(is_chordal(&k4e));
        assert!(!is_chordal(&cycle(5)));
    }

    #[test]
    fn component_order() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(components(&g), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(components(&Graph::empty(3)), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(components(&Graph::path(4)).len(), 1);
    }

    #[test]
    fn twins() {
        // K4 minus {2,3}
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(twin_classes(&g).unwrap().classes(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(twin_classes(&Graph::path(4)).unwrap().num_classes(), 4);
        assert_eq!(twin_classes(&Graph::complete(3)).unwrap().num_classes(), 1);
    }

    #[test]
    fn closure_and_bipartite() {
        let p4 = Graph::path(4);
        let (b, view) = boundary_and_closure(&p4, &[0, 1]);
        assert_eq!(b, vec![2]);
        assert_eq!(view.vertices, vec![0, 1, 2]);
        let (b, _) = boundary_and_closure(&p4, &[0, 1, 2, 3]);
        assert!(b.is_empty());
        let (b, view) = boundary_and_closure(&p4, &[]);
        assert!(b.is_empty() && view.vertices.is_empty());

        let bi = bipartite_between(&p4, &[0, 3], &[1, 2]);
        let edges: Vec<_> = bi.graph.edges().iter().map(|&(u, v)| (bi.parent(u), bi.parent(v))).collect();
        assert_eq!(edges, vec![(0, 1), (2, 3)]);
        let all = [0, 1, 2, 3];
        assert_eq!(bipartite_between(&p4, &all, &all).graph, p4);
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(bipartite_between(&g, &[0], &[2]).graph.edge_count(), 0);
    }

    #[test]
    fn maximal_cliques_of_chordal() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(maximal_cliques(&g).unwrap(), vec![vec![0, 1, 2], vec![2, 3], vec![3, 4]]);
        assert!(maximal_cliques(&cycle(4)).is_err());
    }

    #[test]
    fn coloring_basics() {
        let c = Coloring::from_labels(&["b", "a", "b"]);
        assert_eq!(c.classes(), &[vec![1], vec![0, 2]]);
        assert!(Coloring::discrete(3).refines(&c));
        assert!(!c.refines(&Coloring::discrete(3)));
        assert_eq!(c.restrict(&[0, 2]).num_classes(), 1);
    }
}
