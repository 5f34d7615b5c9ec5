//! Seeded instance generators and brute-force oracles.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{realize, twin_classes, Coloring, Graph, TreeRepresentation};
use crate::group::PermGroup;
use crate::hypergraph::{EdgeColor, HyperEdge, OrderKHypergraph};
use crate::perm::Perm;

pub const ORACLE_MAX_N: usize = 12;

#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub n: usize,
    pub leaf_bound: usize,
    pub seed: u64,
    pub twinless: bool,
    pub colored: bool,
}

impl GeneratorConfig {
    pub fn new(n: usize, leaf_bound: usize, seed: u64) -> Self {
        GeneratorConfig { n, leaf_bound, seed, twinless: false, colored: false }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub rep: TreeRepresentation,
    pub graph: Graph,
    pub coloring: Coloring,
}

/// Random tree on `size` vertices with at most `max_leaves` leaves.
fn random_tree(rng: &mut ChaCha8Rng, size: usize, max_leaves: usize) -> Graph {
    if size <= 1 || max_leaves <= 1 {
        return Graph::empty(1);
    }
    let mut edges = vec![(0, 1)];
    let mut deg = vec![1usize, 1];
    for v in 2..size {
        let leaves = deg.iter().filter(|&&d| d == 1).count();
        let pick: Vec<usize> = if leaves < max_leaves {
            (0..v).collect()
        } else {
            (0..v).filter(|&u| deg[u] == 1).collect()
        };
        let u = *pick.choose(rng).expect("tree is nonempty");
        edges.push((u, v));
        deg[u] += 1;
        deg.push(1);
    }
    Graph::from_edges(size, &edges).expect("tree edges are valid")
}

/// Connected subtree grown from a random root by random frontier expansion.
fn random_subtree(rng: &mut ChaCha8Rng, tree: &Graph, size: usize) -> Vec<usize> {
    let root = rng.gen_range(0..tree.n());
    let mut bag = vec![root];
    let mut frontier: Vec<usize> = tree.neighbors(root).to_vec();
    while bag.len() < size && !frontier.is_empty() {
        let k = rng.gen_range(0..frontier.len());
        let x = frontier.swap_remove(k);
        if bag.contains(&x) {
            continue;
        }
        bag.push(x);
        frontier.extend(tree.neighbors(x).iter().copied().filter(|y| !bag.contains(y)));
    }
    bag.sort_unstable();
    bag
}

fn draw(rng: &mut ChaCha8Rng, n: usize, leaf_bound: usize) -> TreeRepresentation {
    let size = if leaf_bound <= 1 { 1 } else { rng.gen_range(2..=(n + 2).max(3)) };
    let tree = random_tree(rng, size, leaf_bound.max(1));
    let max_bag = (tree.n() / 2).max(1);
    let bags = (0..n)
        .map(|_| {
            let s = rng.gen_range(1..=max_bag);
            random_subtree(rng, &tree, s)
        })
        .collect();
    TreeRepresentation { tree, root: Some(0), bags }
}

/// Keep one bag per twin class until no twins remain.
fn collapse_twins(mut rep: TreeRepresentation) -> (TreeRepresentation, Graph) {
    loop {
        let g = realize(&rep).expect("generated bags are subtrees");
        let tw = twin_classes(&g).expect("chordal twin classes");
        if tw.num_classes() == g.n() {
            return (rep, g);
        }
        let keep: Vec<usize> = tw.classes().iter().map(|c| c[0]).collect();
        rep.bags = keep.iter().map(|&v| rep.bags[v].clone()).collect();
    }
}

/// Random chordal graph realized from subtrees of a host tree with at most
/// `cfg.leaf_bound` leaves.
pub fn gen_chordal(cfg: &GeneratorConfig) -> (TreeRepresentation, Graph) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rep = draw(&mut rng, cfg.n, cfg.leaf_bound);
    if cfg.twinless {
        return collapse_twins(rep);
    }
    let g = realize(&rep).expect("generated bags are subtrees");
    (rep, g)
}

/// `gen_chordal` plus a random coloring with up to three colors when `cfg.colored`.
pub fn gen_instance(cfg: &GeneratorConfig) -> Instance {
    let (rep, graph) = gen_chordal(cfg);
    let coloring = if cfg.colored {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
        let k = rng.gen_range(1..=3);
        let labels: Vec<usize> = (0..graph.n()).map(|_| rng.gen_range(0..k)).collect();
        Coloring::from_labels(&labels)
    } else {
        Coloring::unit(graph.n())
    };
    Instance { rep, graph, coloring }
}

pub fn random_permutation(n: usize, seed: u64) -> Perm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rng);
    Perm::from_images(v).expect("shuffle is a bijection")
}

struct Matcher<'a> {
    g: &'a Graph,
    h: &'a Graph,
    cg: &'a [usize],
    ch: &'a [usize],
}

impl Matcher<'_> {
    fn ok(&self, map: &[usize], v: usize, w: usize) -> bool {
        if self.cg[v] != self.ch[w] || self.g.degree(v) != self.h.degree(w) {
            return false;
        }
        (0..v).all(|u| map[u] != w && self.g.has_edge(u, v) == self.h.has_edge(map[u], w))
    }

    fn extend(&self, map: &mut Vec<usize>) -> bool {
        let v = map.len();
        if v == self.g.n() {
            return true;
        }
        for w in 0..self.h.n() {
            if self.ok(map, v, w) {
                map.push(w);
                if self.extend(map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge(format!("{n} vertices, oracle limit {ORACLE_MAX_N}")));
    }
    Ok(())
}

/// Exact automorphism group by backtracking.
pub fn brute_aut(g: &Graph, pi: &Coloring) -> Result<PermGroup> {
    let n = g.n();
    check_size(n)?;
    let cols = pi.class_of();
    let m = Matcher { g, h: g, cg: cols, ch: cols };
    let mut gens: Vec<Perm> = Vec::new();
    for j in (0..n).rev() {
        let deeper = gens.clone();
        let orbit_of = |gs: &[Perm], x: usize| PermGroup::from_generators(n, gs).expect("same domain").orbit(x);
        let mut orbit = orbit_of(&gens, j);
        let mut failed: Vec<usize> = Vec::new();
        for t in j + 1..n {
            if orbit.contains(&t) || failed.contains(&t) {
                continue;
            }
            let mut map: Vec<usize> = (0..j).collect();
            if !m.ok(&map, j, t) {
                failed.push(t);
                continue;
            }
            map.push(t);
            if m.extend(&mut map) {
                gens.push(Perm::from_images(map).expect("matcher yields a bijection"));
                orbit = orbit_of(&gens, j);
            } else {
                failed.extend(orbit_of(&deeper, t));
            }
        }
    }
    PermGroup::from_generators(n, &gens)
}

/// Some isomorphism `g → h`, by backtracking.
pub fn brute_iso(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    check_size(g.n().max(h.n()))?;
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let zeros = vec![0; g.n()];
    let m = Matcher { g, h, cg: &zeros, ch: &zeros };
    let mut map = Vec::new();
    Ok(m.extend(&mut map).then_some(map))
}

/// Colored variant of `brute_iso`; colors are compared by id.
pub fn brute_iso_colored(g: &Graph, cg: &Coloring, h: &Graph, ch: &Coloring) -> Result<Option<Vec<usize>>> {
    check_size(g.n().max(h.n()))?;
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let m = Matcher { g, h, cg: cg.class_of(), ch: ch.class_of() };
    let mut map = Vec::new();
    Ok(m.extend(&mut map).then_some(map))
}

/// All isomorphisms `g → h` respecting colors, sorted.
pub fn brute_all_isos(g: &Graph, cg: &Coloring, h: &Graph, ch: &Coloring) -> Result<Vec<Perm>> {
    check_size(g.n().max(h.n()))?;
    let mut out = Vec::new();
    if g.n() != h.n() {
        return Ok(out);
    }
    let m = Matcher { g, h, cg: cg.class_of(), ch: ch.class_of() };
    fn all(m: &Matcher, map: &mut Vec<usize>, out: &mut Vec<Perm>) {
        if map.len() == m.g.n() {
            out.push(Perm::from_images(map.clone()).expect("bijection"));
            return;
        }
        let v = map.len();
        for w in 0..m.h.n() {
            if m.ok(map, v, w) {
                map.push(w);
                all(m, map, out);
                map.pop();
            }
        }
    }
    all(&m, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

/// Interval recognition by definition: chordal with no asteroidal triple.
pub fn is_interval_brute(g: &Graph) -> bool {
    if !crate::graph::is_chordal(g) {
        return false;
    }
    let n = g.n();
    // avoids(a, b, c): a and b are joined by a path outside the closed neighborhood of c
    let avoids = |a: usize, b: usize, c: usize| -> bool {
        let blocked = |v: usize| v == c || g.has_edge(v, c);
        if blocked(a) || blocked(b) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(v) = stack.pop() {
            if v == b {
                return true;
            }
            for &w in g.neighbors(v) {
                if !seen[w] && !blocked(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if avoids(a, b, c) && avoids(a, c, b) && avoids(b, c, a) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every class-preserving bijection that maps `h` onto `h2`.
pub fn brute_hyper_iso(h: &OrderKHypergraph, h2: &OrderKHypergraph) -> Result<Vec<Perm>> {
    let classes = h.coloring().classes();
    let count: BigUint = classes.iter().map(|c| (1..=c.len()).product::<usize>()).map(BigUint::from).product();
    if count > BigUint::from(1_000_000u32) {
        return Err(Error::TooLarge(format!("{count} class-preserving bijections")));
    }
    let n = h.n();
    if h2.n() != n || h2.coloring().num_classes() != classes.len() {
        return Ok(Vec::new());
    }
    if classes.iter().zip(h2.coloring().classes()).any(|(a, b)| a.len() != b.len()) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut images = vec![0; n];
    fn rec(k: usize, classes: &[Vec<usize>], targets: &[Vec<usize>], images: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if k == classes.len() {
            visit(images);
            return;
        }
        let mut t = targets[k].clone();
        permute(&mut t, 0, &mut |p: &[usize]| {
            for (x, y) in classes[k].iter().zip(p) {
                images[*x] = *y;
            }
            rec(k + 1, classes, targets, images, visit);
        });
    }
    fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for j in k..items.len() {
            items.swap(k, j);
            permute(items, k + 1, f);
            items.swap(k, j);
        }
    }
    rec(0, classes, h2.coloring().classes(), &mut images, &mut |imgs: &[usize]| {
        let p = Perm::from_images(imgs.to_vec()).expect("class-wise bijection");
        if h.is_isomorphism(h2, &p) {
            out.push(p);
        }
    });
    out.sort();
    Ok(out)
}

fn random_edge(rng: &mut ChaCha8Rng, n: usize, k: usize) -> HyperEdge {
    if k <= 1 {
        let size = rng.gen_range(1..=3.min(n));
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(rng);
        return HyperEdge::set(vs.into_iter().take(size));
    }
    let size = rng.gen_range(1..=3);
    let mut ch = vec![random_edge(rng, n, k - 1)];
    for _ in 1..size {
        let order = rng.gen_range(0..k);
        ch.push(if order == 0 { HyperEdge::atom(rng.gen_range(0..n)) } else { random_edge(rng, n, order) });
    }
    HyperEdge::nested(ch)
}

/// Random colored hypergraph with edges of order exactly `k`; vertex classes
/// have at most `max_class` vertices.
pub fn random_hypergraph(seed: u64, n: usize, k: usize, max_class: usize, edges: usize) -> OrderKHypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = Vec::with_capacity(n);
    let mut color = 0;
    while labels.len() < n {
        let size = rng.gen_range(1..=max_class.max(1)).min(n - labels.len());
        labels.extend(std::iter::repeat(color).take(size));
        color += 1;
    }
    labels.shuffle(&mut rng);
    let coloring = Coloring::from_labels(&labels);
    let mut es: Vec<(HyperEdge, EdgeColor)> = Vec::new();
    for _ in 0..edges {
        let e = random_edge(&mut rng, n, k);
        if !es.iter().any(|(f, _)| *f == e) {
            es.push((e, EdgeColor::Int(rng.gen_range(0..2))));
        }
    }
    OrderKHypergraph::new(coloring, es).expect("edges are distinct")
}
