//! Automorphism groups and isomorphisms of chordal graphs: the critical set
//! loop, the hypergraphs on the critical set, lifting, and twin reduction.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{components_within, is_chordal, twin_classes_colored, Coloring, Graph};
use crate::group::PermGroup;
use crate::hypergraph::{compose, EdgeColor, HyperEdge, OrderKHypergraph};
use crate::hyperiso::iso_hypergraphs;
use crate::interval::{aut_colored_interval, boundary_hypergraph, canonical_tree, lift_boundary_iso, BoundaryHypergraph};
use crate::perm::Perm;
use crate::wl::wl_refine;

/// Stable coloring together with its critical set.
#[derive(Clone, Debug)]
pub struct CriticalState {
    pub coloring: Coloring,
    /// Sorted vertices of the classes inducing at most `threshold` cliques.
    pub critical: Vec<usize>,
    pub threshold: usize,
    /// Refinement steps taken by the loop.
    pub iterations: usize,
}

/// Union of the classes `Δ` of `pi` for which `X_Δ` has at most `threshold` components.
pub fn critical_set(x: &Graph, pi: &Coloring, threshold: usize) -> Vec<usize> {
    let mut out: Vec<usize> = pi
        .classes()
        .iter()
        .filter(|class| components_within(x, class).len() <= threshold)
        .flatten()
        .copied()
        .collect();
    out.sort_unstable();
    out
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; n];
    for &v in set {
        inside[v] = true;
    }
    (0..n).filter(|&v| !inside[v]).collect()
}

/// Components of `x - omega`.
pub fn outer_components(x: &Graph, omega: &[usize]) -> Vec<Vec<usize>> {
    let rest = complement(x.n(), omega);
    if rest.is_empty() {
        return Vec::new();
    }
    components_within(x, &rest)
}

fn closure_is_interval(x: &Graph, y: &[usize]) -> bool {
    let (_, view) = crate::graph::boundary_and_closure(x, y);
    canonical_tree(&view.graph, &Coloring::unit(view.graph.n())).is_ok()
}

/// Components of `x - omega` whose closure is not interval.
pub fn noncritical_components(x: &Graph, omega: &[usize]) -> Vec<Vec<usize>> {
    outer_components(x, omega).into_iter().filter(|y| !closure_is_interval(x, y)).collect()
}

/// Splits one class of `pi` by an invariant subset found in the components with
/// non-interval closure. Among all candidate classes the one of least color id
/// that actually splits is used.
pub fn refine_noncritical(x: &Graph, pi: &Coloring, omega: &[usize], threshold: usize) -> Result<Coloring> {
    let bad = noncritical_components(x, omega);
    if bad.is_empty() {
        return Err(Error::Precondition("the critical set is already critical".into()));
    }
    let part = |z: &[usize], c: usize| -> Vec<usize> { z.iter().copied().filter(|&v| pi.color(v) == c).collect() };
    let mut candidates = BTreeSet::new();
    for y in &bad {
        for &v in y {
            if x.is_clique(&part(y, pi.color(v))) {
                candidates.insert(pi.color(v));
            }
        }
    }
    for gamma in candidates {
        let mut gamma0: Vec<usize> = Vec::new();
        for z in &bad {
            let inside = part(z, gamma);
            if !inside.is_empty() && x.is_clique(&inside) {
                gamma0.extend(inside);
            }
        }
        if gamma0.len() < pi.class(gamma).len() {
            let mut in0 = vec![false; x.n()];
            for v in gamma0 {
                in0[v] = true;
            }
            let labels: Vec<(usize, bool)> = (0..x.n()).map(|v| (pi.color(v), in0[v])).collect();
            return Ok(Coloring::from_labels(&labels));
        }
    }
    Err(Error::Deadlock { threshold })
}

/// Refines `pi0` until the critical set is critical.
pub fn critical_loop(x: &Graph, pi0: &Coloring, threshold: usize) -> Result<CriticalState> {
    if threshold == 0 {
        return Err(Error::Precondition("threshold must be positive".into()));
    }
    let mut pi = wl_refine(x, pi0).0;
    let mut iterations = 0;
    loop {
        let critical = critical_set(x, &pi, threshold);
        if noncritical_components(x, &critical).is_empty() {
            return Ok(CriticalState { coloring: pi, critical, threshold, iterations });
        }
        let next = refine_noncritical(x, &pi, &critical, threshold)?;
        pi = wl_refine(x, &next).0;
        iterations += 1;
    }
}

/// Vertex of `H*`: a class of twins of `Δ` in the graph between `Δ` and `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinBlock {
    pub delta: usize,
    pub gamma: usize,
    pub members: Vec<usize>,
}

/// Hypergraph on the twin blocks of the critical classes.
#[derive(Clone, Debug)]
pub struct HStar {
    pub blocks: Vec<TwinBlock>,
    pub hypergraph: OrderKHypergraph,
    /// Sorted critical vertices.
    pub omega: Vec<usize>,
    /// `f[i]`: edge index of the vertex edge of `omega[i]`.
    pub f: Vec<usize>,
}

impl HStar {
    pub fn max_class_size(&self) -> usize {
        self.hypergraph.coloring().max_class_size()
    }

    /// Permutation of the critical set induced by an automorphism of the
    /// hypergraph, as images of the positions in `omega`.
    pub fn induced_on_omega(&self, h: &Perm) -> Option<Vec<usize>> {
        let back: HashMap<usize, usize> = self.f.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let edges = self.hypergraph.edges();
        self.f
            .iter()
            .map(|&e| self.hypergraph.edge_index(edges[e].apply(h)).and_then(|j| back.get(&j).copied()))
            .collect()
    }
}

fn twin_partition(x: &Graph, delta: &[usize], gamma: &[usize], same: bool) -> Vec<Vec<usize>> {
    let mut in_gamma = vec![false; x.n()];
    for &v in gamma {
        in_gamma[v] = true;
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    if same {
        // twins of X_Δ: equal neighborhoods inside Δ apart from each other
        let nb = |v: usize| -> Vec<usize> { x.neighbors(v).iter().copied().filter(|&w| in_gamma[w]).collect() };
        for &d in delta {
            let found = parts.iter_mut().find(|p| {
                let r = p[0];
                let a: Vec<usize> = nb(d).into_iter().filter(|&w| w != r).collect();
                let b: Vec<usize> = nb(r).into_iter().filter(|&w| w != d).collect();
                a == b
            });
            match found {
                Some(p) => p.push(d),
                None => parts.push(vec![d]),
            }
        }
    } else {
        let mut by: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for &d in delta {
            let key: Vec<usize> = x.neighbors(d).iter().copied().filter(|&w| in_gamma[w]).collect();
            by.entry(key).or_default().push(d);
        }
        parts = by.into_values().collect();
    }
    parts.sort();
    parts
}

/// `H*` for a twinless `x`, stable `pi` and critical set `omega`.
pub fn build_hstar(x: &Graph, pi: &Coloring, omega: &[usize]) -> Result<HStar> {
    let mut omega = omega.to_vec();
    omega.sort_unstable();
    let mut in_omega = vec![false; x.n()];
    for &v in &omega {
        in_omega[v] = true;
    }
    let critical_classes: Vec<usize> = (0..pi.num_classes()).filter(|&c| in_omega[pi.class(c)[0]]).collect();
    let mut blocks: Vec<TwinBlock> = Vec::new();
    // block_of[(Δ, Γ)][v] for v ∈ Δ
    let mut block_of: HashMap<(usize, usize), HashMap<usize, usize>> = HashMap::new();
    for &d in &critical_classes {
        for g in 0..pi.num_classes() {
            let parts = twin_partition(x, pi.class(d), pi.class(g), d == g);
            let entry = block_of.entry((d, g)).or_default();
            for p in parts {
                for &v in &p {
                    entry.insert(v, blocks.len());
                }
                blocks.push(TwinBlock { delta: d, gamma: g, members: p });
            }
        }
    }
    let labels: Vec<(usize, usize)> = blocks.iter().map(|b| (b.delta, b.gamma)).collect();
    let coloring = Coloring::from_labels(&labels);
    let mut items: BTreeSet<(HyperEdge, EdgeColor)> = BTreeSet::new();
    let mut vertex_edges = Vec::with_capacity(omega.len());
    for &a in &omega {
        let d = pi.color(a);
        let e = HyperEdge::set((0..pi.num_classes()).map(|g| block_of[&(d, g)][&a]));
        vertex_edges.push(e);
        items.insert((e, EdgeColor::pair(EdgeColor::Int(0), EdgeColor::Int(d as i64))));
    }
    for &a in &omega {
        for &b in x.neighbors(a) {
            if in_omega[b] {
                let (d, g) = (pi.color(a), pi.color(b));
                let e = HyperEdge::set([block_of[&(d, g)][&a], block_of[&(g, d)][&b]]);
                items.insert((e, EdgeColor::pair(EdgeColor::Int(1), EdgeColor::Int(0))));
            }
        }
    }
    let hypergraph = OrderKHypergraph::merged(coloring, items.into_iter().collect())?;
    let f: Vec<usize> = vertex_edges.iter().map(|&e| hypergraph.edge_index(e).expect("vertex edge present")).collect();
    let distinct: BTreeSet<usize> = f.iter().copied().collect();
    if distinct.len() != f.len() {
        return Err(Error::TwinRelation("two critical vertices share their vertex edge".into()));
    }
    Ok(HStar { blocks, hypergraph, omega, f })
}

/// Order-2 hypergraph on the critical set built from the boundary hypergraphs
/// of the outer components.
#[derive(Clone, Debug)]
pub struct HDiamond {
    /// Sorted critical vertices; hypergraph vertex `i` is `omega[i]`.
    pub omega: Vec<usize>,
    pub hypergraph: OrderKHypergraph,
    pub components: Vec<BoundaryHypergraph>,
    /// Classes of components with equal boundary hypergraphs and closure type.
    pub classes: Vec<Vec<usize>>,
}

fn class_key(h: &BoundaryHypergraph) -> (Vec<usize>, Vec<(Vec<usize>, EdgeColor)>, u32) {
    (h.boundary.clone(), h.edges.clone(), h.closure_type().id())
}

pub fn build_hdiamond(x: &Graph, pi: &Coloring, omega: &[usize]) -> Result<HDiamond> {
    let mut omega = omega.to_vec();
    omega.sort_unstable();
    let local: HashMap<usize, usize> = omega.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut components = Vec::new();
    for y in outer_components(x, &omega) {
        let h = boundary_hypergraph(x, pi, &y).map_err(|e| match e {
            Error::NotInterval => Error::Precondition("an outer component has a non-interval closure".into()),
            other => other,
        })?;
        components.push(h);
    }
    let mut grouped: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for (i, h) in components.iter().enumerate() {
        grouped.entry(class_key(h)).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = grouped.into_values().collect();
    let to_edge = |e: &[usize]| HyperEdge::set(e.iter().map(|v| local[v]));
    let mut items: Vec<(HyperEdge, EdgeColor)> = Vec::new();
    for h in &components {
        for (e, c) in &h.edges {
            items.push((to_edge(e), EdgeColor::pair(EdgeColor::Int(1), c.clone())));
        }
    }
    for class in &classes {
        let h = &components[class[0]];
        let e = HyperEdge::nested(h.edges.iter().map(|(e, _)| to_edge(e)));
        let color = EdgeColor::Tuple(vec![
            EdgeColor::Int(2),
            EdgeColor::Int(h.closure_type().id() as i64),
            EdgeColor::Int(class.len() as i64),
        ]);
        items.push((e, color));
    }
    let labels: Vec<usize> = omega.iter().map(|&v| pi.color(v)).collect();
    let hypergraph = OrderKHypergraph::merged(Coloring::from_labels(&labels), items)?;
    Ok(HDiamond { omega, hypergraph, components, classes })
}

/// Automorphisms of `(x, pi)` fixing `omega` pointwise.
pub fn kernel_gdiamond(x: &Graph, pi: &Coloring, omega: &[usize]) -> Result<PermGroup> {
    let n = x.n();
    let rest = complement(n, omega);
    if rest.is_empty() {
        return Ok(PermGroup::trivial(n));
    }
    let mut in_omega = vec![false; n];
    for &v in omega {
        in_omega[v] = true;
    }
    let view = x.induced(&rest);
    let labels: Vec<(usize, Vec<usize>)> = view
        .vertices
        .iter()
        .map(|&v| (pi.color(v), x.neighbors(v).iter().copied().filter(|&w| in_omega[w]).collect()))
        .collect();
    let inner = aut_colored_interval(&view.graph, &Coloring::from_labels(&labels))?;
    let gens: Vec<Perm> = inner
        .generators()
        .iter()
        .map(|g| {
            let mut img: Vec<usize> = (0..n).collect();
            for (i, &v) in view.vertices.iter().enumerate() {
                img[v] = view.parent(g.apply(i));
            }
            Perm::from_images(img).expect("extension by the identity")
        })
        .collect();
    PermGroup::from_generators(n, &gens)
}

/// Extends an automorphism of `H⋄`, given by images of the critical vertices,
/// to a permutation of all vertices preserving every closure.
pub fn lift_boundary_aut(x: &Graph, hd: &HDiamond, gbar: &[usize]) -> Result<Perm> {
    let n = x.n();
    let omega = &hd.omega;
    if gbar.len() != omega.len() {
        return Err(Error::DomainMismatch(format!("{} images for {} critical vertices", gbar.len(), omega.len())));
    }
    let mut img = vec![usize::MAX; n];
    for (i, &v) in omega.iter().enumerate() {
        img[v] = gbar[i];
    }
    let on_omega = |v: usize| -> Option<usize> { omega.binary_search(&v).ok().map(|i| gbar[i]) };
    let mut by_key: HashMap<_, usize> = HashMap::new();
    for (k, class) in hd.classes.iter().enumerate() {
        by_key.insert(class_key(&hd.components[class[0]]), k);
    }
    for class in &hd.classes {
        let h = &hd.components[class[0]];
        let mut boundary: Vec<usize> = h.boundary.iter().map(|&v| on_omega(v)).collect::<Option<_>>().ok_or_else(|| {
            Error::DomainMismatch("boundary outside the critical set".into())
        })?;
        boundary.sort_unstable();
        let mut edges: Vec<(Vec<usize>, EdgeColor)> = h
            .edges
            .iter()
            .map(|(e, c)| {
                let mut m: Vec<usize> = e.iter().map(|&v| on_omega(v).expect("boundary in omega")).collect();
                m.sort_unstable();
                (m, c.clone())
            })
            .collect();
        edges.sort();
        let key = (boundary, edges, h.closure_type().id());
        let target = by_key
            .get(&key)
            .map(|&k| &hd.classes[k])
            .filter(|t| t.len() == class.len())
            .ok_or_else(|| Error::NotIsomorphism("map is not an automorphism of the boundary hypergraphs".into()))?;
        for (&a, &b) in class.iter().zip(target) {
            let pairs = lift_boundary_iso(&hd.components[a], &hd.components[b], &on_omega)?;
            for (u, v) in pairs {
                if img[u] != usize::MAX && img[u] != v {
                    return Err(Error::NotIsomorphism(format!("conflicting images for {u}")));
                }
                img[u] = v;
            }
        }
    }
    if img.contains(&usize::MAX) {
        return Err(Error::NotBijection("some vertex has no image".into()));
    }
    Perm::from_images(img)
}

/// Everything computed for one twinless instance at one threshold.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub state: CriticalState,
    pub hstar: Option<HStar>,
    pub hdiamond: Option<HDiamond>,
}

pub fn decompose(x: &Graph, pi0: &Coloring, threshold: usize) -> Result<Decomposition> {
    let state = critical_loop(x, pi0, threshold)?;
    if state.critical.is_empty() {
        return Ok(Decomposition { state, hstar: None, hdiamond: None });
    }
    let hstar = build_hstar(x, &state.coloring, &state.critical)?;
    let hdiamond = build_hdiamond(x, &state.coloring, &state.critical)?;
    Ok(Decomposition { state, hstar: Some(hstar), hdiamond: Some(hdiamond) })
}

/// `H* ↑ (H⋄)^f`: each critical vertex becomes its vertex edge of `H*`.
pub fn composed_hypergraph(hs: &HStar, hd: &HDiamond) -> Result<OrderKHypergraph> {
    let m = hs.hypergraph.edges().len();
    let mut labels = vec![0usize; m];
    for (i, &e) in hs.f.iter().enumerate() {
        labels[e] = hd.hypergraph.coloring().color(i) + 1;
    }
    let edges: Vec<(HyperEdge, EdgeColor)> = hd
        .hypergraph
        .edges()
        .iter()
        .zip(hd.hypergraph.colors())
        .map(|(e, c)| (e.map_atoms(&|i| hs.f[i]), c.clone()))
        .collect();
    let h2 = OrderKHypergraph::new(Coloring::from_labels(&labels), edges)?;
    compose(&hs.hypergraph, &h2)
}

fn check_automorphism(x: &Graph, pi: &Coloring, g: &Perm) -> Result<()> {
    if g.len() != x.n() || !x.is_automorphism(g.images()) || !pi.is_color_preserving(g.images()) {
        return Err(Error::NotIsomorphism(format!("{g:?} is not a color-preserving automorphism")));
    }
    Ok(())
}

/// Automorphism group of a chordal graph without same-colored twins.
pub fn main_aut_twinless(x: &Graph, pi0: &Coloring, threshold: usize) -> Result<PermGroup> {
    let n = x.n();
    let d = decompose(x, pi0, threshold)?;
    let pi = &d.state.coloring;
    let (Some(hs), Some(hd)) = (&d.hstar, &d.hdiamond) else {
        return aut_colored_interval(x, pi);
    };
    let composed = composed_hypergraph(hs, hd)?;
    let coset = iso_hypergraphs(&composed, &composed, hs.max_class_size());
    let group = coset.underlying_group().ok_or_else(|| Error::Precondition("hypergraph has no identity".into()))?;
    let omega = &d.state.critical;
    let mut gens: Vec<Perm> = kernel_gdiamond(x, pi, omega)?.generators().to_vec();
    for h in group.generators() {
        let pos = hs.induced_on_omega(h).ok_or_else(|| Error::NotIsomorphism("vertex edges not preserved".into()))?;
        let gbar: Vec<usize> = pos.iter().map(|&i| omega[i]).collect();
        for (i, &a) in omega.iter().enumerate() {
            for (j, &b) in omega.iter().enumerate() {
                if x.has_edge(a, b) != x.has_edge(gbar[i], gbar[j]) {
                    return Err(Error::NotIsomorphism("induced map does not preserve the critical subgraph".into()));
                }
            }
        }
        let g = lift_boundary_aut(x, hd, &gbar)?;
        check_automorphism(x, pi, &g)?;
        if !g.is_identity() {
            gens.push(g);
        }
    }
    let out = PermGroup::from_generators(n, &gens)?;
    debug_assert!(out.generators().iter().all(|g| x.is_automorphism(g.images())));
    Ok(out)
}

/// Result of `aut`.
#[derive(Clone, Debug)]
pub struct AutResult {
    pub group: PermGroup,
    /// Largest threshold used by the critical loop.
    pub threshold: usize,
}

/// Thresholds tried when none is given: 2, 4, 8, ... until no deadlock.
fn with_deepening(x: &Graph, pi: &Coloring, threshold: Option<usize>) -> Result<(PermGroup, usize)> {
    if let Some(t) = threshold {
        return Ok((main_aut_twinless(x, pi, t)?, t));
    }
    let mut t = 2;
    loop {
        match main_aut_twinless(x, pi, t) {
            Err(Error::Deadlock { .. }) => t *= 2,
            other => return other.map(|g| (g, t)),
        }
    }
}

/// Quotient of `x` by its classes of same-colored twins.
#[derive(Clone, Debug)]
pub struct TwinQuotient {
    pub graph: Graph,
    pub coloring: Coloring,
    /// Twin classes, sorted; quotient vertex `i` is `classes[i]`.
    pub classes: Vec<Vec<usize>>,
}

pub fn twin_quotient(x: &Graph, pi: &Coloring) -> Result<TwinQuotient> {
    let twins = twin_classes_colored(x, pi)?;
    let mut classes: Vec<Vec<usize>> = twins.classes().to_vec();
    classes.sort();
    let mut of = vec![0; x.n()];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            of[v] = i;
        }
    }
    let mut edges = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        for &w in x.neighbors(c[0]) {
            if of[w] > i {
                edges.push((i, of[w]));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::from_edges(classes.len(), &edges)?;
    let labels: Vec<(usize, usize, bool)> =
        classes.iter().map(|c| (pi.color(c[0]), c.len(), c.len() > 1 && x.is_clique(c))).collect();
    Ok(TwinQuotient { graph, coloring: Coloring::from_labels(&labels), classes })
}

/// Automorphism group of the colored chordal graph `(x, pi0)`.
pub fn aut(x: &Graph, pi0: Option<&Coloring>, threshold: Option<usize>) -> Result<AutResult> {
    if !is_chordal(x) {
        return Err(Error::NotChordal);
    }
    let unit = Coloring::unit(x.n());
    let pi = pi0.unwrap_or(&unit);
    if pi.n() != x.n() {
        return Err(Error::DomainMismatch(format!("coloring of {} vertices for {} vertices", pi.n(), x.n())));
    }
    let (group, used) = aut_reduced(x, pi, threshold)?;
    for g in group.generators() {
        check_automorphism(x, pi, g)?;
    }
    Ok(AutResult { group, threshold: used })
}

fn aut_reduced(x: &Graph, pi: &Coloring, threshold: Option<usize>) -> Result<(PermGroup, usize)> {
    let n = x.n();
    if n == 0 {
        return Ok((PermGroup::trivial(0), threshold.unwrap_or(1)));
    }
    let q = twin_quotient(x, pi)?;
    if q.classes.len() == n {
        return with_deepening(x, pi, threshold);
    }
    let (inner, used) = aut_reduced(&q.graph, &q.coloring, threshold)?;
    let mut gens = Vec::new();
    for c in q.classes.iter().filter(|c| c.len() > 1) {
        gens.push(Perm::transposition(n, c[0], c[1]));
        if c.len() > 2 {
            let mut img: Vec<usize> = (0..n).collect();
            for (k, &v) in c.iter().enumerate() {
                img[v] = c[(k + 1) % c.len()];
            }
            gens.push(Perm::from_images(img)?);
        }
    }
    for h in inner.generators() {
        let mut img = vec![0; n];
        for (i, c) in q.classes.iter().enumerate() {
            for (&a, &b) in c.iter().zip(&q.classes[h.apply(i)]) {
                img[a] = b;
            }
        }
        gens.push(Perm::from_images(img)?);
    }
    Ok((PermGroup::from_generators(n, &gens)?, used))
}

/// Some isomorphism `x → y` of chordal graphs, found as an automorphism of the
/// disjoint union of both graphs, each with an added apex, that swaps the apexes.
pub fn iso(x: &Graph, y: &Graph, threshold: Option<usize>) -> Result<Option<Perm>> {
    if !is_chordal(x) || !is_chordal(y) {
        return Err(Error::NotChordal);
    }
    let n = x.n();
    if n != y.n() || x.edge_count() != y.edge_count() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Perm::identity(0)));
    }
    let apex = |g: &Graph| -> Graph {
        let mut edges = g.edges();
        edges.extend((0..n).map(|v| (v, n)));
        Graph::from_edges(n + 1, &edges).expect("apex edges are valid")
    };
    let u = apex(x).disjoint_union(&apex(y));
    let labels: Vec<usize> = (0..2 * n + 2).map(|v| usize::from(v == n || v == 2 * n + 1)).collect();
    let res = aut(&u, Some(&Coloring::from_labels(&labels)), threshold)?;
    let Some(g) = res.group.transporter(n, 2 * n + 1) else {
        return Ok(None);
    };
    let map: Vec<usize> = (0..n).map(|v| g.apply(v) - (n + 1)).collect();
    if !x.is_isomorphism_to(y, &map) {
        return Err(Error::NotIsomorphism("swap of the union does not restrict to an isomorphism".into()));
    }
    Ok(Some(Perm::from_images(map)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    fn spider() -> Graph {
        graph(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
    }

    fn order(x: &Graph) -> u64 {
        aut(x, None, None).unwrap().group.order().try_into().unwrap()
    }

    #[test]
    fn critical_loop_examples() {
        let k3 = Graph::complete(3);
        let s = critical_loop(&k3, &Coloring::unit(3), 2).unwrap();
        assert_eq!(s.critical, vec![0, 1, 2]);

        let p4 = Graph::path(4);
        let s = critical_loop(&p4, &Coloring::unit(4), 2).unwrap();
        assert!(s.coloring.same_partition(&Coloring::from_labels(&[0, 1, 1, 0])));
        assert_eq!(s.critical, vec![0, 1, 2, 3]);

        let s = critical_loop(&spider(), &Coloring::unit(7), 3).unwrap();
        assert!(noncritical_components(&spider(), &s.critical).is_empty());
    }

    #[test]
    fn deadlock_with_small_threshold() {
        let r = critical_loop(&spider(), &Coloring::unit(7), 1);
        match r {
            Err(Error::Deadlock { threshold: 1 }) => {}
            Ok(s) => assert!(noncritical_components(&spider(), &s.critical).is_empty()),
            Err(e) => panic!("{e}"),
        }
        let pi = wl_refine(&spider(), &Coloring::unit(7)).0;
        assert!(matches!(refine_noncritical(&Graph::path(3), &Coloring::unit(3), &[0, 1, 2], 2), Err(Error::Precondition(_))));
        let _ = pi;
    }

    #[test]
    fn hstar_of_p4() {
        let p4 = Graph::path(4);
        let pi = Coloring::from_labels(&[0, 1, 1, 0]);
        let hs = build_hstar(&p4, &pi, &[0, 1, 2, 3]).unwrap();
        assert_eq!(hs.blocks.len(), 6);
        assert_eq!(hs.hypergraph.n(), 6);
        let single = build_hstar(&Graph::empty(1), &Coloring::unit(1), &[0]).unwrap();
        assert_eq!(single.hypergraph.n(), 1);
        assert_eq!(single.f.len(), 1);
    }

    #[test]
    fn small_orders() {
        assert_eq!(order(&Graph::path(4)), 2);
        assert_eq!(order(&spider()), 6);
        assert_eq!(order(&Graph::complete(5)), 120);
        let k4_minus = graph(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(order(&k4_minus), 4);
        let two_triangles = Graph::complete(3).disjoint_union(&Graph::complete(3));
        assert_eq!(order(&two_triangles), 72);
    }

    #[test]
    fn hdiamond_trivial_when_all_critical() {
        let p4 = Graph::path(4);
        let pi = Coloring::from_labels(&[0, 1, 1, 0]);
        let hd = build_hdiamond(&p4, &pi, &[0, 1, 2, 3]).unwrap();
        assert!(hd.hypergraph.edges().is_empty());
        assert!(kernel_gdiamond(&p4, &pi, &[0, 1, 2, 3]).unwrap().is_trivial());
    }

    #[test]
    fn iso_examples() {
        let p4 = Graph::path(4);
        let claw = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(iso(&p4, &claw, None).unwrap().is_none());
        let q = p4.relabel(&[2, 0, 3, 1]);
        let m = iso(&p4, &q, None).unwrap().unwrap();
        assert!(p4.is_isomorphism_to(&q, m.images()));
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(matches!(iso(&c4, &c4, None), Err(Error::NotChordal)));
    }

    #[test]
    fn orders_match_brute_force() {
        use crate::testkit::{brute_aut, gen_instance, GeneratorConfig};
        for seed in 0..240u64 {
            let mut cfg = GeneratorConfig::new(4 + (seed % 7) as usize, 2 + (seed % 3) as usize, seed);
            cfg.twinless = seed % 2 == 0;
            cfg.colored = seed % 4 < 2;
            let inst = gen_instance(&cfg);
            let got = aut(&inst.graph, Some(&inst.coloring), None)
                .unwrap_or_else(|e| panic!("seed {seed}: {e}"))
                .group
                .order();
            let want = brute_aut(&inst.graph, &inst.coloring).unwrap().order();
            assert_eq!(got, want, "seed {seed}");
        }
    }
}
