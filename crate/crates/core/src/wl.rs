//! Two-dimensional Weisfeiler-Leman refinement.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{components, Coloring, Graph};

/// Coloring of ordered vertex pairs. Diagonal colors occupy `0..num_vertex_colors`.
#[derive(Clone, Debug)]
pub struct PairColoring {
    n: usize,
    colors: Vec<u32>,
    pub round: usize,
    num_colors: usize,
    transpose: Vec<u32>,
}

impl PairColoring {
    pub fn color(&self, u: usize, v: usize) -> u32 {
        self.colors[u * self.n + v]
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    /// Color of `(v,u)` given the color of `(u,v)`.
    pub fn transpose(&self, c: u32) -> u32 {
        self.transpose[c as usize]
    }
}

fn rank<K: Ord + Clone + std::hash::Hash>(keys: &[K]) -> (Vec<u32>, usize) {
    let mut distinct: Vec<K> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    let index: HashMap<&K, u32> = distinct.iter().enumerate().map(|(i, k)| (k, i as u32)).collect();
    (keys.iter().map(|k| index[k]).collect(), distinct.len())
}

/// Stable refinement of `pi`; colors are named by sorted signatures, so they do
/// not depend on the vertex numbering.
pub fn wl_refine(g: &Graph, pi: &Coloring) -> (Coloring, PairColoring) {
    let n = g.n();
    let init: Vec<(u8, usize)> = (0..n * n)
        .map(|k| {
            let (u, v) = (k / n, k % n);
            if u == v {
                (0, pi.color(u))
            } else {
                (1, g.has_edge(u, v) as usize)
            }
        })
        .collect();
    let (mut colors, mut count) = rank(&init);
    let mut round = 0;
    loop {
        let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n * n)
            .map(|k| {
                let (u, v) = (k / n, k % n);
                let mut ms: Vec<(u32, u32)> = (0..n).map(|w| (colors[u * n + w], colors[w * n + v])).collect();
                ms.sort_unstable();
                (colors[k], ms)
            })
            .collect();
        let (next, next_count) = rank(&sigs);
        round += 1;
        colors = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    let mut transpose = vec![0u32; count];
    for u in 0..n {
        for v in 0..n {
            transpose[colors[u * n + v] as usize] = colors[v * n + u];
        }
    }
    let labels: Vec<u32> = (0..n).map(|u| colors[u * n + u]).collect();
    let vertex = Coloring::from_labels(&labels);
    (vertex, PairColoring { n, colors, round, num_colors: count, transpose })
}

/// Equitable (constant class-to-class degrees) and a fixpoint of the refinement.
pub fn check_stable(g: &Graph, pi: &Coloring) -> bool {
    for class in pi.classes() {
        let profile = |d: usize| {
            let mut counts = vec![0usize; pi.num_classes()];
            for &w in g.neighbors(d) {
                counts[pi.color(w)] += 1;
            }
            counts
        };
        let first = profile(class[0]);
        if class[1..].iter().any(|&d| profile(d) != first) {
            return false;
        }
    }
    wl_refine(g, pi).0.same_partition(pi)
}

/// Coloring induced on `delta` (index space of the sorted `delta`). `delta` must
/// be a union of classes or the vertex set of a connected component.
pub fn restrict_stable(g: &Graph, pi: &Coloring, delta: &[usize]) -> Result<Coloring> {
    let mut d = delta.to_vec();
    d.sort_unstable();
    d.dedup();
    let mut member = vec![false; g.n()];
    for &v in &d {
        member[v] = true;
    }
    let union_of_classes = pi.classes().iter().all(|cl| cl.iter().all(|&v| member[v]) || cl.iter().all(|&v| !member[v]));
    let is_component = components(g).iter().any(|c| *c == d);
    if !(union_of_classes || is_component) {
        return Err(Error::Precondition("set is neither a union of classes nor a component".into()));
    }
    Ok(pi.restrict(&d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_is_one_class() {
        let (c, _) = wl_refine(&Graph::complete(5), &Coloring::unit(5));
        assert_eq!(c.num_classes(), 1);
    }

    #[test]
    fn paths() {
        let (c, _) = wl_refine(&Graph::path(4), &Coloring::unit(4));
        assert_eq!(c.classes(), &[vec![0, 3], vec![1, 2]]);
        let (c, _) = wl_refine(&Graph::path(3), &Coloring::unit(3));
        assert_eq!(c.classes(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn stability_checks() {
        let p4 = Graph::path(4);
        let (c, pairs) = wl_refine(&p4, &Coloring::unit(4));
        assert!(check_stable(&p4, &c));
        assert!(!check_stable(&p4, &Coloring::unit(4)));
        assert!(check_stable(&p4, &Coloring::discrete(4)));
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(pairs.transpose(pairs.color(u, v)), pairs.color(v, u));
            }
        }
        // diagonal colors come first
        let max_diag = (0..4).map(|u| pairs.color(u, u)).max().unwrap();
        assert!((0..4).all(|u| (0..4).all(|v| u == v || pairs.color(u, v) > max_diag)));
    }

    #[test]
    fn restriction() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let (c, _) = wl_refine(&g, &Coloring::unit(5));
        let r = restrict_stable(&g, &c, &[0, 1, 2]).unwrap();
        assert_eq!(r.classes(), &[vec![0, 2], vec![1]]);
        let all = restrict_stable(&g, &c, &[0, 1, 2, 3, 4]).unwrap();
        assert!(all.same_partition(&c));
        let one = restrict_stable(&g, &c, c.class(0)).unwrap();
        assert_eq!(one.num_classes(), 1);
        assert!(restrict_stable(&g, &c, &[0, 1]).is_err());
    }
}
