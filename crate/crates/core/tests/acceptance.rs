//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use chordiso::graph::{components_within, Coloring, Graph};
use chordiso::hypergraph::OrderKHypergraph;
use chordiso::hyperiso::{aut_hypergraph, iso_hypergraphs};
use chordiso::interval::{boundary_hypergraph, canonical_tree, iso_colored_interval, aut_colored_interval};
use chordiso::perm::Perm;
use chordiso::pipeline::{aut, build_hstar, critical_loop, decompose, iso, outer_components};
use chordiso::testkit::{
    brute_all_isos, brute_aut, brute_hyper_iso, brute_iso, gen_instance, random_hypergraph,
    random_permutation, GeneratorConfig, Instance,
};
use chordiso::wl::{check_stable, wl_refine};

const ELEMENT_LIMIT: usize = 1_000_000;

struct Outcome {
    checked: usize,
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checked: 0, failures: Vec::new(), note: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn instance(seed: u64, n: usize, leaf_bound: usize, twinless: bool, colored: bool) -> Instance {
    let mut cfg = GeneratorConfig::new(n, leaf_bound, seed);
    cfg.twinless = twinless;
    cfg.colored = colored;
    gen_instance(&cfg)
}

/// Mixed corpus: n in 3..=max_n, leaf bound 2..=4, all four twin/color variants.
fn corpus(count: u64, max_n: usize, salt: u64) -> Vec<(Instance, usize)> {
    (0..count)
        .map(|i| {
            let seed = salt.wrapping_mul(1_000_003).wrapping_add(i);
            let n = 3 + (i as usize * 7 + 1) % (max_n - 2);
            let lb = 2 + (i % 3) as usize;
            (instance(seed, n, lb, i % 2 == 0, (i / 2) % 2 == 0), lb)
        })
        .collect()
}

fn relabel_coloring(pi: &Coloring, p: &Perm) -> Coloring {
    let inv = p.inverse();
    let labels: Vec<usize> = (0..pi.n()).map(|v| pi.color(inv.apply(v))).collect();
    Coloring::from_labels(&labels)
}

fn restrict_images(g: &Perm, omega: &[usize]) -> Option<Vec<usize>> {
    omega.iter().map(|&v| omega.binary_search(&g.apply(v)).ok()).collect()
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    for (i, (inst, _)) in corpus(320, 10, 1).into_iter().enumerate() {
        let (x, pi) = (&inst.graph, &inst.coloring);
        match aut(x, Some(pi), None) {
            Ok(res) => {
                let want = brute_aut(x, pi).expect("small instance").order();
                o.check(res.group.order() == want, || format!("#{i}: order {} vs brute force {want}", res.group.order()));
                for g in res.group.generators() {
                    o.check(x.is_automorphism(g.images()) && pi.is_color_preserving(g.images()), || {
                        format!("#{i}: generator {g:?} is not a colored automorphism")
                    });
                }
            }
            Err(e) => o.failures.push(format!("#{i}: {e}")),
        }
    }
    o.note = "320 instances, n <= 10".into();
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let mut positives = 0;
    for i in 0..320u64 {
        let n = 3 + (i as usize * 5) % 8;
        let lb = 2 + (i % 3) as usize;
        let twinless = (i / 2) % 2 == 0;
        let x = instance(2000 + i, n, lb, twinless, false).graph;
        let y = if i % 2 == 0 {
            x.relabel(random_permutation(x.n(), 7000 + i).images())
        } else {
            instance(5000 + i, n, lb, twinless, false).graph
        };
        let want = brute_iso(&x, &y).expect("small instance").is_some();
        match iso(&x, &y, None) {
            Ok(got) => {
                o.check(got.is_some() == want, || format!("#{i}: iso decision {} vs brute force {want}", got.is_some()));
                if let Some(m) = got {
                    positives += 1;
                    o.check(x.is_isomorphism_to(&y, m.images()), || format!("#{i}: certificate fails edgewise"));
                }
            }
            Err(e) => o.failures.push(format!("#{i}: {e}")),
        }
    }
    o.note = format!("320 pairs, {positives} isomorphic");
    o
}

fn perturbed(h: &OrderKHypergraph) -> OrderKHypergraph {
    let mut edges: Vec<_> = h.edges().iter().copied().zip(h.colors().iter().cloned()).collect();
    if let Some(first) = edges.first_mut() {
        first.1 = chordiso::hypergraph::EdgeColor::Int(7);
    }
    OrderKHypergraph::new(h.coloring().clone(), edges).expect("same edges")
}

fn time_batch(max_class: usize) -> Duration {
    let labels: Vec<usize> = (0..12).map(|v| v / max_class).collect();
    let hs: Vec<OrderKHypergraph> = (0..40)
        .map(|s| {
            let h = random_hypergraph(90_000 + s, 12, 2, max_class, 10);
            let edges = h.edges().iter().copied().zip(h.colors().iter().cloned()).collect();
            OrderKHypergraph::new(Coloring::from_labels(&labels), edges).expect("same edges")
        })
        .collect();
    (0..3)
        .map(|_| {
            let start = Instant::now();
            for h in &hs {
                for _ in 0..5 {
                    std::hint::black_box(iso_hypergraphs(h, h, max_class));
                }
            }
            start.elapsed()
        })
        .min()
        .expect("three runs")
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    for i in 0..240u64 {
        let k = 1 + (i % 3) as usize;
        let n = 3 + ((i / 3) % 4) as usize;
        let b = 2 + ((i / 12) % 2) as usize;
        let h = random_hypergraph(i, n, k, b, 2 + (i % 5) as usize);
        let h2 = match i % 4 {
            0 => h.clone(),
            1 | 2 => h.relabel(&permute_within_classes(&h, 11_000 + i)),
            _ => perturbed(&h.relabel(&permute_within_classes(&h, 13_000 + i))),
        };
        let got = iso_hypergraphs(&h, &h2, b).elements(ELEMENT_LIMIT).expect("small coset");
        let want = brute_hyper_iso(&h, &h2).expect("small instance");
        o.check(got == want, || format!("#{i} (k={k}, n={n}): {} elements vs brute force {}", got.len(), want.len()));
    }
    let (t2, t3) = (time_batch(2), time_batch(3));
    o.note = format!("240 hypergraphs; timing b=2 {:.1?}, b=3 {:.1?}", t2, t3);
    o.check(t3 > t2, || format!("runtime did not grow from b=2 ({t2:?}) to b=3 ({t3:?})"));
    o
}

fn permute_within_classes(h: &OrderKHypergraph, seed: u64) -> Perm {
    let mut img: Vec<usize> = (0..h.n()).collect();
    for (j, class) in h.coloring().classes().iter().enumerate() {
        let p = random_permutation(class.len(), seed.wrapping_add(j as u64 * 31));
        for (a, &v) in class.iter().enumerate() {
            img[v] = class[p.apply(a)];
        }
    }
    Perm::from_images(img).expect("class-wise bijection")
}

fn cliques_of_equal_size(x: &Graph, class: &[usize]) -> bool {
    let comps = components_within(x, class);
    comps.iter().all(|c| x.is_clique(c)) && comps.iter().all(|c| c.len() == comps[0].len())
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    for (i, (inst, _)) in corpus(300, 14, 4).into_iter().enumerate() {
        let x = &inst.graph;
        let (pi, _) = wl_refine(x, &inst.coloring);
        o.check(check_stable(x, &pi), || format!("#{i}: refined coloring is not stable"));
        let classes = pi.classes();
        for d in classes {
            o.check(cliques_of_equal_size(x, d), || format!("#{i}: class {d:?} is not a union of equal cliques"));
        }
        for d in classes {
            for g in classes {
                let cd = components_within(x, d);
                let cg = components_within(x, g);
                if cd.len() <= cg.len() {
                    let mut union: Vec<usize> = d.iter().chain(g.iter()).copied().collect();
                    union.sort_unstable();
                    union.dedup();
                    let mut traces: Vec<Vec<usize>> = components_within(x, &union)
                        .into_iter()
                        .map(|y| y.into_iter().filter(|v| d.contains(v)).collect::<Vec<_>>())
                        .filter(|t| !t.is_empty())
                        .collect();
                    traces.sort();
                    let mut want = cd.clone();
                    want.iter_mut().for_each(|c| c.sort_unstable());
                    want.sort();
                    o.check(traces == want, || format!("#{i}: component traces differ for {d:?}, {g:?}"));
                }
                if d != g && x.is_clique(d) && x.is_clique(g) {
                    let count = d.iter().flat_map(|&a| g.iter().map(move |&b| (a, b))).filter(|&(a, b)| x.has_edge(a, b)).count();
                    o.check(count == 0 || count == d.len() * g.len(), || {
                        format!("#{i}: complete classes {d:?}, {g:?} neither complete bipartite nor empty")
                    });
                }
            }
        }
    }
    o.note = "300 instances, n <= 14".into();
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let mut worst = 0.0f64;
    for i in 0..300u64 {
        let lb = 2 + (i % 3) as usize;
        let n = 4 + (i as usize * 3) % 13;
        let inst = instance(30_000 + i, n, lb, true, i % 2 == 0);
        let x = &inst.graph;
        let state = match critical_loop(x, &inst.coloring, lb) {
            Ok(s) => s,
            Err(e) => {
                o.failures.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if state.critical.is_empty() {
            continue;
        }
        match build_hstar(x, &state.coloring, &state.critical) {
            Ok(hs) => {
                let bound = lb << lb;
                let m = hs.max_class_size();
                worst = worst.max(m as f64 / bound as f64);
                o.check(m <= bound, || format!("#{i}: class of size {m} exceeds {bound}"));
            }
            Err(e) => o.failures.push(format!("#{i}: {e}")),
        }
    }
    o.note = format!("300 twinless instances, n <= 16; largest class / bound = {worst:.3}");
    o
}

fn color_preserving_isos(
    x: &Graph,
    xs: &[usize],
    y: &Graph,
    ys: &[usize],
    pi: &Coloring,
) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        x: &Graph,
        xs: &[usize],
        y: &Graph,
        ys: &[usize],
        pi: &Coloring,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let k = map.len();
        if k == xs.len() {
            out.push(xs.iter().copied().zip(map.iter().copied()).collect());
            return;
        }
        for j in 0..ys.len() {
            if used[j] || pi.color(xs[k]) != pi.color(ys[j]) {
                continue;
            }
            if (0..k).all(|i| x.has_edge(xs[i], xs[k]) == y.has_edge(map[i], ys[j])) {
                used[j] = true;
                map.push(ys[j]);
                rec(x, xs, y, ys, pi, map, used, out);
                map.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    if xs.len() == ys.len() {
        rec(x, xs, y, ys, pi, &mut Vec::new(), &mut vec![false; ys.len()], &mut out);
    }
    out
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let mut positives = 0;
    for i in 0..220u64 {
        let n = 2 + (i as usize) % 7;
        let a = instance(40_000 + i, n, 2, i % 3 == 0, true);
        let (z2, pi2) = if i % 2 == 0 {
            let p = random_permutation(a.graph.n(), 41_000 + i);
            (a.graph.relabel(p.images()), relabel_coloring(&a.coloring, &p))
        } else {
            let b = instance(42_000 + i, n, 2, i % 3 == 0, true);
            (b.graph, b.coloring)
        };
        if canonical_tree(&z2, &pi2).is_err() {
            o.failures.push(format!("#{i}: generated interval graph rejected"));
            continue;
        }
        let want = brute_all_isos(&a.graph, &a.coloring, &z2, &pi2).expect("small instance");
        let decision = iso_colored_interval(&a.graph, &a.coloring, &z2, &pi2).expect("interval inputs");
        o.check(decision.is_some() == !want.is_empty(), || format!("#{i}: decision differs from brute force"));
        if let Some(t) = decision {
            positives += 1;
            let group = aut_colored_interval(&a.graph, &a.coloring).expect("interval input");
            let mut got: Vec<Perm> = group.elements(ELEMENT_LIMIT).expect("small group").iter().map(|g| g.then(&t)).collect();
            got.sort();
            o.check(got == want, || format!("#{i}: {} tree isomorphisms vs {} graph isomorphisms", got.len(), want.len()));
        }
    }
    let mut pairs = 0;
    for i in 0..400u64 {
        let lb = 2 + (i % 3) as usize;
        let n = 4 + (i as usize) % 5;
        let inst = instance(43_000 + i, n, lb, i % 2 == 0, i % 3 == 0);
        let x = &inst.graph;
        for threshold in [1, lb] {
            let Ok(state) = critical_loop(x, &inst.coloring, threshold) else { continue };
            let pi = &state.coloring;
            let comps = outer_components(x, &state.critical);
            let hs: Vec<_> = comps.iter().map(|y| boundary_hypergraph(x, pi, y).expect("critical set")).collect();
            for (a, ha) in hs.iter().enumerate() {
                for (b, hb) in hs.iter().enumerate() {
                    pairs += 1;
                    let mut via_closure: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
                    for m in color_preserving_isos(x, &ha.closure, x, &hb.closure, pi) {
                        let mut r: Vec<(usize, usize)> = m.into_iter().filter(|(u, _)| ha.boundary.contains(u)).collect();
                        r.sort_unstable();
                        via_closure.insert(r);
                    }
                    let mut via_h: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
                    let k = Graph::complete(x.n());
                    for m in color_preserving_isos(&k, &ha.boundary, &k, &hb.boundary, pi) {
                        let f = |v: usize| m.iter().find(|(u, _)| *u == v).map(|&(_, w)| w);
                        if ha.is_isomorphism(hb, &f) {
                            via_h.insert(m);
                        }
                    }
                    o.check(via_closure == via_h, || {
                        format!(
                            "#{i} (L={threshold}): components {a},{b}: {} boundary maps vs {} restricted closure maps",
                            via_h.len(),
                            via_closure.len()
                        )
                    });
                }
            }
        }
    }
    o.note = format!("220 colored interval pairs ({positives} isomorphic); {pairs} boundary hypergraph pairs");
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let (mut used, mut with_outer) = (0, 0);
    for i in 0..600u64 {
        let lb = 2 + (i % 3) as usize;
        let n = 3 + (i as usize) % 5;
        let inst = instance(50_000 + i, n, lb, true, i % 4 == 0);
        let x = &inst.graph;
        let full = brute_aut(x, &inst.coloring).expect("small instance").elements(ELEMENT_LIMIT).expect("small group");
        for threshold in [1, lb] {
            let d = match decompose(x, &inst.coloring, threshold) {
                Ok(d) => d,
                Err(chordiso::error::Error::Deadlock { .. }) if threshold < lb => continue,
                Err(e) => {
                    o.failures.push(format!("#{i} (L={threshold}): {e}"));
                    continue;
                }
            };
            let (Some(hs), Some(hd)) = (&d.hstar, &d.hdiamond) else { continue };
            used += 1;
            if !hd.components.is_empty() {
                with_outer += 1;
            }
            let omega = &d.state.critical;
            let restricted: BTreeSet<Vec<usize>> =
                full.iter().map(|g| restrict_images(g, omega).expect("critical set is invariant")).collect();
            let gstar: Option<BTreeSet<Vec<usize>>> = aut_hypergraph(&hs.hypergraph)
                .elements(ELEMENT_LIMIT)
                .expect("small group")
                .iter()
                .map(|h| hs.induced_on_omega(h))
                .collect();
            let Some(gstar) = gstar else {
                o.failures.push(format!("#{i}: automorphism of H* does not preserve the vertex edges"));
                continue;
            };
            let hdiamond: BTreeSet<Vec<usize>> = brute_hyper_iso(&hd.hypergraph, &hd.hypergraph)
                .expect("small instance")
                .iter()
                .map(|p| p.images().to_vec())
                .collect();
            let meet: BTreeSet<Vec<usize>> = gstar.intersection(&hdiamond).cloned().collect();
            o.check(restricted == meet, || {
                format!(
                    "#{i} (L={threshold}): |aut(X) on critical set| = {} but |aut(H⋄) ∩ G*| = {}",
                    restricted.len(),
                    meet.len()
                )
            });
            o.check(restricted.is_subset(&gstar), || format!("#{i} (L={threshold}): aut(X) on critical set not inside G*"));
            let local = x.induced(omega);
            o.check(gstar.iter().all(|g| local.graph.is_automorphism(g)), || {
                format!("#{i} (L={threshold}): G* element is not an automorphism of the critical subgraph")
            });
        }
    }
    o.note = format!("{used} decompositions of twinless instances with n <= 7, {with_outer} with outer components");
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let mut max_l = 0;
    for (i, (inst, lb)) in corpus(300, 16, 8).into_iter().enumerate() {
        let x = &inst.graph;
        match critical_loop(x, &inst.coloring, lb) {
            Ok(s) => o.check(s.iterations <= x.n(), || format!("#{i}: {} iterations for n = {}", s.iterations, x.n())),
            Err(e) => o.failures.push(format!("#{i}: loop at the generating bound failed: {e}")),
        }
        match aut(x, Some(&inst.coloring), None) {
            Ok(res) => {
                max_l = max_l.max(res.threshold);
                o.check(res.threshold <= 2 * lb, || format!("#{i}: deepening stopped at {} > 2 * {lb}", res.threshold));
            }
            Err(e) => o.failures.push(format!("#{i}: {e}")),
        }
    }
    o.note = format!("300 instances, n <= 16; largest bound reached {max_l}");
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    for i in 0..100u64 {
        let n = 3 + (i as usize) % 10;
        let inst = instance(60_000 + i, n, 2 + (i % 3) as usize, i % 2 == 0, i % 3 == 0);
        let (x, pi) = (&inst.graph, &inst.coloring);
        let p = random_permutation(x.n(), 61_000 + i);
        let (xp, pip) = (x.relabel(p.images()), relabel_coloring(pi, &p));
        let (Ok(a), Ok(b)) = (aut(x, Some(pi), None), aut(&xp, Some(&pip), None)) else {
            o.failures.push(format!("#{i}: aut failed"));
            continue;
        };
        o.check(a.group.order() == b.group.order(), || format!("#{i}: orders {} vs {}", a.group.order(), b.group.order()));
        if x.n() <= 7 {
            let inv = p.inverse();
            let mut conj: Vec<Perm> =
                a.group.elements(ELEMENT_LIMIT).expect("small group").iter().map(|g| inv.then(g).then(&p)).collect();
            conj.sort();
            let direct = b.group.elements(ELEMENT_LIMIT).expect("small group");
            o.check(conj == direct, || format!("#{i}: conjugated element sets differ"));
        }
    }
    o.note = "100 instances, n <= 12; element sets compared for n <= 7".into();
    o
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("aut matches brute force", criterion_1),
        ("iso matches brute force", criterion_2),
        ("hypergraph isomorphism cosets", criterion_3),
        ("stable coloring structure", criterion_4),
        ("H* class size bound", criterion_5),
        ("canonical trees and boundary hypergraphs", criterion_6),
        ("critical set identities", criterion_7),
        ("loop and deepening bounds", criterion_8),
        ("relabeling equivariance", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.ends_with(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let status = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {label}: {name} ({} checks, {:.1?}; {})", o.checked, start.elapsed(), o.note);
        for f in o.failures.iter().take(10) {
            println!("    {f}");
        }
        if !o.failures.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
