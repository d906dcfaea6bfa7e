//! γ-local vertex separators via unit-capacity max-flow on a node-split network.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::{local_subgraph, Graph};
use crate::error::{Error, Result};

/// A minimum vertex separator between `i` and `j` in the local subgraph around `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparatorResult {
    pub pair: (usize, usize),
    pub gamma: usize,
    pub separator: Vec<usize>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalSeparationReport {
    pub eta: usize,
    pub gamma: usize,
    pub holds: bool,
    pub worst_size: usize,
    /// First ordered non-adjacent pair attaining `worst_size`; `None` for complete graphs.
    pub worst_pair: Option<(usize, usize)>,
}

struct Arc {
    to: usize,
    cap: usize,
    rev: usize,
}

/// Residual network where node `v` is split into `2v` (in) and `2v + 1` (out).
struct SplitNetwork {
    arcs: Vec<Vec<Arc>>,
}

impl SplitNetwork {
    fn new(f: &Graph, source: usize, sink: usize) -> Self {
        let p = f.p();
        let inf = p + 1;
        let mut net = SplitNetwork {
            arcs: (0..2 * p).map(|_| Vec::new()).collect(),
        };
        for v in 0..p {
            let cap = if v == source || v == sink { inf } else { 1 };
            net.add_arc(2 * v, 2 * v + 1, cap);
        }
        for (u, v) in f.edges() {
            net.add_arc(2 * u + 1, 2 * v, inf);
            net.add_arc(2 * v + 1, 2 * u, inf);
        }
        net
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: usize) {
        let rev_from = self.arcs[to].len();
        let rev_to = self.arcs[from].len();
        self.arcs[from].push(Arc {
            to,
            cap,
            rev: rev_from,
        });
        self.arcs[to].push(Arc {
            to: from,
            cap: 0,
            rev: rev_to,
        });
    }

    /// BFS over arcs with spare capacity; returns the predecessor arc of each reached node.
    fn bfs(&self, s: usize) -> Vec<Option<(usize, usize)>> {
        let mut pred = vec![None; self.arcs.len()];
        let mut seen = vec![false; self.arcs.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for (k, arc) in self.arcs[u].iter().enumerate() {
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    pred[arc.to] = Some((u, k));
                    queue.push_back(arc.to);
                }
            }
        }
        pred
    }

    /// Edmonds–Karp; every augmenting path carries one unit.
    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        loop {
            let pred = self.bfs(s);
            if pred[t].is_none() {
                return flow;
            }
            let mut v = t;
            while v != s {
                let (u, k) = pred[v].unwrap();
                self.arcs[u][k].cap -= 1;
                let rev = self.arcs[u][k].rev;
                self.arcs[v][rev].cap += 1;
                v = u;
            }
            flow += 1;
        }
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let pred = self.bfs(s);
        let mut seen: Vec<bool> = pred.iter().map(Option::is_some).collect();
        seen[s] = true;
        seen
    }
}

/// Minimum separator between `source` and `sink` in `f`, taking the cut
/// closest to the source.
fn min_vertex_cut(f: &Graph, source: usize, sink: usize) -> Vec<usize> {
    let mut net = SplitNetwork::new(f, source, sink);
    let s = 2 * source + 1;
    let t = 2 * sink;
    let flow = net.max_flow(s, t);
    if flow == 0 {
        return Vec::new();
    }
    let reach = net.reachable(s);
    let cut: Vec<usize> = (0..f.p())
        .filter(|&v| v != source && v != sink && reach[2 * v] && !reach[2 * v + 1])
        .collect();
    debug_assert_eq!(cut.len(), flow);
    cut
}

/// γ-local separator of the non-adjacent pair `(i, j)`: a minimum vertex set
/// disconnecting `j` from `i` in the local subgraph around `i`.
pub fn local_separator(g: &Graph, i: usize, j: usize, gamma: usize) -> Result<SeparatorResult> {
    if j >= g.p() || i == j {
        return Err(Error::InvalidArgument(format!("invalid node pair ({i}, {j})")));
    }
    if g.has_edge(i, j) {
        return Err(Error::InvalidArgument(format!(
            "({i}, {j}) is an edge; separators are defined for non-adjacent pairs"
        )));
    }
    let f = local_subgraph(g, i, gamma)?;
    let separator = min_vertex_cut(&f, i, j);
    Ok(SeparatorResult {
        pair: (i, j),
        gamma,
        size: separator.len(),
        separator,
    })
}

/// Checks whether every ordered non-adjacent pair has a γ-local separator
/// of size at most `eta`.
pub fn check_local_separation(g: &Graph, eta: usize, gamma: usize) -> Result<LocalSeparationReport> {
    if gamma == 0 {
        return Err(Error::InvalidParameter("gamma must be at least 1".into()));
    }
    let p = g.p();
    let per_source: Vec<Option<(usize, usize)>> = (0..p)
        .into_par_iter()
        .map(|i| {
            let f = local_subgraph(g, i, gamma).expect("node in range");
            let mut worst: Option<(usize, usize)> = None;
            for j in (0..p).filter(|&j| j != i && !g.has_edge(i, j)) {
                let size = min_vertex_cut(&f, i, j).len();
                if worst.map_or(true, |(w, _)| size > w) {
                    worst = Some((size, j));
                }
            }
            worst
        })
        .collect();

    let mut worst_size = 0;
    let mut worst_pair = None;
    for (i, entry) in per_source.into_iter().enumerate() {
        if let Some((size, j)) = entry {
            if worst_pair.is_none() || size > worst_size {
                worst_size = size;
                worst_pair = Some((i, j));
            }
        }
    }
    Ok(LocalSeparationReport {
        eta,
        gamma,
        holds: worst_size <= eta,
        worst_size,
        worst_pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_cycle, gen_erdos_renyi, girth};
    use proptest::prelude::*;

    /// Smallest separator by exhaustive subset search, for cross-checking.
    fn brute_force_size(g: &Graph, i: usize, j: usize, gamma: usize) -> usize {
        let f = local_subgraph(g, i, gamma).unwrap();
        let others: Vec<usize> = (0..g.p()).filter(|&v| v != i && v != j).collect();
        let mut removed = vec![false; g.p()];
        for size in 0..=others.len() {
            let mut found = false;
            crate::combinatorics::for_each_subset(&others, size, |s| {
                if s.len() != size {
                    return std::ops::ControlFlow::Continue(());
                }
                for &v in s {
                    removed[v] = true;
                }
                let separated = !f.connected_avoiding(i, j, &removed);
                for &v in s {
                    removed[v] = false;
                }
                if separated {
                    found = true;
                    std::ops::ControlFlow::Break(())
                } else {
                    std::ops::ControlFlow::Continue(())
                }
            });
            if found {
                return size;
            }
        }
        unreachable!("removing every other node always separates")
    }

    fn tree() -> Graph {
        Graph::from_edges(8, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6), (5, 7)]).unwrap()
    }

    #[test]
    fn hexagon_separators() {
        let c6 = gen_cycle(6).unwrap();
        let r = local_separator(&c6, 0, 3, 2).unwrap();
        assert_eq!(r.size, 0);
        assert!(r.separator.is_empty());
        let r = local_separator(&c6, 0, 3, 3).unwrap();
        assert_eq!(r.size, 2);
        assert_eq!(r.separator, vec![1, 5]);
        assert!(local_separator(&c6, 0, 1, 3).is_err());
    }

    #[test]
    fn tree_separators_have_size_one() {
        let t = tree();
        for i in 0..8 {
            let dist = t.bfs_distances(i);
            for j in (0..8).filter(|&j| j != i && !t.has_edge(i, j)) {
                let d = dist[j].unwrap();
                for gamma in d..d + 2 {
                    assert_eq!(local_separator(&t, i, j, gamma).unwrap().size, 1);
                }
            }
        }
        assert!(check_local_separation(&t, 1, 3).unwrap().holds);
    }

    #[test]
    fn cycles_are_two_separable() {
        for p in [5, 8, 11] {
            let c = gen_cycle(p).unwrap();
            for gamma in 1..=p {
                assert!(check_local_separation(&c, 2, gamma).unwrap().holds);
            }
        }
    }

    #[test]
    fn k5_minus_edge() {
        let g = Graph::from_edges(
            5,
            (0..5)
                .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
                .filter(|&e| e != (0, 1)),
        )
        .unwrap();
        let r = check_local_separation(&g, 2, 2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.worst_size, 3);
        assert_eq!(r.worst_pair, Some((0, 1)));
    }

    #[test]
    fn large_girth_means_single_separators() {
        // girth >= 2γ + 2 makes every radius-γ ball a tree.
        let c9 = gen_cycle(9).unwrap();
        assert!(check_local_separation(&c9, 1, 3).unwrap().holds);
        // girth 2γ + 1 is not enough: the ball closes the cycle.
        let c5 = gen_cycle(5).unwrap();
        let r = check_local_separation(&c5, 1, 2).unwrap();
        assert_eq!(r.worst_size, 2);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (4usize..=9, any::<u64>(), 1.0f64..4.0)
            .prop_map(|(p, seed, c)| gen_erdos_renyi(p, c, seed).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn flow_matches_brute_force(g in arb_graph(), gamma in 1usize..5) {
            let p = g.p();
            for i in 0..p {
                let f = local_subgraph(&g, i, gamma).unwrap();
                for j in (0..p).filter(|&j| j != i && !g.has_edge(i, j)) {
                    let r = local_separator(&g, i, j, gamma).unwrap();
                    prop_assert_eq!(r.size, brute_force_size(&g, i, j, gamma));
                    let mut removed = vec![false; p];
                    for &v in &r.separator {
                        prop_assert!(v != i && v != j);
                        removed[v] = true;
                    }
                    prop_assert!(!f.connected_avoiding(i, j, &removed));
                }
            }
        }

        #[test]
        fn separator_size_grows_with_gamma(g in arb_graph()) {
            let p = g.p();
            for i in 0..p {
                for j in (0..p).filter(|&j| j != i && !g.has_edge(i, j)) {
                    let sizes: Vec<usize> = (1..=p)
                        .map(|gamma| local_separator(&g, i, j, gamma).unwrap().size)
                        .collect();
                    prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
                }
            }
        }

        #[test]
        fn girth_above_twice_gamma_plus_one_gives_eta_one(g in arb_graph()) {
            if let Some(girth) = girth(&g) {
                for gamma in 1..=g.p() {
                    if girth > 2 * gamma + 1 {
                        prop_assert!(check_local_separation(&g, 1, gamma).unwrap().holds);
                    }
                }
            } else {
                prop_assert!(check_local_separation(&g, 1, g.p()).unwrap().holds);
            }
        }
    }
}
