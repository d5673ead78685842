//! Loopless k-shortest-path routing.
//!
//! Paths are ordered by total length in km; exact ties fall back to the
//! lexicographic order of the node index sequence, so the path list is a
//! pure function of the topology.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::net::topology::Topology;

/// A loopless route: node sequence, the link index taken at each hop, and
/// the summed length.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutePath {
    pub nodes: Vec<usize>,
    pub links: Vec<usize>,
    pub length_km: f64,
}

impl RoutePath {
    /// Directed grid ordinals of the hops, in travel order.
    pub fn directed_links(&self, topo: &Topology) -> Vec<usize> {
        self.links
            .iter()
            .zip(&self.nodes)
            .map(|(&link, &from)| topo.directed_id(link, from))
            .collect()
    }

    fn rank(&self) -> (f64, &[usize]) {
        (self.length_km, &self.nodes)
    }
}

fn rank_cmp(a: (f64, &[usize]), b: (f64, &[usize])) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1))
}

/// Heap entry for the tie-aware shortest-path search. The heap is a max-heap,
/// so the ordering is reversed.
struct Frontier {
    dist: f64,
    nodes: Vec<usize>,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Frontier {}
impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        rank_cmp((other.dist, &other.nodes), (self.dist, &self.nodes))
    }
}

/// Shortest path from `src` to `dst` avoiding banned nodes and links.
/// Positive link lengths make the first settled path per node optimal in the
/// (length, node sequence) order.
fn shortest_with_bans(
    topo: &Topology,
    src: usize,
    dst: usize,
    banned_nodes: &[bool],
    banned_links: &[bool],
) -> Option<RoutePath> {
    if banned_nodes[src] || banned_nodes[dst] {
        return None;
    }
    let mut settled = vec![false; topo.n_nodes()];
    let mut heap = BinaryHeap::new();
    heap.push(Frontier { dist: 0.0, nodes: vec![src] });
    while let Some(Frontier { dist, nodes }) = heap.pop() {
        let u = *nodes.last().expect("frontier paths are nonempty");
        if u == dst {
            return Some(finish_path(topo, nodes));
        }
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for &(v, link) in topo.neighbors(u) {
            if settled[v] || banned_nodes[v] || banned_links[link] {
                continue;
            }
            let mut next = nodes.clone();
            next.push(v);
            heap.push(Frontier { dist: dist + topo.links()[link].length_km, nodes: next });
        }
    }
    None
}

/// Rebuild hop links and recompute the length by summing in travel order, so
/// equal node sequences always carry bitwise-equal lengths.
fn finish_path(topo: &Topology, nodes: Vec<usize>) -> RoutePath {
    let mut links = Vec::with_capacity(nodes.len().saturating_sub(1));
    let mut length_km = 0.0;
    for w in nodes.windows(2) {
        let link = topo
            .neighbors(w[0])
            .iter()
            .find(|&&(v, _)| v == w[1])
            .map(|&(_, l)| l)
            .expect("consecutive path nodes are adjacent");
        links.push(link);
        length_km += topo.links()[link].length_km;
    }
    RoutePath { nodes, links, length_km }
}

/// Up to `k` loopless shortest paths from `src` to `dst`, ascending.
pub fn yen_k_shortest(topo: &Topology, src: usize, dst: usize, k: usize) -> Vec<RoutePath> {
    if k == 0 || src == dst {
        return Vec::new();
    }
    let mut banned_nodes = vec![false; topo.n_nodes()];
    let mut banned_links = vec![false; topo.n_links()];
    let Some(first) = shortest_with_bans(topo, src, dst, &banned_nodes, &banned_links) else {
        return Vec::new();
    };
    let mut accepted = vec![first];
    let mut candidates: Vec<RoutePath> = Vec::new();
    let mut known: HashSet<Vec<usize>> = HashSet::new();
    known.insert(accepted[0].nodes.clone());

    while accepted.len() < k {
        let prev = accepted.last().expect("at least one accepted path").clone();
        for i in 0..prev.nodes.len() - 1 {
            let spur = prev.nodes[i];
            let root = &prev.nodes[..=i];

            banned_links.iter_mut().for_each(|b| *b = false);
            for p in &accepted {
                if p.nodes.len() > i && p.nodes[..=i] == *root {
                    banned_links[p.links[i]] = true;
                }
            }
            banned_nodes.iter_mut().for_each(|b| *b = false);
            for &node in &root[..i] {
                banned_nodes[node] = true;
            }

            if let Some(tail) = shortest_with_bans(topo, spur, dst, &banned_nodes, &banned_links)
            {
                let mut nodes = root[..i].to_vec();
                nodes.extend_from_slice(&tail.nodes);
                if known.insert(nodes.clone()) {
                    candidates.push(finish_path(topo, nodes));
                }
            }
        }
        let Some(best) = candidates
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| rank_cmp(a.rank(), b.rank()))
            .map(|(i, _)| i)
        else {
            break;
        };
        accepted.push(candidates.swap_remove(best));
    }
    accepted
}
