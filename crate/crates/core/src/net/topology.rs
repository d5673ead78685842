//! Network topologies: named nodes joined by bidirectional fiber links.
//!
//! Links are stored once; each carries two independent directed spectrum
//! grids (one per direction). A link of length L is operated as ceil(L/80 km)
//! equal spans of reference fiber.

use serde::Deserialize;

use crate::error::{QotError, Result};
use crate::media::{FiberSpan, LinkPath};

/// Span length the link decomposition aims for, in km.
pub const TARGET_SPAN_KM: f64 = 80.0;

/// An undirected link between two node indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub length_km: f64,
}

impl Link {
    /// Number of equal spans the link is split into.
    pub fn n_spans(&self) -> usize {
        (self.length_km / TARGET_SPAN_KM).ceil() as usize
    }

    /// The equal-span decomposition as reference-fiber spans.
    pub fn spans(&self) -> Vec<FiberSpan> {
        let n = self.n_spans();
        let each_m = self.length_km * 1e3 / n as f64;
        vec![FiberSpan::reference(each_m); n]
    }
}

#[derive(Deserialize)]
struct NodeJson {
    id: String,
}

#[derive(Deserialize)]
struct LinkJson {
    a: String,
    b: String,
    length_km: f64,
}

#[derive(Deserialize)]
struct TopologyJson {
    name: String,
    nodes: Vec<NodeJson>,
    links: Vec<LinkJson>,
}

/// A validated, connected, bidirectional topology. Node indices follow the
/// lexicographic order of the node ids.
#[derive(Debug, Clone)]
pub struct Topology {
    name: String,
    node_ids: Vec<String>,
    links: Vec<Link>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Topology {
    pub fn new(name: &str, node_ids: Vec<String>, raw_links: Vec<(usize, usize, f64)>) -> Result<Self> {
        if node_ids.len() < 2 {
            return Err(QotError::Config("a topology needs at least two nodes".into()));
        }
        for w in node_ids.windows(2) {
            if w[1] <= w[0] {
                return Err(QotError::Config(format!(
                    "node ids must be strictly increasing, got '{}' then '{}'",
                    w[0], w[1]
                )));
            }
        }
        let n = node_ids.len();
        let mut links = Vec::with_capacity(raw_links.len());
        let mut seen = std::collections::HashSet::new();
        for (a, b, length_km) in raw_links {
            if a >= n || b >= n {
                return Err(QotError::Config("link endpoint out of range".into()));
            }
            if a == b {
                return Err(QotError::Config(format!(
                    "self-loop at node '{}'",
                    node_ids[a]
                )));
            }
            if !(length_km.is_finite() && length_km > 0.0) {
                return Err(QotError::Config(format!(
                    "link {}-{} length must be positive",
                    node_ids[a], node_ids[b]
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(QotError::Config(format!(
                    "duplicate link {}-{}",
                    node_ids[a], node_ids[b]
                )));
            }
            links.push(Link { a, b, length_km });
        }

        let mut adjacency = vec![Vec::new(); n];
        for (i, link) in links.iter().enumerate() {
            adjacency[link.a].push((link.b, i));
            adjacency[link.b].push((link.a, i));
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }

        // Connectivity sweep from node 0.
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adjacency[u] {
                if !visited[v] {
                    visited[v] = true;
                    stack.push(v);
                }
            }
        }
        if let Some(i) = visited.iter().position(|&v| !v) {
            return Err(QotError::Config(format!(
                "topology is not connected: node '{}' is unreachable",
                node_ids[i]
            )));
        }

        Ok(Topology {
            name: name.to_string(),
            node_ids,
            links,
            adjacency,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let parsed: TopologyJson =
            serde_json::from_str(text).map_err(|e| QotError::Config(format!("topology: {e}")))?;
        let mut ids: Vec<String> = parsed.nodes.into_iter().map(|n| n.id).collect();
        ids.sort();
        ids.dedup();
        let index_of = |id: &str| -> Result<usize> {
            ids.binary_search_by(|probe| probe.as_str().cmp(id))
                .map_err(|_| QotError::Config(format!("link references unknown node '{id}'")))
        };
        let raw: Vec<(usize, usize, f64)> = parsed
            .links
            .iter()
            .map(|l| Ok((index_of(&l.a)?, index_of(&l.b)?, l.length_km)))
            .collect::<Result<_>>()?;
        Topology::new(&parsed.name, ids, raw)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Topology::from_json_str(&text)
    }

    /// The bundled 21-node national topology (mean link 166 km).
    pub fn itb() -> Self {
        Topology::from_json_str(include_str!("../../data/topology-itb.json"))
            .expect("bundled ITB topology is valid")
    }

    /// The bundled 24-node continental topology (mean link about 1000 km).
    pub fn usb() -> Self {
        Topology::from_json_str(include_str!("../../data/topology-usb.json"))
            .expect("bundled USB topology is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_nodes(&self) -> usize {
        self.node_ids.len()
    }

    pub fn n_links(&self) -> usize {
        self.links.len()
    }

    pub fn node_id(&self, index: usize) -> &str {
        &self.node_ids[index]
    }

    pub fn node_index(&self, id: &str) -> Result<usize> {
        self.node_ids
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .map_err(|_| QotError::Config(format!("unknown node '{id}'")))
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Neighbors of `node` as (neighbor, link index), sorted by neighbor.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    /// Directed grid ordinal of `link` traversed from `from_node`.
    pub fn directed_id(&self, link: usize, from_node: usize) -> usize {
        let l = &self.links[link];
        debug_assert!(from_node == l.a || from_node == l.b);
        2 * link + usize::from(from_node != l.a)
    }

    /// Span sequence of an ordered list of link indices, grouped per link.
    pub fn link_path(&self, link_indices: &[usize]) -> Result<LinkPath> {
        LinkPath::new(
            link_indices
                .iter()
                .map(|&i| self.links[i].spans())
                .collect(),
        )
    }

    pub fn total_length_km(&self) -> f64 {
        self.links.iter().map(|l| l.length_km).sum()
    }
}
