//! Sources, receivers and the `n` pairwise link-disjoint connection paths
//! between them, with per-link unit capacity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::gf2::Bit;

/// Exact capacity value.
pub type Capacity = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("network needs at least one connection")]
    Empty,
    #[error("connection index {index} out of range for {n} connections")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("connection {0} path does not run from its source to its receiver")]
    BrokenPath(usize),
    #[error("connections {0} and {1} share a link")]
    NotDisjoint(usize, usize),
    #[error("node {0} is the source (or receiver) of more than one connection")]
    DuplicateEndpoint(NodeId),
    #[error("self-loop at {0}")]
    SelfLoop(NodeId),
    #[error("source {node} would exceed degree {n}")]
    DegreeExceeded { node: NodeId, n: usize },
}

/// A directed edge `(from, to)`.
pub type Edge = (NodeId, NodeId);

fn undirected((a, b): Edge) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The path `L_i` from source `s_i` to receiver `r_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub index: usize,
    pub source: NodeId,
    pub receiver: NodeId,
    pub link: Vec<Edge>,
}

impl Connection {
    /// A connection over a single direct edge.
    pub fn direct(index: usize, source: NodeId, receiver: NodeId) -> Self {
        Self {
            index,
            source,
            receiver,
            link: vec![(source, receiver)],
        }
    }

    fn is_contiguous(&self) -> bool {
        let (Some(first), Some(last)) = (self.link.first(), self.link.last()) else {
            return false;
        };
        first.0 == self.source
            && last.1 == self.receiver
            && self.link.windows(2).all(|w| w[0].1 == w[1].0)
    }
}

/// Round stamp `t^δ`: cycle number and step within the cycle. Ordered
/// lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoundStamp {
    pub cycle: u64,
    pub step: u64,
}

impl RoundStamp {
    /// Stamp of a global round number when a cycle spans `n` rounds.
    pub fn of_round(round: u64, n: usize) -> Self {
        let n = n as u64;
        Self {
            cycle: round / n,
            step: round % n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PacketKind {
    Data,
    Encoded,
}

impl fmt::Display for PacketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PacketKind::Data => "data",
            PacketKind::Encoded => "encoded",
        })
    }
}

/// `(ID_s, payload, t^δ)` on connection `connection`. A `None` payload is a
/// symbol erased in flight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub connection: usize,
    pub sender: NodeId,
    pub payload: Option<Bit>,
    pub stamp: RoundStamp,
    pub kind: PacketKind,
}

impl Packet {
    pub fn is_erased(&self) -> bool {
        self.payload.is_none()
    }
}

/// Node id to number of distinct neighbors.
pub type NodeDegreeView = BTreeMap<NodeId, usize>;

/// `n` connections plus any auxiliary edges of the underlying graph, and
/// the up/down state of each connection's link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    connections: Vec<Connection>,
    extra_edges: Vec<Edge>,
    active: Vec<bool>,
}

impl Network {
    /// Validates path contiguity, distinct endpoints and link-disjointness.
    /// Connection indices are reassigned to their position in `connections`.
    pub fn new(mut connections: Vec<Connection>) -> Result<Self, NetError> {
        if connections.is_empty() {
            return Err(NetError::Empty);
        }
        let mut sources = BTreeSet::new();
        let mut receivers = BTreeSet::new();
        let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
        for (i, c) in connections.iter_mut().enumerate() {
            c.index = i;
            if !c.is_contiguous() {
                return Err(NetError::BrokenPath(i));
            }
            if !sources.insert(c.source) {
                return Err(NetError::DuplicateEndpoint(c.source));
            }
            if !receivers.insert(c.receiver) {
                return Err(NetError::DuplicateEndpoint(c.receiver));
            }
            for &e in &c.link {
                if e.0 == e.1 {
                    return Err(NetError::SelfLoop(e.0));
                }
                if let Some(&j) = owner.get(&undirected(e)) {
                    return Err(NetError::NotDisjoint(j, i));
                }
                owner.insert(undirected(e), i);
            }
        }
        let n = connections.len();
        Ok(Self {
            connections,
            extra_edges: Vec::new(),
            active: vec![true; n],
        })
    }

    /// `n` direct connections `s_i -> r_i` with sources `0..n` and
    /// receivers `n..2n`.
    pub fn direct(n: usize) -> Result<Self, NetError> {
        let conns = (0..n)
            .map(|i| Connection::direct(i, NodeId(i as u32), NodeId((n + i) as u32)))
            .collect();
        Self::new(conns)
    }

    pub fn n(&self) -> usize {
        self.connections.len()
    }

    pub fn connections(&self) -> &[Connection] {
        &self.connections
    }

    pub fn connection(&self, i: usize) -> Result<&Connection, NetError> {
        self.connections.get(i).ok_or(NetError::IndexOutOfRange {
            index: i,
            n: self.n(),
        })
    }

    fn has_node(&self, u: NodeId) -> bool {
        self.edges().any(|(a, b)| a == u || b == u)
    }

    fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.connections
            .iter()
            .flat_map(|c| c.link.iter().copied())
            .chain(self.extra_edges.iter().copied())
    }

    fn neighbors(&self, u: NodeId) -> BTreeSet<NodeId> {
        self.edges()
            .filter_map(|(a, b)| match (a == u, b == u) {
                (true, false) => Some(b),
                (false, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Adds an edge of the graph that is not part of any connection path,
    /// e.g. between a source and the node that encodes its data.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<(), NetError> {
        if a == b {
            return Err(NetError::SelfLoop(a));
        }
        let n = self.n();
        self.extra_edges.push((a, b));
        for u in [a, b] {
            if self.connections.iter().any(|c| c.source == u) && self.neighbors(u).len() > n {
                self.extra_edges.pop();
                return Err(NetError::DegreeExceeded { node: u, n });
            }
        }
        Ok(())
    }

    /// Unit capacity `c_i`: true iff link `i` is active.
    pub fn link_capacity(&self, i: usize) -> Result<Bit, NetError> {
        self.active
            .get(i)
            .copied()
            .ok_or(NetError::IndexOutOfRange {
                index: i,
                n: self.n(),
            })
    }

    pub fn set_link_state(&mut self, i: usize, active: bool) -> Result<(), NetError> {
        let n = self.n();
        let slot = self
            .active
            .get_mut(i)
            .ok_or(NetError::IndexOutOfRange { index: i, n })?;
        *slot = active;
        Ok(())
    }

    pub fn fail_link(&mut self, i: usize) -> Result<(), NetError> {
        self.set_link_state(i, false)
    }

    pub fn repair_link(&mut self, i: usize) -> Result<(), NetError> {
        self.set_link_state(i, true)
    }

    pub fn repair_all(&mut self) {
        self.active.iter_mut().for_each(|a| *a = true);
    }

    /// `(1/n) * sum c_i`, exact.
    pub fn average_capacity(&self) -> Capacity {
        let up = self.active.iter().filter(|&&a| a).count() as u64;
        Ratio::new(up, self.n() as u64)
    }

    /// Number of distinct nodes sharing an edge with `u`.
    pub fn node_degree(&self, u: NodeId) -> Result<usize, NetError> {
        if !self.has_node(u) {
            return Err(NetError::UnknownNode(u));
        }
        Ok(self.neighbors(u).len())
    }

    pub fn degrees(&self) -> NodeDegreeView {
        let mut view = NodeDegreeView::new();
        for (a, b) in self.edges() {
            view.entry(a).or_default();
            view.entry(b).or_default();
        }
        for (node, degree) in view.iter_mut() {
            *degree = self.neighbors(*node).len();
        }
        view
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(i: u32) -> NodeId {
        NodeId(i)
    }

    #[test]
    fn link_capacity_toggles() {
        let mut net = Network::direct(5).unwrap();
        assert!(net.link_capacity(0).unwrap());
        net.fail_link(2).unwrap();
        assert!(!net.link_capacity(2).unwrap());
        net.repair_link(2).unwrap();
        assert!(net.link_capacity(2).unwrap());
        assert_eq!(
            net.link_capacity(5),
            Err(NetError::IndexOutOfRange { index: 5, n: 5 })
        );
    }

    #[test]
    fn average_capacity_is_exact() {
        let mut net = Network::direct(5).unwrap();
        assert_eq!(net.average_capacity(), Ratio::from_integer(1));
        net.fail_link(4).unwrap();
        assert_eq!(net.average_capacity(), Ratio::new(4, 5));

        let mut net = Network::direct(7).unwrap();
        for i in [0, 3, 6] {
            net.fail_link(i).unwrap();
        }
        assert_eq!(net.average_capacity(), Ratio::new(4, 7));
        net.repair_all();
        assert_eq!(net.average_capacity(), Ratio::from_integer(1));
    }

    #[test]
    fn node_degree_bounds() {
        // Source 0 with a single path edge.
        let net = Network::direct(4).unwrap();
        assert_eq!(net.node_degree(id(0)).unwrap(), 1);
        assert_eq!(net.node_degree(id(99)), Err(NetError::UnknownNode(id(99))));

        // A hub adjacent to every source.
        let mut net = Network::direct(4).unwrap();
        let hub = id(100);
        for s in 0..4 {
            net.add_edge(id(s), hub).unwrap();
        }
        assert_eq!(net.node_degree(hub).unwrap(), 4);
        assert_eq!(net.node_degree(id(0)).unwrap(), 2);
    }

    #[test]
    fn star_center_degree() {
        // Auxiliary star: center 50, leaves 60..64.
        let mut net = Network::direct(4).unwrap();
        for leaf in 60..64 {
            net.add_edge(id(50), id(leaf)).unwrap();
        }
        assert_eq!(net.node_degree(id(50)).unwrap(), 4);
        assert_eq!(net.degrees()[&id(60)], 1);
    }

    #[test]
    fn source_degree_capped_at_n() {
        let mut net = Network::direct(2).unwrap();
        net.add_edge(id(0), id(10)).unwrap();
        assert_eq!(
            net.add_edge(id(0), id(11)),
            Err(NetError::DegreeExceeded { node: id(0), n: 2 })
        );
        assert_eq!(net.node_degree(id(0)).unwrap(), 2);
    }

    #[test]
    fn multi_hop_paths_validated() {
        let ok = Connection {
            index: 0,
            source: id(0),
            receiver: id(1),
            link: vec![(id(0), id(10)), (id(10), id(11)), (id(11), id(1))],
        };
        let other = Connection {
            index: 1,
            source: id(2),
            receiver: id(3),
            link: vec![(id(2), id(10)), (id(10), id(3))],
        };
        // Sharing node 10 is fine; only links must be disjoint.
        assert!(Network::new(vec![ok.clone(), other]).is_ok());

        let clash = Connection {
            index: 1,
            source: id(4),
            receiver: id(5),
            link: vec![(id(4), id(11)), (id(11), id(10)), (id(10), id(5))],
        };
        assert_eq!(
            Network::new(vec![ok.clone(), clash]),
            Err(NetError::NotDisjoint(0, 1))
        );

        let broken = Connection {
            index: 0,
            source: id(0),
            receiver: id(1),
            link: vec![(id(0), id(10)), (id(11), id(1))],
        };
        assert_eq!(Network::new(vec![broken]), Err(NetError::BrokenPath(0)));
        let dup = Connection::direct(1, id(0), id(7));
        assert_eq!(
            Network::new(vec![ok, dup]),
            Err(NetError::DuplicateEndpoint(id(0)))
        );
        assert_eq!(Network::new(vec![]), Err(NetError::Empty));
    }

    #[test]
    fn round_stamps_order_lexicographically() {
        let a = RoundStamp::of_round(4, 5);
        let b = RoundStamp::of_round(5, 5);
        assert_eq!(a, RoundStamp { cycle: 0, step: 4 });
        assert_eq!(b, RoundStamp { cycle: 1, step: 0 });
        assert!(a < b);
        assert!(RoundStamp { cycle: 1, step: 0 } > RoundStamp { cycle: 0, step: 9 });
    }
}
