//! Graph-backed functions over the edge set of a complete graph.
//!
//! Coordinates are the C(v,2) unordered vertex pairs in lexicographic
//! order: (0,1), (0,2), ..., (0,v-1), (1,2), ... Activating a coordinate
//! inserts that edge.

use crate::error::{Error, Result};
use crate::function::{Function, SeenBits, Status, Tracker};
use crate::state::BitState;

/// Bijection between edge coordinates and vertex pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeIndex {
    v: usize,
}

impl EdgeIndex {
    pub fn new(v: usize) -> Result<Self> {
        if v < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 vertices, got {v}"
            )));
        }
        Ok(EdgeIndex { v })
    }

    pub fn vertices(self) -> usize {
        self.v
    }

    /// Number of coordinates, C(v,2).
    pub fn count(self) -> usize {
        self.v * (self.v - 1) / 2
    }

    /// Coordinate of the edge {a, b}.
    pub fn index(self, a: usize, b: usize) -> Result<usize> {
        if a == b {
            return Err(Error::InvalidParameter(format!("loop edge ({a},{a})")));
        }
        if a >= self.v || b >= self.v {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                arity: self.v,
            });
        }
        let (a, b) = (a.min(b), a.max(b));
        Ok(a * (2 * self.v - a - 1) / 2 + (b - a - 1))
    }

    /// Edge {a, b} (with a < b) of a coordinate.
    pub fn pair(self, index: usize) -> Result<(usize, usize)> {
        if index >= self.count() {
            return Err(Error::IndexOutOfRange {
                index,
                arity: self.count(),
            });
        }
        // Count from the last pair: row `a` holds v-1-a pairs, so with
        // j = count-1-index we look for the triangular number bracketing j.
        let j = (self.count() - 1 - index) as u64;
        let tri = |x: u64| x * (x + 1) / 2;
        let mut d = (((8 * j + 1) as f64).sqrt() as u64 + 1) / 2;
        while tri(d) <= j {
            d += 1;
        }
        while d > 1 && tri(d - 1) > j {
            d -= 1;
        }
        let a = self.v - 1 - d as usize;
        let b = self.v - 1 - (j - tri(d - 1)) as usize;
        Ok((a, b))
    }
}

/// Union-find over vertices with the observables policies need: component
/// count, size and root of the largest component, vertex degrees, and the
/// current minimum degree.
#[derive(Debug, Clone)]
pub struct GraphState {
    parent: Vec<u32>,
    size: Vec<u32>,
    degree: Vec<u32>,
    degree_count: Vec<u32>,
    min_degree: usize,
    components: usize,
    largest_root: u32,
    largest_size: u32,
}

impl GraphState {
    pub fn new(v: usize) -> Self {
        let mut degree_count = vec![0; v + 1];
        degree_count[0] = v as u32;
        GraphState {
            parent: (0..v as u32).collect(),
            size: vec![1; v],
            degree: vec![0; v],
            degree_count,
            min_degree: 0,
            components: v,
            largest_root: 0,
            largest_size: 1.min(v as u32),
        }
    }

    /// Rebuild from the activated edge coordinates of `state`.
    pub fn from_state(v: usize, state: &BitState) -> Result<Self> {
        let edges = EdgeIndex::new(v)?;
        debug_assert_eq!(edges.count(), state.arity());
        let mut g = GraphState::new(v);
        for e in state.ones() {
            let (a, b) = edges.pair(e)?;
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn vertices(&self) -> usize {
        self.parent.len()
    }

    /// Component representative. Union by size keeps chains O(log v).
    pub fn find(&self, mut x: usize) -> usize {
        loop {
            let p = self.parent[x] as usize;
            if p == x {
                return x;
            }
            x = p;
        }
    }

    fn find_compress(&mut self, mut x: usize) -> usize {
        let root = self.find(x);
        while self.parent[x] as usize != root {
            let p = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = p;
        }
        root
    }

    /// Insert edge {a, b}: bump both degrees, merge components.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        for x in [a, b] {
            let d = self.degree[x] as usize;
            self.degree[x] += 1;
            self.degree_count[d] -= 1;
            self.degree_count[d + 1] += 1;
            if d == self.min_degree && self.degree_count[d] == 0 {
                self.min_degree = d + 1;
            }
        }
        let ra = self.find_compress(a);
        let rb = self.find_compress(b);
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.components -= 1;
        if self.size[big] >= self.largest_size {
            self.largest_size = self.size[big];
            self.largest_root = big as u32;
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    pub fn same_component(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn largest_component_size(&self) -> usize {
        self.largest_size as usize
    }

    /// Whether `x` lies in the largest component.
    pub fn in_largest(&self, x: usize) -> bool {
        self.find(x) == self.largest_root as usize
    }

    /// Vertices outside the largest component.
    pub fn nongiant(&self) -> usize {
        self.vertices() - self.largest_component_size()
    }

    pub fn degree(&self, x: usize) -> usize {
        self.degree[x] as usize
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }
}

/// Connectivity of the evolving graph.
pub struct Connectivity {
    edges: EdgeIndex,
}

impl Connectivity {
    pub fn new(v: usize) -> Result<Self> {
        Ok(Connectivity {
            edges: EdgeIndex::new(v)?,
        })
    }

    pub fn edge_index(&self) -> EdgeIndex {
        self.edges
    }
}

impl Function for Connectivity {
    fn arity(&self) -> usize {
        self.edges.count()
    }

    fn name(&self) -> String {
        format!("connectivity:v={}", self.edges.vertices())
    }

    fn evaluate(&self, state: &BitState) -> bool {
        GraphState::from_state(self.edges.vertices(), state)
            .expect("arity checked")
            .is_connected()
    }

    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(ConnectivityTracker {
            g: GraphState::new(self.edges.vertices()),
            seen: SeenBits::new(self.arity()),
            edges: self.edges,
        })
    }

    fn useful_bits(&self, state: &BitState) -> Result<Option<Vec<usize>>> {
        let g = GraphState::from_state(self.edges.vertices(), state)?;
        if g.is_connected() {
            return Err(Error::ActiveState);
        }
        let mut out = Vec::new();
        for e in state.zeros() {
            let (a, b) = self.edges.pair(*e as usize)?;
            if !g.same_component(a, b) {
                out.push(*e as usize);
            }
        }
        out.sort_unstable();
        Ok(Some(out))
    }

    fn known_relevant(&self) -> Option<Vec<usize>> {
        Some((0..self.arity()).collect())
    }

    fn graph_vertices(&self) -> Option<usize> {
        Some(self.edges.vertices())
    }
}

struct ConnectivityTracker {
    g: GraphState,
    seen: SeenBits,
    edges: EdgeIndex,
}

impl Tracker for ConnectivityTracker {
    fn activate(&mut self, index: usize) -> Result<Status> {
        self.seen.insert(index)?;
        let (a, b) = self.edges.pair(index)?;
        self.g.add_edge(a, b);
        Ok(self.status())
    }

    fn status(&self) -> Status {
        if self.g.is_connected() {
            Status::Active
        } else {
            Status::Inactive
        }
    }

    fn useful_contains(&self, index: usize) -> Option<bool> {
        let (a, b) = self.edges.pair(index).ok()?;
        Some(!self.g.same_component(a, b))
    }

    fn supports_useful(&self) -> bool {
        true
    }

    fn graph_state(&self) -> Option<&GraphState> {
        Some(&self.g)
    }
}

pub(crate) const KCONN_MAX_VERTICES: usize = 64;
pub(crate) const KCONN_MAX_K: usize = 3;

/// k-vertex-connectivity, checked definitionally: the graph is active when
/// deleting any k-1 vertices leaves it connected. Limited to v <= 64 and
/// k in {2, 3}.
pub struct KConnectivity {
    edges: EdgeIndex,
    k: usize,
}

impl KConnectivity {
    pub fn new(v: usize, k: usize) -> Result<Self> {
        if !(2..=KCONN_MAX_K).contains(&k) {
            return Err(Error::InvalidParameter(format!(
                "k must be 2 or 3, got {k}"
            )));
        }
        if v > KCONN_MAX_VERTICES {
            return Err(Error::Capacity {
                arity: v,
                limit: KCONN_MAX_VERTICES,
                what: "k_connectivity vertices",
            });
        }
        if v < k + 1 {
            return Err(Error::InvalidParameter(format!(
                "k_connectivity needs at least k+1 = {} vertices, got {v}",
                k + 1
            )));
        }
        Ok(KConnectivity {
            edges: EdgeIndex::new(v)?,
            k,
        })
    }

    fn adjacency(&self, state: &BitState) -> Vec<u64> {
        let v = self.edges.vertices();
        let mut adj = vec![0u64; v];
        for e in state.ones() {
            let (a, b) = self.edges.pair(e).expect("in range");
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }
}

/// BFS over bitmask adjacency restricted to `alive`; true when every alive
/// vertex is reached from the lowest one. Returns the reached set.
fn reach_within(adj: &[u64], alive: u64) -> u64 {
    if alive == 0 {
        return 0;
    }
    let start = alive.trailing_zeros() as usize;
    let mut reached = 1u64 << start;
    let mut frontier = reached;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[u] & alive;
        }
        frontier = next & !reached;
        reached |= next;
    }
    reached
}

/// Separation found by the definitional check: after deleting `removed`,
/// `side` is a proper nonempty reachable subset of the remaining vertices.
#[derive(Debug, Clone, Copy)]
struct CutWitness {
    removed: u64,
    side: u64,
}

fn kconn_check(adj: &[u64], v: usize, k: usize) -> Result<(), CutWitness> {
    let all = if v == 64 { !0u64 } else { (1u64 << v) - 1 };
    let mut removals: Vec<u64> = Vec::new();
    match k {
        2 => removals.extend((0..v).map(|x| 1u64 << x)),
        3 => {
            for x in 0..v {
                for y in x + 1..v {
                    removals.push(1 << x | 1 << y);
                }
            }
        }
        _ => unreachable!("validated at construction"),
    }
    for removed in removals {
        let alive = all & !removed;
        let reached = reach_within(adj, alive);
        if reached != alive {
            return Err(CutWitness {
                removed,
                side: reached,
            });
        }
    }
    Ok(())
}

impl Function for KConnectivity {
    fn arity(&self) -> usize {
        self.edges.count()
    }

    fn name(&self) -> String {
        format!("k_connectivity:v={},k={}", self.edges.vertices(), self.k)
    }

    fn evaluate(&self, state: &BitState) -> bool {
        let adj = self.adjacency(state);
        if adj.iter().any(|&m| (m.count_ones() as usize) < self.k) {
            return false;
        }
        kconn_check(&adj, self.edges.vertices(), self.k).is_ok()
    }

    fn tracker(&self) -> Box<dyn Tracker + '_> {
        let v = self.edges.vertices();
        Box::new(KConnectivityTracker {
            adj: vec![0; v],
            g: GraphState::new(v),
            seen: SeenBits::new(self.arity()),
            edges: self.edges,
            k: self.k,
            witness: None,
            status: Status::Inactive,
        })
    }

    fn known_relevant(&self) -> Option<Vec<usize>> {
        Some((0..self.arity()).collect())
    }

    fn graph_vertices(&self) -> Option<usize> {
        Some(self.edges.vertices())
    }
}

struct KConnectivityTracker {
    adj: Vec<u64>,
    g: GraphState,
    seen: SeenBits,
    edges: EdgeIndex,
    k: usize,
    /// Last separation found; stays valid until an edge joins its two sides.
    witness: Option<CutWitness>,
    status: Status,
}

impl Tracker for KConnectivityTracker {
    fn activate(&mut self, index: usize) -> Result<Status> {
        self.seen.insert(index)?;
        let (a, b) = self.edges.pair(index)?;
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        self.g.add_edge(a, b);
        if self.status == Status::Active {
            return Ok(self.status);
        }
        if self.g.min_degree() < self.k {
            return Ok(Status::Inactive);
        }
        if let Some(w) = self.witness {
            let ab = 1u64 << a | 1u64 << b;
            let crosses = ab & w.removed == 0 && (w.side & 1 << a != 0) != (w.side & 1 << b != 0);
            if !crosses {
                return Ok(Status::Inactive);
            }
        }
        match kconn_check(&self.adj, self.edges.vertices(), self.k) {
            Ok(()) => {
                self.status = Status::Active;
                self.witness = None;
            }
            Err(w) => self.witness = Some(w),
        }
        Ok(self.status)
    }

    fn status(&self) -> Status {
        self.status
    }

    fn graph_state(&self) -> Option<&GraphState> {
        Some(&self.g)
    }
}
