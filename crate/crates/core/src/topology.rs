//! Combinatorial tree topologies for full Steiner trees: enumeration, good
//! binary trees, the conjectured optimal topology, binary labelling, the
//! terminal Wiener index and semi-regularity.
//!
//! Nodes are `T0..T(n-1)` (terminals) and `S0..S(k-1)` (Steiner). A *full*
//! topology has every terminal of degree 1, every Steiner node of degree 3
//! and `k = n - 2`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Default cap on the terminal count for exhaustive topology enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 9;

/// A node of a topology: terminal slot or Steiner slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    Terminal(usize),
    Steiner(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Terminal(i) => write!(f, "T{i}"),
            Node::Steiner(j) => write!(f, "S{j}"),
        }
    }
}

impl Node {
    pub fn parse(s: &str) -> Result<Node> {
        let err = || Error::Parse(format!("invalid node name `{s}`"));
        let (kind, idx) = s.split_at(1);
        let i: usize = idx.parse().map_err(|_| err())?;
        match kind {
            "T" => Ok(Node::Terminal(i)),
            "S" => Ok(Node::Steiner(i)),
            _ => Err(err()),
        }
    }
}

/// A combinatorial tree over terminal and Steiner slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    n_terminals: usize,
    n_steiner: usize,
    /// Normalized: each pair ordered, list sorted, forms a tree.
    edges: Vec<(Node, Node)>,
}

impl Topology {
    /// Builds a topology after checking that `edges` form a tree on the full
    /// node set `{T0.., S0..}`.
    pub fn new(n_terminals: usize, n_steiner: usize, edges: Vec<(Node, Node)>) -> Result<Topology> {
        let n_nodes = n_terminals + n_steiner;
        if n_nodes == 0 {
            return Err(Error::InvalidTopology("empty node set".into()));
        }
        if edges.len() + 1 != n_nodes {
            return Err(Error::InvalidTopology(format!(
                "{} edges on {} nodes is not a tree",
                edges.len(),
                n_nodes
            )));
        }
        let mut topo = Topology {
            n_terminals,
            n_steiner,
            edges: Vec::with_capacity(edges.len()),
        };
        for (u, v) in edges {
            for w in [u, v] {
                let ok = match w {
                    Node::Terminal(i) => i < n_terminals,
                    Node::Steiner(j) => j < n_steiner,
                };
                if !ok {
                    return Err(Error::InvalidTopology(format!("node {w} out of range")));
                }
            }
            if u == v {
                return Err(Error::InvalidTopology(format!("self-loop at {u}")));
            }
            topo.edges.push((u.min(v), u.max(v)));
        }
        topo.edges.sort();
        if topo.edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTopology("duplicate edge".into()));
        }
        // Connectivity: |E| = |V| - 1 plus one sweep.
        let adj = topo.adjacency();
        let mut seen = vec![false; n_nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        if count != n_nodes {
            return Err(Error::InvalidTopology("disconnected edge set".into()));
        }
        Ok(topo)
    }

    pub fn n_terminals(&self) -> usize {
        self.n_terminals
    }

    pub fn n_steiner(&self) -> usize {
        self.n_steiner
    }

    pub fn n_nodes(&self) -> usize {
        self.n_terminals + self.n_steiner
    }

    pub fn edges(&self) -> &[(Node, Node)] {
        &self.edges
    }

    /// Flat index of a node: terminals first, then Steiner slots.
    pub fn index(&self, node: Node) -> usize {
        match node {
            Node::Terminal(i) => i,
            Node::Steiner(j) => self.n_terminals + j,
        }
    }

    pub fn node_at(&self, index: usize) -> Node {
        if index < self.n_terminals {
            Node::Terminal(index)
        } else {
            Node::Steiner(index - self.n_terminals)
        }
    }

    /// Adjacency lists over flat indices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_nodes()];
        for &(u, v) in &self.edges {
            let (iu, iv) = (self.index(u), self.index(v));
            adj[iu].push(iv);
            adj[iv].push(iu);
        }
        adj
    }

    pub fn degree(&self, node: Node) -> usize {
        let i = self.index(node);
        self.edges
            .iter()
            .filter(|&&(u, v)| self.index(u) == i || self.index(v) == i)
            .count()
    }

    /// Full Steiner topology: terminals are leaves, Steiner nodes have degree
    /// exactly 3, and there are `n - 2` of them.
    pub fn is_full(&self) -> bool {
        if self.n_terminals < 3 || self.n_steiner != self.n_terminals - 2 {
            // The degenerate two-terminal tree is not "full" in this sense.
            return false;
        }
        let adj = self.adjacency();
        (0..self.n_terminals).all(|i| adj[i].len() == 1)
            && (self.n_terminals..self.n_nodes()).all(|i| adj[i].len() == 3)
    }

    /// Canonical encoding with terminal labels fixed and Steiner labels free.
    /// Two topologies get equal strings iff they differ only by a relabeling
    /// of Steiner slots.
    pub fn canonical_labeled(&self) -> String {
        self.canonical_string(true)
    }

    /// Canonical encoding of the unlabeled shape (only the terminal/Steiner
    /// distinction is kept). Equal strings iff isomorphic as node-typed trees.
    pub fn canonical_shape(&self) -> String {
        self.canonical_string(false)
    }

    fn canonical_string(&self, labeled: bool) -> String {
        let adj = self.adjacency();
        let centers = tree_centers(&adj);
        centers
            .iter()
            .map(|&c| self.encode_rooted(c, usize::MAX, &adj, labeled))
            .min()
            .expect("non-empty tree has a center")
    }

    fn encode_rooted(&self, v: usize, parent: usize, adj: &[Vec<usize>], labeled: bool) -> String {
        let tag = match self.node_at(v) {
            Node::Terminal(i) if labeled => format!("T{i}"),
            Node::Terminal(_) => "T".to_string(),
            Node::Steiner(_) => "S".to_string(),
        };
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&u| u != parent)
            .map(|&u| self.encode_rooted(u, v, adj, labeled))
            .collect();
        kids.sort();
        format!("({}{})", tag, kids.concat())
    }

    /// Stable text format: `n_terminals`, `n_steiner`, then one `u v` edge
    /// pair per line using `T<i>`/`S<j>` names.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "n_terminals {}\nn_steiner {}\n",
            self.n_terminals, self.n_steiner
        );
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Topology> {
        let mut n_terminals = None;
        let mut n_steiner = None;
        let mut edges = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let a = parts.next().ok_or_else(|| Error::Parse(line.into()))?;
            let b = parts.next().ok_or_else(|| Error::Parse(line.into()))?;
            match a {
                "n_terminals" => {
                    n_terminals = Some(b.parse().map_err(|_| Error::Parse(line.into()))?)
                }
                "n_steiner" => n_steiner = Some(b.parse().map_err(|_| Error::Parse(line.into()))?),
                _ => edges.push((Node::parse(a)?, Node::parse(b)?)),
            }
        }
        let n_terminals =
            n_terminals.ok_or_else(|| Error::Parse("missing n_terminals header".into()))?;
        let n_steiner = n_steiner.ok_or_else(|| Error::Parse("missing n_steiner header".into()))?;
        Topology::new(n_terminals, n_steiner, edges)
    }
}

/// Centers (1 or 2) of a tree given by adjacency lists.
fn tree_centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n == 1 {
        return vec![0];
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in &adj[v] {
                if degree[u] > 1 {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
            degree[v] = 0;
        }
        layer = next;
    }
    layer
}

/// Every full Steiner topology on `n` labeled terminals, exactly once up to
/// Steiner relabeling, in deterministic (canonical-encoding) order.
///
/// Generation is by iterative terminal insertion: each new terminal
/// subdivides an existing edge and attaches to the fresh Steiner node.
pub fn enumerate_full_topologies(n: usize) -> Result<Vec<Topology>> {
    enumerate_full_topologies_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_full_topologies_capped(n: usize, cap: usize) -> Result<Vec<Topology>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "full topology enumeration needs n >= 3, got {n}"
        )));
    }
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let star = vec![
        (Node::Terminal(0), Node::Steiner(0)),
        (Node::Terminal(1), Node::Steiner(0)),
        (Node::Terminal(2), Node::Steiner(0)),
    ];
    let mut current = vec![star];
    for t in 3..n {
        let mut next = Vec::with_capacity(current.len() * (2 * t - 3));
        for edges in &current {
            let fresh = Node::Steiner(t - 2);
            for (i, &(u, v)) in edges.iter().enumerate() {
                let mut e = edges.clone();
                e[i] = (u, fresh);
                e.push((v, fresh));
                e.push((Node::Terminal(t), fresh));
                next.push(e);
            }
        }
        current = next;
    }
    let mut seen: HashMap<String, Topology> = HashMap::new();
    for edges in current {
        let topo = Topology::new(n, n - 2, edges)?;
        seen.entry(topo.canonical_labeled()).or_insert(topo);
    }
    let mut keyed: Vec<(String, Topology)> = seen.into_iter().collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}

/// A rooted binary tree in which every internal node has exactly two
/// children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryTree {
    pub children: Option<(Box<BinaryTree>, Box<BinaryTree>)>,
}

impl BinaryTree {
    pub fn leaf() -> Self {
        BinaryTree { children: None }
    }

    pub fn internal(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree {
            children: Some((Box::new(left), Box::new(right))),
        }
    }

    /// Full binary tree of the given height (`2^h` leaves).
    pub fn full(height: usize) -> Self {
        if height == 0 {
            BinaryTree::leaf()
        } else {
            BinaryTree::internal(BinaryTree::full(height - 1), BinaryTree::full(height - 1))
        }
    }

    pub fn leaf_count(&self) -> usize {
        match &self.children {
            None => 1,
            Some((l, r)) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn height(&self) -> usize {
        match &self.children {
            None => 0,
            Some((l, r)) => 1 + l.height().max(r.height()),
        }
    }

    pub fn min_leaf_depth(&self) -> usize {
        match &self.children {
            None => 0,
            Some((l, r)) => 1 + l.min_leaf_depth().min(r.min_leaf_depth()),
        }
    }

    pub fn is_full_of_height(&self, h: usize) -> bool {
        match &self.children {
            None => h == 0,
            Some((l, r)) => h > 0 && l.is_full_of_height(h - 1) && r.is_full_of_height(h - 1),
        }
    }
}

/// A good binary tree together with its height.
#[derive(Clone, Debug)]
pub struct GoodTree {
    pub root: BinaryTree,
    pub height: usize,
}

/// The unique (up to isomorphism) good binary tree with the given number of
/// leaves. Height 0 is a single node; for height `k > 0` at most one child
/// subtree is good of height `k-1` and the rest are full of height `k-1` or
/// `k-2`.
pub fn good_tree(leaves: usize) -> Result<GoodTree> {
    if leaves < 2 {
        return Err(Error::InvalidInput(format!(
            "good tree needs at least 2 leaves, got {leaves}"
        )));
    }
    fn build(r: usize) -> BinaryTree {
        if r == 1 {
            return BinaryTree::leaf();
        }
        if r == 2 {
            return BinaryTree::internal(BinaryTree::leaf(), BinaryTree::leaf());
        }
        // 2^k < r <= 2^(k+1)
        let k = usize::BITS as usize - 1 - (r - 1).leading_zeros() as usize;
        if r <= (1 << k) + (1 << (k - 1)) {
            BinaryTree::internal(BinaryTree::full(k - 1), build(r - (1 << (k - 1))))
        } else {
            BinaryTree::internal(BinaryTree::full(k), build(r - (1 << k)))
        }
    }
    let root = build(leaves);
    let height = root.height();
    Ok(GoodTree { root, height })
}

/// The conjectured optimal full topology of the regular `d`-simplex: the good
/// tree on `d` leaves with its root deleted and the two former children
/// joined by an edge. For `d = 3` this degenerates to the single-Steiner
/// star.
pub fn conjectured_topology(d: usize) -> Result<Topology> {
    if d < 3 {
        return Err(Error::InvalidInput(format!(
            "conjectured topology needs d >= 3, got {d}"
        )));
    }
    let g = good_tree(d)?;
    let (left, right) = g
        .root
        .children
        .as_ref()
        .expect("good tree on >= 3 leaves has an internal root");

    let mut edges = Vec::new();
    let mut next_terminal = 0usize;
    let mut next_steiner = 0usize;
    fn collect(
        t: &BinaryTree,
        edges: &mut Vec<(Node, Node)>,
        next_terminal: &mut usize,
        next_steiner: &mut usize,
    ) -> Node {
        match &t.children {
            None => {
                let id = Node::Terminal(*next_terminal);
                *next_terminal += 1;
                id
            }
            Some((l, r)) => {
                let id = Node::Steiner(*next_steiner);
                *next_steiner += 1;
                let lid = collect(l, edges, next_terminal, next_steiner);
                let rid = collect(r, edges, next_terminal, next_steiner);
                edges.push((id, lid));
                edges.push((id, rid));
                id
            }
        }
    }
    let lroot = collect(left, &mut edges, &mut next_terminal, &mut next_steiner);
    let rroot = collect(right, &mut edges, &mut next_terminal, &mut next_steiner);
    edges.push((lroot, rroot));
    Topology::new(d, next_steiner, edges)
}

/// Terminal Wiener index: the sum of pairwise hop distances between leaf
/// nodes. Computed both as the pairwise-distance sum and as the edge-cut
/// product sum; the two routes must agree.
pub fn terminal_wiener(t: &Topology) -> u64 {
    let adj = t.adjacency();
    let n = t.n_nodes();
    let leaves: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 1).collect();

    // Route 1: BFS from every leaf.
    let mut pairwise = 0u64;
    for (idx, &l) in leaves.iter().enumerate() {
        let mut dist = vec![usize::MAX; n];
        dist[l] = 0;
        let mut queue = std::collections::VecDeque::from([l]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for &m in &leaves[idx + 1..] {
            pairwise += dist[m] as u64;
        }
    }

    // Route 2: per edge, product of leaf counts on the two sides.
    let mut cut_sum = 0u64;
    let total_leaves = leaves.len() as u64;
    for &(u, v) in t.edges() {
        let side = leaves_on_side(t, &adj, t.index(v), t.index(u));
        cut_sum += side * (total_leaves - side);
    }

    assert_eq!(
        pairwise, cut_sum,
        "terminal Wiener routes disagree: {pairwise} vs {cut_sum}"
    );
    pairwise
}

/// Leaves in the component of `v` when edge `(blocked, v)` is removed.
fn leaves_on_side(t: &Topology, adj: &[Vec<usize>], v: usize, blocked: usize) -> u64 {
    let _ = t;
    let mut count = 0u64;
    let mut stack = vec![(v, blocked)];
    while let Some((u, parent)) = stack.pop() {
        if adj[u].len() == 1 {
            count += 1;
        }
        for &w in &adj[u] {
            if w != parent {
                stack.push((w, u));
            }
        }
    }
    count
}

/// Semi-regularity of a full topology: for every pair `(u, v)` of Steiner
/// nodes, with `(a1, a2)` and `(b1, b2)` the terminal counts of the two
/// subtrees hanging off `u` and `v` away from the `u -> v` path,
/// `min(b1, b2) >= max(a1, a2)` or `min(a1, a2) >= max(b1, b2)` must hold.
pub fn is_semi_regular(t: &Topology) -> Result<bool> {
    if !t.is_full() {
        return Err(Error::InvalidTopology(
            "semi-regularity is defined for full topologies".into(),
        ));
    }
    let adj = t.adjacency();
    let n = t.n_nodes();

    // terminals_beyond[u][w]: terminals in the component of neighbor w when
    // edge (u, w) is cut.
    let count_terminals = |v: usize, blocked: usize| -> usize {
        let mut count = 0;
        let mut stack = vec![(v, blocked)];
        while let Some((u, parent)) = stack.pop() {
            if u < t.n_terminals() {
                count += 1;
            }
            for &w in &adj[u] {
                if w != parent {
                    stack.push((w, u));
                }
            }
        }
        count
    };

    // next_hop[u][v]: neighbor of u on the path to v.
    let mut next_hop = vec![vec![usize::MAX; n]; n];
    for start in 0..n {
        let mut queue = std::collections::VecDeque::from([start]);
        let mut seen = vec![false; n];
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    next_hop[v][start] = u; // from v, step to u to reach start
                    queue.push_back(v);
                }
            }
        }
    }

    let steiner: Vec<usize> = (t.n_terminals()..n).collect();
    for (i, &u) in steiner.iter().enumerate() {
        for &v in &steiner[i + 1..] {
            let toward_v = next_hop[u][v];
            let toward_u = next_hop[v][u];
            let mut a: Vec<usize> = adj[u]
                .iter()
                .filter(|&&w| w != toward_v)
                .map(|&w| count_terminals(w, u))
                .collect();
            let mut b: Vec<usize> = adj[v]
                .iter()
                .filter(|&&w| w != toward_u)
                .map(|&w| count_terminals(w, v))
                .collect();
            a.sort_unstable();
            b.sort_unstable();
            let (a_min, a_max) = (a[0], a[1]);
            let (b_min, b_max) = (b[0], b[1]);
            if !(b_min >= a_max || a_min >= b_max) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A rooted binary tree whose nodes carry binary-string labels following the
/// appending rule: child labels are the parent label plus `0` (left) or `1`
/// (right).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledBinaryTree {
    pub label: String,
    pub children: Option<(Box<LabeledBinaryTree>, Box<LabeledBinaryTree>)>,
}

impl LabeledBinaryTree {
    /// Labels of the leaves, left to right.
    pub fn leaf_labels(&self) -> Vec<String> {
        match &self.children {
            None => vec![self.label.clone()],
            Some((l, r)) => {
                let mut out = l.leaf_labels();
                out.extend(r.leaf_labels());
                out
            }
        }
    }
}

/// Labels a full binary tree with respect to the binary string `g`: the root
/// gets `g`, children append `0`/`1`.
pub fn label_full_binary(t: &BinaryTree, g: &str) -> LabeledBinaryTree {
    let children = t.children.as_ref().map(|(l, r)| {
        (
            Box::new(label_full_binary(l, &format!("{g}0"))),
            Box::new(label_full_binary(r, &format!("{g}1"))),
        )
    });
    LabeledBinaryTree {
        label: g.to_string(),
        children,
    }
}
