//! Multigraphs and the brute-force graph-side counting oracles.
//!
//! Everything here is exact integer or rational arithmetic. Vertex subsets
//! are `u64` bitmasks internally, so the exhaustive counters are limited to
//! 64 vertices regardless of the force flag.

use std::collections::HashMap;

use num::{BigInt, One, Zero};

use crate::error::{Error, Guard, Result};
use crate::rational::{self, Rational};

pub const MAX_CHROMATIC_EDGES: usize = 20;
pub const MAX_ORIENTATION_EDGES: usize = 16;
pub const MAX_INDEPENDENT_SET_VERTICES: usize = 32;
pub const MAX_PARKING_NON_ROOT: usize = 8;
const BITMASK_VERTICES: usize = 64;

/// Labeled loopless multigraph. Edge ids are positions in `edges`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::invalid(format!(
                    "edge {id} = ({u},{v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("edge {id} is a self-loop at {u}")));
            }
        }
        Ok(MultiGraph {
            vertex_count,
            edges,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        MultiGraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Adds an edge and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        if u >= self.vertex_count || v >= self.vertex_count || u == v {
            return Err(Error::invalid(format!("cannot add edge ({u},{v})")));
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn check_edge_set(&self, s: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.edges.len()];
        for &e in s {
            if e >= self.edges.len() {
                return Err(Error::invalid(format!(
                    "edge id {e} out of range 0..{}",
                    self.edges.len()
                )));
            }
            if seen[e] {
                return Err(Error::invalid(format!("edge id {e} repeated")));
            }
            seen[e] = true;
        }
        Ok(())
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.sets()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.component_count() == 1
    }

    /// Two-coloring by BFS; `None` if an odd cycle exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let adj = self.adjacency_lists();
        let mut side: Vec<Option<bool>> = vec![None; self.vertex_count];
        for start in 0..self.vertex_count {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                let su = side[u].unwrap();
                for &(w, _) in &adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push(w);
                        }
                        Some(sw) if sw == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// `adj[v]` lists `(neighbor, edge id)` in edge-id order.
    pub(crate) fn adjacency_lists(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        adj
    }

    fn neighbor_masks(&self) -> Result<Vec<u64>> {
        if self.vertex_count > BITMASK_VERTICES {
            return Err(Error::SizeGuard {
                what: "vertex count (bitmask limit)",
                actual: self.vertex_count,
                limit: BITMASK_VERTICES,
            });
        }
        let mut masks = vec![0u64; self.vertex_count];
        for &(u, v) in &self.edges {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        Ok(masks)
    }
}

/// Disjoint union; vertices of earlier parts come first.
pub fn disjoint_union(parts: &[MultiGraph]) -> MultiGraph {
    let mut offset = 0;
    let mut edges = Vec::new();
    for g in parts {
        edges.extend(g.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
        offset += g.vertex_count;
    }
    MultiGraph {
        vertex_count: offset,
        edges,
    }
}

/// Named graph families used by the gadgets and the CLI generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedGraph {
    Complete(usize),
    CompleteBipartite(usize, usize),
    Cycle(usize),
    /// Path on the given number of vertices.
    Path(usize),
    Edgeless(usize),
    DisjointCopies(Box<NamedGraph>, usize),
}

pub fn build_named_graph(kind: &NamedGraph) -> Result<MultiGraph> {
    let mut edges = Vec::new();
    let n = match *kind {
        NamedGraph::Complete(n) => {
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
            n
        }
        NamedGraph::CompleteBipartite(a, b) => {
            for u in 0..a {
                for v in a..a + b {
                    edges.push((u, v));
                }
            }
            a + b
        }
        NamedGraph::Cycle(n) => {
            if n < 3 {
                return Err(Error::invalid(format!("cycle needs length >= 3, got {n}")));
            }
            for u in 0..n - 1 {
                edges.push((u, u + 1));
            }
            edges.push((0, n - 1));
            edges.sort_unstable();
            n
        }
        NamedGraph::Path(n) => {
            if n == 0 {
                return Err(Error::invalid("path needs at least one vertex"));
            }
            for u in 0..n - 1 {
                edges.push((u, u + 1));
            }
            n
        }
        NamedGraph::Edgeless(n) => n,
        NamedGraph::DisjointCopies(ref base, r) => {
            let g = build_named_graph(base)?;
            return Ok(disjoint_union(&vec![g; r]));
        }
    };
    MultiGraph::new(n, edges)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.sets -= 1;
        true
    }

    pub(crate) fn sets(&self) -> usize {
        self.sets
    }
}

/// A forest rooted per component, for fundamental-cycle queries.
pub(crate) struct RootedForest {
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    root: Vec<usize>,
}

impl RootedForest {
    /// `None` if `s` contains a cycle. `s` must hold valid distinct ids.
    pub(crate) fn build(g: &MultiGraph, s: &[usize]) -> Option<Self> {
        let n = g.vertex_count;
        let mut uf = UnionFind::new(n);
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for &e in s {
            let (u, v) = g.edges[e];
            if !uf.union(u, v) {
                return None;
            }
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut root = vec![usize::MAX; n];
        for r in 0..n {
            if root[r] != usize::MAX {
                continue;
            }
            root[r] = r;
            let mut stack = vec![r];
            while let Some(u) = stack.pop() {
                for &(w, e) in &adj[u] {
                    if root[w] == usize::MAX {
                        root[w] = r;
                        depth[w] = depth[u] + 1;
                        parent[w] = Some((u, e));
                        stack.push(w);
                    }
                }
            }
        }
        Some(RootedForest {
            parent,
            depth,
            root,
        })
    }

    pub(crate) fn connected(&self, u: usize, v: usize) -> bool {
        self.root[u] == self.root[v]
    }

    /// Forest edges on the unique `u`–`v` path, or `None` if disconnected.
    pub(crate) fn path(&self, mut u: usize, mut v: usize) -> Option<Vec<usize>> {
        if !self.connected(u, v) {
            return None;
        }
        let mut out = Vec::new();
        while self.depth[u] > self.depth[v] {
            let (p, e) = self.parent[u].unwrap();
            out.push(e);
            u = p;
        }
        while self.depth[v] > self.depth[u] {
            let (p, e) = self.parent[v].unwrap();
            out.push(e);
            v = p;
        }
        while u != v {
            let (pu, eu) = self.parent[u].unwrap();
            let (pv, ev) = self.parent[v].unwrap();
            out.push(eu);
            out.push(ev);
            u = pu;
            v = pv;
        }
        Some(out)
    }
}

pub fn is_forest(g: &MultiGraph, s: &[usize]) -> Result<bool> {
    g.check_edge_set(s)?;
    let mut uf = UnionFind::new(g.vertex_count);
    Ok(s.iter().all(|&e| {
        let (u, v) = g.edges[e];
        uf.union(u, v)
    }))
}

/// The unique cycle of `forest ∪ {e}`, sorted.
pub fn fundamental_cycle(g: &MultiGraph, forest: &[usize], e: usize) -> Result<Vec<usize>> {
    g.check_edge_set(forest)?;
    if e >= g.edge_count() {
        return Err(Error::invalid(format!("edge id {e} out of range")));
    }
    if forest.contains(&e) {
        return Err(Error::precondition(format!("edge {e} already in the forest")));
    }
    let rooted = RootedForest::build(g, forest)
        .ok_or_else(|| Error::precondition("edge set is not a forest"))?;
    let (u, v) = g.edges[e];
    let mut cycle = rooted.path(u, v).ok_or_else(|| {
        Error::precondition(format!("adding edge {e} does not close a cycle"))
    })?;
    cycle.push(e);
    cycle.sort_unstable();
    Ok(cycle)
}

/// Integer polynomial, `coefficients()[i]` is the coefficient of λ^i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Coefficient of λ^i (zero past the degree).
    pub fn coefficient(&self, i: usize) -> BigInt {
        self.coefficients.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + c)
    }
}

/// Chromatic polynomial by memoized deletion–contraction.
///
/// Parallel edges collapse: coloring constraints only see the underlying
/// simple graph, so contraction never produces loops.
pub fn chromatic_polynomial(g: &MultiGraph, guard: Guard) -> Result<IntPolynomial> {
    guard.check("edge count", g.edge_count(), MAX_CHROMATIC_EDGES)?;
    let adj = g.neighbor_masks()?;
    let mut memo = HashMap::new();
    Ok(IntPolynomial::new(chromatic_rec(adj, &mut memo)))
}

fn chromatic_rec(adj: Vec<u64>, memo: &mut HashMap<Vec<u64>, Vec<BigInt>>) -> Vec<BigInt> {
    let n = adj.len();
    let Some(u) = adj.iter().position(|&m| m != 0) else {
        let mut out = vec![BigInt::zero(); n + 1];
        out[n] = BigInt::one();
        return out;
    };
    if let Some(hit) = memo.get(&adj) {
        return hit.clone();
    }
    let v = adj[u].trailing_zeros() as usize;

    let mut deleted = adj.clone();
    deleted[u] &= !(1 << v);
    deleted[v] &= !(1 << u);
    let minus = chromatic_rec(deleted, memo);

    let contracted = contract(&adj, u, v);
    let sub = chromatic_rec(contracted, memo);

    let mut out = minus;
    for (i, c) in sub.into_iter().enumerate() {
        out[i] -= c;
    }
    memo.insert(adj, out.clone());
    out
}

/// Merges `v` into `u` and drops `v`, shifting higher labels down.
fn contract(adj: &[u64], u: usize, v: usize) -> Vec<u64> {
    let squeeze = |m: u64| -> u64 {
        let low = m & ((1u64 << v) - 1);
        let high = if v + 1 < 64 { (m >> (v + 1)) << v } else { 0 };
        low | high
    };
    let mut merged: Vec<u64> = adj.to_vec();
    merged[u] |= merged[v];
    merged[u] &= !((1 << u) | (1 << v));
    for row in merged.iter_mut() {
        if *row & (1 << v) != 0 {
            *row = (*row & !(1 << v)) | (1 << u);
        }
    }
    merged[u] &= !(1 << u);
    merged.remove(v);
    merged.into_iter().map(squeeze).collect()
}

/// Exhaustive count over all 2^m orientations.
pub fn count_acyclic_orientations(g: &MultiGraph, guard: Guard) -> Result<u64> {
    guard.check("edge count", g.edge_count(), MAX_ORIENTATION_EDGES)?;
    g.neighbor_masks()?;
    let m = g.edge_count();
    if m >= 64 {
        return Err(Error::SizeGuard {
            what: "edge count (orientation bitmask)",
            actual: m,
            limit: 63,
        });
    }
    let n = g.vertex_count;
    let mut count = 0u64;
    let mut out = vec![0u64; n];
    for orientation in 0u64..(1u64 << m) {
        out.iter_mut().for_each(|o| *o = 0);
        for (id, &(u, v)) in g.edges.iter().enumerate() {
            if orientation >> id & 1 == 0 {
                out[u] |= 1 << v;
            } else {
                out[v] |= 1 << u;
            }
        }
        if is_acyclic_digraph(&out) {
            count += 1;
        }
    }
    Ok(count)
}

/// Repeatedly peels sinks.
fn is_acyclic_digraph(out: &[u64]) -> bool {
    let n = out.len();
    let mut alive: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    loop {
        if alive == 0 {
            return true;
        }
        let mut peeled = false;
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if out[v] & alive == 0 {
                alive &= !(1 << v);
                peeled = true;
            }
        }
        if !peeled {
            return false;
        }
    }
}

/// `counts()[k]` = number of (vertex) independent sets of size k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeCounts {
    counts: Vec<u128>,
}

impl SizeCounts {
    pub fn new(mut counts: Vec<u128>) -> Self {
        while counts.len() > 1 && counts.last() == Some(&0) {
            counts.pop();
        }
        SizeCounts { counts }
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn get(&self, k: usize) -> u128 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    pub fn convolve(&self, other: &SizeCounts) -> SizeCounts {
        let mut out = vec![0u128; self.counts.len() + other.counts.len() - 1];
        for (i, a) in self.counts.iter().enumerate() {
            for (j, b) in other.counts.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        SizeCounts::new(out)
    }
}

pub fn count_independent_sets_by_size(g: &MultiGraph, guard: Guard) -> Result<SizeCounts> {
    guard.check("vertex count", g.vertex_count, MAX_INDEPENDENT_SET_VERTICES)?;
    let adj = g.neighbor_masks()?;
    let all = full_mask(g.vertex_count);
    let mut memo = HashMap::new();
    Ok(SizeCounts::new(independence_rec(&adj, all, &mut memo)))
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// I(G[mask]) = I(G[mask − v]) + x·I(G[mask − N[v]]), branching on a
/// maximum-degree vertex.
fn independence_rec(adj: &[u64], mask: u64, memo: &mut HashMap<u64, Vec<u128>>) -> Vec<u128> {
    if mask == 0 {
        return vec![1];
    }
    if let Some(hit) = memo.get(&mask) {
        return hit.clone();
    }
    let mut best = (0u32, 0usize);
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & mask).count_ones();
        if d >= best.0 {
            best = (d, v);
        }
    }
    let out = if best.0 == 0 {
        // Only isolated vertices remain: binomial row.
        let k = mask.count_ones() as usize;
        let mut row = vec![1u128; k + 1];
        for i in 1..=k {
            row[i] = row[i - 1] * (k - i + 1) as u128 / i as u128;
        }
        row
    } else {
        let v = best.1;
        let without = independence_rec(adj, mask & !(1 << v), memo);
        let with = independence_rec(adj, mask & !(1 << v) & !adj[v], memo);
        let mut out = vec![0u128; without.len().max(with.len() + 1)];
        for (i, c) in without.into_iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in with.into_iter().enumerate() {
            out[i + 1] += c;
        }
        out
    };
    memo.insert(mask, out.clone());
    out
}

/// Calls `visit` with the bitmask of every independent set, in DFS order.
pub fn for_each_independent_set(
    g: &MultiGraph,
    guard: Guard,
    mut visit: impl FnMut(u64),
) -> Result<()> {
    guard.check("vertex count", g.vertex_count, MAX_INDEPENDENT_SET_VERTICES)?;
    let adj = g.neighbor_masks()?;
    fn rec(adj: &[u64], next: usize, current: u64, blocked: u64, visit: &mut dyn FnMut(u64)) {
        visit(current);
        for v in next..adj.len() {
            if blocked >> v & 1 == 0 {
                rec(adj, v + 1, current | 1 << v, blocked | adj[v], visit);
            }
        }
    }
    rec(&adj, 0, 0, 0, &mut visit);
    Ok(())
}

/// Σ_k i_k(g)·λ^k.
pub fn hardcore_partition(g: &MultiGraph, fugacity: &Rational, guard: Guard) -> Result<Rational> {
    let counts = count_independent_sets_by_size(g, guard)?;
    Ok(counts
        .counts()
        .iter()
        .enumerate()
        .map(|(k, &c)| rational::from_u128(c) * rational::pow(fugacity, k))
        .sum())
}

/// Maximum total weight of a vertex independent set; ties go to the
/// first set found in canonical DFS order.
pub fn max_weight_independent_set(
    g: &MultiGraph,
    weights: &[Rational],
    guard: Guard,
) -> Result<(Vec<usize>, Rational)> {
    if weights.len() != g.vertex_count {
        return Err(Error::invalid(format!(
            "{} vertex weights for {} vertices",
            weights.len(),
            g.vertex_count
        )));
    }
    let mut best: Option<(u64, Rational)> = None;
    for_each_independent_set(g, guard, |mask| {
        let w: Rational = (0..g.vertex_count)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| weights[v].clone())
            .sum();
        if best.as_ref().is_none_or(|(_, b)| w > *b) {
            best = Some((mask, w));
        }
    })?;
    let (mask, w) = best.expect("the empty set is always independent");
    Ok(((0..g.vertex_count).filter(|&v| mask >> v & 1 == 1).collect(), w))
}

/// Counts G-parking functions relative to `root`.
///
/// Candidates `f(v) < deg(v)` are enumerated exhaustively and each is
/// tested with Dhar's burning procedure, which is equivalent to the
/// every-subset condition.
pub fn count_g_parking_functions(g: &MultiGraph, root: usize, guard: Guard) -> Result<u64> {
    if root >= g.vertex_count {
        return Err(Error::invalid(format!("root {root} out of range")));
    }
    if !g.is_connected() {
        return Err(Error::precondition("graph must be connected"));
    }
    let others: Vec<usize> = (0..g.vertex_count).filter(|&v| v != root).collect();
    guard.check("non-root vertex count", others.len(), MAX_PARKING_NON_ROOT)?;
    let n = g.vertex_count;
    let mut mult = vec![vec![0usize; n]; n];
    for &(u, v) in &g.edges {
        mult[u][v] += 1;
        mult[v][u] += 1;
    }
    let degree: Vec<usize> = (0..n).map(|v| mult[v].iter().sum()).collect();
    let mut f = vec![0usize; n];
    let mut count = 0u64;
    loop {
        if burns_completely(&mult, root, &f) {
            count += 1;
        }
        // Odometer over f(v) in 0..deg(v).
        let mut i = 0;
        loop {
            if i == others.len() {
                return Ok(count);
            }
            let v = others[i];
            f[v] += 1;
            if f[v] < degree[v] {
                break;
            }
            f[v] = 0;
            i += 1;
        }
    }
}

fn burns_completely(mult: &[Vec<usize>], root: usize, f: &[usize]) -> bool {
    let n = mult.len();
    let mut burnt = vec![false; n];
    burnt[root] = true;
    let mut remaining = n - 1;
    loop {
        let mut progress = false;
        for v in 0..n {
            if burnt[v] {
                continue;
            }
            let to_burnt: usize = (0..n).filter(|&w| burnt[w]).map(|w| mult[v][w]).sum();
            if f[v] < to_burnt {
                burnt[v] = true;
                remaining -= 1;
                progress = true;
            }
        }
        if remaining == 0 {
            return true;
        }
        if !progress {
            return false;
        }
    }
}
