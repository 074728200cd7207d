//! Graphic and truncated-graphic matroids behind an independence oracle.

use crate::error::{Error, Guard, Result};
use crate::graph::{MultiGraph, RootedForest, UnionFind};

pub const MAX_BASES: usize = 1_000_000;

/// The queries the NBC machinery needs. Sets are slices of distinct
/// element ids in any order; outputs are sorted.
pub trait MatroidOracle {
    fn ground_size(&self) -> usize;

    fn rank(&self) -> usize;

    fn is_independent(&self, s: &[usize]) -> Result<bool>;

    fn rank_of(&self, s: &[usize]) -> Result<usize>;

    /// The unique circuit in `s ∪ {e}`, or `None` if that set is
    /// independent. `s` must be independent and must not contain `e`.
    fn fundamental_circuit(&self, s: &[usize], e: usize) -> Result<Option<Vec<usize>>>;

    /// `flags[e]` is true iff `rank(s ∪ {e}) = rank(s)`.
    fn closure(&self, s: &[usize]) -> Result<Vec<bool>>;

    /// Calls `visit(e, circuit)` for each `e ∉ s` (ascending) whose
    /// addition to the independent set `s` creates a circuit. Stops early
    /// and returns `false` as soon as `visit` does.
    fn for_each_fundamental_circuit(
        &self,
        s: &[usize],
        visit: &mut dyn FnMut(usize, &[usize]) -> bool,
    ) -> Result<bool> {
        let mut member = vec![false; self.ground_size()];
        for &x in s {
            member[x] = true;
        }
        for (e, &inside) in member.iter().enumerate() {
            if inside {
                continue;
            }
            if let Some(c) = self.fundamental_circuit(s, e)? {
                if !visit(e, &c) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// For a truncation strictly below its inner rank, the inner matroid.
    /// Enumerators use it to prune branches that can only end in a set
    /// whose `r′+1` extension by a smaller element is independent inside.
    fn truncation_inner(&self) -> Option<&dyn MatroidOracle> {
        None
    }

    fn check_set(&self, s: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.ground_size()];
        for &e in s {
            if e >= self.ground_size() {
                return Err(Error::invalid(format!(
                    "element {e} out of range 0..{}",
                    self.ground_size()
                )));
            }
            if seen[e] {
                return Err(Error::invalid(format!("element {e} repeated")));
            }
            seen[e] = true;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Graphic(MultiGraph),
    Truncated(Box<Matroid>),
}

/// A graphic matroid, or a truncation of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    kind: Kind,
    rank: usize,
}

impl Matroid {
    pub fn graphic(g: MultiGraph) -> Self {
        let rank = g.vertex_count() - g.component_count();
        Matroid {
            kind: Kind::Graphic(g),
            rank,
        }
    }

    /// Truncation to rank `r′ ≤ rank`.
    pub fn truncate(self, rank: usize) -> Result<Self> {
        if rank > self.rank {
            return Err(Error::invalid(format!(
                "cannot truncate a rank-{} matroid to rank {rank}",
                self.rank
            )));
        }
        Ok(Matroid {
            kind: Kind::Truncated(Box::new(self)),
            rank,
        })
    }

    /// The underlying graph, through any number of truncations.
    pub fn graph(&self) -> &MultiGraph {
        match &self.kind {
            Kind::Graphic(g) => g,
            Kind::Truncated(inner) => inner.graph(),
        }
    }

    pub fn inner(&self) -> Option<&Matroid> {
        match &self.kind {
            Kind::Graphic(_) => None,
            Kind::Truncated(inner) => Some(inner),
        }
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self.kind, Kind::Truncated(_))
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

impl MatroidOracle for Matroid {
    fn ground_size(&self) -> usize {
        self.graph().edge_count()
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn is_independent(&self, s: &[usize]) -> Result<bool> {
        self.check_set(s)?;
        Ok(match &self.kind {
            Kind::Graphic(g) => RootedForest::build(g, s).is_some(),
            Kind::Truncated(inner) => s.len() <= self.rank && inner.is_independent(s)?,
        })
    }

    fn rank_of(&self, s: &[usize]) -> Result<usize> {
        self.check_set(s)?;
        Ok(match &self.kind {
            Kind::Graphic(g) => {
                let mut uf = UnionFind::new(g.vertex_count());
                s.iter()
                    .filter(|&&e| {
                        let (u, v) = g.endpoints(e);
                        uf.union(u, v)
                    })
                    .count()
            }
            Kind::Truncated(inner) => inner.rank_of(s)?.min(self.rank),
        })
    }

    fn fundamental_circuit(&self, s: &[usize], e: usize) -> Result<Option<Vec<usize>>> {
        if e >= self.ground_size() {
            return Err(Error::invalid(format!("element {e} out of range")));
        }
        if s.contains(&e) {
            return Err(Error::precondition(format!("element {e} already in the set")));
        }
        if !self.is_independent(s)? {
            return Err(Error::precondition("base set is dependent"));
        }
        match &self.kind {
            Kind::Graphic(g) => {
                let forest = RootedForest::build(g, s).expect("checked independent");
                let (u, v) = g.endpoints(e);
                Ok(forest.path(u, v).map(|mut c| {
                    c.push(e);
                    sorted(c)
                }))
            }
            Kind::Truncated(inner) => match inner.fundamental_circuit(s, e)? {
                Some(c) => Ok(Some(c)),
                None if s.len() + 1 > self.rank => {
                    let mut c = s.to_vec();
                    c.push(e);
                    Ok(Some(sorted(c)))
                }
                None => Ok(None),
            },
        }
    }

    fn closure(&self, s: &[usize]) -> Result<Vec<bool>> {
        self.check_set(s)?;
        match &self.kind {
            Kind::Graphic(g) => {
                let mut uf = UnionFind::new(g.vertex_count());
                for &e in s {
                    let (u, v) = g.endpoints(e);
                    uf.union(u, v);
                }
                Ok(g.edges()
                    .iter()
                    .map(|&(u, v)| uf.find(u) == uf.find(v))
                    .collect())
            }
            Kind::Truncated(inner) => {
                if inner.rank_of(s)? >= self.rank {
                    Ok(vec![true; self.ground_size()])
                } else {
                    inner.closure(s)
                }
            }
        }
    }

    fn for_each_fundamental_circuit(
        &self,
        s: &[usize],
        visit: &mut dyn FnMut(usize, &[usize]) -> bool,
    ) -> Result<bool> {
        if !self.is_independent(s)? {
            return Err(Error::precondition("base set is dependent"));
        }
        match &self.kind {
            Kind::Graphic(g) => {
                let forest = RootedForest::build(g, s).expect("checked independent");
                let mut member = vec![false; g.edge_count()];
                for &x in s {
                    member[x] = true;
                }
                for (e, &(u, v)) in g.edges().iter().enumerate() {
                    if member[e] {
                        continue;
                    }
                    if let Some(mut c) = forest.path(u, v) {
                        c.push(e);
                        if !visit(e, &c) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Kind::Truncated(inner) => {
                let mut inner_circuits: Vec<Option<Vec<usize>>> = vec![None; self.ground_size()];
                inner.for_each_fundamental_circuit(s, &mut |e, c| {
                    inner_circuits[e] = Some(c.to_vec());
                    true
                })?;
                let saturated = s.len() == self.rank;
                let mut member = vec![false; self.ground_size()];
                for &x in s {
                    member[x] = true;
                }
                let mut whole = s.to_vec();
                for e in 0..self.ground_size() {
                    if member[e] {
                        continue;
                    }
                    let keep_going = match &inner_circuits[e] {
                        Some(c) => visit(e, c),
                        None if saturated => {
                            whole.push(e);
                            let go = visit(e, &whole);
                            whole.pop();
                            go
                        }
                        None => true,
                    };
                    if !keep_going {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn truncation_inner(&self) -> Option<&dyn MatroidOracle> {
        match &self.kind {
            Kind::Truncated(inner) if self.rank < inner.rank => Some(inner.as_ref()),
            _ => None,
        }
    }
}

/// All bases in lexicographic order.
pub fn enumerate_bases<M: MatroidOracle + ?Sized>(m: &M, guard: Guard) -> Result<Vec<Vec<usize>>> {
    let ground: Vec<usize> = (0..m.ground_size()).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    bases_rec(m, &ground, 0, &mut current, &mut out, guard)?;
    Ok(out)
}

fn bases_rec<M: MatroidOracle + ?Sized>(
    m: &M,
    ground: &[usize],
    next: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    guard: Guard,
) -> Result<()> {
    if current.len() == m.rank() {
        guard.check("base count", out.len() + 1, MAX_BASES)?;
        out.push(current.clone());
        return Ok(());
    }
    for i in next..ground.len() {
        current.push(ground[i]);
        if m.is_independent(current)? {
            let mut reach = current.clone();
            reach.extend_from_slice(&ground[i + 1..]);
            if m.rank_of(&reach)? == m.rank() {
                bases_rec(m, ground, i + 1, current, out, guard)?;
            }
        }
        current.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named_graph, NamedGraph};

    fn k(n: usize) -> Matroid {
        Matroid::graphic(build_named_graph(&NamedGraph::Complete(n)).unwrap())
    }

    #[test]
    fn independence() {
        assert!(k(3).is_independent(&[0, 1]).unwrap());
        assert!(!k(3).is_independent(&[0, 1, 2]).unwrap());
        let t = k(3).truncate(1).unwrap();
        assert!(!t.is_independent(&[0, 1]).unwrap());
        assert!(t.is_independent(&[2]).unwrap());
        assert!(k(3).is_independent(&[3]).is_err());
        assert!(k(3).is_independent(&[1, 1]).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(k(3).rank_of(&[0, 1, 2]).unwrap(), 2);
        assert_eq!(k(3).rank_of(&[]).unwrap(), 0);
        assert_eq!(k(3).truncate(1).unwrap().rank_of(&[0, 1, 2]).unwrap(), 1);
        assert_eq!(k(4).rank(), 3);
        assert!(k(3).truncate(3).is_err());
    }

    #[test]
    fn circuits() {
        assert_eq!(k(3).fundamental_circuit(&[0, 1], 2).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(k(3).fundamental_circuit(&[0], 1).unwrap(), None);
        // K4 edges: 0=(0,1) 1=(0,2) 2=(0,3) 3=(1,2) 4=(1,3) 5=(2,3).
        let t = k(4).truncate(2).unwrap();
        assert_eq!(t.fundamental_circuit(&[0, 5], 1).unwrap(), Some(vec![0, 1, 5]));
        // Inner triangle {0,1,3} wins when the inner extension is dependent.
        assert_eq!(t.fundamental_circuit(&[0, 1], 3).unwrap(), Some(vec![0, 1, 3]));
        assert!(k(3).fundamental_circuit(&[0, 1, 2], 0).is_err());
        assert!(k(3).fundamental_circuit(&[0, 1], 1).is_err());
    }

    #[test]
    fn closures() {
        assert_eq!(k(3).closure(&[0, 1]).unwrap(), vec![true, true, true]);
        assert_eq!(k(3).closure(&[0]).unwrap(), vec![true, false, false]);
        let t = k(4).truncate(1).unwrap();
        assert_eq!(t.closure(&[0]).unwrap(), vec![true; 6]);
    }

    #[test]
    fn circuit_visitor_matches_single_queries() {
        let t = k(4).truncate(2).unwrap();
        let s = [0, 5];
        let mut seen = Vec::new();
        t.for_each_fundamental_circuit(&s, &mut |e, c| {
            let mut c = c.to_vec();
            c.sort_unstable();
            seen.push((e, c));
            true
        })
        .unwrap();
        let expected: Vec<_> = (0..6)
            .filter(|e| !s.contains(e))
            .filter_map(|e| t.fundamental_circuit(&s, e).unwrap().map(|c| (e, c)))
            .collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn bases() {
        assert_eq!(
            enumerate_bases(&k(3), Guard::Enforce).unwrap(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(
            enumerate_bases(&k(3).truncate(1).unwrap(), Guard::Enforce).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        let path = Matroid::graphic(build_named_graph(&NamedGraph::Path(3)).unwrap());
        assert_eq!(enumerate_bases(&path, Guard::Enforce).unwrap(), vec![vec![0, 1]]);
        assert_eq!(enumerate_bases(&k(5), Guard::Enforce).unwrap().len(), 125);
    }
}
