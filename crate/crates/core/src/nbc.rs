//! Broken circuits, NBC sets, and the broken circuit complex.
//!
//! Membership is decided with fundamental circuits: an independent set `s`
//! contains a broken circuit iff some `e ∉ s` closes a circuit whose
//! smallest element is `e` itself. The exponential definition is kept as
//! [`BruteForceOracle`] so the shortcut can be checked against it.

use crate::error::{Error, Guard, Result};
use crate::matroid::{Matroid, MatroidOracle};

pub const MAX_NBC_BASES: usize = 1_000_000;
pub const MAX_FACES: usize = 5_000_000;
pub const MAX_BRUTEFORCE_GROUND: usize = 14;

/// Total order on the ground set; `ranking()[0]` is the smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementOrder {
    ranking: Vec<usize>,
    position: Vec<usize>,
}

impl ElementOrder {
    pub fn identity(m: usize) -> Self {
        ElementOrder {
            ranking: (0..m).collect(),
            position: (0..m).collect(),
        }
    }

    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let m = ranking.len();
        let mut position = vec![usize::MAX; m];
        for (p, &e) in ranking.iter().enumerate() {
            if e >= m || position[e] != usize::MAX {
                return Err(Error::invalid(format!(
                    "order is not a permutation of 0..{m} (bad entry {e})"
                )));
            }
            position[e] = p;
        }
        Ok(ElementOrder { ranking, position })
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn position(&self, e: usize) -> usize {
        self.position[e]
    }

    /// Smallest element of a nonempty set.
    pub fn min_of(&self, s: &[usize]) -> Option<usize> {
        s.iter().copied().min_by_key(|&e| self.position[e])
    }
}

/// `counts()[k]` = number of NBC sets of cardinality k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceNumbers {
    counts: Vec<u64>,
}

impl FaceNumbers {
    pub fn new(counts: Vec<u64>) -> Self {
        FaceNumbers { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// n_i² ≥ n_{i−1}·n_{i+1} for every interior index.
pub fn is_log_concave(f: &FaceNumbers) -> bool {
    f.counts
        .windows(3)
        .all(|w| (w[1] as u128) * (w[1] as u128) >= (w[0] as u128) * (w[2] as u128))
}

/// The broken circuit complex NBC(M, order).
#[derive(Debug, Clone)]
pub struct NbcComplex<M = Matroid> {
    matroid: M,
    order: ElementOrder,
}

impl<M: MatroidOracle> NbcComplex<M> {
    pub fn new(matroid: M, order: ElementOrder) -> Result<Self> {
        if order.len() != matroid.ground_size() {
            return Err(Error::invalid(format!(
                "order covers {} elements, ground set has {}",
                order.len(),
                matroid.ground_size()
            )));
        }
        Ok(NbcComplex { matroid, order })
    }

    pub fn with_identity_order(matroid: M) -> Self {
        let order = ElementOrder::identity(matroid.ground_size());
        NbcComplex { matroid, order }
    }

    pub fn matroid(&self) -> &M {
        &self.matroid
    }

    pub fn order(&self) -> &ElementOrder {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank()
    }

    pub fn is_nbc(&self, s: &[usize]) -> Result<bool> {
        if !self.matroid.is_independent(s)? {
            return Ok(false);
        }
        let order = &self.order;
        self.matroid.for_each_fundamental_circuit(s, &mut |e, circuit| {
            order.min_of(circuit) != Some(e)
        })
    }

    /// All facets (NBC bases), lexicographic.
    pub fn enumerate_nbc_bases(&self, guard: Guard) -> Result<Vec<Vec<usize>>> {
        self.link_facets(&[], guard)
    }

    /// `σ ∖ τ` for every NBC base `σ ⊇ τ`, lexicographic.
    pub fn link_facets(&self, tau: &[usize], guard: Guard) -> Result<Vec<Vec<usize>>> {
        if !self.is_nbc(tau)? {
            return Err(Error::precondition(format!("{tau:?} is not an NBC face")));
        }
        let mut in_tau = vec![false; self.matroid.ground_size()];
        for &e in tau {
            in_tau[e] = true;
        }
        let candidates: Vec<usize> = self
            .order
            .ranking()
            .iter()
            .copied()
            .filter(|&e| !in_tau[e])
            .collect();
        let tau_min = tau.iter().map(|&e| self.order.position(e)).min();
        let mut search = LinkSearch {
            complex: self,
            candidates,
            tau_len: tau.len(),
            out: Vec::new(),
            guard,
        };
        let mut current = tau.to_vec();
        search.descend(0, &mut current, tau_min)?;
        let mut out = search.out;
        out.sort();
        Ok(out)
    }

    pub fn face_numbers(&self, guard: Guard) -> Result<FaceNumbers> {
        let mut counts = vec![0u64; self.rank() + 1];
        self.walk_faces(guard, &mut |face| counts[face.len()] += 1)?;
        Ok(FaceNumbers { counts })
    }

    /// Every NBC set (including ∅), each sorted; canonical order.
    pub fn enumerate_faces(&self, guard: Guard) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.walk_faces(guard, &mut |face| {
            let mut f = face.to_vec();
            f.sort_unstable();
            out.push(f);
        })?;
        out.sort();
        Ok(out)
    }

    fn walk_faces(&self, guard: Guard, visit: &mut dyn FnMut(&[usize])) -> Result<()> {
        let ranking = self.order.ranking().to_vec();
        let mut current = Vec::new();
        let mut seen = 0usize;
        self.faces_rec(&ranking, 0, &mut current, &mut seen, guard, visit)
    }

    fn faces_rec(
        &self,
        ranking: &[usize],
        next: usize,
        current: &mut Vec<usize>,
        seen: &mut usize,
        guard: Guard,
        visit: &mut dyn FnMut(&[usize]),
    ) -> Result<()> {
        *seen += 1;
        guard.check("NBC face count", *seen, MAX_FACES)?;
        visit(current);
        if current.len() == self.rank() {
            return Ok(());
        }
        for i in next..ranking.len() {
            current.push(ranking[i]);
            if self.is_nbc(current)? {
                self.faces_rec(ranking, i + 1, current, seen, guard, visit)?;
            }
            current.pop();
        }
        Ok(())
    }

    /// An NBC base containing `i`: the lexicographically smallest one,
    /// found by backtracking over additions in increasing element id.
    pub fn extend_to_nbc_base(&self, i: &[usize]) -> Result<Vec<usize>> {
        if !self.is_nbc(i)? {
            return Err(Error::precondition(format!("{i:?} is not NBC")));
        }
        let mut member = vec![false; self.matroid.ground_size()];
        for &e in i {
            member[e] = true;
        }
        let candidates: Vec<usize> = (0..self.matroid.ground_size())
            .filter(|&e| !member[e])
            .collect();
        let mut current = i.to_vec();
        if self.extend_rec(&candidates, 0, &mut current)? {
            current.sort_unstable();
            Ok(current)
        } else {
            Err(Error::precondition(format!(
                "no NBC base contains {i:?} (purity violated)"
            )))
        }
    }

    fn extend_rec(&self, candidates: &[usize], next: usize, current: &mut Vec<usize>) -> Result<bool> {
        if current.len() == self.rank() {
            return Ok(true);
        }
        for idx in next..candidates.len() {
            current.push(candidates[idx]);
            if self.is_nbc(current)? {
                let mut reach = current.clone();
                reach.extend_from_slice(&candidates[idx + 1..]);
                if self.matroid.rank_of(&reach)? == self.rank()
                    && self.extend_rec(candidates, idx + 1, current)?
                {
                    return Ok(true);
                }
            }
            current.pop();
        }
        Ok(false)
    }
}

struct LinkSearch<'a, M> {
    complex: &'a NbcComplex<M>,
    /// Non-τ elements, ascending in the order.
    candidates: Vec<usize>,
    tau_len: usize,
    out: Vec<Vec<usize>>,
    guard: Guard,
}

impl<M: MatroidOracle> LinkSearch<'_, M> {
    /// `current` is τ plus chosen candidates; `min_pos` its smallest position.
    fn descend(&mut self, next: usize, current: &mut Vec<usize>, min_pos: Option<usize>) -> Result<()> {
        let rank = self.complex.rank();
        if current.len() == rank {
            self.guard
                .check("NBC base count", self.out.len() + 1, MAX_NBC_BASES)?;
            let mut facet = current[self.tau_len..].to_vec();
            facet.sort_unstable();
            self.out.push(facet);
            return Ok(());
        }
        let needed = rank - current.len();
        for i in next..self.candidates.len() {
            if self.candidates.len() - i < needed {
                break;
            }
            let x = self.candidates[i];
            let pos = self.complex.order.position(x);
            let new_min = min_pos.map_or(pos, |m| m.min(pos));
            current.push(x);
            if self.viable(current, i + 1, new_min)? {
                self.descend(i + 1, current, Some(new_min))?;
            }
            current.pop();
        }
        Ok(())
    }

    fn viable(&self, current: &[usize], later_from: usize, min_pos: usize) -> Result<bool> {
        let m = &self.complex.matroid;
        if !self.complex.is_nbc(current)? {
            return Ok(false);
        }
        let mut reach = current.to_vec();
        reach.extend_from_slice(&self.candidates[later_from..]);
        if m.rank_of(&reach)? < m.rank() {
            return Ok(false);
        }
        if let Some(inner) = m.truncation_inner() {
            // Any completion F has min position `min_pos`; an element below
            // it outside the inner span of F closes a size-(r′+1) circuit
            // whose broken part is F.
            let span = inner.closure(&reach)?;
            let order = &self.complex.order;
            let blocked = order.ranking()[..min_pos].iter().any(|&e| !span[e]);
            if blocked {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The definition of "contains a broken circuit", by exhaustive circuit
/// enumeration over all subsets of the ground set.
#[derive(Debug, Clone)]
pub struct BruteForceOracle {
    broken: Vec<Vec<usize>>,
    ground_size: usize,
}

impl BruteForceOracle {
    pub fn new<M: MatroidOracle>(x: &NbcComplex<M>, guard: Guard) -> Result<Self> {
        let m = x.matroid.ground_size();
        guard.check("ground size", m, MAX_BRUTEFORCE_GROUND)?;
        if m >= 63 {
            return Err(Error::SizeGuard {
                what: "ground size (bitmask limit)",
                actual: m,
                limit: 62,
            });
        }
        let mut broken = Vec::new();
        for mask in 1u64..(1u64 << m) {
            let set: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            if x.matroid.is_independent(&set)? {
                continue;
            }
            let mut minimal = true;
            for skip in 0..set.len() {
                let mut sub = set.clone();
                sub.remove(skip);
                if !x.matroid.is_independent(&sub)? {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                let smallest = x.order.min_of(&set).expect("circuits are nonempty");
                broken.push(set.into_iter().filter(|&e| e != smallest).collect());
            }
        }
        Ok(BruteForceOracle {
            broken,
            ground_size: m,
        })
    }

    pub fn broken_circuits(&self) -> &[Vec<usize>] {
        &self.broken
    }

    pub fn contains_broken_circuit(&self, s: &[usize]) -> Result<bool> {
        let mut member = vec![false; self.ground_size];
        for &e in s {
            if e >= self.ground_size {
                return Err(Error::invalid(format!("element {e} out of range")));
            }
            member[e] = true;
        }
        Ok(self.broken.iter().any(|b| b.iter().all(|&e| member[e])))
    }
}

pub fn contains_broken_circuit_bruteforce<M: MatroidOracle>(
    x: &NbcComplex<M>,
    s: &[usize],
    guard: Guard,
) -> Result<bool> {
    BruteForceOracle::new(x, guard)?.contains_broken_circuit(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named_graph, MultiGraph, NamedGraph};

    fn complex(kind: NamedGraph) -> NbcComplex {
        NbcComplex::with_identity_order(Matroid::graphic(build_named_graph(&kind).unwrap()))
    }

    #[test]
    fn orders() {
        let o = ElementOrder::new(vec![2, 0, 1]).unwrap();
        assert_eq!(o.position(2), 0);
        assert_eq!(o.min_of(&[0, 1]), Some(0));
        assert_eq!(o.min_of(&[0, 2]), Some(2));
        assert!(ElementOrder::new(vec![0, 0]).is_err());
        assert!(ElementOrder::new(vec![1, 2]).is_err());
    }

    #[test]
    fn membership_k3() {
        let x = complex(NamedGraph::Complete(3));
        assert!(!x.is_nbc(&[1, 2]).unwrap());
        assert!(x.is_nbc(&[0, 1]).unwrap());
        assert!(x.is_nbc(&[]).unwrap());
        assert!(x.is_nbc(&[5]).is_err());
    }

    #[test]
    fn bruteforce_k3() {
        let x = complex(NamedGraph::Complete(3));
        assert!(contains_broken_circuit_bruteforce(&x, &[1, 2], Guard::Enforce).unwrap());
        assert!(!contains_broken_circuit_bruteforce(&x, &[0, 2], Guard::Enforce).unwrap());
        let forest = complex(NamedGraph::Path(4));
        for s in [&[][..], &[0], &[0, 1, 2]] {
            assert!(!contains_broken_circuit_bruteforce(&forest, s, Guard::Enforce).unwrap());
        }
    }

    #[test]
    fn bases_and_faces() {
        let k3 = complex(NamedGraph::Complete(3));
        assert_eq!(
            k3.enumerate_nbc_bases(Guard::Enforce).unwrap(),
            vec![vec![0, 1], vec![0, 2]]
        );
        assert_eq!(k3.face_numbers(Guard::Enforce).unwrap().counts(), &[1, 3, 2]);

        let c4 = complex(NamedGraph::Cycle(4));
        let bases = c4.enumerate_nbc_bases(Guard::Enforce).unwrap();
        assert_eq!(bases.len(), 3);
        assert!(!bases.contains(&vec![1, 2, 3]));
        assert_eq!(c4.face_numbers(Guard::Enforce).unwrap().counts(), &[1, 4, 6, 3]);

        let forest = complex(NamedGraph::Path(4));
        assert_eq!(forest.enumerate_nbc_bases(Guard::Enforce).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(forest.face_numbers(Guard::Enforce).unwrap().counts(), &[1, 3, 3, 1]);
    }

    #[test]
    fn links() {
        let k3 = complex(NamedGraph::Complete(3));
        assert_eq!(k3.link_facets(&[0], Guard::Enforce).unwrap(), vec![vec![1], vec![2]]);
        assert_eq!(
            k3.link_facets(&[], Guard::Enforce).unwrap(),
            k3.enumerate_nbc_bases(Guard::Enforce).unwrap()
        );
        assert_eq!(k3.link_facets(&[0, 2], Guard::Enforce).unwrap(), vec![Vec::<usize>::new()]);
        assert!(k3.link_facets(&[1, 2], Guard::Enforce).is_err());
    }

    #[test]
    fn extension() {
        let k3 = complex(NamedGraph::Complete(3));
        assert_eq!(k3.extend_to_nbc_base(&[2]).unwrap(), vec![0, 2]);
        assert_eq!(k3.extend_to_nbc_base(&[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(k3.extend_to_nbc_base(&[]).unwrap(), vec![0, 1]);
        assert!(k3.extend_to_nbc_base(&[1, 2]).is_err());
    }

    #[test]
    fn log_concavity() {
        assert!(is_log_concave(&FaceNumbers::new(vec![1, 3, 2])));
        assert!(!is_log_concave(&FaceNumbers::new(vec![1, 1, 2])));
        assert!(is_log_concave(&FaceNumbers::new(vec![1, 4, 6, 3])));
    }

    #[test]
    fn non_identity_order_changes_bases_not_counts() {
        let g = build_named_graph(&NamedGraph::Complete(3)).unwrap();
        let x = NbcComplex::new(Matroid::graphic(g), ElementOrder::new(vec![2, 1, 0]).unwrap())
            .unwrap();
        assert_eq!(
            x.enumerate_nbc_bases(Guard::Enforce).unwrap(),
            vec![vec![0, 2], vec![1, 2]]
        );
        assert_eq!(x.face_numbers(Guard::Enforce).unwrap().counts(), &[1, 3, 2]);
    }

    #[test]
    fn parallel_edges() {
        let g = MultiGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let x = NbcComplex::with_identity_order(Matroid::graphic(g));
        assert!(!x.is_nbc(&[1]).unwrap());
        assert_eq!(x.face_numbers(Guard::Enforce).unwrap().counts(), &[1, 1]);
    }

    #[test]
    fn truncated_faces() {
        // K4 truncated to rank 2: NBC faces are the rank-≤2 NBC sets of K4
        // except that a 2-set is a base only if no smaller element extends it.
        let g = build_named_graph(&NamedGraph::Complete(4)).unwrap();
        let t = NbcComplex::with_identity_order(Matroid::graphic(g).truncate(2).unwrap());
        let bases = t.enumerate_nbc_bases(Guard::Enforce).unwrap();
        assert!(bases.iter().all(|b| b.contains(&0)));
        let oracle = BruteForceOracle::new(&t, Guard::Enforce).unwrap();
        for b in &bases {
            assert!(!oracle.contains_broken_circuit(b).unwrap());
        }
    }
}
