//! Apex gadget whose link at `τ = {e_{v,i}}` has a sparse cut.
//!
//! Edge ids: `e₀ = 0`, the base edges `1..=|E|`, then `e_{v,i}` and
//! `f_{v,i}` in `(v, i)` order. Vertex ids: the base vertices, `z`, `y`,
//! then `z_{v,i}`.

use std::collections::BTreeMap;

use num::{BigInt, One};

use super::{GadgetInstance, MAX_GADGET_GROUND};
use crate::chain::{conductance, down_up_matrix, neighbor_ratio, spectral_gap, FacetComplex};
use crate::error::{Error, Guard, Result};
use crate::graph::MultiGraph;
use crate::matroid::Matroid;
use crate::nbc::NbcComplex;
use crate::rational::{self, Rational};

pub fn build_link_gadget(base: &MultiGraph, l: usize, m: usize, guard: Guard) -> Result<GadgetInstance> {
    let n = base.vertex_count();
    if l == 0 {
        return Err(Error::invalid("link gadget needs l >= 1"));
    }
    if m > n {
        return Err(Error::precondition(format!("target size {m} exceeds {n} vertices")));
    }
    let ground = 1 + base.edge_count() + 2 * n * l;
    guard.check("gadget ground size", ground, MAX_GADGET_GROUND)?;

    let (z, y) = (n, n + 1);
    let sub = |v: usize, i: usize| n + 2 + v * l + i;
    let mut edges = Vec::with_capacity(ground);
    edges.push((y, z));
    edges.extend_from_slice(base.edges());
    for v in 0..n {
        for i in 0..l {
            edges.push((z, sub(v, i)));
        }
    }
    for v in 0..n {
        for i in 0..l {
            edges.push((sub(v, i), v));
        }
    }
    let graph = MultiGraph::new(n + 2 + n * l, edges)?;

    let e_start = 1 + base.edge_count();
    let f_start = e_start + n * l;
    let rank = l * n + m + 1;
    let matroid = Matroid::graphic(graph.clone()).truncate(rank)?;
    let complex = NbcComplex::with_identity_order(matroid);
    let tau: Vec<usize> = (e_start..f_start).collect();

    let mut marked = BTreeMap::new();
    marked.insert("e0".to_string(), vec![0]);
    marked.insert("E".to_string(), (1..e_start).collect());
    marked.insert("e".to_string(), tau.clone());
    marked.insert("f".to_string(), (f_start..ground).collect());
    if let Some(side) = base.bipartition() {
        let block = |want: bool| -> Vec<usize> {
            (0..n)
                .filter(|&v| side[v] == want)
                .flat_map(|v| (0..l).map(move |i| f_start + v * l + i))
                .collect()
        };
        marked.insert("F_A".to_string(), block(false));
        marked.insert("F_B".to_string(), block(true));
    }
    let mut params = BTreeMap::new();
    for (k, v) in [("n", n), ("l", l), ("m", m), ("truncation_rank", rank)] {
        params.insert(k.to_string(), rational::int(v as i64));
    }
    Ok(GadgetInstance {
        graph,
        complex,
        tau,
        marked,
        params,
        warnings: Vec::new(),
    })
}

/// Link facets grouped by how many `F_A` / `F_B` elements they hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkPartition {
    /// `i ↦` indices of facets with `|S ∩ F_A| = i ≥ 1`.
    pub s_a: BTreeMap<usize, Vec<usize>>,
    pub s_b: BTreeMap<usize, Vec<usize>>,
    pub s_0: Vec<usize>,
    pub part_a: usize,
    pub part_b: usize,
}

impl LinkPartition {
    pub fn s_a_len(&self, i: usize) -> usize {
        self.s_a.get(&i).map_or(0, Vec::len)
    }

    pub fn s_b_len(&self, i: usize) -> usize {
        self.s_b.get(&i).map_or(0, Vec::len)
    }

    /// All facets meeting `F_A`.
    pub fn s_a_union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.s_a.values().flatten().copied().collect();
        all.sort_unstable();
        all
    }
}

/// Checks, in order: no facet meets both `F_A` and `F_B`; every facet
/// holds `e₀`; `|𝒮_{A,m}| = C(|A|, m)·ℓ^m`; `|𝒮₀| ≤ C(|E|, m)`;
/// `|𝒮_{B,1}| ≤ |B|·ℓ·C(|E|, m−1)`.
pub fn partition_link_facets(inst: &GadgetInstance, facets: &[Vec<usize>]) -> Result<LinkPartition> {
    let (Some(fa), Some(fb)) = (inst.marked("F_A"), inst.marked("F_B")) else {
        return Err(Error::precondition("link partition needs a bipartite base graph"));
    };
    let param = |k: &str| -> usize {
        inst.param(k)
            .and_then(|r| r.to_integer().try_into().ok())
            .unwrap_or(0)
    };
    let (l, m, n) = (param("l"), param("m"), param("n"));
    let edges = inst.marked("E").map_or(0, <[usize]>::len);
    let part_a = fa.len() / l.max(1);
    let part_b = n - part_a;

    let mut out = LinkPartition {
        s_a: BTreeMap::new(),
        s_b: BTreeMap::new(),
        s_0: Vec::new(),
        part_a,
        part_b,
    };
    for (idx, s) in facets.iter().enumerate() {
        let a = s.iter().filter(|e| fa.contains(e)).count();
        let b = s.iter().filter(|e| fb.contains(e)).count();
        if a > 0 && b > 0 {
            return Err(Error::precondition(format!("facet {s:?} meets both F_A and F_B")));
        }
        if !s.contains(&0) {
            return Err(Error::precondition(format!("facet {s:?} misses e0")));
        }
        match (a, b) {
            (0, 0) => out.s_0.push(idx),
            (a, 0) => out.s_a.entry(a).or_default().push(idx),
            (_, b) => out.s_b.entry(b).or_default().push(idx),
        }
    }

    let big = |v: usize| BigInt::from(v);
    let expect_a = rational::binomial(part_a, m) * num::pow(big(l), m);
    if big(out.s_a_len(m)) != expect_a {
        return Err(Error::precondition(format!(
            "|S_A,{m}| = {} but expected {expect_a}",
            out.s_a_len(m)
        )));
    }
    let bound_0 = rational::binomial(edges, m);
    if big(out.s_0.len()) > bound_0 {
        return Err(Error::precondition(format!(
            "|S_0| = {} exceeds C(|E|, m) = {bound_0}; first offender {:?}",
            out.s_0.len(),
            facets[out.s_0[0]]
        )));
    }
    if m >= 1 {
        let bound_b1 = big(part_b * l) * rational::binomial(edges, m - 1);
        if big(out.s_b_len(1)) > bound_b1 {
            return Err(Error::precondition(format!(
                "|S_B,1| = {} exceeds {bound_b1}; first offender {:?}",
                out.s_b_len(1),
                facets[out.s_b[&1][0]]
            )));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GapCertificate {
    pub facet_count: usize,
    pub s_a_len: usize,
    pub measured_gap: f64,
    pub conductance: Rational,
    pub neighbor_ratio: Rational,
    /// `n^{2n}(1+ℓ)/ℓ^n`.
    pub mixing_bound: Rational,
    /// `|𝒮_A| ≤ half the facets`, the regime in which the chain applies.
    pub half_condition: bool,
    /// `gap/2 ≤ φ(𝒮_A)`.
    pub cheeger_holds: bool,
    /// `gap ≤ φ(𝒮_A)`, the form without the factor 2.
    pub uncorrected_holds: bool,
    pub partition: LinkPartition,
}

pub fn gap_certificate(inst: &GadgetInstance, guard: Guard) -> Result<GapCertificate> {
    let facets = inst.complex.link_facets(&inst.tau, guard)?;
    let c = FacetComplex::new(facets)?;
    let partition = partition_link_facets(inst, c.facets())?;
    let p = down_up_matrix(&c);
    let gap = spectral_gap(&p)?;
    let s_a = partition.s_a_union();
    let half_condition = 2 * s_a.len() <= c.len();
    if s_a.is_empty() || s_a.len() == c.len() {
        return Err(Error::precondition("S_A must be a nonempty proper subset of the link facets"));
    }
    let phi = conductance(&p, &s_a)?;
    let ratio = neighbor_ratio(&p, &s_a)?;

    let param = |k: &str| inst.param(k).cloned().unwrap_or_else(Rational::one);
    let n = partition.part_a;
    let l = param("l");
    let mixing_bound = rational::pow(&rational::int(n as i64), 2 * n) * (Rational::one() + &l)
        / rational::pow(&l, n);

    let phi_f = rational::to_f64(&phi);
    let cheeger_holds = gap / 2.0 <= phi_f + 1e-12 && phi <= ratio;
    if half_condition && !cheeger_holds {
        return Err(Error::precondition(format!(
            "chain gap/2 <= phi <= ratio fails: gap {gap}, phi {phi_f}, ratio {}",
            rational::to_f64(&ratio)
        )));
    }
    Ok(GapCertificate {
        facet_count: c.len(),
        s_a_len: s_a.len(),
        measured_gap: gap,
        uncorrected_holds: gap <= phi_f + 1e-12,
        conductance: phi,
        neighbor_ratio: ratio,
        mixing_bound,
        half_condition,
        cheeger_holds,
        partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named_graph, NamedGraph};
    use crate::matroid::MatroidOracle;

    fn k22() -> MultiGraph {
        build_named_graph(&NamedGraph::CompleteBipartite(2, 2)).unwrap()
    }

    #[test]
    fn k22_layout() {
        let inst = build_link_gadget(&k22(), 2, 2, Guard::Enforce).unwrap();
        assert_eq!(inst.matroid().ground_size(), 21);
        assert_eq!(inst.matroid().rank(), 11);
        assert_eq!(inst.tau.len(), 8);
        assert!(inst.complex.is_nbc(&inst.tau).unwrap());
        assert!(inst.respects_blocks(&["e0", "E", "e", "f"]));
        let facets = inst.complex.link_facets(&inst.tau, Guard::Enforce).unwrap();
        assert!(facets.iter().all(|s| s.len() == 3));
    }

    #[test]
    fn c5_counting_rank() {
        let c5 = build_named_graph(&NamedGraph::Cycle(5)).unwrap();
        let inst = build_link_gadget(&c5, 20, 2, Guard::Enforce).unwrap();
        assert_eq!(inst.matroid().rank(), 103);
        assert!(inst.marked("F_A").is_none());
    }

    #[test]
    fn minimal_instance() {
        let g = build_named_graph(&NamedGraph::Path(2)).unwrap();
        let inst = build_link_gadget(&g, 1, 1, Guard::Enforce).unwrap();
        assert_eq!(inst.tau.len(), 2);
        assert!(inst.complex.is_nbc(&inst.tau).unwrap());
    }

    #[test]
    fn k22_partition_counts() {
        for (l, expect) in [(2, 4), (4, 16)] {
            let inst = build_link_gadget(&k22(), l, 2, Guard::Enforce).unwrap();
            let facets = inst.complex.link_facets(&inst.tau, Guard::Enforce).unwrap();
            let part = partition_link_facets(&inst, &facets).unwrap();
            assert_eq!(part.s_a_len(2), expect);
        }
    }

    #[test]
    fn mixing_bound_arithmetic() {
        let inst = build_link_gadget(&k22(), 2, 2, Guard::Enforce).unwrap();
        let cert = gap_certificate(&inst, Guard::Enforce).unwrap();
        assert_eq!(cert.mixing_bound, rational::int(12));
        let inst8 = build_link_gadget(&k22(), 8, 2, Guard::Enforce).unwrap();
        let cert8 = gap_certificate(&inst8, Guard::Enforce).unwrap();
        assert_eq!(cert8.mixing_bound, rational::frac(9, 4));
        assert!(cert8.measured_gap < cert.measured_gap);
    }
}
