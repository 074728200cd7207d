//! Apex reductions from independent-set problems to NBC bases.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::{build_link_gadget, nbc_partition_function, GadgetInstance, WeightVector, MAX_GADGET_GROUND};
use crate::error::{Error, Guard, Result};
use crate::graph::{count_independent_sets_by_size, MultiGraph};
use crate::matroid::Matroid;
use crate::nbc::NbcComplex;
use crate::rational::{self, Rational};

/// Default density `α` of the counting reduction; the target size is
/// `⌊α·|V|⌋` unless given explicitly.
pub const ALPHA: (usize, usize) = (2, 19);

pub fn default_target_size(vertices: usize) -> usize {
    vertices * ALPHA.0 / ALPHA.1
}

/// `g` plus an apex `z = |V|`; edge ids keep `E` first, then
/// `e_v = {z, v}` at `|E| + v`. Returns the edge weights: vertex weight
/// on `e_v`, zero on `E`.
pub fn build_opt_reduction(g: &MultiGraph, vertex_weights: &WeightVector) -> Result<(GadgetInstance, WeightVector)> {
    let n = g.vertex_count();
    if vertex_weights.len() != n {
        return Err(Error::invalid(format!(
            "{} vertex weights for {n} vertices",
            vertex_weights.len()
        )));
    }
    let m = g.edge_count();
    let mut edges = g.edges().to_vec();
    edges.extend((0..n).map(|v| (n, v)));
    let graph = MultiGraph::new(n + 1, edges)?;
    let complex = NbcComplex::with_identity_order(Matroid::graphic(graph.clone()));
    let mut w = vec![Rational::zero(); m];
    w.extend(vertex_weights.weights().iter().cloned());

    let mut marked = BTreeMap::new();
    marked.insert("E".to_string(), (0..m).collect());
    marked.insert("e_v".to_string(), (m..m + n).collect());
    Ok((
        GadgetInstance {
            graph,
            complex,
            tau: Vec::new(),
            marked,
            params: BTreeMap::new(),
            warnings: Vec::new(),
        },
        WeightVector::new(w),
    ))
}

/// Apex `z` plus pendant `y`: `e₀ = {y, z}` at id 0, `E` at `1..=|E|`,
/// `e_v = {v, z}` after. Truncated to rank `m + 1`; `λ = ℓ` on `e_v`.
pub fn build_field_reduction(
    g: &MultiGraph,
    m: usize,
    l: &Rational,
    guard: Guard,
) -> Result<(GadgetInstance, WeightVector)> {
    let n = g.vertex_count();
    let counts = count_independent_sets_by_size(g, guard)?;
    if counts.get(m) == 0 {
        return Err(Error::precondition(format!("g has no independent set of size {m}")));
    }
    let ground = 1 + g.edge_count() + n;
    guard.check("gadget ground size", ground, MAX_GADGET_GROUND)?;
    let (z, y) = (n, n + 1);
    let mut edges = vec![(y, z)];
    edges.extend_from_slice(g.edges());
    edges.extend((0..n).map(|v| (v, z)));
    let graph = MultiGraph::new(n + 2, edges)?;
    let matroid = Matroid::graphic(graph.clone()).truncate(m + 1)?;
    let complex = NbcComplex::with_identity_order(matroid);

    let ev_start = 1 + g.edge_count();
    let mut lambda = vec![Rational::one(); ev_start];
    lambda.extend((0..n).map(|_| l.clone()));
    let lambda = WeightVector::field(lambda)?;

    let mut warnings = Vec::new();
    let threshold = rational::int(2 * g.edge_count() as i64);
    if *l < threshold {
        warnings.push(format!(
            "l = {} is below 2|E| = {}; the sandwich is not guaranteed",
            rational::format(l),
            rational::format(&threshold)
        ));
    }
    let mut marked = BTreeMap::new();
    marked.insert("e0".to_string(), vec![0]);
    marked.insert("E".to_string(), (1..ev_start).collect());
    marked.insert("e_v".to_string(), (ev_start..ground).collect());
    let mut params = BTreeMap::new();
    params.insert("m".to_string(), rational::int(m as i64));
    params.insert("l".to_string(), l.clone());
    params.insert("truncation_rank".to_string(), rational::int(m as i64 + 1));
    Ok((
        GadgetInstance {
            graph,
            complex,
            tau: Vec::new(),
            marked,
            params,
            warnings,
        },
        lambda,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SandwichMode {
    /// Link facets of the link gadget.
    FacetCount,
    /// NBC partition function of the field gadget.
    PartitionFunction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub source_quantity: Rational,
    pub target_quantity: Rational,
    pub lower_bound: Rational,
    pub upper_bound: Rational,
    pub verdict: bool,
}

/// `ℓ^m·i_m(g) ≤ target ≤ 2·ℓ^m·i_m(g)`.
pub fn verify_counting_sandwich(
    g: &MultiGraph,
    m: usize,
    l: usize,
    mode: SandwichMode,
    guard: Guard,
) -> Result<ReductionReport> {
    let counts = count_independent_sets_by_size(g, guard)?;
    if let Some(k) = (0..m).find(|&k| counts.get(k) > counts.get(m)) {
        return Err(Error::precondition(format!(
            "i_{k} = {} exceeds i_{m} = {}",
            counts.get(k),
            counts.get(m)
        )));
    }
    if l < 2 * g.edge_count() {
        return Err(Error::precondition(format!(
            "l = {l} is below 2|E| = {}",
            2 * g.edge_count()
        )));
    }
    let n = rational::from_u128(counts.get(m));
    let l_r = rational::int(l as i64);
    let target = match mode {
        SandwichMode::FacetCount => {
            let inst = build_link_gadget(g, l, m, guard)?;
            rational::int(inst.complex.link_facets(&inst.tau, guard)?.len() as i64)
        }
        SandwichMode::PartitionFunction => {
            let (inst, lambda) = build_field_reduction(g, m, &l_r, guard)?;
            nbc_partition_function(&inst.complex, &lambda, guard)?
        }
    };
    let lower = rational::pow(&l_r, m) * &n;
    let upper = &lower * rational::int(2);
    Ok(ReductionReport {
        verdict: n > Rational::zero() && lower <= target && target <= upper,
        source_quantity: n,
        target_quantity: target,
        lower_bound: lower,
        upper_bound: upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::max_weight_nbc_base;
    use crate::graph::{build_named_graph, max_weight_independent_set, NamedGraph};
    use crate::matroid::MatroidOracle;
    use crate::rational::int;

    fn weights(v: &[i64]) -> WeightVector {
        WeightVector::new(v.iter().map(|&x| int(x)).collect())
    }

    fn both_sides(g: &MultiGraph, w: &[i64]) -> (Rational, Rational) {
        let vw: Vec<Rational> = w.iter().map(|&x| int(x)).collect();
        let (_, mis) = max_weight_independent_set(g, &vw, Guard::Enforce).unwrap();
        let (inst, ew) = build_opt_reduction(g, &weights(w)).unwrap();
        let (_, nbc) = max_weight_nbc_base(&inst.complex, &ew, Guard::Enforce).unwrap();
        (mis, nbc)
    }

    #[test]
    fn opt_examples() {
        let edge = build_named_graph(&NamedGraph::Path(2)).unwrap();
        assert_eq!(both_sides(&edge, &[3, 5]), (int(5), int(5)));
        assert_eq!(both_sides(&MultiGraph::empty(2), &[3, 5]), (int(8), int(8)));
        let p3 = build_named_graph(&NamedGraph::Path(3)).unwrap();
        assert_eq!(both_sides(&p3, &[1, 1, 1]), (int(2), int(2)));
    }

    #[test]
    fn field_c5_layout() {
        let c5 = build_named_graph(&NamedGraph::Cycle(5)).unwrap();
        let (inst, lambda) = build_field_reduction(&c5, 2, &int(10), Guard::Enforce).unwrap();
        assert_eq!(inst.matroid().ground_size(), 11);
        assert_eq!(inst.matroid().rank(), 3);
        assert!(inst.warnings.is_empty());
        let bases = inst.complex.enumerate_nbc_bases(Guard::Enforce).unwrap();
        let no_e: Vec<_> = bases.iter().filter(|b| b.iter().all(|&e| e == 0 || e > 5)).collect();
        assert_eq!(no_e.len(), 5);
        for b in no_e {
            assert_eq!(b[0], 0);
            let (u, v) = (b[1] - 6, b[2] - 6);
            assert!(!c5.edges().iter().any(|&(x, y)| (x, y) == (u, v) || (y, x) == (u, v)));
            assert_eq!(lambda.product(b), int(100));
        }
        let ones = WeightVector::ones(11);
        assert_eq!(
            nbc_partition_function(&inst.complex, &ones, Guard::Enforce).unwrap(),
            int(bases.len() as i64)
        );
    }

    #[test]
    fn field_low_l_warns() {
        let c5 = build_named_graph(&NamedGraph::Cycle(5)).unwrap();
        let (inst, _) = build_field_reduction(&c5, 2, &int(3), Guard::Enforce).unwrap();
        assert_eq!(inst.warnings.len(), 1);
    }

    #[test]
    fn sandwich_c5() {
        let c5 = build_named_graph(&NamedGraph::Cycle(5)).unwrap();
        let r = verify_counting_sandwich(&c5, 2, 20, SandwichMode::FacetCount, Guard::Enforce).unwrap();
        assert_eq!(r.source_quantity, int(5));
        assert_eq!((r.lower_bound.clone(), r.upper_bound.clone()), (int(2000), int(4000)));
        assert!(r.verdict);
        let r = verify_counting_sandwich(&c5, 2, 10, SandwichMode::PartitionFunction, Guard::Enforce).unwrap();
        assert_eq!((r.lower_bound.clone(), r.upper_bound.clone()), (int(500), int(1000)));
        assert!(r.verdict);
    }

    #[test]
    fn sandwich_precondition_names_k() {
        // Star K_{1,3}: i_1 = 4 > i_2 = 3.
        let star = MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let err = verify_counting_sandwich(&star, 2, 6, SandwichMode::FacetCount, Guard::Enforce).unwrap_err();
        assert!(err.to_string().contains("i_1"), "{err}");
    }

    #[test]
    fn alpha_default() {
        assert_eq!(default_target_size(19), 2);
        assert_eq!(default_target_size(5), 0);
    }
}
