//! Gadget constructions and the exact certificates each one promises.
//!
//! Every builder lays out edge ids block by block in the order the
//! construction prescribes (e.g. `e₀ < E < e_{v,i} < f_{v,i}`), so the
//! identity order is the construction order; within a block elements are
//! ascending by construction index.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Guard, Result};
use crate::graph::MultiGraph;
use crate::matroid::Matroid;
use crate::nbc::{ElementOrder, NbcComplex};
use crate::rational::{self, Rational};

pub mod hardcore;
pub mod link;
pub mod long_edge;
pub mod reductions;

pub use hardcore::{build_hardcore_reduction, critical_threshold, verify_hardcore_identities, HardcoreReport};
pub use link::{build_link_gadget, gap_certificate, partition_link_facets, GapCertificate, LinkPartition};
pub use long_edge::{build_long_edge_instance, LongEdgeInstance};
pub use reductions::{
    build_field_reduction, build_opt_reduction, verify_counting_sandwich, ReductionReport, SandwichMode,
};

pub const MAX_GADGET_GROUND: usize = 5_000;

/// Exact per-element weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Self {
        WeightVector(weights)
    }

    pub fn ones(len: usize) -> Self {
        WeightVector(vec![Rational::one(); len])
    }

    /// An external field: every entry must be at least 1.
    pub fn field(weights: Vec<Rational>) -> Result<Self> {
        if let Some((e, w)) = weights.iter().enumerate().find(|(_, w)| **w < Rational::one()) {
            return Err(Error::invalid(format!(
                "external field entry {e} = {} is below 1",
                rational::format(w)
            )));
        }
        Ok(WeightVector(weights))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, e: usize) -> &Rational {
        &self.0[e]
    }

    pub fn set(&mut self, e: usize, w: Rational) {
        self.0[e] = w;
    }

    /// `⟨w, 1_s⟩`.
    pub fn dot(&self, s: &[usize]) -> Rational {
        s.iter().map(|&e| self.0[e].clone()).sum()
    }

    /// `∏_{e∈s} w_e`.
    pub fn product(&self, s: &[usize]) -> Rational {
        s.iter().fold(Rational::one(), |acc, &e| acc * &self.0[e])
    }

    fn check_len(&self, m: usize) -> Result<()> {
        if self.0.len() != m {
            return Err(Error::invalid(format!(
                "weight vector has {} entries, ground set has {m}",
                self.0.len()
            )));
        }
        Ok(())
    }
}

/// A constructed gadget: graph, (possibly truncated) matroid with its
/// order, the distinguished face `τ`, named element blocks and the
/// integer/rational parameters used.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub graph: MultiGraph,
    pub complex: NbcComplex,
    pub tau: Vec<usize>,
    pub marked: BTreeMap<String, Vec<usize>>,
    pub params: BTreeMap<String, Rational>,
    pub warnings: Vec<String>,
}

impl GadgetInstance {
    pub fn matroid(&self) -> &Matroid {
        self.complex.matroid()
    }

    pub fn order(&self) -> &ElementOrder {
        self.complex.order()
    }

    pub fn marked(&self, name: &str) -> Option<&[usize]> {
        self.marked.get(name).map(Vec::as_slice)
    }

    pub fn param(&self, name: &str) -> Option<&Rational> {
        self.params.get(name)
    }

    /// Same gadget under a different order (e.g. a within-block shuffle).
    pub fn with_order(&self, order: ElementOrder) -> Result<Self> {
        Ok(GadgetInstance {
            complex: NbcComplex::new(self.complex.matroid().clone(), order)?,
            ..self.clone()
        })
    }

    /// True iff every element of block `i` precedes every element of block
    /// `i + 1` in the order.
    pub fn respects_blocks(&self, blocks: &[&str]) -> bool {
        let order = self.order();
        blocks.windows(2).all(|w| {
            let (Some(lo), Some(hi)) = (self.marked(w[0]), self.marked(w[1])) else {
                return false;
            };
            let max_lo = lo.iter().map(|&e| order.position(e)).max();
            let min_hi = hi.iter().map(|&e| order.position(e)).min();
            match (max_lo, min_hi) {
                (Some(a), Some(b)) => a < b,
                _ => true,
            }
        })
    }
}

/// `{b1, b2}` is an edge of the convex hull of `bases` witnessed by `w`:
/// `⟨w,b1⟩ = ⟨w,b2⟩ > ⟨w,b⟩` for every other `b`.
pub fn verify_edge_witness(
    bases: &[Vec<usize>],
    w: &WeightVector,
    b1: &[usize],
    b2: &[usize],
) -> Result<bool> {
    let norm = |b: &[usize]| {
        let mut b = b.to_vec();
        b.sort_unstable();
        b
    };
    let (b1, b2) = (norm(b1), norm(b2));
    if b1 == b2 {
        return Err(Error::invalid("witness endpoints must differ"));
    }
    for b in [&b1, &b2] {
        if !bases.iter().any(|x| norm(x) == *b) {
            return Err(Error::invalid(format!("{b:?} is not among the bases")));
        }
        if let Some(&e) = b.iter().find(|&&e| e >= w.len()) {
            return Err(Error::invalid(format!("element {e} has no weight")));
        }
    }
    let top = w.dot(&b1);
    if w.dot(&b2) != top {
        return Ok(false);
    }
    Ok(bases
        .iter()
        .map(|b| norm(b))
        .filter(|b| *b != b1 && *b != b2)
        .all(|b| w.dot(&b) < top))
}

/// Exhaustive maximum of `⟨w, 1_B⟩` over NBC bases; ties go to the
/// lexicographically largest base.
pub fn max_weight_nbc_base(
    x: &NbcComplex,
    w: &WeightVector,
    guard: Guard,
) -> Result<(Vec<usize>, Rational)> {
    w.check_len(x.matroid().graph().edge_count())?;
    let bases = x.enumerate_nbc_bases(guard)?;
    let mut best: Option<(Vec<usize>, Rational)> = None;
    for b in bases {
        let v = w.dot(&b);
        if best.as_ref().is_none_or(|(_, top)| v >= *top) {
            best = Some((b, v));
        }
    }
    best.ok_or_else(|| Error::precondition("complex has no NBC bases"))
}

/// `Σ_B ∏_{e∈B} λ_e` over NBC bases.
pub fn nbc_partition_function(x: &NbcComplex, lambda: &WeightVector, guard: Guard) -> Result<Rational> {
    lambda.check_len(x.matroid().graph().edge_count())?;
    Ok(x
        .enumerate_nbc_bases(guard)?
        .iter()
        .fold(Rational::zero(), |acc, b| acc + lambda.product(b)))
}
