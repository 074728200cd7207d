//! Theta graph whose NBC polytope has an edge of squared length `n − 1`.
//!
//! Vertices `t = 0`, `b = 1` and one middle vertex per path. Path `i`
//! contributes edges `2i = {t, m_i}` and `2i + 1 = {m_i, b}`; the last
//! edge `n − 1 = {t, b}` is the long edge.

use std::collections::BTreeMap;

use num::Zero;

use super::{verify_edge_witness, GadgetInstance, WeightVector};
use crate::error::{Error, Guard, Result};
use crate::graph::MultiGraph;
use crate::matroid::Matroid;
use crate::nbc::NbcComplex;
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct LongEdgeInstance {
    pub instance: GadgetInstance,
    pub b: Vec<usize>,
    pub b_prime: Vec<usize>,
    pub weights: WeightVector,
    pub common_value: Rational,
    pub bases: Vec<Vec<usize>>,
    /// Exhaustive check of the edge-witness conditions.
    pub certified: bool,
}

impl LongEdgeInstance {
    /// `‖1_B − 1_{B′}‖₂²`.
    pub fn squared_distance(&self) -> usize {
        self.b.iter().filter(|e| !self.b_prime.contains(e)).count()
            + self.b_prime.iter().filter(|e| !self.b.contains(e)).count()
    }

    pub fn long_edge(&self) -> usize {
        self.instance.graph.edge_count() - 1
    }
}

pub fn build_long_edge_instance(n: usize, guard: Guard) -> Result<LongEdgeInstance> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::invalid(format!("long-edge instance needs odd n >= 3, got {n}")));
    }
    let paths = (n - 1) / 2;
    let mut edges = Vec::with_capacity(n);
    for i in 0..paths {
        edges.push((0, 2 + i));
        edges.push((2 + i, 1));
    }
    edges.push((0, 1));
    let graph = MultiGraph::new(paths + 2, edges)?;
    let long = n - 1;

    let mut b: Vec<usize> = (0..paths).map(|i| 2 * i).collect();
    b.push(long);
    let mut b_prime = vec![0];
    b_prime.extend((0..paths).map(|i| 2 * i + 1));

    let mut w = WeightVector::new(
        (0..n)
            .map(|e| if e != long && e % 2 == 1 { rational::int(1) } else { Rational::zero() })
            .collect(),
    );
    // The long edge's weight is whatever balances the two inner products.
    let on_b: Rational = w.dot(&b);
    let on_b_prime = w.dot(&b_prime);
    w.set(long, on_b_prime.clone() - on_b);

    let complex = NbcComplex::with_identity_order(Matroid::graphic(graph.clone()));
    let bases = complex.enumerate_nbc_bases(guard)?;
    let certified = verify_edge_witness(&bases, &w, &b, &b_prime)?;
    b.sort_unstable();

    let mut marked = BTreeMap::new();
    marked.insert("long".to_string(), vec![long]);
    marked.insert("path_top".to_string(), (0..paths).map(|i| 2 * i).collect());
    marked.insert("path_bottom".to_string(), (0..paths).map(|i| 2 * i + 1).collect());
    let mut params = BTreeMap::new();
    params.insert("n".to_string(), rational::int(n as i64));

    Ok(LongEdgeInstance {
        instance: GadgetInstance {
            graph,
            complex,
            tau: Vec::new(),
            marked,
            params,
            warnings: Vec::new(),
        },
        b,
        b_prime,
        weights: w,
        common_value: on_b_prime,
        bases,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::max_weight_nbc_base;
    use crate::rational::int;

    #[test]
    fn n5_layout_and_witness() {
        let inst = build_long_edge_instance(5, Guard::Enforce).unwrap();
        assert_eq!(inst.instance.graph.vertex_count(), 4);
        assert_eq!(inst.instance.graph.edge_count(), 5);
        assert_eq!(
            inst.bases,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![0, 2, 4]]
        );
        assert_eq!(inst.b, vec![0, 2, 4]);
        assert_eq!(inst.b_prime, vec![0, 1, 3]);
        let expect: Vec<Rational> = [0, 1, 0, 1, 2].iter().map(|&v| int(v)).collect();
        assert_eq!(inst.weights.weights(), expect.as_slice());
        assert_eq!(inst.common_value, int(2));
        assert!(inst.certified);
        assert_eq!(inst.squared_distance(), 4);
    }

    #[test]
    fn perturbed_long_weight_fails() {
        let inst = build_long_edge_instance(5, Guard::Enforce).unwrap();
        let mut w = inst.weights.clone();
        w.set(4, int(3));
        assert!(!verify_edge_witness(&inst.bases, &w, &inst.b, &inst.b_prime).unwrap());
    }

    #[test]
    fn max_weight_picks_b() {
        let inst = build_long_edge_instance(5, Guard::Enforce).unwrap();
        let (base, v) = max_weight_nbc_base(&inst.instance.complex, &inst.weights, Guard::Enforce).unwrap();
        assert_eq!(base, inst.b);
        assert_eq!(v, int(2));
    }

    #[test]
    fn odd_sizes_certify() {
        for n in (3..=11).step_by(2) {
            let inst = build_long_edge_instance(n, Guard::Enforce).unwrap();
            assert!(inst.certified, "n = {n}");
            assert_eq!(inst.squared_distance(), n - 1);
            assert_eq!(inst.weights.get(n - 1), &int((n as i64 - 1) / 2));
        }
    }

    #[test]
    fn even_rejected() {
        assert!(build_long_edge_instance(4, Guard::Enforce).is_err());
        assert!(build_long_edge_instance(1, Guard::Enforce).is_err());
    }
}
