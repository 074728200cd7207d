//! Gadget quantities are invariant under reordering within blocks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nbc_core::gadgets::{
    build_field_reduction, build_link_gadget, nbc_partition_function, partition_link_facets, GadgetInstance,
};
use nbc_core::graph::build_named_graph;
use nbc_core::rational;
use nbc_core::{ElementOrder, Guard, NamedGraph};

/// A ranking following `blocks` in sequence, each block shuffled.
fn shuffled_within(inst: &GadgetInstance, blocks: &[&str], rng: &mut ChaCha8Rng) -> ElementOrder {
    let mut ranking = Vec::new();
    for b in blocks {
        let mut block = inst.marked(b).unwrap().to_vec();
        block.shuffle(rng);
        ranking.extend(block);
    }
    ElementOrder::new(ranking).unwrap()
}

#[test]
fn link_gadget_counts_survive_block_shuffles() {
    let k22 = build_named_graph(&NamedGraph::CompleteBipartite(2, 2)).unwrap();
    let inst = build_link_gadget(&k22, 2, 2, Guard::Enforce).unwrap();
    let reference = inst.complex.link_facets(&inst.tau, Guard::Enforce).unwrap();
    let blocks = ["e0", "E", "e", "f"];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let shuffled = inst.with_order(shuffled_within(&inst, &blocks, &mut rng)).unwrap();
        assert!(shuffled.respects_blocks(&blocks));
        assert!(shuffled.complex.is_nbc(&shuffled.tau).unwrap());
        let facets = shuffled.complex.link_facets(&shuffled.tau, Guard::Enforce).unwrap();
        assert_eq!(facets.len(), reference.len());
        let part = partition_link_facets(&shuffled, &facets).unwrap();
        assert_eq!(part.s_a_len(2), 4);
    }
}

#[test]
fn field_partition_function_survives_block_shuffles() {
    let c5 = build_named_graph(&NamedGraph::Cycle(5)).unwrap();
    let (inst, lambda) = build_field_reduction(&c5, 2, &rational::int(10), Guard::Enforce).unwrap();
    let reference = nbc_partition_function(&inst.complex, &lambda, Guard::Enforce).unwrap();
    let blocks = ["e0", "E", "e_v"];
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5 {
        let shuffled = inst.with_order(shuffled_within(&inst, &blocks, &mut rng)).unwrap();
        assert_eq!(nbc_partition_function(&shuffled.complex, &lambda, Guard::Enforce).unwrap(), reference);
    }
}
