//! Tour of the set-partition lattice: enumeration, types, Möbius values,
//! block-minimum masks, and the shuffle fibers over partitions.
//!
//! Run with `cargo run --example partition_lattice`.

use std::collections::HashMap;

use cumulant_kit::partitions::{
    enumerate_partitions, enumerate_shuffles, multinomial, partition_types, SetPartition,
};

fn main() {
    let n = 4;
    let partitions = enumerate_partitions(n).unwrap();
    println!("Pi_{n} has {} elements:", partitions.len());
    println!("{:<14} {:>6} {:>8} {:>6}   mask", "partition", "blocks", "type", "mobius");
    for pi in &partitions {
        let lam = pi.partition_type();
        let type_str: String = lam
            .multiplicities()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| format!("{}^{k}", i + 1))
            .collect::<Vec<_>>()
            .join(" ");
        let mask: String = pi
            .block_min_mask()
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        println!(
            "{:<14} {:>6} {:>8} {:>6}   {mask}",
            format!("{pi}"),
            pi.block_count(),
            type_str,
            pi.mobius_to_top()
        );
    }

    println!("\npartitions per type (Faa di Bruno counts):");
    for lam in partition_types(n).unwrap() {
        let count = lam.faa_di_bruno_count();
        println!("  {:?} -> {count}", lam.multiplicities());
    }

    // shuffles of two 2-card decks cover the pair-pair partitions twice each
    let shuffles = enumerate_shuffles(&[2, 2]).unwrap();
    println!(
        "\n{} shuffles of decks (2,2) (multinomial {}):",
        shuffles.len(),
        multinomial(&[2, 2])
    );
    let mut fibers: HashMap<SetPartition, usize> = HashMap::new();
    for s in &shuffles {
        println!("  deck placements {:?}", s.placements());
        *fibers.entry(s.to_partition()).or_insert(0) += 1;
    }
    println!("fiber sizes over the induced partitions:");
    for (pi, count) in &fibers {
        println!("  {pi} <- {count} shuffles");
    }
}
