//! Pairwise dominance relations between objective vectors: Pareto,
//! multiplicative epsilon-dominance at several tolerances, and mean
//! scalarization.
//!
//! Run with: cargo run --example dominance

use mobility_mcdm::aggregate::ObjectiveVector;
use mobility_mcdm::ingest::LocalityKey;
use mobility_mcdm::mcdm::{
    eps_dominates, mean_scalarize, nonneg_lift, pareto_compare, sort_dominates, Comparator,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Minimization orientation: lower value = larger mobility reduction.
    let a = vec![-2.08, -1.90, -2.40, -2.00, -1.90];
    let b = vec![-2.10, -1.87, -2.39, -1.94, -1.82];
    let c = vec![-2.20, -1.20, -2.50, -1.40, -2.00];
    let d = vec![-1.90, -1.70, -2.20, -1.70, -1.60];

    for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
        println!("{name} = {v:?}");
    }

    println!("\npareto a vs d: {:?}", pareto_compare(&a, &d)?);
    println!(
        "pareto a vs b: {:?} (each is better somewhere)",
        pareto_compare(&a, &b)?
    );
    println!("pareto c vs a: {:?}", pareto_compare(&c, &a)?);

    // Multiplicative epsilon needs non-negative components; lift the set by
    // one shared scalar first.
    let vectors: Vec<ObjectiveVector> = [&a, &b, &c, &d]
        .iter()
        .enumerate()
        .map(|(i, v)| {
            ObjectiveVector::new(LocalityKey::country(&format!("L{i}"), ""), 0, v.to_vec())
        })
        .collect();
    let (lifted, lift) = nonneg_lift(&vectors);
    println!("\nnon-negativity lift: +{lift}");

    // Raising the tolerance relaxes the comparison until it saturates.
    let la = &lifted[0].components;
    let lb = &lifted[1].components;
    println!("a vs b under multiplicative epsilon:");
    for eps in [0.01, 0.05, 0.1, 0.2] {
        let ab = eps_dominates(la, lb, eps)?;
        let ba = eps_dominates(lb, la, eps)?;
        let verdict = match (ab, ba) {
            (true, true) => "mutual (treated as indifference in sorting)",
            (true, false) => "a eps-dominates b",
            (false, true) => "b eps-dominates a",
            (false, false) => "neither",
        };
        println!("  eps = {eps:<5} {verdict}");
    }

    // sort_dominates is the asymmetric predicate used by the ranking:
    // mutual eps-dominance counts as indifference, not dominance.
    for eps in [0.05, 0.2] {
        let comparator = Comparator::epsilon(eps)?;
        println!(
            "sort_dominates(a, b) at eps = {eps}: {}",
            sort_dominates(la, lb, &comparator)?
        );
    }

    println!("\nmean scalarization collapses each vector to one score:");
    for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
        println!("  mean({name}) = {:+.3}", mean_scalarize(v)?);
    }
    Ok(())
}
