//! Hitting radii of minimum degree two, 2-connectivity and Hamiltonicity on
//! a handful of samples, and the matching k for the k-NN graph.
//!
//!     cargo run --release --example hitting_radii

use rgg_lab::algorithms::SearchBudget;
use rgg_lab::geometry::{sample_poisson, BoxSpec, Norm};
use rgg_lab::hitting::{hitting_k, hitting_radius, MonotoneProperty};

fn main() -> rgg_lab::Result<()> {
    let props = [MonotoneProperty::MinDegree(2), MonotoneProperty::KConnected(2), MonotoneProperty::Hamiltonian];
    let budget = SearchBudget::default();
    println!("seed  points  {:>12} {:>12} {:>12}   k values", "δ≥2", "2-conn", "hamiltonian");
    for seed in 0..8 {
        let ps = sample_poisson(BoxSpec::planar(300.0)?, seed);
        let mut radii = Vec::new();
        let mut ks = Vec::new();
        for p in props {
            radii.push(hitting_radius(&ps, p, Norm::EUCLIDEAN, budget)?.radius);
            ks.push(hitting_k(&ps, p, Norm::EUCLIDEAN, budget)?.k);
        }
        let mark = if radii[1] == radii[2] { "=" } else { "<" };
        println!(
            "{seed:>4}  {:>6}  {:>12.6} {:>12.6} {mark}{:>11.6}   {ks:?}",
            ps.len(),
            radii[0],
            radii[1],
            radii[2]
        );
    }
    Ok(())
}
