//! Exact Hamiltonicity search around the 2-connectivity threshold.
//!
//!     cargo run --release --example exact_hamilton

use rgg_lab::algorithms::{search_hamilton, verify_hamilton_cycle, HamiltonOutcome, SearchBudget};
use rgg_lab::geometry::{sample_poisson, BoxSpec, Norm};
use rgg_lab::graph::build_gilbert;
use rgg_lab::hitting::{hitting_radius, MonotoneProperty};

fn main() -> rgg_lab::Result<()> {
    let ps = sample_poisson(BoxSpec::planar(1000.0)?, 3);
    let r2 = hitting_radius(&ps, MonotoneProperty::KConnected(2), Norm::EUCLIDEAN, SearchBudget::default())?.radius;
    for scale in [0.98, 1.0, 1.02] {
        let g = build_gilbert(&ps, scale * r2, Norm::EUCLIDEAN)?;
        let (outcome, stats) = search_hamilton(&g, SearchBudget::default());
        let verdict = match &outcome {
            HamiltonOutcome::Found(c) => format!("cycle found, verified = {}", verify_hamilton_cycle(&g, c)),
            HamiltonOutcome::ProvenAbsent => "no Hamilton cycle".to_string(),
            HamiltonOutcome::Exhausted => "budget exhausted".to_string(),
        };
        println!("r = {:.4} ({scale} x 2-conn radius): {verdict} after {} nodes", scale * r2, stats.nodes);
    }
    Ok(())
}
