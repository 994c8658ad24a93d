//! Small Monte Carlo runs of the connectivity and Hamiltonicity limit laws.
//!
//!     cargo run --release --example limit_laws

use rgg_lab::algorithms::SearchBudget;
use rgg_lab::experiments::{run_limit_law_connectivity, run_limit_law_hamilton};

fn main() -> rgg_lab::Result<()> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    for alpha in [-1.0, 0.0, 1.0, 2.0, 4.0] {
        let c = run_limit_law_connectivity(4096.0, alpha, 200, 1, workers)?;
        let h = run_limit_law_hamilton(1024.0, alpha, 100, 2, SearchBudget::default(), workers)?;
        println!(
            "α = {alpha:>4}: connected {:.3} [{:.3}, {:.3}], hamiltonian {:.3} ({} unresolved), limit {:.3}",
            c.estimate.p,
            c.estimate.lo,
            c.estimate.hi,
            h.estimate.p,
            h.unresolved,
            c.reference.unwrap()
        );
    }
    Ok(())
}
