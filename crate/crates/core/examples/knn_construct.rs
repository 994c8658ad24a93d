//! The k-nearest-neighbour construction. At desk scale it rarely gets past
//! stitching for k near the connectivity threshold, but every cycle it does
//! return is checked, and a large k shows the full pipeline.
//!
//!     cargo run --release --example knn_construct

use rgg_lab::algorithms::{verify_hamilton_cycle, SearchBudget};
use rgg_lab::construct::{construct_hamilton_knn, KnnParams};
use rgg_lab::geometry::{sample_poisson, BoxSpec, Norm};
use rgg_lab::graph::{build_knn_directed, undirect};
use rgg_lab::hitting::{hitting_k, MonotoneProperty};

fn main() -> rgg_lab::Result<()> {
    let ps = sample_poisson(BoxSpec::planar(400.0)?, 5);
    let k2 = hitting_k(&ps, MonotoneProperty::KConnected(2), Norm::EUCLIDEAN, SearchBudget::default())?.k;
    for k in [k2, 4 * k2, ps.len() / 2] {
        let report = construct_hamilton_knn(&ps, k, &KnnParams::default(), Norm::EUCLIDEAN)?;
        let side = report.stage_log.first().and_then(|l| l.stats.get("square_side").copied()).unwrap_or(f64::NAN);
        match report.cycle() {
            Some(c) => {
                let g = undirect(&build_knn_directed(&ps, k, Norm::EUCLIDEAN)?);
                println!("k = {k:>3}, side {side:.3}: cycle, verified = {}", verify_hamilton_cycle(&g, &c));
            }
            None => {
                let (stage, why) = report.failure().unwrap();
                println!("k = {k:>3}, side {side:.3}: {stage}: {why}");
            }
        }
    }
    Ok(())
}
