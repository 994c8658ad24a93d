//! Gilbert and k-nearest-neighbour graphs on the same sample.
//!
//!     cargo run --release --example build_graphs

use rgg_lab::algorithms::{component_count, max_degree, min_degree};
use rgg_lab::geometry::{r0_planar, sample_poisson, BoxSpec, Norm};
use rgg_lab::graph::{build_gilbert, build_knn_directed, undirect};

fn main() -> rgg_lab::Result<()> {
    let n = 2000.0;
    let ps = sample_poisson(BoxSpec::planar(n)?, 42);
    let r0 = r0_planar(n)?;

    println!("{} points, r0 = {r0:.4}", ps.len());
    for scale in [0.8, 1.0, 1.2] {
        let g = build_gilbert(&ps, scale * r0, Norm::EUCLIDEAN)?;
        println!(
            "gilbert r = {:.3}: {} edges, degrees {}..{}, {} components",
            scale * r0,
            g.edge_count(),
            min_degree(&g),
            max_degree(&g),
            component_count(&g)
        );
    }

    let directed = build_knn_directed(&ps, 8, Norm::EUCLIDEAN)?;
    for k in [3, 5, 8] {
        let g = undirect(&directed.truncated(k));
        println!(
            "knn k = {k}: {} edges, degrees {}..{} (bounds {k}..{}), {} components",
            g.edge_count(),
            min_degree(&g),
            max_degree(&g),
            6 * k,
            component_count(&g)
        );
    }
    Ok(())
}
