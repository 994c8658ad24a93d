//! Samples Poisson point sets and prints the critical radius r0 in a few
//! settings.
//!
//!     cargo run --release --example sample_points

use rgg_lab::geometry::{r0_general, r0_general_with, r0_planar, sample_poisson, BoxSpec, Norm};

fn main() -> rgg_lab::Result<()> {
    for n in [100.0, 1000.0, 10000.0] {
        let ps = sample_poisson(BoxSpec::planar(n)?, 1);
        println!("n = {n:>7}: {} points, box side {:.2}", ps.len(), ps.bounds().side());
    }

    let n = 1e4;
    println!("r0 (planar formula)        = {:.5}", r0_planar(n)?);
    println!("r0 (E(r)=1, euclidean, d=2) = {:.5}", r0_general(&BoxSpec::planar(n)?, Norm::EUCLIDEAN, 1e-9)?);
    println!("r0 (E(r)=1, max norm, d=2)  = {:.5}", r0_general(&BoxSpec::planar(n)?, Norm::MAX, 1e-9)?);
    // the quadrature grows as resolution^(2d), so d = 3 uses a coarse grid
    println!("r0 (E(r)=1, euclidean, d=3) = {:.5}", r0_general_with(&BoxSpec::new(n, 3)?, Norm::EUCLIDEAN, 1e-4, 32)?);
    Ok(())
}
