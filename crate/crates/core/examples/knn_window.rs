//! Connectivity hitting k relative to log n for growing n.
//!
//!     cargo run --release --example knn_window

use rgg_lab::experiments::run_knn_window;

fn main() -> rgg_lab::Result<()> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    for n in [1e3, 1e4, 1e5] {
        let (s, _) = run_knn_window(n, 20, 3, 0.0, workers)?;
        println!(
            "n = {n:>7}: mean k/log n = {:.4}, k in {}..{}, inside window {:.2}",
            s.stats["mean_k_over_log_n"], s.stats["min_k"], s.stats["max_k"], s.estimate.p
        );
    }
    Ok(())
}
