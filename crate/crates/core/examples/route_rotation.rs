//! Routes every rotation of an even cycle with its rotation plan and prints
//! the rounds next to the exact value `n - |q|`.
//!
//!     cargo run --example route_rotation -- 8

use cnrt::router::rotation_plan;
use cnrt::{route_odd_even, Permutation, Topology};

fn main() -> cnrt::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let topology = Topology::cycle(n)?;
    for q in (-(n as i64 - 1) / 2..=n as i64 / 2).filter(|&q| q != 0) {
        let (pi, spins, edge) = rotation_plan(n, q)?;
        let trace = route_odd_even(topology, &pi, &spins, edge)?;
        println!(
            "q={q:>3}  pi={}  spins={spins:?}  edge={edge:?}  rounds={} (n-|q| = {})",
            Permutation::rotation(n, q),
            trace.rounds_used(),
            n - q.unsigned_abs() as usize
        );
    }
    Ok(())
}
