//! Valid and minimized disbursements of a permutation, and the pebble
//! order of the canonical one.
//!
//!     cargo run --example disbursements -- 3,5,1,6,2,4

use cnrt::disbursement::{canonical_disbursement, enumerate_minimized, spin_lower_bound, valid_disbursements, SpinState};
use cnrt::order::is_bigger;
use cnrt::{window, Permutation, Topology};

fn main() -> cnrt::Result<()> {
    let pi: Permutation = std::env::args().nth(1).as_deref().unwrap_or("3,5,1,6,2,4").parse()?;
    let n = pi.n();
    let all = valid_disbursements(&pi, usize::MAX)?;
    let minimized = enumerate_minimized(&pi)?;
    println!("{pi}: {} valid disbursements, {} minimized", all.len(), minimized.len());
    for s in &minimized {
        println!("  {s:?}");
    }
    println!("spin lower bound: {}", spin_lower_bound(&pi));

    let state = SpinState::new(Topology::cycle(n)?, &pi, canonical_disbursement(&pi))?;
    println!("order under {:?}:", state.spins());
    for p in 1..=n {
        let below: Vec<usize> = (1..=n).filter(|&q| q != p && is_bigger(&state, p, q)).collect();
        if !below.is_empty() {
            println!("  {p} > {below:?}");
        }
    }
    let anchor = (1..=n).max_by_key(|&p| state.spin(p)).unwrap();
    let win = window(&state, anchor)?;
    println!("window at {anchor}: U {:?}  W {:?}  outside {}", win.u_all(), win.w_all(), win.outside_count());
    Ok(())
}
