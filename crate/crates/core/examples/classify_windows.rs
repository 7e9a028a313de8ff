//! Extremal windows of a permutation, their block structure, and the
//! rounds the extremal router needs for each.
//!
//!     cargo run --example classify_windows -- 4,5,6,3,2,1

use cnrt::disbursement::SpinState;
use cnrt::router::route_extremal_written;
use cnrt::{block_decompose, classify_extremal, route_extremal, window, ExtremalKind, Permutation, Topology};

fn main() -> cnrt::Result<()> {
    let pi: Permutation = std::env::args().nth(1).as_deref().unwrap_or("4,5,6,3,2,1").parse()?;
    let n = pi.n();
    let classes = classify_extremal(&pi)?;
    if classes.is_empty() {
        println!("{pi}: no extremal window");
    }
    for class in &classes {
        // block structure is stated for the unmirrored shape
        let (work, c) = if class.mirrored { (pi.relabel(0, true), class.reflected()) } else { (pi.clone(), class.clone()) };
        let state = SpinState::new(Topology::cycle(n)?, &work, c.disbursement.clone())?;
        let blocks = block_decompose(&state, &window(&state, c.anchor)?, c.kind)?;

        print!("{} anchor {} mirrored {} spins {:?}: {} blocks", class.kind, class.anchor, class.mirrored, class.disbursement, blocks.blocks.len());
        if class.kind != ExtremalKind::Type1 && n % 2 == 0 {
            match (route_extremal_written(&pi, class), route_extremal(&pi, class)) {
                (Ok(w), Ok(best)) => print!(", written plan {} rounds, best {}", w.rounds_used(), best.rounds_used()),
                (_, Err(e)) | (Err(e), _) => print!(", {e}"),
            }
        }
        println!();
    }
    Ok(())
}
