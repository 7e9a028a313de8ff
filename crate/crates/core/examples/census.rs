//! Largest routing number of `C_n` and the permutations attaining it.
//! Tables go through the cache directory when one is given.
//!
//!     cargo run --release --example census -- 3 9 /tmp/cnrt-cache

use std::path::PathBuf;

use cnrt::solver::{load_or_build, DEFAULT_MAX_N};
use cnrt::Topology;

fn main() -> cnrt::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let lo: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let hi: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let cache = args.get(2).map(PathBuf::from);

    for n in lo..=hi {
        let table = load_or_build(Topology::cycle(n)?, cache.as_deref(), DEFAULT_MAX_N)?;
        let c = table.census();
        let names: Vec<String> = c.argmax.iter().map(|p| p.to_string()).collect();
        println!("C_{n}: max {}  argmax {}", c.max_distance, names.join("; "));
    }
    Ok(())
}
