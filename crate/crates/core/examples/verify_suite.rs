//! Runs one verification suite and prints its report.
//!
//!     cargo run --release --example verify_suite -- order 3 8

use cnrt::suite::{default_range, run_suite, SuiteOptions};

fn main() -> cnrt::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = args.first().map(String::as_str).unwrap_or("rotation");
    let range = default_range(name)?;
    let lo = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(*range.start());
    let hi = args.get(2).and_then(|s| s.parse().ok()).unwrap_or((*range.end()).min(8));
    let report = run_suite(name, lo..=hi, &SuiteOptions { random_cases: 2_000, ..SuiteOptions::default() })?;
    print!("{}", report.render_text());
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
