//! Running the verification sweeps from library code.

use tubecc::verify::{run_suite, Suite, VerifyConfig};

fn main() {
    let cfg = VerifyConfig {
        max_rank: 4,
        samples: 40,
        seed: 7,
        ..VerifyConfig::default()
    };
    let report = run_suite(Suite::All, &cfg);
    println!("{report}");
    std::process::exit(if report.passed() { 0 } else { 1 });
}
