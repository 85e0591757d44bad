//! Prints the transition-band gain table for a window / Taylor order pair.
//!
//! cargo run --release -p hpl-core --example design_table -- 3 2

use std::time::Instant;

use hpl_core::config::ModelConfig;
use hpl_core::design::design_bank;

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let c = args.first().copied().unwrap_or(3);
    let k = args.get(1).copied().unwrap_or(c - 1) as usize;
    let cfg = ModelConfig::reference(c, k);
    let start = Instant::now();
    let bank = design_bank(&cfg).expect("design");
    println!("c={c} K={k} N={} designed in {:.2?}", cfg.window_len(), start.elapsed());
    println!("{:>3} {:>8} {:>8} {:>8}  multipliers", "h", "TFT", "SVD", "reduct");
    for row in &bank.design_report.rows {
        let free: Vec<String> = row.multipliers.iter().skip(2).step_by(2).map(|y| format!("{y:.3}")).collect();
        println!(
            "{:>3} {:>8.4} {:>8.4} {:>7.1}%  {}",
            row.h,
            row.tft_max_gain,
            row.optimized_max_gain,
            100.0 * row.reduction,
            free.join(" ")
        );
    }
}
