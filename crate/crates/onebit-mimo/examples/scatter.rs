//! Estimated-symbol scatter: every 16-QAM symbol transmitted over
//! independent channel realizations, with the closed-form expected values
//! alongside the sample means.
//!
//! Usage: cargo run --release -p onebit-mimo --example scatter [out.csv]

use num_complex::Complex64;
use onebit_mimo::harness::{run_scatter, write_scatter_csv, SimConfig, Sweep};

fn main() -> onebit_mimo::Result<()> {
    let config = SimConfig {
        m_antennas: 128,
        tau: 32,
        snr_db: vec![10.0],
        trials: 100,
        seed: 4,
        sweep: Sweep::Scatter,
        ..SimConfig::default()
    };

    println!(
        "16-QAM, M = {}, tau = {}, SNR = {} dB, {} realizations per symbol",
        config.m_antennas, config.tau, config.snr_db[0], config.trials
    );
    let scatter = run_scatter(&config)?;

    let symbol_count = scatter.expected.len();
    let trials = config.trials as usize;
    println!("{:>6} {:>24} {:>24}", "symbol", "sample mean", "analytic E");
    for symbol in 0..symbol_count {
        let mean = scatter.points[symbol * trials..(symbol + 1) * trials]
            .iter()
            .map(|(_, xhat)| xhat)
            .sum::<Complex64>()
            / trials as f64;
        let expected = scatter.expected[symbol];
        println!(
            "{:>6} {:>11.2} {:>+10.2}j {:>11.2} {:>+10.2}j",
            symbol, mean.re, mean.im, expected.re, expected.im
        );
    }

    if let Some(path) = std::env::args().nth(1) {
        write_scatter_csv(&scatter, std::io::BufWriter::new(std::fs::File::create(&path)?))?;
        println!("wrote {path} ({} sample rows)", scatter.points.len());
    }
    Ok(())
}
