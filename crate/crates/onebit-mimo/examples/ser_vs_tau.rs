//! Symbol error rate against the pilot length.
//!
//! Longer pilots sharpen the channel estimate behind the MRC combiner, which
//! pays off directly in SER.
//!
//! Usage: cargo run --release -p onebit-mimo --example ser_vs_tau [out.csv]

use onebit_mimo::harness::{run_ser, write_ser_csv, SimConfig, Sweep};

fn main() -> onebit_mimo::Result<()> {
    let config = SimConfig {
        m_antennas: 128,
        snr_db: vec![10.0],
        tau_grid: vec![2, 4, 8, 16, 32, 64],
        trials: 20_000,
        seed: 2,
        sweep: Sweep::Tau,
        ..SimConfig::default()
    };

    println!(
        "16-QAM, M = {}, SNR = {} dB, {} trials per point",
        config.m_antennas, config.snr_db[0], config.trials
    );
    let results = run_ser(&config)?;
    println!("{:>6} {:>10} {:>10}", "tau", "SER", "std err");
    for r in &results {
        println!("{:>6} {:>10.5} {:>10.5}", r.tau, r.ser(), r.std_err());
    }
    println!(
        "\ngoing from tau = {} to tau = {} cuts the SER by a factor of {:.1}",
        results[0].tau,
        results.last().unwrap().tau,
        results[0].ser() / results.last().unwrap().ser().max(1e-12),
    );

    if let Some(path) = std::env::args().nth(1) {
        write_ser_csv(&results, std::io::BufWriter::new(std::fs::File::create(&path)?))?;
        println!("wrote {path}");
    }
    Ok(())
}
