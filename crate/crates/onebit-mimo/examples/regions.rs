//! Detection regions for conventional (alpha = 0) and variance-weighted
//! (alpha = 1) maximum-likelihood detection, rendered as terminal maps.
//!
//! Each cell shows the index (hex) of the deciding 16-QAM center. With
//! alpha = 1 the regions of the inner symbols (largest variance) expand at
//! the expense of the outer ones.
//!
//! Usage: cargo run --release -p onebit-mimo --example regions [out.csv]

use onebit_mimo::harness::{run_regions, write_regions_csv, SimConfig, Sweep};

fn main() -> onebit_mimo::Result<()> {
    let base = SimConfig {
        m_antennas: 128,
        tau: 32,
        snr_db: vec![5.0],
        grid_n: 48,
        sweep: Sweep::Regions,
        ..SimConfig::default()
    };

    for alpha in [0.0, 1.0] {
        let config = SimConfig {
            alpha,
            ..base.clone()
        };
        let rows = run_regions(&config)?;
        println!(
            "alpha = {alpha}: decided center index over [-h, h]^2, M = {}, tau = {}, SNR = {} dB",
            config.m_antennas, config.tau, config.snr_db[0]
        );
        for line in rows.chunks(config.grid_n).rev() {
            let text: String = line
                .iter()
                .map(|(_, _, index)| char::from_digit(*index as u32, 16).unwrap_or('?'))
                .collect();
            println!("  {text}");
        }
        println!();
    }

    if let Some(path) = std::env::args().nth(1) {
        let config = SimConfig {
            alpha: 1.0,
            grid_n: 512,
            ..base
        };
        let rows = run_regions(&config)?;
        write_regions_csv(&rows, std::io::BufWriter::new(std::fs::File::create(&path)?))?;
        println!("wrote {path} ({} rows, alpha = 1)", rows.len());
    }
    Ok(())
}
