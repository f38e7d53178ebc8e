//! Closed-form expected value and variance of the estimated symbols.
//!
//! Prints the per-symbol moments for 16-QAM at one operating point and shows
//! the same-phase collapse that caps the high-SNR symbol error rate.
//!
//! Usage: cargo run --release -p onebit-mimo --example moments [out.csv]

use onebit_mimo::chest::Pilot;
use onebit_mimo::moments::{Constellation, MomentTable};

fn main() -> onebit_mimo::Result<()> {
    let m_antennas = 128;
    let tau = 32;
    let constellation = Constellation::qam16();
    let pilot = Pilot::dft(tau)?;

    for snr_db in [0.0, 10.0, 20.0] {
        let rho = 10.0f64.powf(snr_db / 10.0);
        let table = MomentTable::compute(&constellation, &pilot, rho, m_antennas)?;
        println!("M = {m_antennas}, tau = {tau}, SNR = {snr_db} dB");
        println!("  delta = {:.6}, upsilon = {:.3e}", table.constants().delta(), table.constants().upsilon());
        println!("  {:>22} {:>24} {:>12} {:>12}", "symbol", "E[xhat]", "V[xhat]", "V/|E|^2");
        for ((s, e), &v) in table
            .symbols()
            .iter()
            .zip(table.expected())
            .zip(table.variances())
        {
            println!(
                "  {:>10.4} {:>+.4}j {:>11.2} {:>+.2}j {:>12.2} {:>12.4}",
                s.re,
                s.im,
                e.re,
                e.im,
                v,
                v / e.norm_sqr(),
            );
        }

        // The estimated symbols for same-phase transmit symbols drift
        // together as the SNR grows.
        let inner = nearest(&constellation, 1.0, 1.0);
        let outer = nearest(&constellation, 3.0, 3.0);
        let gap = (table.expected()[inner] - table.expected()[outer]).norm()
            / table.expected()[outer].norm();
        println!("  same-phase gap |E_inner - E_outer| / |E_outer| = {gap:.4}\n");
    }

    if let Some(path) = std::env::args().nth(1) {
        let rho = 10.0;
        let table = MomentTable::compute(&constellation, &pilot, rho, m_antennas)?;
        table.write_csv(std::io::BufWriter::new(std::fs::File::create(&path)?))?;
        println!("wrote 10 dB moment table to {path}");
    }
    Ok(())
}

fn nearest(constellation: &Constellation, re: f64, im: f64) -> usize {
    let target = num_complex::Complex64::new(re, im) / 10.0f64.sqrt();
    constellation
        .symbols()
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (*a - target)
                .norm()
                .partial_cmp(&(*b - target).norm())
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap()
}
