//! Inverse gap and slowest-mode trace norm against chain length, with scaling fits.
//!
//! cargo run --release --example size_scan

use mixtime::criteria::{classify_scaling, scan_sizes, Quantity, ScanOptions};
use mixtime::models::presets;

fn main() -> mixtime::Result<()> {
    let template = presets::boundary_dephased_tfi(3, 1.0, 0.8, 100.0);
    let recs = scan_sizes(&template, 2..=5, &ScanOptions::default());
    for r in &recs {
        match &r.error {
            None => println!("L={} 1/gap={:.4} Tr|s1|={:.4} sparsity={}", r.l, r.inverse_gap, r.trace_norm_sigma1, r.max_sparsity_count),
            Some(e) => println!("L={} failed: {e}", r.l),
        }
    }
    let ls: Vec<usize> = recs.iter().map(|r| r.l).collect();
    for (q, v) in [
        (Quantity::InverseGap, recs.iter().map(|r| r.inverse_gap).collect::<Vec<_>>()),
        (Quantity::TraceNorm, recs.iter().map(|r| r.trace_norm_sigma1).collect()),
    ] {
        let v = classify_scaling(q, &ls, &v)?;
        println!(
            "{q:?}: {:?} ({}), power {:.3} R2={:.4}, exp {:.3} R2={:.4}",
            v.best, v.verdict, v.fits.power_law.parameter, v.fits.power_law.r2, v.fits.exponential.parameter, v.fits.exponential.r2
        );
    }
    println!("{}", mixtime::criteria::FINITE_SIZE_CAVEAT);
    Ok(())
}
