//! Lindbladian spectrum of a damped qubit and of a boundary-dephased chain.
//!
//! cargo run --example spectrum

use mixtime::liouvillian::build_generator;
use mixtime::models::{presets, SystemModel};
use mixtime::spectral::decompose;

fn main() -> mixtime::Result<()> {
    for (name, cfg) in [
        ("amplitude damping", presets::amplitude_damping(1.0)),
        ("dephasing", presets::dephasing(1.0)),
        ("boundary-dephased TFI, L=3", presets::boundary_dephased_tfi(3, 1.0, 0.8, 5.0)),
    ] {
        let model = SystemModel::from_config(&cfg)?;
        let spec = decompose(&build_generator(&model)?)?;
        println!("{name}: N = {}, steady_dim = {}, gap = {:.6}", spec.dim, spec.steady_dim, spec.gap);
        for r in spec.records.iter().take(6) {
            println!("  alpha = {:+.6}  beta = {:.6}  Tr|sigma| = {:.4}", r.alpha, r.beta, r.mode_trace_norm);
        }
    }
    Ok(())
}
