//! Measured mixing time against the spectral prediction and the general bound.
//!
//! cargo run --example mixing_time

use mixtime::liouvillian::build_generator;
use mixtime::mixing::{mixing_report, DEFAULT_ETA};
use mixtime::models::{presets, SystemModel};
use mixtime::spectral::decompose;

fn main() -> mixtime::Result<()> {
    for (name, cfg) in [
        ("amplitude damping", presets::amplitude_damping(1.0)),
        ("driven damped qubit", presets::amplitude_damping(1.0).with_term("x", 0.3, &[1])),
        ("damped qubits, L=3", presets::damped_qubits(3, 0.5)),
    ] {
        let model = SystemModel::from_config(&cfg)?;
        let spec = decompose(&build_generator(&model)?)?;
        let r = mixing_report(&spec, Some(model.lattice), DEFAULT_ETA)?;
        println!("{name}");
        println!("  gap            {:.6}", r.gap);
        println!("  tau measured   {:.6}  (probe {})", r.tau_measured, r.probe.label);
        if let Some(p) = r.tau_predicted {
            println!("  tau predicted  {p:.6}");
        }
        println!("  tau bound      {:.6}  (c1 = {:.4})", r.tau_bound, r.c1_used);
        if let Some(pp) = &r.dominant_probe {
            println!("  sigma0 + c1 sigma1 probe: measured {:.6}, c1 = {:.4}", pp.tau_measured, pp.c1);
        }
    }
    Ok(())
}
