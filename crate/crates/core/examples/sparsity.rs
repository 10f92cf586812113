//! Row-wise counts of matrix elements above e^(-alpha L).
//!
//! cargo run --example sparsity

use mixtime::criteria::{model_sparsity, Basis};
use mixtime::models::{presets, SystemModel};

fn main() -> mixtime::Result<()> {
    for l in 2..=6 {
        let m = SystemModel::from_config(&presets::zz_ising_with_x_dissipator(l, 1.0, 0.1))?;
        let p = model_sparsity(&m, Basis::HEigenbasis, 1.0)?;
        println!("ZZ Ising + sigma_x, L={l}: max N(1, K, E_s) = {}", p.max_count);
    }
    let m = SystemModel::from_config(&presets::boundary_dephased_tfi(4, 1.0, 0.8, 50.0))?;
    for alpha in [1.0, 2.0, 4.0] {
        let p = model_sparsity(&m, Basis::KEigenbasis, alpha)?;
        println!("boundary TFI, L=4, alpha={alpha}: max N(alpha, H, eps_s) = {}", p.max_count);
    }
    Ok(())
}
