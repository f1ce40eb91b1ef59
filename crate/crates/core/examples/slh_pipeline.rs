//! From a coupling matrix `E` to the Itô matrix and the SLH triple, with
//! the algebraic identities the construction guarantees.
//!
//! Run with `cargo run --example slh_pipeline`.

use slh_extension::linalg::{ComplexMatrix, C64};
use slh_extension::slh::{slh_triple, validate_coupling};

fn show(name: &str, x: &ComplexMatrix) {
    println!("{name} =");
    for r in 0..x.rows() {
        let row: Vec<String> = x.row(r).iter().map(|z| format!("{:>+.4}{:+.4}i", z.re, z.im)).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A qubit (m = 2) coupled to one channel (n = 1). Blocks are
    // E₀₀ (system), E₀₁ = E₁₀† (coupling) and E₁₁ (direct scattering).
    let c = |re: f64, im: f64| C64::new(re, im);
    let e = ComplexMatrix::from_rows(&[
        vec![c(0.5, 0.0), c(0.0, 0.0), c(0.3, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 0.4)],
        vec![c(0.3, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, -0.4), c(0.0, 0.0), c(2.0, 0.0)],
    ])?;
    let coupling = validate_coupling(&e, 2, 1)?;
    let r = slh_triple(&coupling, None)?;

    show("G", r.g.full());
    show("S", &r.s);
    show("L", &r.l);
    show("H", &r.h);

    let res = r.residuals();
    println!("\nresiduals:");
    println!("  G + G† + G†ΠG     {:.2e}", res.ito_isometry);
    println!("  S unitary         {:.2e}", res.s_unitarity);
    println!("  H Hermitian       {:.2e}", res.h_hermiticity);
    println!("  G from (S, L, H)  {:.2e}", res.recomposition);
    if let Some(v) = res.half_e_one_plus_m {
        println!("  ½E(1 + M) = iG    {v:.2e}");
    }

    // The direct-scattering block alone fixes S: with E₁₁ = diag(1, 2) the
    // channel phases are the Cayley phases of 1 and 2.
    println!("\nS₁₁ = {:.6}, S₂₂ = {:.6}", r.s[(0, 0)], r.s[(1, 1)]);
    Ok(())
}
