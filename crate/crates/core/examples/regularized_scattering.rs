//! Transmission through `E g_ε(x)` for shrinking `ε`: the phase tends to
//! `e^{-iE}` for every normalized mollifier, not to the Cayley phase of the
//! point interaction.
//!
//! Run with `cargo run --release --example regularized_scattering`.

use std::f64::consts::PI;

use slh_extension::one_particle::{scatter_regularized, Mollifier};

fn triangle(x: f64, eps: f64) -> f64 {
    (1.0 - x.abs() / eps).max(0.0) / eps
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mollifiers = [
        ("bump", Mollifier::Bump),
        ("raised cosine", Mollifier::RaisedCosine),
        ("triangle", Mollifier::Custom(triangle)),
    ];
    for e in [1.0, PI] {
        println!("E = {e:.4}");
        for (name, g) in mollifiers {
            for eps in [0.1, 0.01, 0.001] {
                let r = scatter_regularized(e, eps, g)?;
                println!(
                    "  {name:<14} ε = {eps:<6} phase {:.8}  |phase - e^(-iE)| {:.1e}  |e^(-iE) - s| {:.4}",
                    r.phase, r.phase_error, r.contrast
                );
            }
        }
    }

    fn lopsided(x: f64, eps: f64) -> f64 {
        2.0 * (1.0 - x.abs() / eps).max(0.0) / eps
    }
    match scatter_regularized(1.0, 0.1, Mollifier::Custom(lopsided)) {
        Err(err) => println!("\nrejected: {err}"),
        Ok(_) => println!("\nunexpectedly accepted an unnormalized mollifier"),
    }
    Ok(())
}
