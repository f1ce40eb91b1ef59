//! Defect vectors of the derivative on the punctured line, the reproducing
//! property of the Sobolev inner product and the orthogonal decomposition
//! `ψ = ψ₀ + c₊φ₊ + c₋φ₋`.
//!
//! Run with `cargo run --release --example defect_vectors`.

use slh_extension::linalg::C64;
use slh_extension::one_particle::{
    decompose_sobolev, defect_vectors, sobolev_inner, sobolev_norm, symmetry_defect, Functional,
    GridFunction, GridSpec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = GridSpec::default();
    let (plus, minus) = defect_vectors(spec)?;
    println!("⟨ȷ|φ₊⟩ = {:.6}, ⟨ȷ|φ₋⟩ = {:.6}",Functional::Jump.eval(&plus), Functional::Jump.eval(&minus));
    println!("‖φ₊‖ = {:.8}, ‖φ₋‖ = {:.8}", sobolev_norm(&plus), sobolev_norm(&minus));

    // A function with different limits on either side of the origin.
    let psi = GridFunction::from_fn(
        spec,
        |t| C64::new(0.0, 2.0) * (-(t + 0.5).powi(2)).exp(),
        |t| C64::new(1.0, 0.0) * (-(t - 1.0).powi(2) / 2.0).exp(),
    )?;
    let i = C64::new(0.0, 1.0);
    let from_plus = sobolev_inner(&plus.scale(i), &psi)?;
    let from_minus = sobolev_inner(&minus.scale(-i), &psi)?;
    println!("\nψ(0⁺) = {:.8}, recovered {:.8}", psi.at_plus(), from_plus);
    println!("ψ(0⁻) = {:.8}, recovered {:.8}", psi.at_minus(), from_minus);

    let d = decompose_sobolev(&psi);
    println!("\nc₊ = {:.6}, c₋ = {:.6}", d.c_plus, d.c_minus);
    println!(
        "⟨φ₊|ψ₀⟩ = {:.2e}, ⟨φ₋|ψ₀⟩ = {:.2e}",
        sobolev_inner(&plus, &d.psi0)?.norm(),
        sobolev_inner(&minus, &d.psi0)?.norm()
    );

    // iD is symmetric up to discretization error, which is second order.
    println!("\nsymmetry defect of iD:");
    let mut spec = GridSpec::new(20.0, 1e-2)?;
    let mut last = None;
    for _ in 0..4 {
        let phi = GridFunction::from_fn(spec, |t| (-(t + 1.0).powi(2)).exp().into(), |t| {
            C64::new(0.5, 0.5) * (-t * t).exp()
        })?;
        let chi = GridFunction::from_fn(spec, |t| C64::new(0.0, 1.0) * (-(t + 0.3).powi(2) * 3.0).exp(), |t| {
            (-(t - 0.7).powi(2)).exp().into()
        })?;
        let d = symmetry_defect(&phi, &chi, None)?.norm();
        match last {
            Some(prev) => println!("  h = {:.2e}: {d:.3e}  (ratio {:.3})", spec.step(), prev / d),
            None => println!("  h = {:.2e}: {d:.3e}", spec.step()),
        }
        last = Some(d);
        spec = spec.refined();
    }
    Ok(())
}
