//! Coherent states whose outgoing amplitudes are `S α + L` satisfy the
//! boundary condition up to the truncation tail, which shrinks
//! factorially with the cutoff.
//!
//! Run with `cargo run --release --example coherent_domain`.

use slh_extension::fock::{build_mode_operators, coherent_boundary_residual, coherent_truncation_error, Mode};
use slh_extension::linalg::{ComplexMatrix, C64};
use slh_extension::slh::validate_coupling;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = ComplexMatrix::from_rows(&[
        vec![C64::new(0.1, 0.0), C64::new(0.2, 0.1)],
        vec![C64::new(0.2, -0.1), C64::new(1.5, 0.0)],
    ])?;
    let e = validate_coupling(&raw, 1, 1)?;
    let alpha = C64::new(0.3, -0.2);

    println!("{:>3} {:>14} {:>14}", "d", "residual", "tail bound");
    for d in [4, 6, 8, 10, 12] {
        let ops = build_mode_operators(1, 1, d, None)?;
        let res = coherent_boundary_residual(&e, &ops, &[alpha])?;
        println!("{d:>3} {res:>14.3e} {:>14.3e}", coherent_truncation_error(alpha, d));
    }

    let ops = build_mode_operators(1, 1, 12, None)?;
    let v = ops.space().coherent_state(&[C64::new(1.0, 0.0)], &[alpha, C64::new(0.0, 0.0)])?;
    let av = ops.annihilator(Mode::plus(0)).mul_vec(&v);
    let err: f64 = av.iter().zip(&v).map(|(x, y)| (x - alpha * y).norm_sqr()).sum::<f64>().sqrt();
    println!("\n‖a₊|α⟩ - α|α⟩‖ = {err:.3e} at d = 12");
    Ok(())
}
