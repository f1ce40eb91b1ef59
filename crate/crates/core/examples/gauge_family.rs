//! The one-parameter family of extensions obtained by moving the boundary
//! functional from `δ⋆` to `ζ = κ₊δ₊ + κ₋δ₋`, and a matrix gauge `Z`.
//!
//! Run with `cargo run --example gauge_family`.

use slh_extension::linalg::{ComplexMatrix, C64};
use slh_extension::random::{random_coupling, random_gauge, seeded_rng};
use slh_extension::slh::{
    closed_form_triple, gauge_reduction_check, slh_triple, validate_coupling, Gauge, ScalarGauge,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = ComplexMatrix::from_rows(&[
        vec![C64::new(0.2, 0.0), C64::new(0.6, -0.3)],
        vec![C64::new(0.6, 0.3), C64::new(1.0, 0.0)],
    ])?;
    let e = validate_coupling(&raw, 1, 1)?;

    println!("{:>6} {:>22} {:>22} {:>10} {:>10}", "σ", "S(σ)", "L(σ)", "H(σ)", "closed");
    for sigma in [-1.0, -0.5, 0.0, 0.3, 1.0, 2.0] {
        let r = slh_triple(&e, Some(&Gauge::Scalar(ScalarGauge::new(sigma))))?;
        let closed = closed_form_triple(&e, sigma)?;
        let dev = closed.s.max_diff(&r.s).max(closed.l.max_diff(&r.l)).max(closed.h.max_diff(&r.h));
        println!(
            "{sigma:>6.2} {:>22} {:>22} {:>10.5} {:>10.1e}",
            format!("{:.5}", r.s[(0, 0)]),
            format!("{:.5}", r.l[(0, 0)]),
            r.h[(0, 0)].re,
            dev
        );
    }

    let report = gauge_reduction_check(&e, &[-1.0, 0.0, 0.3, 1.0])?;
    println!("\nZ = 0 reproduces the ungauged G to {:.1e}", report.zero_gauge);

    // A random matrix gauge on a two-channel qubit model keeps the Itô
    // isometry, so the gauged S stays unitary.
    let mut rng = seeded_rng(9);
    let e = random_coupling(&mut rng, 2, 2);
    let z = random_gauge(&mut rng, 4, 0.8);
    let r = slh_triple(&e, Some(&Gauge::Matrix(z)))?;
    println!(
        "matrix gauge: isometry residual {:.1e}, S unitarity {:.1e}",
        r.ito_isometry_residual(),
        r.s.unitarity_defect()
    );
    Ok(())
}
