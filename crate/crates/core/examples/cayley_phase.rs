//! Boundary phase of a point interaction versus the phase picked up by a
//! smooth potential of the same strength.
//!
//! Run with `cargo run --example cayley_phase`.

use std::f64::consts::PI;

use slh_extension::one_particle::boundary_phase;

fn main() {
    println!("{:>8} {:>24} {:>24} {:>10}", "E", "s(E)", "e^(-iE)", "|diff|");
    for e in [0.0, 0.1, 0.5, 1.0, 2.0, PI, 2.0 * PI] {
        let p = boundary_phase(e, None);
        println!(
            "{e:>8.4} {:>24} {:>24} {:>10.3e}",
            format!("{:.6}", p.s),
            format!("{:.6}", p.s_chebotarev),
            (p.s - p.s_chebotarev).norm()
        );
    }

    // The two agree to third order near zero and diverge after that: at
    // E = π the delta-potential limit flips the sign, the Cayley phase
    // does not.
    let p = boundary_phase(PI, None);
    println!("\nat E = π: arg s = {:.6}, arg e^(-iE) = {:.6}", p.s.arg(), p.s_chebotarev.arg());

    println!("\ngauged phases s_σ(E = 1):");
    for sigma in [-1.0, 0.0, 0.3, 1.0] {
        let p = boundary_phase(1.0, Some(sigma));
        println!("  σ = {sigma:>5.2}: {:.6}  (|s_σ| = {:.15})", p.s_sigma, p.s_sigma.norm());
    }
}
