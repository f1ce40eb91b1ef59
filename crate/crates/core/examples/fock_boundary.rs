//! The boundary condition on truncated Fock space in its two forms,
//! `Π{i(a₊ - a₋) + E𝔞}Φ = 0` and `a₋Φ = S a₊Φ + LΦ`, compared through
//! principal angles, plus the singular action on the common kernel.
//!
//! Run with `cargo run --release --example fock_boundary`.

use slh_extension::fock::{build_mode_operators, fock_check, FockTolerances};
use slh_extension::random::{random_coupling, random_gauge, seeded_rng};
use slh_extension::slh::Gauge;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded_rng(2024);
    let tol = FockTolerances::default();
    println!(
        "{:>9} {:>6} {:>6} {:>8} {:>10} {:>10} {:>10}",
        "(m,n,d)", "gauge", "dim", "ker", "angle", "action", "K-K†"
    );
    for (m, n, d) in [(1, 1, 5), (2, 1, 5), (1, 2, 4), (2, 1, 6)] {
        let e = random_coupling(&mut rng, m, n);
        let z = Gauge::Matrix(random_gauge(&mut rng, n * m, 0.5));
        for gauge in [None, Some(&z)] {
            let ops = build_mode_operators(m, n, d, gauge)?;
            let r = fock_check(&e, &ops, &tol, 10, &mut rng)?;
            println!(
                "{:>9} {:>6} {:>6} {:>8} {:>10.1e} {:>10.1e} {:>10.1e}",
                format!("({m},{n},{d})"),
                if r.gauged { "Z" } else { "-" },
                r.dim,
                format!("{}/{}", r.kernel_dim_b, r.kernel_dim_c),
                r.max_angle,
                r.action_residual,
                r.k_sing_skew
            );
        }
    }
    Ok(())
}
