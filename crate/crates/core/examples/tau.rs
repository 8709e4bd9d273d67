// τ with ∫₀^τ(t) e^{−l} dl = (1/√π)∫_{−∞}^t e^{−l²} dl, and its derivative.

use lyzlab::isotropic::{log_tau_prime, tau};

pub fn run_example() -> lyzlab::Result<()> {
    let half_log_pi = 0.5 * std::f64::consts::PI.ln();
    let mut worst = 0f64;
    for k in 0..=600 {
        let t = -3.0 + 0.01 * k as f64;
        worst = worst.max((-tau(t) + log_tau_prime(t) + half_log_pi + t * t).abs());
    }
    println!("τ(0) = {} (ln 2 = {})", tau(0.0), std::f64::consts::LN_2);
    println!("max |−τ + log τ' + log√π + t²| on [−3, 3]: {worst:.1e}");
    for t in [-30.0, -5.0, 5.0, 30.0] {
        println!("τ({t}) = {:.6e}", tau(t));
    }
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
