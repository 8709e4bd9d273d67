// Isotropic spherical measures and the Ball–Barthe determinant inequality.

use lyzlab::isotropic::{ball_barthe, random_isotropic_measure, SphericalMeasure};

pub fn run_example() -> lyzlab::Result<()> {
    let cross = SphericalMeasure::cross(3);
    println!("cross measure isotropic: {:?}", cross.is_isotropic(1e-12));

    let mu = random_isotropic_measure(11, 4, 9, false)?;
    println!("random measure: {} atoms, mass {:.12}", mu.len(), mu.total_mass());
    let l: Vec<f64> = (0..mu.len()).map(|k| 0.2 + k as f64).collect();
    let bb = ball_barthe(&mu, &l)?;
    println!("det ∫ l u⊗u = {:.6} ≥ exp ∫ log l = {:.6} (ratio {:.6})", bb.lhs, bb.rhs, bb.ratio);

    // constant l is the equality case
    let flat = ball_barthe(&mu, &vec![3.0; mu.len()])?;
    println!("constant l: ratio − 1 = {:.1e}", flat.ratio - 1.0);
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
