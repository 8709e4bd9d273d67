// The barycentric containment check and the cone-form test on grids.

use lyzlab::bodies::Polytope;
use lyzlab::logconcave::{surface_measure, DiscreteMeasure, GridFn, Lattice, LogConcaveFn, QuadratureSpec};
use lyzlab::numeric::sphere_directions;
use lyzlab::verify::{cone_form_diagnostic, containment_check};

pub fn run_example() -> lyzlab::Result<()> {
    let cone = LogConcaveFn::cone(Polytope::regular_simplex(2)?, 1.0)?;
    let mu = surface_measure(&cone, &QuadratureSpec::with_resolution(64))?.measure;
    let r = containment_check(&cone, &mu)?;
    println!("cone, ν = μ_f: φ*(x₀/r) = {:.6} ≤ −log t = {:.6}", r.lhs, r.rhs);

    let gauss = LogConcaveFn::gaussian(2, 0.5)?;
    let pts: Vec<_> = sphere_directions(2, 100, 3).into_iter().enumerate().map(|(k, u)| u * (0.2 + 0.01 * k as f64)).collect();
    let nu = DiscreteMeasure::from_points(&pts, vec![1.0; pts.len()])?;
    println!("Gaussian, 100 atoms: pass {}", containment_check(&gauss, &nu)?.pass);

    let lat = Lattice::centered(2, 2.0, 81)?;
    let tri = LogConcaveFn::cone(Polytope::regular_simplex(2)?, 0.3)?;
    let d = cone_form_diagnostic(&GridFn::sample(lat.clone(), |x| tri.potential(x))?)?;
    let k = d.k_estimate.expect("level set inside the grid");
    println!("sampled cone: is_cone {} c = {:.6}, |K̂| = {:.4} vs {:.4}", d.is_cone, d.c, k.volume(), Polytope::regular_simplex(2)?.volume());
    let d = cone_form_diagnostic(&GridFn::sample(lat, |x| gauss.potential(x))?)?;
    println!("sampled Gaussian: is_cone {} residual {:.3}", d.is_cone, d.max_residual);
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
