// μ_f as a weighted point cloud and the first variation δJ(f, g).

use lyzlab::bodies::Polytope;
use lyzlab::logconcave::{first_variation, surface_measure, Backend, LogConcaveFn, QuadratureSpec};

pub fn run_example() -> lyzlab::Result<()> {
    let spec = QuadratureSpec::with_resolution(64);
    let f = LogConcaveFn::cone(Polytope::regular_simplex(2)?, 1.0)?;
    let mu = surface_measure(&f, &spec)?;
    println!(
        "μ_f: {} atoms, mass {:.6} (J(f) = {:.6}), barycenter {:.1e}",
        mu.measure.len(),
        mu.measure.total_mass(),
        f.total_mass()?.value,
        mu.measure.barycenter().norm()
    );

    for backend in [Backend::Analytic, Backend::Numeric] {
        let dj = first_variation(&f, &f, backend, &spec)?;
        println!("δJ(f,f) {}: {:.6} ± {:.1e}", backend.as_str(), dj.value, dj.error_bound);
    }
    let g = LogConcaveFn::gaussian(2, 1.0)?;
    let h = LogConcaveFn::gaussian(2, 0.25)?;
    println!("δJ(γ, γ') = {:.6}", first_variation(&g, &h, Backend::Analytic, &spec)?.value);
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
