// The functional inequality |K_t(f°)|·J(Γ₋₂f) ≥ const, and the c₀ scan.

use lyzlab::bodies::Polytope;
use lyzlab::logconcave::{Backend, LogConcaveFn, QuadratureSpec};
use lyzlab::verify::{c0_prediction, main_check, main_constant};

pub fn run_example() -> lyzlab::Result<()> {
    let spec = QuadratureSpec::default();
    let simplex = Polytope::regular_simplex(2)?;
    println!("constant at n = 2: {:.6}", main_constant(2));

    for c0 in [0.5, 1.0, 1.25, 1.5, 2.0] {
        let f = LogConcaveFn::cone(simplex.clone(), c0)?;
        let r = main_check(&f, Backend::Analytic, &spec)?;
        println!(
            "c₀ = {c0}: ratio {} (predicted {:.6}) flags {:?}",
            r.ratio,
            c0_prediction(2, c0) / main_constant(2),
            r.flags
        );
    }

    let square = LogConcaveFn::cone(Polytope::cube(2)?, 1.0)?;
    for backend in [Backend::Analytic, Backend::Numeric] {
        let r = main_check(&square, backend, &spec)?;
        println!("square cone, {}: ratio {:.6} ± {:.1e}", backend.as_str(), r.ratio, r.error_bound);
    }
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
