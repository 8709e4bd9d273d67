// Moving a function into isotropic position and building the lifted embedding.

use lyzlab::bodies::random_body;
use lyzlab::isotropic::{lifted_embedding, ISO_TOL_NUMERIC};
use lyzlab::logconcave::{Backend, LogConcaveFn, QuadratureSpec};
use lyzlab::lyz::{gamma2_fn, isotropic_position};

pub fn run_example() -> lyzlab::Result<()> {
    let spec = QuadratureSpec::default();
    let f = LogConcaveFn::quad_minkowski(random_body(8, 2, 5)?, 0.5)?;
    let (t, g) = isotropic_position(&f, Backend::Analytic, &spec)?;
    println!("T =\n{t}");
    println!("Γ₋₂(f∘T) =\n{}", gamma2_fn(&g, Backend::Analytic, &spec)?.form.matrix());

    let gauss = LogConcaveFn::standard_gaussian(2);
    let lifted = lifted_embedding(&gauss, &spec, ISO_TOL_NUMERIC)?;
    let check = lifted.check(ISO_TOL_NUMERIC);
    println!(
        "lifted measure on S^2: mass {:.4}, isotropic {} (residual {:.1e})",
        lifted.sphere.total_mass(),
        check.isotropic,
        check.residual
    );
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
