// The LYZ ellipsoid Γ₋₂f of a log-concave function, both backends.

use lyzlab::bodies::random_body;
use lyzlab::ellipsoids::lyz_body;
use lyzlab::logconcave::{Backend, LogConcaveFn, QuadratureSpec};
use lyzlab::lyz::{gamma2_fn, gamma2_total_mass};
use lyzlab::numeric::rel_matrix_error;

pub fn run_example() -> lyzlab::Result<()> {
    let spec = QuadratureSpec::default();
    let gauss = LogConcaveFn::standard_gaussian(2);
    let g = gamma2_fn(&gauss, Backend::Numeric, &spec)?;
    println!("Γ₋₂ of the Gaussian (numeric):\n{}", g.form.matrix());

    let k = random_body(5, 2, 3)?;
    let f = LogConcaveFn::quad_minkowski(k.clone(), 0.5)?;
    let a = gamma2_fn(&f, Backend::Analytic, &spec)?;
    let b = gamma2_fn(&f, Backend::Numeric, &spec)?;
    println!(
        "e^(-‖x‖²_K/2): analytic vs numeric {:.1e} (bound {:.1e}); vs Γ₋₂K/2 {:.1e}",
        rel_matrix_error(b.form.matrix(), a.form.matrix()),
        b.error_bound,
        rel_matrix_error(a.form.matrix(), &(lyz_body(&k)?.matrix() * 0.5))
    );
    println!("J(Γ₋₂f) = {:.6}", gamma2_total_mass(&a.form));
    println!("{}", serde_json::to_string(&b.report()).unwrap());
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
