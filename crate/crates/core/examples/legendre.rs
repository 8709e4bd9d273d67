// Closed-form duals and the discrete Legendre transform on a lattice.

use lyzlab::bodies::Polytope;
use lyzlab::logconcave::{default_dual_lattice, discrete_legendre, GridFn, Lattice, LogConcaveFn};
use nalgebra::DVector;

pub fn run_example() -> lyzlab::Result<()> {
    let gauss = LogConcaveFn::gaussian(2, 0.5)?;
    println!("dual of c|x|² with c = 1/2: {:?}", gauss.legendre()?);

    // the dual of a cone potential is an indicator of the polar body
    let cone = LogConcaveFn::cone(Polytope::cube(2)?, 1.0)?;
    let dual = cone.legendre()?;
    println!("dual family: {}", dual.family());

    let lat = Lattice::centered(2, 4.0, 81)?;
    let grid = GridFn::sample(lat.clone(), |x| gauss.potential(x))?;
    let star = discrete_legendre(&grid, &default_dual_lattice(&grid))?;
    let back = discrete_legendre(&star, &lat)?;
    let y = DVector::from_vec(vec![0.8, -0.3]);
    println!("φ*(y) grid {:.5} exact {:.5}", star.potential(&y), gauss.legendre()?.potential(&y));
    println!("φ**(y) grid {:.5} φ(y) {:.5}", back.potential(&y), gauss.potential(&y));
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
