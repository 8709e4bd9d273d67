// The LYZ polar inequality and Mahler products of polytopes.

use lyzlab::bodies::{random_symmetric_body, Polytope};
use lyzlab::verify::{lyz_polar_check, mahler_check, mahler_product};

pub fn run_example() -> lyzlab::Result<()> {
    for (name, p) in [
        ("triangle", Polytope::regular_simplex(2)?),
        ("square", Polytope::cube(2)?),
        ("tetrahedron", Polytope::regular_simplex(3)?),
        ("octahedron", Polytope::cross_polytope(3)?),
    ] {
        let r = lyz_polar_check(&p)?;
        println!("{name}: |K°||Γ₋₂K| / const = {:.12} equality case {}", r.ratio, r.equality);
    }

    println!("Mahler square {:.6}", mahler_product(&Polytope::cube(2)?)?);
    println!("Mahler 64-gon {:.6}", mahler_product(&Polytope::regular_polygon(64, 1.0, 0.0)?)?);
    let r = mahler_check(&random_symmetric_body(4, 3, 5)?)?;
    println!("random symmetric body in R^3: ratio {:.6} pass {}", r.ratio, r.pass);
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
