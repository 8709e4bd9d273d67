// Polars, volumes and facets of small polytopes.

use lyzlab::bodies::{random_body, Polytope};
use nalgebra::DVector;

pub fn run_example() -> lyzlab::Result<()> {
    let square = Polytope::cube(2)?;
    let diamond = square.polar()?;
    println!("|square| = {}, |square°| = {}", square.volume(), diamond.volume());
    for f in square.facets() {
        println!("  facet normal {:?} support {} area {}", f.normal.as_slice(), f.support, f.area);
    }

    let x = DVector::from_vec(vec![0.5, 1.5]);
    println!("‖x‖_K = {} = h_K°(x) = {}", square.minkowski_norm(&x), diamond.support(&x));

    let tet = random_body(3, 3, 8)?;
    println!(
        "random body in R^3: {} vertices, {} facets, volume {:.6}, centroid {:.1e}",
        tet.vertices().len(),
        tet.facets().len(),
        tet.volume(),
        tet.centroid().norm()
    );
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
