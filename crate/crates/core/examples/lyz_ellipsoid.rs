// Γ₋₂K from facet sums, and its GL(n) covariance.

use lyzlab::bodies::Polytope;
use lyzlab::ellipsoids::lyz_body;
use nalgebra::DMatrix;

pub fn run_example() -> lyzlab::Result<()> {
    let square = Polytope::cube(2)?;
    let a = lyz_body(&square)?;
    println!("Γ₋₂(square) form:\n{}", a.matrix());

    let t = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]);
    let moved = lyz_body(&square.transform(&t)?)?;
    // Γ₋₂(TK) = TΓ₋₂K, so the form pulls back by T⁻¹
    let t_inv = t.try_inverse().unwrap();
    let want = t_inv.transpose() * a.matrix() * &t_inv;
    println!("covariance error {:.1e}", (moved.matrix() - want).amax());

    let tri = Polytope::regular_simplex(2)?;
    println!("|Γ₋₂(triangle)| = {:.6}", lyz_body(&tri)?.volume());
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
