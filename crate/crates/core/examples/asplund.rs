// Asplund sums, closed form and through the grid path.

use lyzlab::logconcave::{asplund_sum, AsplundOptions, Lattice, LogConcaveFn};
use nalgebra::DVector;

pub fn run_example() -> lyzlab::Result<()> {
    let f = LogConcaveFn::gaussian(2, 0.5)?;
    let g = LogConcaveFn::gaussian(2, 2.0)?;
    let h = asplund_sum(1.0, &f, 1.0, &g, &AsplundOptions::default())?;
    println!("f ⊕ g = {h:?}");

    let opts = AsplundOptions {
        lattice: Some(Lattice::centered(2, 6.0, 101)?),
        ..Default::default()
    };
    let grid = asplund_sum(1.0, &f, 1.0, &g, &opts)?;
    let x = DVector::from_vec(vec![1.0, 0.5]);
    println!("at x: grid {:.4} closed form {:.4}", grid.potential(&x), h.potential(&x));

    // J(f ⊕ t·g) is increasing in t at rate δJ(f, g)
    for t in [0.0, 0.5, 1.0] {
        let s = if t == 0.0 { f.clone() } else { asplund_sum(1.0, &f, t, &g, &Default::default())? };
        println!("J(f ⊕ {t}·g) = {:.6}", s.total_mass()?.value);
    }
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
