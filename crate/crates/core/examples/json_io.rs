// Reading and writing the JSON forms.

use lyzlab::bodies::Polytope;
use lyzlab::io::{body_json, fn_json, read_body, read_fn};
use lyzlab::logconcave::LogConcaveFn;

pub fn run_example() -> lyzlab::Result<()> {
    let text = body_json(&Polytope::regular_simplex(2)?);
    print!("{text}");
    let back = read_body(&text)?;
    println!("round trip volume {:.6}", back.volume());

    let f = read_fn(r#"{"family":"cone","offset":1.0,"body":{"type":"polytope","dimension":2,"vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]}}"#)?;
    println!("read {} with J = {:.6}", f.family(), f.total_mass()?.value);
    print!("{}", fn_json(&LogConcaveFn::gaussian(3, 0.5)?));

    match read_body(r#"{"type":"polytope","dimension":2,"vertices":[[0,0],[1,1],[2,2]]}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("collinear points are not a body"),
    }
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
