// each example doubles as a smoke test through its run_example()

mod asplund {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/asplund.rs"));
}

mod ball_barthe {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ball_barthe.rs"));
}

mod body_inequalities {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/body_inequalities.rs"));
}

mod containment {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/containment.rs"));
}

mod gamma2_function {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gamma2_function.rs"));
}

mod isotropic_position {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/isotropic_position.rs"));
}

mod json_io {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/json_io.rs"));
}

mod legendre {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/legendre.rs"));
}

mod lyz_ellipsoid {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lyz_ellipsoid.rs"));
}

mod main_inequality {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/main_inequality.rs"));
}

mod polytopes {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/polytopes.rs"));
}

mod surface_measure {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/surface_measure.rs"));
}

mod sweeps {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sweeps.rs"));
}

mod tau {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tau.rs"));
}

#[test]
fn asplund_runs() {
    asplund::run_example().expect("asplund example should run");
}

#[test]
fn ball_barthe_runs() {
    ball_barthe::run_example().expect("ball_barthe example should run");
}

#[test]
fn body_inequalities_runs() {
    body_inequalities::run_example().expect("body_inequalities example should run");
}

#[test]
fn containment_runs() {
    containment::run_example().expect("containment example should run");
}

#[test]
fn gamma2_function_runs() {
    gamma2_function::run_example().expect("gamma2_function example should run");
}

#[test]
fn isotropic_position_runs() {
    isotropic_position::run_example().expect("isotropic_position example should run");
}

#[test]
fn json_io_runs() {
    json_io::run_example().expect("json_io example should run");
}

#[test]
fn legendre_runs() {
    legendre::run_example().expect("legendre example should run");
}

#[test]
fn lyz_ellipsoid_runs() {
    lyz_ellipsoid::run_example().expect("lyz_ellipsoid example should run");
}

#[test]
fn main_inequality_runs() {
    main_inequality::run_example().expect("main_inequality example should run");
}

#[test]
fn polytopes_runs() {
    polytopes::run_example().expect("polytopes example should run");
}

#[test]
fn surface_measure_runs() {
    surface_measure::run_example().expect("surface_measure example should run");
}

#[test]
fn sweeps_runs() {
    sweeps::run_example().expect("sweeps example should run");
}

#[test]
fn tau_runs() {
    tau::run_example().expect("tau example should run");
}
