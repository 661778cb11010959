macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(algebra_basics, "algebra_basics.rs");
example!(grassmann_points, "grassmann_points.rs");
example!(cross_ratio, "cross_ratio.rs");
example!(hermitian_line, "hermitian_line.rs");
example!(cayley_unitary, "cayley_unitary.rs");
example!(rank_and_order, "rank_and_order.rs");
example!(obstate_expectation, "obstate_expectation.rs");
example!(classical_model, "classical_model.rs");
example!(exact_backend, "exact_backend.rs");
example!(property_sweep, "property_sweep.rs");
example!(json_io, "json_io.rs");

#[test]
fn algebra_example_runs() {
    algebra_basics::run().expect("algebra example");
}

#[test]
fn grassmann_example_runs() {
    grassmann_points::run().expect("grassmann example");
}

#[test]
fn cross_ratio_example_runs() {
    cross_ratio::run().expect("cross-ratio example");
}

#[test]
fn hermitian_example_runs() {
    hermitian_line::run().expect("hermitian example");
}

#[test]
fn cayley_example_runs() {
    cayley_unitary::run().expect("cayley example");
}

#[test]
fn rank_example_runs() {
    rank_and_order::run().expect("rank example");
}

#[test]
fn obstate_example_runs() {
    obstate_expectation::run().expect("obstate example");
}

#[test]
fn classical_example_runs() {
    classical_model::run().expect("classical example");
}

#[test]
fn exact_example_runs() {
    exact_backend::run().expect("exact example");
}

#[test]
fn sweep_example_runs() {
    property_sweep::run().expect("sweep example");
}

#[test]
fn io_example_runs() {
    json_io::run().expect("io example");
}
