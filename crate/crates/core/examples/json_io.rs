// JSON encodings of matrices, points and obstates.

use matryoshka::io::{from_json_str, MatrixJson, ObstateJson, PointJson};
use matryoshka::obstate::expectation;
use matryoshka::SubspacePoint;

pub fn run() -> matryoshka::Result<()> {
    let point = PointJson::from_point(&SubspacePoint::one(1));
    println!("the point 1 at n = 1: {}", serde_json::to_string(&point).expect("serialisable"));

    let m: MatrixJson = from_json_str(r#"{"n": 2, "re": [[1, 0], [0, 2]], "im": [[0, 1], [-1, 0]]}"#, "inline")?;
    let a = m.to_elem("inline")?;
    println!("parsed matrix is Hermitian: {}", a.is_hermitian());

    let text = r#"{
        "A": {"n": 1, "re": [[3]]},
        "W": {"n": 1, "re": [[1]]},
        "A0": {"n": 1, "re": [[0]]},
        "Winf": {"n": 1, "re": [[0]]},
        "strong": true
    }"#;
    let o = from_json_str::<ObstateJson>(text, "inline")?.to_obstate()?;
    println!("expectation of a = 3 in the state w = 1: {}", expectation(&o)?.re.round());

    let err = from_json_str::<MatrixJson>("{\"n\": 2, \"re\": [[1, 2]", "broken.json").unwrap_err();
    println!("diagnostic: {err}");
    Ok(())
}

fn main() {
    run().expect("io example");
}
