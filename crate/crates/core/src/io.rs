//! JSON and CSV encodings of matrices, points, obstates and classical data.
//!
//! - matrix: `{"n": 2, "re": [[..], ..], "im": [[..], ..]}`, row-major; `im` may be omitted;
//! - point: `{"n": 2, "basis_re": [[..]] (2n × n), "basis_im": [[..]]}`, canonicalised on load;
//! - obstate: `{"A": .., "W": .., "A0": .., "Winf": .., "strong": bool}` where each slot is a
//!   point, or a matrix read in the frame `(0, ∞)`: observables `a ↦ [I; a]`, states `w ↦ [w; I]`;
//! - classical function: `{"m": 3, "values": [1.5, "inf", -2]}`, or CSV with one value per field;
//! - measure: `{"m": 3, "weights": [..]}`, or CSV.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{AlgElem, CMatrix};
use crate::classical::{ClassicalFn, Extended, Measure, RP1Value};
use crate::error::{Error, Result};
use crate::grassmann::{point_from_chart, point_from_dual_chart, SubspacePoint};
use crate::obstate::{new_obstate, Obstate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub n: usize,
    pub basis_re: Vec<Vec<f64>>,
    pub basis_im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstateJson {
    #[serde(rename = "A")]
    pub a: Value,
    #[serde(rename = "W")]
    pub w: Value,
    #[serde(rename = "A0")]
    pub a0: Value,
    #[serde(rename = "Winf")]
    pub winf: Value,
    #[serde(default)]
    pub strong: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtendedJson {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalJson {
    pub m: usize,
    pub values: Vec<ExtendedJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub m: usize,
    pub weights: Vec<f64>,
}

fn parse_err(context: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{context}: {msg}"))
}

fn complex_grid(re: &[Vec<f64>], im: &[Vec<f64>], rows: usize, cols: usize, context: &str) -> Result<CMatrix> {
    if re.len() != rows {
        return Err(parse_err(context, format!("real part has {} rows, expected {rows}", re.len())));
    }
    if !im.is_empty() && im.len() != rows {
        return Err(parse_err(context, format!("imaginary part has {} rows, expected {rows}", im.len())));
    }
    for (r, row) in re.iter().enumerate() {
        if row.len() != cols {
            return Err(parse_err(context, format!("real row {r} has {} entries, expected {cols}", row.len())));
        }
    }
    for (r, row) in im.iter().enumerate() {
        if row.len() != cols {
            return Err(parse_err(context, format!("imaginary row {r} has {} entries, expected {cols}", row.len())));
        }
    }
    let mut m = DMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let x = re[r][c];
            let y = if im.is_empty() { 0.0 } else { im[r][c] };
            if !x.is_finite() || !y.is_finite() {
                return Err(parse_err(context, format!("entry ({r}, {c}) is not finite")));
            }
            m[(r, c)] = Complex64::new(x, y);
        }
    }
    Ok(m)
}

fn split(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)].re).collect()).collect();
    let im = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)].im).collect()).collect();
    (re, im)
}

impl MatrixJson {
    pub fn to_elem(&self, context: &str) -> Result<AlgElem> {
        AlgElem::new(complex_grid(&self.re, &self.im, self.n, self.n, context)?)
    }

    pub fn from_elem(a: &AlgElem) -> Self {
        let (re, im) = split(a.matrix());
        Self { n: a.dim(), re, im }
    }
}

impl PointJson {
    pub fn to_point(&self, context: &str) -> Result<SubspacePoint> {
        let m = complex_grid(&self.basis_re, &self.basis_im, 2 * self.n, self.n, context)?;
        SubspacePoint::new(m).map_err(|e| parse_err(context, e))
    }

    pub fn from_point(p: &SubspacePoint) -> Self {
        let (basis_re, basis_im) = split(p.basis());
        Self {
            n: p.dim(),
            basis_re,
            basis_im,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Observable,
    State,
}

fn slot_point(v: &Value, slot: Slot, context: &str) -> Result<SubspacePoint> {
    if v.get("basis_re").is_some() {
        let p: PointJson = serde_json::from_value(v.clone()).map_err(|e| parse_err(context, e))?;
        return p.to_point(context);
    }
    if v.get("re").is_some() {
        let m: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| parse_err(context, e))?;
        let a = m.to_elem(context)?;
        return Ok(match slot {
            Slot::Observable => point_from_chart(&a),
            Slot::State => point_from_dual_chart(&a),
        });
    }
    Err(parse_err(context, "expected a point {n, basis_re, basis_im} or a matrix {n, re, im}"))
}

impl ObstateJson {
    pub fn to_obstate(&self) -> Result<Obstate> {
        new_obstate(
            slot_point(&self.a, Slot::Observable, "A")?,
            slot_point(&self.w, Slot::State, "W")?,
            slot_point(&self.a0, Slot::Observable, "A0")?,
            slot_point(&self.winf, Slot::State, "Winf")?,
            self.strong,
        )
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_err(&path.display().to_string(), e))
}

pub fn from_json_str<T: serde::de::DeserializeOwned>(text: &str, context: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let msg = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m);
        parse_err(context, format!("line {}, column {}: {msg}", e.line(), e.column()))
    })
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    from_json_str(&read(path)?, &path.display().to_string())
}

pub fn load_obstate(path: &Path) -> Result<Obstate> {
    load_json::<ObstateJson>(path)?.to_obstate()
}

pub fn load_point(path: &Path) -> Result<SubspacePoint> {
    load_json::<PointJson>(path)?.to_point(&path.display().to_string())
}

pub fn load_matrix(path: &Path) -> Result<AlgElem> {
    load_json::<MatrixJson>(path)?.to_elem(&path.display().to_string())
}

pub fn parse_extended(s: &str) -> Result<RP1Value> {
    s.trim().parse::<RP1Value>()
}

fn extended_from_json(v: &ExtendedJson, context: &str) -> Result<RP1Value> {
    match v {
        ExtendedJson::Number(x) if x.is_finite() => Ok(Extended::Finite(*x)),
        ExtendedJson::Number(x) => Err(parse_err(context, format!("non-finite number {x}"))),
        ExtendedJson::Text(s) => parse_extended(s).map_err(|e| parse_err(context, e)),
    }
}

impl ClassicalJson {
    pub fn to_fn(&self) -> Result<ClassicalFn> {
        if self.values.len() != self.m {
            return Err(parse_err("values", format!("{} entries, expected m = {}", self.values.len(), self.m)));
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| extended_from_json(v, &format!("values[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassicalFn::new(values))
    }
}

impl MeasureJson {
    pub fn to_measure(&self) -> Result<Measure> {
        if self.weights.len() != self.m {
            return Err(parse_err("weights", format!("{} entries, expected m = {}", self.weights.len(), self.m)));
        }
        Measure::new(self.weights.clone())
    }
}

/// All fields of a header-less CSV document, in reading order.
pub fn csv_fields(text: &str, context: &str) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(context, format!("line {}: {e}", line + 1)))?;
        out.extend(record.iter().filter(|f| !f.is_empty()).map(str::to_string));
    }
    Ok(out)
}

fn is_json(path: &Path, text: &str) -> bool {
    path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{')
}

/// A classical function from a JSON or CSV file.
pub fn load_classical_fn(path: &Path) -> Result<ClassicalFn> {
    let text = read(path)?;
    let context = path.display().to_string();
    if is_json(path, &text) {
        return from_json_str::<ClassicalJson>(&text, &context)?.to_fn();
    }
    let values = csv_fields(&text, &context)?
        .iter()
        .enumerate()
        .map(|(i, f)| parse_extended(f).map_err(|e| parse_err(&context, format!("field {}: {e}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassicalFn::new(values))
}

/// A measure from a JSON or CSV file.
pub fn load_measure(path: &Path) -> Result<Measure> {
    let text = read(path)?;
    let context = path.display().to_string();
    if is_json(path, &text) {
        return from_json_str::<MeasureJson>(&text, &context)?.to_measure();
    }
    let weights = csv_fields(&text, &context)?
        .iter()
        .enumerate()
        .map(|(i, f)| {
            f.parse::<f64>()
                .map_err(|e| parse_err(&context, format!("field {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Measure::new(weights)
}

pub fn extended_to_json(v: RP1Value) -> Value {
    match v {
        Extended::Finite(x) => Value::from(x),
        Extended::Infinity => Value::from("inf"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstate::expectation;

    #[test]
    fn matrix_round_trip() {
        let a = AlgElem::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]], &[vec![0.5, 0.0], vec![0.0, -1.0]]).unwrap();
        let j = MatrixJson::from_elem(&a);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = from_json_str(&text, "test").unwrap();
        assert_eq!(back.to_elem("test").unwrap(), a);
    }

    #[test]
    fn point_round_trip_and_shape_errors() {
        let p = SubspacePoint::one(2);
        let j = PointJson::from_point(&p);
        assert_eq!(j.to_point("p").unwrap(), p);
        let bad = PointJson {
            n: 2,
            basis_re: vec![vec![1.0, 0.0]; 3],
            basis_im: vec![],
        };
        let err = bad.to_point("p").unwrap_err();
        assert!(err.to_string().contains("3 rows, expected 4"), "{err}");
    }

    #[test]
    fn obstate_from_matrices() {
        let text = r#"{
            "A": {"n": 2, "re": [[1, 0], [0, -1]]},
            "W": {"n": 2, "re": [[0.75, 0], [0, 0.25]]},
            "A0": {"n": 2, "re": [[0, 0], [0, 0]]},
            "Winf": {"n": 2, "re": [[0, 0], [0, 0]]},
            "strong": true
        }"#;
        let o = from_json_str::<ObstateJson>(text, "inline").unwrap().to_obstate().unwrap();
        assert!((expectation(&o).unwrap() - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = from_json_str::<MatrixJson>("{\"n\": 2,\n \"re\": [[1, 2]", "m.json").unwrap_err();
        assert!(err.to_string().contains("m.json: line 2"), "{err}");
    }

    #[test]
    fn classical_inputs() {
        let j: ClassicalJson = from_json_str(r#"{"m": 3, "values": [1.5, "inf", -2]}"#, "f").unwrap();
        let f = j.to_fn().unwrap();
        assert_eq!(f.values, vec![Extended::Finite(1.5), Extended::Infinity, Extended::Finite(-2.0)]);
        let fields = csv_fields("1, inf\n-2\n", "f.csv").unwrap();
        assert_eq!(fields, vec!["1", "inf", "-2"]);
        let wrong: ClassicalJson = from_json_str(r#"{"m": 2, "values": [1]}"#, "f").unwrap();
        assert!(wrong.to_fn().is_err());
    }
}
