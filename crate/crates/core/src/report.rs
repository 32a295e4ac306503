//! File formats: witness/state JSON input, canonical JSON reports, CSV grids.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::loophole::ContourGrid;
use crate::operator::HermitianOperator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub re: f64,
    pub im: f64,
}

/// `{"label": str?, "dims": [int, ...], "matrix": [[{"re": f, "im": f}, ...], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<Entry>>,
}

impl WitnessFile {
    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn from_operator(op: &HermitianOperator, label: Option<&str>) -> Self {
        let m = op.matrix();
        let matrix = (0..m.nrows())
            .map(|r| {
                (0..m.ncols())
                    .map(|c| Entry {
                        re: m[(r, c)].re,
                        im: m[(r, c)].im,
                    })
                    .collect()
            })
            .collect();
        Self {
            label: label.map(str::to_string),
            dims: op.dims().to_vec(),
            matrix,
        }
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        let rows: Vec<Vec<Complex64>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|e| Complex64::new(e.re, e.im)).collect())
            .collect();
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(crate::Error::DimensionMismatch(format!(
                "matrix row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        HermitianOperator::new(self.dims.clone(), DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest text for `round12(x)`; never prints `-0`. Very small or large
/// magnitudes use exponent notation.
pub fn format12(x: f64) -> String {
    let r = round12(x);
    if r != 0.0 && (r.abs() < 1e-6 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn round_tree(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_tree),
        Value::Object(map) => map.values_mut().for_each(round_tree),
        _ => {}
    }
}

/// Pretty JSON with sorted keys and every float at 12 significant digits,
/// so identical inputs give byte-identical output.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_tree(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

/// Header row of `eta_plus` values, one row per `eta_minus`, LF endings.
pub fn contour_csv(grid: &ContourGrid) -> String {
    let mut out = String::from("eta_minus/eta_plus");
    for &ep in &grid.eta_plus {
        out.push(',');
        out.push_str(&format12(ep));
    }
    out.push('\n');
    for (em, row) in grid.eta_minus.iter().zip(&grid.values) {
        out.push_str(&format12(*em));
        for &v in row {
            out.push(',');
            out.push_str(&format12(v));
        }
        out.push('\n');
    }
    out
}
