//! JSON state files.
//!
//! ```json
//! { "dims": [2, 2], "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]] }
//! { "dims": [2], "density": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]] }
//! ```

use std::path::Path;

use nalgebra::Complex;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::party::PartyStructure;
use crate::scalar::{CMatrix, CVector};
use crate::state::{PureState, QuantumState};

/// Amplitude vectors are renormalized when their norm is this close to 1.
pub const AMPLITUDE_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Pure(PureState<f64>),
    Mixed(QuantumState<f64>),
}

impl StateFile {
    pub fn density(&self) -> QuantumState<f64> {
        match self {
            Self::Pure(p) => p.to_density(),
            Self::Mixed(m) => m.clone(),
        }
    }

    /// The pure state, recovering it from a rank-one density matrix if needed.
    pub fn pure(&self) -> Result<PureState<f64>> {
        match self {
            Self::Pure(p) => Ok(p.clone()),
            Self::Mixed(m) => m.to_pure(),
        }
    }

    pub fn structure(&self) -> &PartyStructure {
        match self {
            Self::Pure(p) => p.structure(),
            Self::Mixed(m) => m.structure(),
        }
    }
}

fn field_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("field `{path}`: {msg}"))
}

fn complex_at(v: &Value, path: &str) -> Result<Complex<f64>> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| field_err(path, "expected a [re, im] pair"))?;
    let part = |i: usize, name: &str| {
        pair[i]
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| field_err(path, format!("{name} part is not a finite number")))
    };
    Ok(Complex::new(part(0, "real")?, part(1, "imaginary")?))
}

pub fn parse_state_json(text: &str) -> Result<StateFile> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be a JSON object".into()))?;

    let dims_v = obj.get("dims").ok_or_else(|| field_err("dims", "missing"))?;
    let dims = dims_v
        .as_array()
        .ok_or_else(|| field_err("dims", "expected an array of integers"))?
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.as_u64()
                .map(|d| d as usize)
                .ok_or_else(|| field_err(&format!("dims[{i}]"), "expected a positive integer"))
        })
        .collect::<Result<Vec<_>>>()?;
    let structure = PartyStructure::new(dims).map_err(|e| field_err("dims", e))?;
    let dim = structure.total_dim();

    match (obj.get("amplitudes"), obj.get("density")) {
        (Some(_), Some(_)) => Err(Error::Parse(
            "give exactly one of `amplitudes` or `density`, not both".into(),
        )),
        (None, None) => Err(Error::Parse(
            "missing `amplitudes` or `density`".into(),
        )),
        (Some(a), None) => {
            let arr = a
                .as_array()
                .ok_or_else(|| field_err("amplitudes", "expected an array"))?;
            if arr.len() != dim {
                return Err(field_err(
                    "amplitudes",
                    format!("has {} entries, dims require {dim}", arr.len()),
                ));
            }
            let v = arr
                .iter()
                .enumerate()
                .map(|(i, z)| complex_at(z, &format!("amplitudes[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let v = CVector::from_vec(v);
            let norm = v.norm();
            if (norm - 1.0).abs() > AMPLITUDE_NORM_TOLERANCE {
                return Err(field_err(
                    "amplitudes",
                    format!("vector has norm {norm}, expected 1"),
                ));
            }
            PureState::normalized(structure, v)
                .map(StateFile::Pure)
                .map_err(|e| field_err("amplitudes", e))
        }
        (None, Some(d)) => {
            let rows = d
                .as_array()
                .ok_or_else(|| field_err("density", "expected an array of rows"))?;
            if rows.len() != dim {
                return Err(field_err(
                    "density",
                    format!("has {} rows, dims require {dim}", rows.len()),
                ));
            }
            let mut m = CMatrix::<f64>::zeros(dim, dim);
            for (r, row) in rows.iter().enumerate() {
                let cols = row
                    .as_array()
                    .filter(|c| c.len() == dim)
                    .ok_or_else(|| field_err(&format!("density[{r}]"), format!("expected {dim} entries")))?;
                for (c, z) in cols.iter().enumerate() {
                    m[(r, c)] = complex_at(z, &format!("density[{r}][{c}]"))?;
                }
            }
            QuantumState::new(structure, m)
                .map(StateFile::Mixed)
                .map_err(|e| field_err("density", e))
        }
    }
}

pub fn load_state_file(path: &Path) -> Result<StateFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_state_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn pair(z: &Complex<f64>) -> Value {
    json!([z.re, z.im])
}

pub fn pure_state_json(psi: &PureState<f64>) -> Value {
    json!({
        "dims": psi.structure().dims(),
        "amplitudes": psi.amplitudes().iter().map(pair).collect::<Vec<_>>(),
    })
}

pub fn density_json(rho: &QuantumState<f64>) -> Value {
    let m = rho.matrix();
    let rows: Vec<Value> = (0..m.nrows())
        .map(|r| Value::Array((0..m.ncols()).map(|c| pair(&m[(r, c)])).collect()))
        .collect();
    json!({ "dims": rho.structure().dims(), "density": rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::{named_state, NamedState};

    #[test]
    fn pure_round_trip() {
        let w = named_state::<f64>(&NamedState::W).unwrap();
        let text = pure_state_json(&w).to_string();
        assert_eq!(parse_state_json(&text).unwrap(), StateFile::Pure(w));
    }

    #[test]
    fn density_round_trip() {
        let rho = named_state::<f64>(&NamedState::Epr).unwrap().to_density();
        let text = density_json(&rho).to_string();
        let back = parse_state_json(&text).unwrap();
        assert_eq!(back.density(), rho);
        assert!(back.pure().is_ok());
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"dims": [2], "amplitudes": [[1, 0]]}"#, "amplitudes"),
            (r#"{"dims": [2], "amplitudes": [[1, 0], [0]]}"#, "amplitudes[1]"),
            (r#"{"dims": [2, "x"], "amplitudes": []}"#, "dims[1]"),
            (r#"{"dims": [1], "amplitudes": [[1, 0]]}"#, "dims"),
            (r#"{"dims": [2], "amplitudes": [[1, 0], [1, 0]]}"#, "amplitudes"),
            (r#"{"dims": [2], "density": [[[1, 0], [0, 0]], [[0, 0]]]}"#, "density[1]"),
            (r#"{"dims": [2], "density": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}"#, "density"),
            (r#"{"amplitudes": []}"#, "dims"),
        ];
        for (text, field) in cases {
            let err = parse_state_json(text).unwrap_err().to_string();
            assert!(err.contains(&format!("field `{field}`")), "{text} -> {err}");
        }
        let err = parse_state_json("{\n  \"dims\": [2],\n  oops }").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(parse_state_json(r#"{"dims": [2]}"#).is_err());
    }
}
