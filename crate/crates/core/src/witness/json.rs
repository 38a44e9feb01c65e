//! Scenario files.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "initial": {"state_vector": [[0.7071067811865476, 0], [0.7071067811865476, 0]]},
//!   "blind": [{"basis_indices": [0]}, {"basis_indices": [1]}],
//!   "channel": {"type": "identity"},
//!   "final": {"matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs; a bare JSON number is read as a real
//! entry. Matrices are arrays of rows. A projector is `{"basis_indices": [...]}`,
//! `{"matrix": ...}` or a bare matrix, optionally with a `"label"`. Channels are
//! `identity`, `unitary` (`matrix`), `hamiltonian` (`matrix`, `time`) or
//! `kraus` (`matrices`).

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::error::Error;
use crate::qcore::{ComplexMatrix, C64};

use super::channel::Channel;
use super::scenario::WitnessScenario;
use super::state::{DensityMatrix, MeasurementSet, Projector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    /// Malformed document; `pointer` is an RFC 6901 JSON pointer.
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    /// Well-formed document describing an invalid scenario.
    #[error("{source} (at {pointer})")]
    Invariant {
        pointer: String,
        #[source]
        source: Error,
    },
}

type Parse<T> = std::result::Result<T, ScenarioError>;

fn schema<T>(pointer: &str, message: impl Into<String>) -> Parse<T> {
    Err(ScenarioError::Schema {
        pointer: if pointer.is_empty() {
            "/".into()
        } else {
            pointer.into()
        },
        message: message.into(),
    })
}

fn invariant(pointer: &str) -> impl Fn(Error) -> ScenarioError + '_ {
    move |source| ScenarioError::Invariant {
        pointer: if pointer.is_empty() {
            "/".into()
        } else {
            pointer.into()
        },
        source,
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Parse<&'a Value> {
    match obj.get(key) {
        Some(v) => Ok(v),
        None => schema(at, format!("missing field `{key}`")),
    }
}

fn object<'a>(v: &'a Value, at: &str) -> Parse<&'a Map<String, Value>> {
    match v.as_object() {
        Some(o) => Ok(o),
        None => schema(at, "expected an object"),
    }
}

fn array<'a>(v: &'a Value, at: &str) -> Parse<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) => Ok(a),
        None => schema(at, "expected an array"),
    }
}

fn number(v: &Value, at: &str) -> Parse<f64> {
    match v.as_f64() {
        Some(x) => Ok(x),
        None => schema(at, "expected a number"),
    }
}

fn complex(v: &Value, at: &str) -> Parse<C64> {
    if let Some(x) = v.as_f64() {
        return Ok(C64::new(x, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(C64::new(
            number(re, &format!("{at}/0"))?,
            number(im, &format!("{at}/1"))?,
        )),
        _ => schema(at, "expected a complex number [re, im]"),
    }
}

fn vector(v: &Value, dim: usize, at: &str) -> Parse<Vec<C64>> {
    let items = array(v, at)?;
    if items.len() != dim {
        return schema(at, format!("expected {dim} entries, found {}", items.len()));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, z)| complex(z, &format!("{at}/{i}")))
        .collect()
}

fn matrix(v: &Value, dim: usize, at: &str) -> Parse<ComplexMatrix> {
    let rows = array(v, at)?;
    if rows.len() != dim {
        return schema(at, format!("expected {dim} rows, found {}", rows.len()));
    }
    let rows = rows
        .iter()
        .enumerate()
        .map(|(r, row)| vector(row, dim, &format!("{at}/{r}")))
        .collect::<Parse<Vec<_>>>()?;
    ComplexMatrix::from_rows(&rows).map_err(invariant(at))
}

fn projector(v: &Value, dim: usize, at: &str) -> Parse<(Projector, Option<String>)> {
    if v.is_array() {
        let m = matrix(v, dim, at)?;
        return Ok((Projector::new(m).map_err(invariant(at))?, None));
    }
    let obj = object(v, at)?;
    let label = match obj.get("label") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return schema(&format!("{at}/label"), "expected a string"),
    };
    let p = if let Some(idx) = obj.get("basis_indices") {
        let ptr = format!("{at}/basis_indices");
        let indices = array(idx, &ptr)?
            .iter()
            .enumerate()
            .map(|(i, k)| match k.as_u64() {
                Some(k) => Ok(k as usize),
                None => schema(&format!("{ptr}/{i}"), "expected a non-negative integer"),
            })
            .collect::<Parse<Vec<_>>>()?;
        if let Some((i, &k)) = indices.iter().enumerate().find(|(_, &k)| k >= dim) {
            return schema(
                &format!("{ptr}/{i}"),
                format!("index {k} out of range for dim {dim}"),
            );
        }
        Projector::from_basis_indices(dim, &indices).map_err(invariant(&ptr))?
    } else if let Some(m) = obj.get("matrix") {
        let ptr = format!("{at}/matrix");
        Projector::new(matrix(m, dim, &ptr)?).map_err(invariant(&ptr))?
    } else {
        return schema(at, "projector needs `basis_indices` or `matrix`");
    };
    Ok((p, label))
}

fn initial_state(v: &Value, dim: usize) -> Parse<DensityMatrix> {
    let at = "/initial";
    let obj = object(v, at)?;
    match (obj.get("state_vector"), obj.get("density")) {
        (Some(sv), None) => {
            let ptr = "/initial/state_vector";
            DensityMatrix::pure(&vector(sv, dim, ptr)?).map_err(invariant(ptr))
        }
        (None, Some(d)) => {
            let ptr = "/initial/density";
            DensityMatrix::new(matrix(d, dim, ptr)?).map_err(invariant(ptr))
        }
        (Some(_), Some(_)) => schema(at, "give exactly one of `state_vector` and `density`"),
        (None, None) => schema(at, "missing `state_vector` or `density`"),
    }
}

fn blind_measurement(v: &Value, dim: usize) -> Parse<MeasurementSet> {
    let at = "/blind";
    let items = array(v, at)?;
    let mut projectors = Vec::with_capacity(items.len());
    let mut labels = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let (p, label) = projector(item, dim, &format!("{at}/{i}"))?;
        projectors.push(p);
        labels.push(label.unwrap_or_else(|| format!("a{i}")));
    }
    MeasurementSet::with_labels(projectors, labels).map_err(invariant(at))
}

fn channel(v: &Value, dim: usize) -> Parse<Channel> {
    let at = "/channel";
    let obj = object(v, at)?;
    let kind = match field(obj, "type", at)?.as_str() {
        Some(k) => k,
        None => return schema("/channel/type", "expected a string"),
    };
    match kind {
        "identity" => Ok(Channel::Identity),
        "unitary" => {
            let m = matrix(field(obj, "matrix", at)?, dim, "/channel/matrix")?;
            Channel::unitary(m).map_err(invariant("/channel/matrix"))
        }
        "hamiltonian" => {
            let m = matrix(field(obj, "matrix", at)?, dim, "/channel/matrix")?;
            let t = number(field(obj, "time", at)?, "/channel/time")?;
            Channel::hamiltonian(m, t).map_err(invariant("/channel"))
        }
        "kraus" => {
            let ptr = "/channel/matrices";
            let ks = array(field(obj, "matrices", at)?, ptr)?
                .iter()
                .enumerate()
                .map(|(i, k)| matrix(k, dim, &format!("{ptr}/{i}")))
                .collect::<Parse<Vec<_>>>()?;
            Channel::operator_sum(ks).map_err(invariant(ptr))
        }
        other => schema("/channel/type", format!("unknown channel type `{other}`")),
    }
}

pub fn scenario_from_value(doc: &Value) -> Parse<WitnessScenario> {
    let root = object(doc, "/")?;
    for key in ["dim", "initial", "blind", "channel", "final"] {
        field(root, key, "/")?;
    }
    let dim = match field(root, "dim", "")?.as_u64() {
        Some(d) if d >= 2 => d as usize,
        _ => return schema("/dim", "expected an integer >= 2"),
    };
    let initial = initial_state(field(root, "initial", "")?, dim)?;
    let blind = blind_measurement(field(root, "blind", "")?, dim)?;
    let channel = channel(field(root, "channel", "")?, dim)?;
    let (final_projector, _) = projector(field(root, "final", "")?, dim, "/final")?;
    WitnessScenario::new(initial, blind, channel, final_projector).map_err(invariant("/"))
}

pub fn scenario_from_str(text: &str) -> Parse<WitnessScenario> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ScenarioError::Schema {
        pointer: "/".into(),
        message: format!("invalid JSON: {e}"),
    })?;
    scenario_from_value(&doc)
}

fn complex_value(z: C64) -> Value {
    json!([z.re, z.im])
}

fn matrix_value(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(complex_value).collect()))
            .collect(),
    )
}

/// Explicit-matrix encoding of a scenario, readable by [`scenario_from_value`].
pub fn scenario_to_value(s: &WitnessScenario) -> Value {
    let channel = match s.channel() {
        Channel::Identity => json!({"type": "identity"}),
        Channel::Unitary(u) => json!({"type": "unitary", "matrix": matrix_value(u)}),
        Channel::Hamiltonian {
            hamiltonian, time, ..
        } => json!({"type": "hamiltonian", "matrix": matrix_value(hamiltonian), "time": time}),
        Channel::OperatorSum(ks) => json!({
            "type": "kraus",
            "matrices": ks.iter().map(matrix_value).collect::<Vec<_>>(),
        }),
    };
    let blind: Vec<Value> = s
        .blind()
        .projectors()
        .iter()
        .zip(s.blind().labels())
        .map(|(p, l)| json!({"label": l, "matrix": matrix_value(p.matrix())}))
        .collect();
    json!({
        "dim": s.dim(),
        "initial": {"density": matrix_value(s.initial().matrix())},
        "blind": blind,
        "channel": channel,
        "final": {"matrix": matrix_value(s.final_projector().matrix())},
    })
}
