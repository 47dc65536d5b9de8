use serde::Serialize;
use serde_json::Value;

use super::{Tensor, TensorData};
use crate::graph::{Role, VertexId};

/// JSON view of a tensor: `entries` is nested `rank` deep with length-2 arrays.
#[derive(Clone, Debug, Serialize)]
pub struct TensorJson {
    pub open: Vec<(VertexId, Role)>,
    pub mode: &'static str,
    pub entries: Value,
}

fn nest(flat: &[Value], depth: usize) -> Value {
    if depth == 0 {
        return flat[0].clone();
    }
    let half = flat.len() / 2;
    Value::Array(vec![nest(&flat[..half], depth - 1), nest(&flat[half..], depth - 1)])
}

/// Exact tensors serialize entries as canonical scalar strings, float
/// tensors as `[re, im]` pairs.
pub fn to_json(t: &Tensor) -> TensorJson {
    let (mode, flat): (_, Vec<Value>) = match t.data() {
        TensorData::Exact(v) => ("exact", v.iter().map(|x| Value::String(x.to_string())).collect()),
        TensorData::Float(v) => ("float", v.iter().map(|z| serde_json::json!([z.re, z.im])).collect()),
    };
    TensorJson { open: t.open().to_vec(), mode, entries: nest(&flat, t.rank()) }
}

/// NumPy `.npy` (format 1.0) bytes: complex128, shape `(2,)*rank`, C order.
pub fn to_npy(t: &Tensor) -> Vec<u8> {
    let shape = match t.rank() {
        0 => "()".to_string(),
        1 => "(2,)".to_string(),
        k => format!("({})", vec!["2"; k].join(", ")),
    };
    let mut header = format!("{{'descr': '<c16', 'fortran_order': False, 'shape': {shape}, }}");
    // magic(6) + version(2) + len(2) + header, padded to a multiple of 64
    let unpadded = 10 + header.len() + 1;
    header.push_str(&" ".repeat((64 - unpadded % 64) % 64));
    header.push('\n');
    let mut out = Vec::with_capacity(10 + header.len() + (16 << t.rank()));
    out.extend_from_slice(b"\x93NUMPY\x01\x00");
    out.extend_from_slice(&(header.len() as u16).to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    for z in t.to_complex() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}
