//! JSON diagram files. Rationals are "num/den" strings; integers may also be
//! given as JSON integers. Floats are rejected.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::{BaseDiagram, DiagramError, Node};
use crate::exact_core::{fmt_rational, parse_rational, LatticeVector, Point, Rational};

fn err(msg: impl Into<String>) -> DiagramError {
    DiagramError::Format(msg.into())
}

fn rational(v: &Value, at: &str) -> Result<Rational, DiagramError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| err(format!("{at}: {e}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()).map_err(|e| err(format!("{at}: {e}"))),
        Value::Number(n) => Err(err(format!("{at}: decimal input rejected, use num/den: {n}"))),
        other => Err(err(format!("{at}: expected a rational, got {other}"))),
    }
}

fn integer(v: &Value, at: &str) -> Result<BigInt, DiagramError> {
    let r = rational(v, at)?;
    if !r.is_integer() {
        return Err(err(format!("{at}: expected an integer")));
    }
    Ok(r.to_integer())
}

fn pair<'a>(v: &'a Value, at: &str) -> Result<(&'a Value, &'a Value), DiagramError> {
    match v.as_array().map(Vec::as_slice) {
        Some([x, y]) => Ok((x, y)),
        _ => Err(err(format!("{at}: expected a two-element array"))),
    }
}

fn point(v: &Value, at: &str) -> Result<Point, DiagramError> {
    let (x, y) = pair(v, at)?;
    Ok(Point::new(rational(x, at)?, rational(y, at)?))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, DiagramError> {
    o.get(key).ok_or_else(|| err(format!("{at}: missing \"{key}\"")))
}

pub fn from_value(v: &Value) -> Result<BaseDiagram, DiagramError> {
    let o = v.as_object().ok_or_else(|| err("top level must be an object"))?;
    let name = match o.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(err("name must be a string")),
    };
    let vertices = field(o, "vertices", "diagram")?
        .as_array()
        .ok_or_else(|| err("vertices must be an array"))?
        .iter()
        .enumerate()
        .map(|(i, p)| point(p, &format!("vertex {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let nodes = match o.get("nodes") {
        None => Vec::new(),
        Some(arr) => arr
            .as_array()
            .ok_or_else(|| err("nodes must be an array"))?
            .iter()
            .enumerate()
            .map(|(i, nv)| {
                let at = format!("node {i}");
                let no = nv.as_object().ok_or_else(|| err(format!("{at}: expected an object")))?;
                let (ex, ey) = pair(field(no, "eigenvector", &at)?, &at)?;
                let eigenvector = LatticeVector { x: integer(ex, &at)?, y: integer(ey, &at)? };
                if !eigenvector.is_primitive() {
                    return Err(err(format!("{at}: not a primitive eigenvector: {eigenvector}")));
                }
                Ok(Node {
                    position: point(field(no, "position", &at)?, &at)?,
                    eigenvector,
                    anchor: point(field(no, "anchor", &at)?, &at)?,
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let truncation = match o.get("truncation") {
        None => Vec::new(),
        Some(arr) => arr
            .as_array()
            .ok_or_else(|| err("truncation must be an array"))?
            .iter()
            .map(|t| t.as_u64().map(|x| x as usize).ok_or_else(|| err("truncation entries are edge indices")))
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(BaseDiagram { name, vertices, nodes, truncation })
}

pub fn from_json(text: &str) -> Result<BaseDiagram, DiagramError> {
    let v: Value = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    from_value(&v)
}

fn pt(p: &Point) -> Value {
    json!([fmt_rational(&p.x), fmt_rational(&p.y)])
}

pub fn to_value(d: &BaseDiagram) -> Value {
    let mut o = Map::new();
    if let Some(n) = &d.name {
        o.insert("name".into(), json!(n));
    }
    o.insert("vertices".into(), Value::Array(d.vertices.iter().map(pt).collect()));
    o.insert(
        "nodes".into(),
        Value::Array(
            d.nodes
                .iter()
                .map(|nd| {
                    json!({
                        "position": pt(&nd.position),
                        "eigenvector": [nd.eigenvector.x.to_string(), nd.eigenvector.y.to_string()],
                        "anchor": pt(&nd.anchor),
                    })
                })
                .collect(),
        ),
    );
    if !d.truncation.is_empty() {
        o.insert("truncation".into(), json!(d.truncation));
    }
    Value::Object(o)
}

pub fn to_json(d: &BaseDiagram) -> String {
    serde_json::to_string_pretty(&to_value(d)).expect("plain JSON values serialize")
}
