//! JSON encodings of field elements, polynomials, derivations,
//! automorphisms and slice elements.

use std::fmt;

use cartan_core::slices::SliceElement;
use cartan_core::{Ambient, Automorphism, Derivation, Field, TruncPoly};
use serde_json::{json, Map, Value};

/// Failure while decoding an element, with the JSON path where it occurred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeError {
    pub path: String,
    pub message: String,
}

impl DecodeError {
    fn new(path: &str, message: impl Into<String>) -> Self {
        DecodeError {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.path, self.message)
    }
}

impl std::error::Error for DecodeError {}

type Decoded<T> = Result<T, DecodeError>;

pub fn encode_scalar(field: Field, a: u32) -> Value {
    if field.is_prime_field() {
        json!(a)
    } else {
        let m = field.degree() as usize;
        json!(field.to_coeffs(a)[..m].to_vec())
    }
}

pub fn encode_scalars(field: Field, v: &[u32]) -> Value {
    Value::Array(v.iter().map(|&a| encode_scalar(field, a)).collect())
}

pub fn encode_poly(f: &TruncPoly) -> Value {
    let amb = f.ambient();
    let field = amb.field();
    let coeffs = f.coeffs();
    let used = coeffs.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
    let mut obj = Map::new();
    obj.insert("p".into(), json!(field.characteristic()));
    if !field.is_prime_field() {
        obj.insert("m".into(), json!(field.degree()));
    }
    obj.insert("n".into(), json!(amb.n()));
    obj.insert("coeffs".into(), encode_scalars(field, &coeffs[..used]));
    Value::Object(obj)
}

pub fn encode_derivation(x: &Derivation, special: bool) -> Value {
    let amb = x.ambient();
    let field = amb.field();
    let mut obj = Map::new();
    obj.insert("type".into(), json!("derivation"));
    if special {
        obj.insert("algebra".into(), json!("S"));
    }
    obj.insert("p".into(), json!(field.characteristic()));
    if !field.is_prime_field() {
        obj.insert("m".into(), json!(field.degree()));
    }
    obj.insert("n".into(), json!(amb.n()));
    obj.insert(
        "comps".into(),
        Value::Array(x.comps().iter().map(encode_poly).collect()),
    );
    Value::Object(obj)
}

pub fn encode_automorphism(g: &Automorphism) -> Value {
    json!({
        "type": "automorphism",
        "images": g.images().iter().map(encode_poly).collect::<Vec<_>>(),
    })
}

/// A decoded element file.
#[derive(Debug, Clone)]
pub enum Element {
    Poly(TruncPoly),
    Derivation { x: Derivation, special: bool },
    Automorphism(Automorphism),
    Slice(SliceElement),
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Decoded<&'a Value> {
    obj.get(key)
        .ok_or_else(|| DecodeError::new(path, format!("missing field \"{key}\"")))
}

fn as_u64(v: &Value, path: &str) -> Decoded<u64> {
    v.as_u64()
        .ok_or_else(|| DecodeError::new(path, "expected a non-negative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Decoded<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| DecodeError::new(path, "expected an array"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Decoded<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| DecodeError::new(path, "expected an object"))
}

/// Reads `"p"`, optional `"m"` and `"n"` from an object.
fn read_ambient(obj: &Map<String, Value>, path: &str) -> Decoded<Ambient> {
    let p = as_u64(get(obj, "p", path)?, &format!("{path}.p"))?;
    let m = match obj.get("m") {
        Some(v) => as_u64(v, &format!("{path}.m"))?,
        None => 1,
    };
    let n = as_u64(get(obj, "n", path)?, &format!("{path}.n"))?;
    let p = u32::try_from(p).map_err(|_| DecodeError::new(path, "p out of range"))?;
    let m = u32::try_from(m).map_err(|_| DecodeError::new(path, "m out of range"))?;
    let field = Field::new(p, m).map_err(|e| DecodeError::new(path, e.to_string()))?;
    Ambient::new(field, n as usize).map_err(|e| DecodeError::new(path, e.to_string()))
}

pub fn decode_scalar(field: Field, v: &Value, path: &str) -> Decoded<u32> {
    // in an extension field a bare integer is an element of the prime field
    if let Some(a) = v.as_i64() {
        return Ok(field.from_int(a));
    }
    let items = as_array(v, path)
        .map_err(|_| DecodeError::new(path, "expected an integer or a coefficient list"))?;
    let coeffs = items
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_i64()
                .map(|a| a.rem_euclid(field.characteristic() as i64) as u32)
                .ok_or_else(|| DecodeError::new(&format!("{path}[{i}]"), "expected an integer"))
        })
        .collect::<Decoded<Vec<u32>>>()?;
    field
        .from_coeffs(&coeffs)
        .map_err(|e| DecodeError::new(path, e.to_string()))
}

pub fn decode_scalars(field: Field, v: &Value, path: &str) -> Decoded<Vec<u32>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| decode_scalar(field, c, &format!("{path}[{i}]")))
        .collect()
}

/// A polynomial given either as an object or as a bare coefficient list in
/// a known ambient.
pub fn decode_poly(v: &Value, amb: Option<Ambient>, path: &str) -> Decoded<TruncPoly> {
    let (amb, coeffs_v, cpath) = match v {
        Value::Object(obj) => {
            let own = read_ambient(obj, path)?;
            if let Some(expected) = amb {
                if expected != own {
                    return Err(DecodeError::new(path, "polynomial ambient differs from its container"));
                }
            }
            (own, get(obj, "coeffs", path)?, format!("{path}.coeffs"))
        }
        Value::Array(_) => {
            let amb = amb.ok_or_else(|| {
                DecodeError::new(path, "bare coefficient list needs an enclosing \"p\" and \"n\"")
            })?;
            (amb, v, path.to_string())
        }
        _ => return Err(DecodeError::new(path, "expected a polynomial")),
    };
    let coeffs = decode_scalars(amb.field(), coeffs_v, &cpath)?;
    if coeffs.len() > amb.len() {
        return Err(DecodeError::new(
            &cpath,
            format!("{} coefficients for a space of dimension {}", coeffs.len(), amb.len()),
        ));
    }
    TruncPoly::from_coeffs(amb, coeffs).map_err(|e| DecodeError::new(path, e.to_string()))
}

fn decode_poly_list(
    v: &Value,
    amb: Option<Ambient>,
    path: &str,
) -> Decoded<(Option<Ambient>, Vec<TruncPoly>)> {
    let items = as_array(v, path)?;
    let mut amb = amb;
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let f = decode_poly(item, amb, &format!("{path}[{i}]"))?;
        amb = Some(f.ambient());
        out.push(f);
    }
    Ok((amb, out))
}

fn optional_ambient(obj: &Map<String, Value>, path: &str) -> Decoded<Option<Ambient>> {
    if obj.contains_key("p") || obj.contains_key("n") {
        read_ambient(obj, path).map(Some)
    } else {
        Ok(None)
    }
}

pub fn decode_element(v: &Value) -> Decoded<Element> {
    let path = "$";
    let obj = as_object(v, path)?;
    if let Some(kind) = obj.get("kind") {
        return decode_slice(obj, kind, path).map(Element::Slice);
    }
    match obj.get("type").and_then(Value::as_str) {
        Some("derivation") => {
            let amb = optional_ambient(obj, path)?;
            let (amb, comps) = decode_poly_list(get(obj, "comps", path)?, amb, "$.comps")?;
            let amb = amb.ok_or_else(|| DecodeError::new(path, "cannot infer the ambient"))?;
            let special = match obj.get("algebra") {
                None => false,
                Some(Value::String(s)) if s == "S" => true,
                Some(Value::String(s)) if s == "W" => false,
                Some(_) => return Err(DecodeError::new("$.algebra", "expected \"W\" or \"S\"")),
            };
            let x = Derivation::new(amb, comps).map_err(|e| DecodeError::new("$.comps", e.to_string()))?;
            Ok(Element::Derivation { x, special })
        }
        Some("automorphism") => {
            let amb = optional_ambient(obj, path)?;
            let (amb, images) = decode_poly_list(get(obj, "images", path)?, amb, "$.images")?;
            let amb = amb.ok_or_else(|| DecodeError::new(path, "cannot infer the ambient"))?;
            let g = Automorphism::new(amb, images)
                .map_err(|e| DecodeError::new("$.images", e.to_string()))?;
            Ok(Element::Automorphism(g))
        }
        Some("poly") | None if obj.contains_key("coeffs") => decode_poly(v, None, path).map(Element::Poly),
        Some(other) => Err(DecodeError::new("$.type", format!("unknown element type \"{other}\""))),
        None => Err(DecodeError::new(path, "missing \"type\", \"kind\" or \"coeffs\"")),
    }
}

fn decode_slice(obj: &Map<String, Value>, kind: &Value, path: &str) -> Decoded<SliceElement> {
    let kind = kind
        .as_str()
        .ok_or_else(|| DecodeError::new("$.kind", "expected a string"))?;
    let declared = optional_ambient(obj, path)?;
    let (inferred, f) = match obj.get("f") {
        Some(v) => decode_poly_list(v, declared, "$.f")?,
        None => (declared, Vec::new()),
    };
    let amb = inferred.ok_or_else(|| DecodeError::new(path, "slice element needs \"p\" and \"n\""))?;
    let eps = decode_scalars(amb.field(), get(obj, "eps", path)?, "$.eps")?;
    let wrap = |e: cartan_core::Error| DecodeError::new(path, e.to_string());
    match kind {
        "omega" => SliceElement::omega(amb, &eps, f).map_err(wrap),
        "delta_eps" => SliceElement::delta_eps(amb, &eps).map_err(wrap),
        "torus" => SliceElement::torus(amb, &eps).map_err(wrap),
        other => Err(DecodeError::new("$.kind", format!("unknown slice kind \"{other}\""))),
    }
}

pub fn encode_slice(s: &SliceElement) -> Value {
    use cartan_core::SliceKind;
    let amb = s.realized.ambient();
    let field = amb.field();
    let kind = match s.kind {
        SliceKind::DeltaEps => "delta_eps",
        SliceKind::Omega => "omega",
        SliceKind::Torus => "torus",
    };
    json!({
        "kind": kind,
        "p": field.characteristic(),
        "n": amb.n(),
        "eps": encode_scalars(field, &s.eps),
        "f": s.f.iter().map(encode_poly).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb(n: usize) -> Ambient {
        Ambient::new(Field::prime(5).unwrap(), n).unwrap()
    }

    #[test]
    fn derivation_round_trip() {
        let a = amb(2);
        let v: Vec<u32> = (0..50).map(|k| (k * 3 % 5) as u32).collect();
        let x = Derivation::from_vector(a, &v).unwrap();
        let json = encode_derivation(&x, false);
        match decode_element(&json).unwrap() {
            Element::Derivation { x: y, special } => {
                assert_eq!(y, x);
                assert!(!special);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bare_lists_and_trailing_zeros() {
        let v = json!({"type": "derivation", "p": 5, "n": 2, "comps": [[1], []]});
        let Element::Derivation { x, .. } = decode_element(&v).unwrap() else {
            panic!("expected a derivation")
        };
        assert_eq!(x, Derivation::partial(amb(2), 0).unwrap());
    }

    #[test]
    fn extension_scalars_are_lists() {
        let f = Field::new(5, 2).unwrap();
        let a = f.from_coeffs(&[2, 3]).unwrap();
        assert_eq!(encode_scalar(f, a), json!([2, 3]));
        assert_eq!(decode_scalar(f, &json!([2, 3]), "$").unwrap(), a);
    }

    #[test]
    fn errors_carry_paths() {
        let v = json!({"type": "derivation", "p": 5, "n": 2, "comps": [[1], "x"]});
        let err = decode_element(&v).unwrap_err();
        assert_eq!(err.path, "$.comps[1]");
        let v = json!({"type": "derivation", "p": 4, "n": 2, "comps": []});
        assert_eq!(decode_element(&v).unwrap_err().path, "$");
        let v = json!({"type": "automorphism", "images": [{"p": 5, "n": 1, "coeffs": [0, 0, 1]}]});
        assert!(decode_element(&v).unwrap_err().message.contains("singular"));
    }

    #[test]
    fn slice_round_trip() {
        let a = amb(3);
        let mut f2 = TruncPoly::zero(a);
        f2.set_coeff(2 * 25, 1);
        let s = SliceElement::omega(a, &[1, 2], vec![f2, TruncPoly::zero(a)]).unwrap();
        let Element::Slice(t) = decode_element(&encode_slice(&s)).unwrap() else {
            panic!("expected a slice element")
        };
        assert_eq!(t, s);
    }
}
