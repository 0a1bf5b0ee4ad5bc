//! Plain-text analysis of a single element.

use std::fmt::Write;

use cartan_core::invariants::{
    is_nilpotent, minimal_p_polynomial, phi_vector, quotient_s, regularity_classify,
};
use cartan_core::slices::SliceKind;
use cartan_core::{Automorphism, Derivation, Membership, Route, Scalar, SliceElement, SnContext, TruncPoly};
use serde_json::Value;

use crate::json::{decode_element, DecodeError, Element};

/// Largest `n p^n` for which `S_n` membership is decided.
const MEMBERSHIP_LIMIT: usize = 4096;

/// Why an element could not be analysed.
#[derive(Debug)]
pub enum InspectError {
    Parse(serde_json::Error),
    Decode(DecodeError),
    Compute(cartan_core::Error),
}

impl std::fmt::Display for InspectError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InspectError::Parse(e) => write!(f, "parse error at line {}, column {}: {e}", e.line(), e.column()),
            InspectError::Decode(e) => write!(f, "invalid element {e}"),
            InspectError::Compute(e) => write!(f, "analysis failed: {e}"),
        }
    }
}

impl std::error::Error for InspectError {}

impl From<cartan_core::Error> for InspectError {
    fn from(e: cartan_core::Error) -> Self {
        InspectError::Compute(e)
    }
}

/// Parses `text` as a JSON element and analyses it.
pub fn inspect_str(text: &str) -> Result<String, InspectError> {
    let v: Value = serde_json::from_str(text).map_err(InspectError::Parse)?;
    inspect_value(&v)
}

pub fn inspect_value(v: &Value) -> Result<String, InspectError> {
    match decode_element(v).map_err(InspectError::Decode)? {
        Element::Poly(f) => Ok(poly_report(&f)),
        Element::Derivation { x, .. } => derivation_report(&x),
        Element::Automorphism(g) => Ok(automorphism_report(&g)),
        Element::Slice(s) => slice_report(&s),
    }
}

fn poly_report(f: &TruncPoly) -> String {
    let amb = f.ambient();
    let mut out = String::new();
    let _ = writeln!(out, "element: polynomial in B_{} over F_{}", amb.n(), amb.field().order());
    let _ = writeln!(out, "value: {f}");
    if f.is_zero() {
        let _ = writeln!(out, "degree: none (zero)");
    } else {
        let _ = writeln!(out, "degree: {}..={}", f.min_degree(), f.max_degree().unwrap_or(0));
    }
    let _ = writeln!(out, "unit: {}", f.constant_term() != 0);
    out
}

fn automorphism_report(g: &Automorphism) -> String {
    let amb = g.ambient();
    let mut out = String::new();
    let _ = writeln!(out, "element: automorphism of B_{} over F_{}", amb.n(), amb.field().order());
    for (i, h) in g.images().iter().enumerate() {
        let _ = writeln!(out, "x{} -> {h}", i + 1);
    }
    for (i, h) in g.inverse_images().iter().enumerate() {
        let _ = writeln!(out, "inverse: x{} -> {h}", i + 1);
    }
    let _ = writeln!(out, "jacobian: {}", g.jacobian_determinant());
    let _ = writeln!(out, "special: {}", g.is_special());
    out
}

fn slice_report(s: &SliceElement) -> Result<String, InspectError> {
    let kind = match s.kind {
        SliceKind::DeltaEps => "Delta_eps",
        SliceKind::Omega => "Omega^eps",
        SliceKind::Torus => "torus",
    };
    let field = s.realized.ambient().field();
    let eps: Vec<String> = s
        .eps
        .iter()
        .map(|&e| Scalar::new(field, e as u64).map(|v| v.to_string()))
        .collect::<Result<_, _>>()?;
    let mut out = format!("slice: {kind} with eps = ({})\n", eps.join(", "));
    out.push_str(&derivation_report(&s.realized)?);
    Ok(out)
}

fn derivation_report(x: &Derivation) -> Result<String, InspectError> {
    let amb = x.ambient();
    let n = amb.n();
    let mut out = String::new();
    let _ = writeln!(out, "element: derivation in W_{n} over F_{}", amb.field().order());
    let _ = writeln!(out, "value: {x}");
    let phi = phi_vector(x)?;
    let _ = writeln!(out, "Phi: {phi}");
    let _ = writeln!(out, "nilpotent: {}", is_nilpotent(x));
    let flags = regularity_classify(x, Route::Auto)?;
    let _ = writeln!(out, "U1: {}", flags.u1);
    let _ = writeln!(out, "U2: {}", flags.u2);
    let _ = writeln!(out, "U3: {}", flags.u3);
    let _ = writeln!(out, "constants dim: {}", x.constants_dim());
    let _ = writeln!(out, "centralizer dim: {}", x.centralizer_dim());
    match x.filtration_degree() {
        Ok(d) => {
            let _ = writeln!(out, "filtration degree: {d}");
        }
        Err(_) => {
            let _ = writeln!(out, "filtration degree: none (zero)");
        }
    }
    let _ = writeln!(out, "minimal p-polynomial: {}", minimal_p_polynomial(x)?);
    if n >= 2 && Derivation::dim(amb) <= MEMBERSHIP_LIMIT {
        let ctx = SnContext::new(amb)?;
        let membership = ctx.contains(x)?;
        let label = match membership {
            Membership::InSn => "in S_n",
            Membership::InTildeOnly => "divergence-free, not in S_n",
            Membership::Outside => "not divergence-free",
        };
        let _ = writeln!(out, "S_n membership: {label}");
        if membership == Membership::InSn {
            let _ = writeln!(out, "Phi_S: {}", quotient_s(&ctx, x)?);
        }
    }
    Ok(out)
}
