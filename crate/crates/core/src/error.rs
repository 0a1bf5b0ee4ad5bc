use alloc::string::String;
use core::fmt;

/// Errors raised by the algebra layer.
///
/// `TheoryViolation` is reserved for results that contradict a proven
/// structural identity (a non-p-polynomial characteristic polynomial, a
/// nonzero `phi_0` on `S_n`, ...). Seeing one means an implementation bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    InvalidCharacteristic(u32),
    InvalidExtensionDegree(u32),
    FieldTooLarge { p: u32, m: u32 },
    InvalidElement { value: u64, order: u32 },
    DivisionByZero,
    FieldMismatch,
    InvalidVariableCount(usize),
    AmbientMismatch,
    AxisOutOfRange { axis: usize, n: usize },
    LengthMismatch { expected: usize, got: usize },
    SameAxis(usize),
    ZeroDerivation,
    NotSquare { rows: usize, cols: usize },
    DimensionMismatch,
    NotAField,
    ConstantTerm { axis: usize },
    SingularLinearPart,
    NotInSn,
    ResampleBudgetExhausted,
    NoDivisibleAxis,
    NotOnSlice,
    InvalidSliceParameter(String),
    TheoryViolation(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidCharacteristic(p) => {
                write!(f, "characteristic {p} is not a prime greater than 3")
            }
            Error::InvalidExtensionDegree(m) => write!(f, "unsupported extension degree {m}"),
            Error::FieldTooLarge { p, m } => write!(f, "field of order {p}^{m} is too large"),
            Error::InvalidElement { value, order } => {
                write!(f, "{value} is not a canonical element of a field of order {order}")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::FieldMismatch => write!(f, "operands live in different fields"),
            Error::InvalidVariableCount(n) => write!(f, "unsupported number of variables {n}"),
            Error::AmbientMismatch => write!(f, "operands live in different ambient algebras"),
            Error::AxisOutOfRange { axis, n } => {
                write!(f, "axis {axis} out of range for {n} variables")
            }
            Error::LengthMismatch { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            Error::SameAxis(i) => write!(f, "generator D_{{i,j}} needs i != j (both are {i})"),
            Error::ZeroDerivation => write!(f, "the zero derivation has no filtration degree"),
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::DimensionMismatch => write!(f, "matrix dimensions do not match"),
            Error::NotAField => write!(f, "operation requires coefficients in a field"),
            Error::ConstantTerm { axis } => {
                write!(f, "image of x_{} has a nonzero constant term", axis + 1)
            }
            Error::SingularLinearPart => write!(f, "linear part of the map is singular"),
            Error::NotInSn => write!(f, "element does not lie in S_n"),
            Error::ResampleBudgetExhausted => write!(f, "random sampling budget exhausted"),
            Error::NoDivisibleAxis => {
                write!(f, "no axis i with x_i dividing the i-th component")
            }
            Error::NotOnSlice => write!(f, "element is not of the form Delta_eps"),
            Error::InvalidSliceParameter(s) => write!(f, "invalid slice parameter: {s}"),
            Error::TheoryViolation(s) => write!(f, "structural identity violated: {s}"),
        }
    }
}

impl core::error::Error for Error {}
