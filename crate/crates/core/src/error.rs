use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The characteristic is not a prime.
    NotPrime(u32),
    /// Modulus has the wrong length, is not monic or has out-of-range coefficients.
    BadModulus(String),
    /// The modulus factors over `Z_p`.
    ReducibleModulus,
    /// No built-in modulus exists for this field size.
    NoBuiltinModulus { q: u64 },
    /// Field or group outside the supported size range.
    TooLarge(String),
    /// Inverse of zero.
    NotInvertible,
    /// Operands built over different fields/groups or with incompatible shapes.
    Mismatch(String),
    /// A parameter outside its admissible domain.
    Domain(String),
    /// An exhaustive enumeration would exceed its budget.
    BudgetExceeded { what: &'static str, budget: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "characteristic {p} is not prime"),
            Error::BadModulus(msg) => write!(f, "invalid modulus: {msg}"),
            Error::ReducibleModulus => f.write_str("modulus polynomial is reducible"),
            Error::NoBuiltinModulus { q } => {
                write!(f, "no built-in modulus for q = {q}; pass one explicitly")
            }
            Error::TooLarge(msg) => write!(f, "too large: {msg}"),
            Error::NotInvertible => f.write_str("zero has no multiplicative inverse"),
            Error::Mismatch(msg) => write!(f, "mismatch: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::BudgetExceeded { what, budget } => {
                write!(f, "enumerating {what} exceeds the budget of {budget}")
            }
        }
    }
}

impl core::error::Error for Error {}
