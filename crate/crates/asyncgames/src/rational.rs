//! Exact rational arithmetic used throughout the crate.
//!
//! Payoffs, priors, and probabilities are `BigRational` so that
//! equilibrium verdicts are exact rather than tolerance-dependent.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Rational from an integer numerator and denominator.
pub fn q(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn qi(num: i64) -> Q {
    Q::from_integer(BigInt::from(num))
}

pub fn qzero() -> Q {
    Q::zero()
}

pub fn qone() -> Q {
    Q::one()
}

/// |a - b|.
pub fn qabs_diff(a: &Q, b: &Q) -> Q {
    (a - b).abs()
}

/// Parse "a/b" or "a" into a rational. Used by the game-description
/// file format and CLI configs.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
        let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|e| format!("bad rational {s:?}: {e}"))?;
        Ok(Q::from_integer(n))
    }
}

/// Render a rational as "a/b" (or "a" if integral), the inverse of [`parse_q`].
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Best-effort conversion to f64, for report summaries only.
pub fn q_to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
