//! Exact rational phase exponents.
//!
//! Every phase exponent the certifier touches (local `α`, phase-function
//! coefficients, global prefactors) is a [`Rational`]. Floating point only
//! appears once a matrix or state is materialized.

use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use num_rational::Rational64 as Rational;

/// Build `numer/denom`, normalized. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

/// `true` iff `value` is an integer multiple of `modulus`.
pub fn is_zero_mod(value: &Rational, modulus: i64) -> bool {
    value.is_integer() && value.numer().mod_floor(&modulus).is_zero()
}

/// Split `value` into `(integer part, fractional part in [0, 1))`.
///
/// `X(α)` and `X(α mod 1)` differ only by the phase `ω^{-floor(α)}`, so this
/// is the normalization used when comparing observables.
pub fn split_mod_one(value: &Rational) -> (i64, Rational) {
    let whole = value.floor();
    (whole.to_integer(), value - whole)
}

/// Reduce an integer into `0..modulus`.
pub fn residue(value: i64, modulus: i64) -> i64 {
    value.mod_floor(&modulus)
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Serde helpers writing a rational as `"p/q"` (or `"p"` for integers).
pub mod serde_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(de)?;
        text.parse::<Rational>().map_err(D::Error::custom)
    }

    pub mod vec {
        use super::Rational;
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(values: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
            let mut seq = ser.serialize_seq(Some(values.len()))?;
            for value in values {
                seq.serialize_element(&value.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(de)?
                .iter()
                .map(|text| text.parse::<Rational>().map_err(D::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_sign_and_gcd() {
        let r = ratio(4, -6);
        assert_eq!(*r.numer(), -2);
        assert_eq!(*r.denom(), 3);
    }

    #[test]
    fn zero_mod_is_exact() {
        assert!(is_zero_mod(&int(6), 3));
        assert!(is_zero_mod(&int(-3), 3));
        assert!(!is_zero_mod(&int(4), 3));
        assert!(!is_zero_mod(&(ratio(3, 1) + ratio(1, 3)), 3));
        assert!(is_zero_mod(&(ratio(2, 3) + ratio(1, 3) + int(2)), 3));
    }

    #[test]
    fn split_mod_one_keeps_fraction_nonnegative() {
        assert_eq!(split_mod_one(&ratio(-1, 3)), (-1, ratio(2, 3)));
        assert_eq!(split_mod_one(&ratio(7, 3)), (2, ratio(1, 3)));
        assert_eq!(split_mod_one(&int(-1)), (-1, int(0)));
    }

    #[test]
    fn string_form_round_trips() {
        for r in [ratio(1, 3), int(-5), ratio(-7, 12)] {
            assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }
        assert_eq!(ratio(1, 3).to_string(), "1/3");
        assert_eq!(int(2).to_string(), "2");
    }
}
