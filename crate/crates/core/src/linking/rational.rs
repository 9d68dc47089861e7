//! Exact elements of Q/Z.
//!
//! Values are kept canonical at all times: `0 <= num < den`, `gcd = 1`, and
//! zero is `0/1`. Formatting is therefore bijective — equal values print
//! identically, and the printed form parses back to the same value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LinkingError;

/// An element of Q/Z in lowest terms, reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: BigInt,
    den: BigInt,
}

impl QmodZ {
    /// The class of `num/den` in Q/Z. Errors on a zero denominator.
    pub fn from_fraction(num: BigInt, den: BigInt) -> Result<QmodZ, LinkingError> {
        if den.is_zero() {
            return Err(LinkingError::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (num, den) = (num / &g, den / g);
        // fold the sign into the numerator, then reduce mod 1
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        QmodZ::reduced(num.mod_floor(&den), den)
    }

    /// Infallible constructor for machine-integer fractions with `den != 0`.
    pub fn of(num: i64, den: i64) -> QmodZ {
        QmodZ::from_fraction(BigInt::from(num), BigInt::from(den))
            .expect("nonzero literal denominator")
    }

    fn reduced(num: BigInt, den: BigInt) -> Result<QmodZ, LinkingError> {
        debug_assert!(den.is_positive() && !num.is_negative() && num < den);
        // mod_floor can reintroduce a common factor (e.g. -1/3 -> 2/3 is
        // fine, but 3/3 -> 0/3 is not canonical), so reduce once more.
        let g = num.gcd(&den);
        Ok(QmodZ {
            num: num / &g,
            den: den / g,
        })
    }

    pub fn zero() -> QmodZ {
        QmodZ {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Canonical numerator, in `[0, den)`.
    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    /// Canonical (positive) denominator; 1 exactly for the zero class.
    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn add(&self, other: &QmodZ) -> QmodZ {
        QmodZ::from_fraction(
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        )
        .expect("nonzero denominators")
    }

    pub fn neg(&self) -> QmodZ {
        QmodZ::from_fraction(-&self.num, self.den.clone()).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &QmodZ) -> QmodZ {
        self.add(&other.neg())
    }

    /// Integer multiple `c * self`.
    pub fn scale(&self, c: &BigInt) -> QmodZ {
        QmodZ::from_fraction(c * &self.num, self.den.clone()).expect("nonzero denominator")
    }

    /// True when `t * self = 0` in Q/Z, i.e. the denominator divides `t`.
    pub fn annihilated_by(&self, t: &BigInt) -> bool {
        (t % &self.den).is_zero()
    }

    /// Parses strictly canonical text: `a/b` with `0 <= a < b`, `gcd = 1`.
    ///
    /// Model files must store rationals in canonical form, so `4/6`, `-1/3`,
    /// `7/3`, and bare integers are all rejected; the round-trip guarantee
    /// depends on this strictness.
    pub fn parse_canonical(s: &str) -> Result<QmodZ, LinkingError> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| LinkingError::BadRational(format!("'{s}': expected 'a/b'")))?;
        let bad = |why: &str| LinkingError::BadRational(format!("'{s}': {why}"));
        let num = BigInt::from_str(a).map_err(|_| bad("numerator is not an integer"))?;
        let den = BigInt::from_str(b).map_err(|_| bad("denominator is not an integer"))?;
        if !den.is_positive() {
            return Err(bad("denominator must be positive"));
        }
        if num.is_negative() || num >= den {
            return Err(bad("numerator must lie in [0, denominator)"));
        }
        if !num.gcd(&den).is_one() {
            return Err(bad("fraction is not in lowest terms"));
        }
        Ok(QmodZ { num, den })
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QmodZ({}/{})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization() {
        assert_eq!(QmodZ::of(1, 3).to_string(), "1/3");
        assert_eq!(QmodZ::of(-1, 3).to_string(), "2/3");
        assert_eq!(QmodZ::of(1, -3).to_string(), "2/3");
        assert_eq!(QmodZ::of(4, 6).to_string(), "2/3");
        assert_eq!(QmodZ::of(7, 3).to_string(), "1/3");
        assert_eq!(QmodZ::of(6, 3).to_string(), "0/1");
        assert_eq!(QmodZ::of(0, 5).to_string(), "0/1");
        assert_eq!(QmodZ::zero().to_string(), "0/1");
        assert!(QmodZ::from_fraction(BigInt::from(1), BigInt::from(0)).is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = QmodZ::of(1, 3);
        assert_eq!(third.add(&third), QmodZ::of(2, 3));
        assert_eq!(third.add(&QmodZ::of(2, 3)), QmodZ::zero());
        assert_eq!(third.neg(), QmodZ::of(2, 3));
        assert_eq!(QmodZ::of(1, 2).add(&QmodZ::of(1, 3)), QmodZ::of(5, 6));
        assert_eq!(QmodZ::of(5, 6).sub(&QmodZ::of(1, 2)), QmodZ::of(1, 3));
        assert_eq!(third.scale(&BigInt::from(5)), QmodZ::of(2, 3));
        assert_eq!(third.scale(&BigInt::from(-1)), QmodZ::of(2, 3));
        assert_eq!(third.scale(&BigInt::from(3)), QmodZ::zero());
    }

    #[test]
    fn annihilation() {
        assert!(QmodZ::of(1, 3).annihilated_by(&BigInt::from(3)));
        assert!(QmodZ::of(1, 3).annihilated_by(&BigInt::from(6)));
        assert!(!QmodZ::of(1, 3).annihilated_by(&BigInt::from(2)));
        assert!(QmodZ::zero().annihilated_by(&BigInt::from(1)));
    }

    #[test]
    fn strict_canonical_parsing() {
        assert_eq!(QmodZ::parse_canonical("1/3").unwrap(), QmodZ::of(1, 3));
        assert_eq!(QmodZ::parse_canonical("0/1").unwrap(), QmodZ::zero());
        for bad in ["4/6", "-1/3", "7/3", "1/-3", "1/0", "0/2", "3", "a/b", "1/3/5", ""] {
            assert!(
                QmodZ::parse_canonical(bad).is_err(),
                "'{bad}' must be rejected"
            );
        }
    }

    #[test]
    fn display_parse_round_trip() {
        for (a, b) in [(0i64, 1i64), (1, 3), (2, 3), (5, 6), (11, 12), (1, 999983)] {
            let q = QmodZ::of(a, b);
            assert_eq!(QmodZ::parse_canonical(&q.to_string()).unwrap(), q);
        }
    }
}
