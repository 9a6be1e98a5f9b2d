//! Dyadic fractions of the period.
//!
//! Piece breakpoints are constrained to the lattice { n/2^k } * T so that
//! concatenation (which halves the time axis) and reversal stay inside a
//! class where endpoint values of exponential terms remain exact.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::{rat, Rat};

/// A fraction n / 2^k in [0, 1], interpreted as a multiple of the period
/// T. Always stored normalized (odd numerator unless the value is 0).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Dyadic {
    num: u64,
    log_den: u32,
}

impl Dyadic {
    /// num / 2^log_den, normalized. Panics if the value exceeds 1.
    pub fn new(num: u64, log_den: u32) -> Self {
        let mut d = Dyadic { num, log_den };
        d.normalize();
        assert!(
            d.num <= 1u64 << d.log_den.min(63),
            "dyadic breakpoint {num}/2^{log_den} outside [0, 1]"
        );
        d
    }

    pub fn zero() -> Self {
        Dyadic { num: 0, log_den: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: 1, log_den: 0 }
    }

    pub fn half() -> Self {
        Dyadic { num: 1, log_den: 1 }
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.log_den = 0;
            return;
        }
        while self.log_den > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.log_den -= 1;
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    /// Number of halvings in the normalized denominator.
    pub fn depth(&self) -> u32 {
        self.log_den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.log_den == 0
    }

    /// Value / 2, used when a coefficient is squeezed into the first half
    /// of the period.
    pub fn halve(&self) -> Self {
        Dyadic::new(self.num, self.log_den + 1)
    }

    /// (value + 1) / 2, mapping [0, 1] onto the second half.
    pub fn shift_half(&self) -> Self {
        Dyadic::new(self.num + (1u64 << self.log_den), self.log_den + 1)
    }

    /// 1 - value, the time reversal of a breakpoint.
    pub fn reflect(&self) -> Self {
        Dyadic::new((1u64 << self.log_den) - self.num, self.log_den)
    }

    /// The breakpoint as a fraction of the period, an exact rational.
    pub fn as_fraction(&self) -> Rat {
        rat(self.num as i64, 1i64 << self.log_den)
    }

    /// The actual time value with T = 2*pi, as a rational multiple of pi.
    pub fn times_period_over_pi(&self) -> Rat {
        rat(2 * self.num as i64, 1i64 << self.log_den)
    }

    /// Numeric time value with T = 2*pi.
    pub fn to_f64(&self) -> f64 {
        (self.num as f64) / (1u64 << self.log_den) as f64 * std::f64::consts::TAU
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = (self.num as u128) << other.log_den;
        let rhs = (other.num as u128) << self.log_den;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else if self.is_one() {
            write!(f, "T")
        } else if self.num == 1 {
            write!(f, "T/{}", 1u64 << self.log_den)
        } else {
            write!(f, "{}T/{}", self.num, 1u64 << self.log_den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        assert_eq!(Dyadic::new(2, 2), Dyadic::half());
        assert_eq!(Dyadic::new(4, 2), Dyadic::one());
        assert_eq!(Dyadic::new(0, 7), Dyadic::zero());
    }

    #[test]
    fn halving_and_reflection() {
        let t = Dyadic::new(3, 2); // 3/4
        assert_eq!(t.halve(), Dyadic::new(3, 3));
        assert_eq!(t.shift_half(), Dyadic::new(7, 3));
        assert_eq!(t.reflect(), Dyadic::new(1, 2));
        assert_eq!(t.reflect().reflect(), t);
    }

    #[test]
    fn ordering() {
        let mut v = vec![Dyadic::one(), Dyadic::new(1, 2), Dyadic::half(), Dyadic::zero()];
        v.sort();
        assert_eq!(
            v,
            vec![Dyadic::zero(), Dyadic::new(1, 2), Dyadic::half(), Dyadic::one()]
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(Dyadic::zero().to_string(), "0");
        assert_eq!(Dyadic::one().to_string(), "T");
        assert_eq!(Dyadic::half().to_string(), "T/2");
        assert_eq!(Dyadic::new(3, 2).to_string(), "3T/4");
    }
}
