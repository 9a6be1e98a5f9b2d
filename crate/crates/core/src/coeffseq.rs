//! Finitely supported coefficient sequences (a_1, a_2, ...).
//!
//! The sequence is the object every integral, moment, and return-map
//! computation consumes. The period is fixed to T = 2*pi internally;
//! other periods are rescaled on ingestion.

use std::collections::BTreeMap;

use crate::dyadic::Dyadic;
use crate::error::CoeffError;
use crate::piecewise::PiecewiseCoeff;

/// The canonical period T = 2*pi as a double.
pub const PERIOD: f64 = std::f64::consts::TAU;

/// A finitely supported sequence of piecewise coefficients; index i >= 1
/// holds the coefficient of v^{i+1}. Finite support keeps the growth
/// condition on sup |a_i|^{1/i} satisfied automatically.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct CoeffSeq {
    entries: BTreeMap<u32, PiecewiseCoeff>,
}

impl CoeffSeq {
    /// The zero sequence.
    pub fn zero() -> Self {
        CoeffSeq::default()
    }

    /// Builds a sequence and validates that every exact frequency can be
    /// evaluated at every breakpoint of the joint lattice, so that all
    /// downstream integrals stay inside Q(i)[pi]. Zero entries are
    /// dropped.
    pub fn new(entries: BTreeMap<u32, PiecewiseCoeff>) -> Result<Self, CoeffError> {
        if entries.keys().any(|&i| i == 0) {
            return Err(CoeffError::BadIndex { index: 0 });
        }
        let entries: BTreeMap<u32, PiecewiseCoeff> = entries
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let seq = CoeffSeq { entries };
        seq.validate_lattice()?;
        Ok(seq)
    }

    /// One nonzero coefficient at the given index.
    pub fn single(index: u32, coeff: PiecewiseCoeff) -> Result<Self, CoeffError> {
        let mut m = BTreeMap::new();
        m.insert(index, coeff);
        CoeffSeq::new(m)
    }

    /// Every product formed while integrating only ever sums frequencies
    /// already present, so checking each (frequency, breakpoint) pair of
    /// the joint lattice once up front makes all later evaluations
    /// infallible.
    fn validate_lattice(&self) -> Result<(), CoeffError> {
        let mut breakpoints: Vec<Dyadic> = Vec::new();
        let mut freqs: Vec<i64> = Vec::new();
        for coeff in self.entries.values() {
            breakpoints.extend(coeff.breakpoints());
            for (_, f) in coeff.pieces() {
                freqs.extend(f.exact_freqs());
            }
        }
        breakpoints.sort();
        breakpoints.dedup();
        freqs.sort();
        freqs.dedup();
        for t in &breakpoints {
            let k = t.depth();
            if k <= 2 {
                continue;
            }
            for &m in &freqs {
                // e^{imt} must be a fourth root of unity:
                // 2^{k-2} | m * numerator
                let quarters = (m as i128) * (t.numerator() as i128) * 4;
                if quarters % (1i128 << k) != 0 {
                    return Err(CoeffError::IncompatibleLattice {
                        freq: m,
                        breakpoint: *t,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn entry(&self, index: u32) -> Option<&PiecewiseCoeff> {
        self.entries.get(&index)
    }

    /// Indices with nonzero coefficients, ascending.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &PiecewiseCoeff)> {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    pub fn max_index(&self) -> u32 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Deepest breakpoint lattice among the entries.
    pub fn depth(&self) -> u32 {
        self.entries.values().map(PiecewiseCoeff::depth).max().unwrap_or(0)
    }

    /// All entries have zero mean over the period (membership in the
    /// domain where moments are additive).
    pub fn all_zero_mean(&self) -> bool {
        self.entries
            .values()
            .all(|c| c.integral().map(|v| v.is_zero()).unwrap_or(false))
    }

    /// True when every coefficient is a real-valued function.
    pub fn is_conj_symmetric(&self) -> bool {
        self.entries.values().all(PiecewiseCoeff::is_conj_symmetric)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppoly::ExpPoly;
    use crate::scalar::Scalar;

    #[test]
    fn drops_zero_entries() {
        let mut m = BTreeMap::new();
        m.insert(1, PiecewiseCoeff::zero());
        m.insert(2, PiecewiseCoeff::constant(Scalar::one()));
        let seq = CoeffSeq::new(m).unwrap();
        assert_eq!(seq.support().collect::<Vec<_>>(), vec![2]);
        assert!(seq.entry(1).is_none());
    }

    #[test]
    fn rejects_index_zero() {
        let mut m = BTreeMap::new();
        m.insert(0, PiecewiseCoeff::constant(Scalar::one()));
        assert!(matches!(
            CoeffSeq::new(m),
            Err(CoeffError::BadIndex { index: 0 })
        ));
    }

    #[test]
    fn lattice_validation_rejects_odd_frequency_on_deep_lattice() {
        // frequency 1 cannot be evaluated at T/8
        let deep = PiecewiseCoeff::from_pieces(vec![
            (Dyadic::new(1, 3), ExpPoly::one()),
            (Dyadic::one(), ExpPoly::zero()),
        ])
        .unwrap();
        let shallow = PiecewiseCoeff::from_poly(ExpPoly::harmonic(1));
        let mut m = BTreeMap::new();
        m.insert(1, deep.clone());
        m.insert(2, shallow);
        assert!(matches!(
            CoeffSeq::new(m),
            Err(CoeffError::IncompatibleLattice { freq: 1, .. })
        ));

        // frequency 4 at T/8 is fine
        let mut ok = BTreeMap::new();
        ok.insert(1, deep);
        ok.insert(2, PiecewiseCoeff::from_poly(ExpPoly::harmonic(4)));
        assert!(CoeffSeq::new(ok).is_ok());
    }

    #[test]
    fn zero_mean_detection() {
        let seq = CoeffSeq::single(1, PiecewiseCoeff::from_poly(ExpPoly::cos(1))).unwrap();
        assert!(seq.all_zero_mean());
        let seq2 = CoeffSeq::single(1, PiecewiseCoeff::constant(Scalar::one())).unwrap();
        assert!(!seq2.all_zero_mean());
    }
}
