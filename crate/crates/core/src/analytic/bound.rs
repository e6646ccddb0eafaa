use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Free distance and information error weights `c_d` of a convolutional code,
/// truncated at some maximum distance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSpectrum {
    weights: BTreeMap<u32, f64>,
}

impl DistanceSpectrum {
    /// The smallest key is the free distance and the largest the truncation
    /// distance. Every weight must be positive and finite.
    pub fn new(weights: BTreeMap<u32, f64>) -> Result<Self> {
        let Some((&d_f, _)) = weights.first_key_value() else {
            return Err(Error::InvalidSpectrum("spectrum has no terms".into()));
        };
        if d_f == 0 {
            return Err(Error::InvalidSpectrum("distance 0 is not a codeword distance".into()));
        }
        if let Some((d, c)) = weights.iter().find(|(_, c)| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::InvalidSpectrum(format!("weight {c} at distance {d}")));
        }
        Ok(Self { weights })
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, f64)>>(pairs: I) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (d, c) in pairs {
            if weights.insert(d, c).is_some() {
                return Err(Error::InvalidSpectrum(format!("distance {d} listed twice")));
            }
        }
        Self::new(weights)
    }

    pub fn free_distance(&self) -> u32 {
        *self.weights.keys().next().expect("nonempty")
    }

    pub fn truncation_distance(&self) -> u32 {
        *self.weights.keys().next_back().expect("nonempty")
    }

    pub fn weights(&self) -> &BTreeMap<u32, f64> {
        &self.weights
    }

    pub fn weight(&self, d: u32) -> Option<f64> {
        self.weights.get(&d).copied()
    }

    pub fn distances(&self) -> impl Iterator<Item = u32> + '_ {
        self.weights.keys().copied()
    }

    /// Keeps terms with `d <= max_distance`; `None` if nothing would remain.
    pub fn truncated(&self, max_distance: u32) -> Option<Self> {
        let weights: BTreeMap<_, _> = self.weights.range(..=max_distance).map(|(d, c)| (*d, *c)).collect();
        (!weights.is_empty()).then_some(Self { weights })
    }
}

/// Truncated union bound `sum_d c_d p2(d)` on the bit error rate.
pub fn union_bound_ber(spectrum: &DistanceSpectrum, per_distance_p2: &BTreeMap<u32, f64>) -> Result<f64> {
    spectrum.weights.iter().try_fold(0.0, |acc, (d, c)| {
        let p2 = per_distance_p2.get(d).ok_or(Error::MissingDistance(*d))?;
        Ok(acc + c * p2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_term() {
        let s = DistanceSpectrum::from_pairs([(7, 1.0)]).unwrap();
        let p2 = BTreeMap::from([(7, 0.01)]);
        assert_eq!(union_bound_ber(&s, &p2).unwrap(), 0.01);
        assert_eq!(s.free_distance(), 7);
        assert_eq!(s.truncation_distance(), 7);
    }

    #[test]
    fn zero_probabilities() {
        let s = DistanceSpectrum::from_pairs([(5, 1.0), (6, 4.0), (7, 12.0)]).unwrap();
        let p2 = s.distances().map(|d| (d, 0.0)).collect();
        assert_eq!(union_bound_ber(&s, &p2).unwrap(), 0.0);
    }

    #[test]
    fn missing_distance() {
        let s = DistanceSpectrum::from_pairs([(5, 1.0), (6, 4.0)]).unwrap();
        let p2 = BTreeMap::from([(5, 0.1)]);
        assert_eq!(union_bound_ber(&s, &p2), Err(Error::MissingDistance(6)));
    }

    #[test]
    fn invalid_spectra() {
        assert!(DistanceSpectrum::from_pairs([]).is_err());
        assert!(DistanceSpectrum::from_pairs([(0, 1.0)]).is_err());
        assert!(DistanceSpectrum::from_pairs([(5, 0.0)]).is_err());
        assert!(DistanceSpectrum::from_pairs([(5, 1.0), (5, 2.0)]).is_err());
    }

    #[test]
    fn truncation() {
        let s = DistanceSpectrum::from_pairs([(5, 1.0), (6, 4.0), (7, 12.0)]).unwrap();
        let t = s.truncated(6).unwrap();
        assert_eq!(t.truncation_distance(), 6);
        assert!(s.truncated(4).is_none());
    }

    proptest! {
        #[test]
        fn monotone_in_weights_and_probabilities(
            terms in prop::collection::vec((0.01f64..100.0, 0.0f64..0.5), 1..12),
            which in 0usize..12,
            bump in 0.0f64..1.0,
        ) {
            let spectrum = DistanceSpectrum::from_pairs(
                terms.iter().enumerate().map(|(i, (c, _))| (10 + i as u32, *c))).unwrap();
            let p2: BTreeMap<u32, f64> = terms.iter().enumerate().map(|(i, (_, p))| (10 + i as u32, *p)).collect();
            let base = union_bound_ber(&spectrum, &p2).unwrap();
            prop_assert!(base >= 0.0);

            let key = 10 + (which % terms.len()) as u32;
            let mut bigger_p2 = p2.clone();
            *bigger_p2.get_mut(&key).unwrap() += bump;
            prop_assert!(union_bound_ber(&spectrum, &bigger_p2).unwrap() >= base);

            let mut w = spectrum.weights().clone();
            *w.get_mut(&key).unwrap() += bump;
            let bigger = DistanceSpectrum::new(w).unwrap();
            prop_assert!(union_bound_ber(&bigger, &p2).unwrap() >= base);
        }
    }
}
