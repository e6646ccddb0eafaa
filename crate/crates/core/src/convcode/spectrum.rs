use std::collections::BTreeMap;

use super::code::{CodeSpec, Trellis};
use crate::analytic::DistanceSpectrum;
use crate::error::{Error, Result};

/// Exact free distance and information error weights `c_d` for all
/// `d <= max_distance`.
///
/// Detours leave the zero state with a 1 and are extended breadth-first until
/// they re-merge with the zero state or exceed `max_distance`. Paths are
/// aggregated per `(state, distance)` with their count and summed input
/// weight, so the work is bounded by `states * max_distance` per step.
/// Catastrophic codes have zero-weight cycles away from the zero state and run
/// into the step budget.
pub fn distance_spectrum(code: &CodeSpec, max_distance: u32) -> Result<DistanceSpectrum> {
    let trellis = Trellis::new(code);
    let budget = (max_distance as usize + 2) * trellis.num_states() + 16;

    // (state, distance) -> (path count, summed information weight)
    let mut frontier: BTreeMap<(u32, u32), (u128, u128)> = BTreeMap::new();
    let mut found: BTreeMap<u32, u128> = BTreeMap::new();

    let mut extend = |state: u32, dist: u32, paths: u128, weight: u128, input: u8,
                      next: &mut BTreeMap<(u32, u32), (u128, u128)>| {
        let (ns, pattern) = trellis.step(state, input);
        let nd = dist + pattern.count_ones();
        if nd > max_distance {
            return;
        }
        let w = weight + u128::from(input) * paths;
        if ns == 0 {
            *found.entry(nd).or_default() += w;
        } else {
            let e = next.entry((ns, nd)).or_default();
            e.0 += paths;
            e.1 += w;
        }
    };

    extend(0, 0, 1, 0, 1, &mut frontier);
    let mut steps = 1;
    while !frontier.is_empty() {
        if steps >= budget {
            return Err(Error::SearchBudgetExceeded { steps });
        }
        let mut next = BTreeMap::new();
        for (&(state, dist), &(paths, weight)) in &frontier {
            for input in 0..2 {
                extend(state, dist, paths, weight, input, &mut next);
            }
        }
        frontier = next;
        steps += 1;
    }

    if found.is_empty() {
        return Err(Error::InvalidSpectrum(format!(
            "no codeword of weight <= {max_distance}"
        )));
    }
    DistanceSpectrum::new(found.into_iter().map(|(d, c)| (d, c as f64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convcode::encode;

    fn code57() -> CodeSpec {
        CodeSpec::from_octal(3, &["5", "7"]).unwrap()
    }

    /// Enumerates information words of length <= `max_len` that form a
    /// single detour (start with 1, end with 1, never revisit state zero) and
    /// sums their input weights per codeword weight.
    fn detour_oracle(code: &CodeSpec, max_len: usize) -> BTreeMap<u32, u64> {
        let trellis = Trellis::new(code);
        let mut out = BTreeMap::new();
        for len in 1..=max_len {
            for w in 0u32..(1 << len) {
                let word: Vec<u8> = (0..len).map(|i| ((w >> (len - 1 - i)) & 1) as u8).collect();
                if word[0] == 0 || word[len - 1] == 0 {
                    continue;
                }
                let tail = vec![0u8; code.memory() as usize];
                let mut s = 0;
                let mut single = true;
                let full: Vec<u8> = word.iter().chain(&tail).copied().collect();
                for (t, &b) in full.iter().enumerate() {
                    s = trellis.step(s, b).0;
                    if s == 0 && t + 1 < full.len() {
                        single = false;
                        break;
                    }
                }
                if !single {
                    continue;
                }
                let weight = encode(code, &word).iter().map(|&b| u32::from(b)).sum::<u32>();
                *out.entry(weight).or_insert(0) += word.iter().map(|&b| u64::from(b)).sum::<u64>();
            }
        }
        out
    }

    #[test]
    fn code57_free_distance() {
        let s = distance_spectrum(&code57(), 5).unwrap();
        assert_eq!(s.free_distance(), 5);
        assert_eq!(s.weight(5), Some(1.0));
    }

    #[test]
    fn code57_matches_detour_enumeration() {
        let s = distance_spectrum(&code57(), 9).unwrap();
        let oracle = detour_oracle(&code57(), 12);
        for d in 5..=9 {
            assert_eq!(s.weight(d), Some(oracle[&d] as f64), "d={d}");
        }
        // Known c_d = 1, 4, 12, 32, 80 for d = 5..9.
        let known = [1.0, 4.0, 12.0, 32.0, 80.0];
        for (d, c) in (5..=9).zip(known) {
            assert_eq!(s.weight(d), Some(c));
        }
    }

    #[test]
    fn larger_code_matches_detour_enumeration() {
        let code = CodeSpec::from_octal(4, &["15", "17"]).unwrap();
        let s = distance_spectrum(&code, 8).unwrap();
        assert_eq!(s.free_distance(), 6);
        let oracle = detour_oracle(&code, 12);
        for d in s.distances() {
            assert_eq!(s.weight(d), Some(oracle[&d] as f64), "d={d}");
        }
    }

    #[test]
    fn free_distance_is_min_codeword_weight() {
        for (k, gens) in [(3, vec!["5", "7"]), (4, vec!["15", "17"]), (4, vec!["13", "15", "17"]), (5, vec!["23", "35"])] {
            let code = CodeSpec::from_octal(k, &gens).unwrap();
            let d_f = distance_spectrum(&code, 20).unwrap().free_distance();
            let min_weight = (1u32..(1 << 12))
                .map(|w| {
                    let word: Vec<u8> = (0..12).map(|i| ((w >> i) & 1) as u8).collect();
                    encode(&code, &word).iter().map(|&b| u32::from(b)).sum::<u32>()
                })
                .min()
                .unwrap();
            assert_eq!(d_f, min_weight, "{gens:?}");
        }
    }

    #[test]
    fn duplicated_generators_double_distances() {
        // Repeating every output bit doubles every path weight and keeps the
        // information weights.
        let cases: [(u32, &[&str], &[&str]); 3] = [
            (3, &["4"], &["4", "4"]),
            (3, &["5", "7"], &["5", "5", "7", "7"]),
            (4, &["15", "17"], &["15", "15", "17", "17"]),
        ];
        for (k, base, doubled) in cases {
            let single = distance_spectrum(&CodeSpec::from_octal(k, base).unwrap(), 9).unwrap();
            let double = distance_spectrum(&CodeSpec::from_octal(k, doubled).unwrap(), 18).unwrap();
            assert!(double.distances().all(|d| d % 2 == 0));
            let halved: Vec<(u32, f64)> = double.weights().iter().map(|(d, c)| (d / 2, *c)).collect();
            let expect: Vec<(u32, f64)> = single.weights().iter().map(|(d, c)| (*d, *c)).collect();
            assert_eq!(halved, expect, "{base:?}");
        }
    }

    #[test]
    fn truncation_contract() {
        let s = distance_spectrum(&code57(), 7).unwrap();
        assert!(s.distances().all(|d| d <= 7));
        assert_eq!(s.truncation_distance(), 7);
    }

    #[test]
    fn catastrophic_code_hits_budget() {
        // (3, 5) octal: u(1+D) and u(1+D^2) share the factor 1+D.
        let code = CodeSpec::from_octal(3, &["3", "5"]).unwrap();
        assert!(matches!(
            distance_spectrum(&code, 10),
            Err(Error::SearchBudgetExceeded { .. })
        ));
    }

    #[test]
    fn below_free_distance_is_an_error() {
        assert!(distance_spectrum(&code57(), 4).is_err());
    }
}
