use std::collections::HashSet;

use num_rational::Rational64;
use num_traits::{CheckedAdd, One, Zero};

use super::bits::{prefix_encode, BitString};
use crate::{QelError, Result};

/// Finitely supported probability measure with rational values summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryProbability {
    support: Vec<(BitString, Rational64)>,
}

impl ElementaryProbability {
    pub fn new(support: Vec<(BitString, Rational64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(QelError::arg("empty support"));
        }
        let mut seen = HashSet::new();
        let mut total = Rational64::zero();
        for (x, q) in &support {
            if *q <= Rational64::zero() {
                return Err(QelError::arg(format!("probability of {x} is not positive")));
            }
            if !seen.insert(x) {
                return Err(QelError::arg(format!("duplicate support string {x}")));
            }
            total = total
                .checked_add(q)
                .ok_or_else(|| QelError::arg("probability sum overflows 64-bit rationals"))?;
        }
        if !total.is_one() {
            return Err(QelError::arg(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { support })
    }

    /// Uniform measure over distinct strings.
    pub fn uniform(strings: Vec<BitString>) -> Result<Self> {
        let n = strings.len() as i64;
        if n == 0 {
            return Err(QelError::arg("empty support"));
        }
        Self::new(strings.into_iter().map(|x| (x, Rational64::new(1, n))).collect())
    }

    pub fn support(&self) -> &[(BitString, Rational64)] {
        &self.support
    }

    pub fn probability(&self, x: &BitString) -> Option<Rational64> {
        self.support.iter().find(|(y, _)| y == x).map(|(_, q)| *q)
    }
}

/// `K̂(x) = ‖prefix_encode(x)‖ = 2‖x‖ + 1`. Used unconditionally in place of
/// `K(x | ⟨Q⟩)`.
pub fn string_complexity(x: &BitString) -> u64 {
    prefix_encode(x).len() as u64
}

/// `⌊−log₂ q⌋` for rational `0 < q <= 1`, exactly.
pub fn floor_neg_log2(q: Rational64) -> Result<i64> {
    if q <= Rational64::zero() || q > Rational64::one() {
        return Err(QelError::arg(format!("{q} is not in (0, 1]")));
    }
    let (num, den) = (*q.numer() as u128, *q.denom() as u128);
    // largest j with num·2^j <= den
    let mut j = (128 - den.leading_zeros()) as i64 - (128 - num.leading_zeros()) as i64;
    while j > 0 && (num << j) > den {
        j -= 1;
    }
    Ok(j)
}

/// Randomness deficiency `⌊−log₂ Q(x)⌋ − K̂(x)`; may be negative.
pub fn deficiency(x: &BitString, q: &ElementaryProbability) -> Result<i64> {
    let p = q
        .probability(x)
        .ok_or_else(|| QelError::arg(format!("{x} is not in the support of Q")))?;
    Ok(floor_neg_log2(p)? - string_complexity(x) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::QRng;
    use rand::Rng;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn uniform_over_equal_length_strings() {
        // 2^3 strings of length 5: K̂ = 11, d = 3 − 11
        let strings: Vec<BitString> = (0..8).map(|i| BitString::from_u64_fixed(i, 5)).collect();
        let q = ElementaryProbability::uniform(strings.clone()).unwrap();
        for x in &strings {
            assert_eq!(deficiency(x, &q).unwrap(), 3 - 11);
        }
    }

    #[test]
    fn point_mass() {
        let x = bs("0110");
        let q = ElementaryProbability::new(vec![(x.clone(), Rational64::one())]).unwrap();
        assert_eq!(deficiency(&x, &q).unwrap(), -(string_complexity(&x) as i64));
    }

    #[test]
    fn random_strings_match_brute_force() {
        let mut rng = QRng::new(20);
        let mut strings = Vec::new();
        while strings.len() < 8 {
            let s = BitString::from_u64_fixed(rng.random_range(0..1u64 << 20), 20);
            if !strings.contains(&s) {
                strings.push(s);
            }
        }
        let q = ElementaryProbability::uniform(strings.clone()).unwrap();
        for x in &strings {
            // brute force: count halvings of 1 until it drops below 1/8
            let mut j = 0;
            while 1.0 / 2f64.powi(j + 1) >= 1.0 / 8.0 {
                j += 1;
            }
            let k = 2 * x.len() as i64 + 1;
            assert_eq!(deficiency(x, &q).unwrap(), j as i64 - k);
        }
    }

    #[test]
    fn floor_log_exact() {
        assert_eq!(floor_neg_log2(Rational64::new(1, 3)).unwrap(), 1);
        assert_eq!(floor_neg_log2(Rational64::new(1, 4)).unwrap(), 2);
        assert_eq!(floor_neg_log2(Rational64::new(3, 4)).unwrap(), 0);
        assert_eq!(floor_neg_log2(Rational64::new(1, 1)).unwrap(), 0);
        assert_eq!(floor_neg_log2(Rational64::new(5, 1024)).unwrap(), 7);
        assert!(floor_neg_log2(Rational64::new(3, 2)).is_err());
    }

    #[test]
    fn rejects_bad_measures() {
        assert!(ElementaryProbability::new(vec![(bs("0"), Rational64::new(1, 2))]).is_err());
        assert!(ElementaryProbability::new(vec![
            (bs("0"), Rational64::new(1, 2)),
            (bs("0"), Rational64::new(1, 2))
        ])
        .is_err());
        let q = ElementaryProbability::uniform(vec![bs("0"), bs("1")]).unwrap();
        assert!(deficiency(&bs("11"), &q).is_err());
    }
}
