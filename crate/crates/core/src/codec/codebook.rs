use num_rational::Rational64;

use super::bits::unsigned_len;
use super::elementary::{literal_encoded_len, ComplexRational, ElementaryState};
use crate::config::checked_dim;
use crate::Result;

/// Grid states are enumerated only while `(2^(g+1)+1)^(2·dim)` stays below this.
pub const GRID_CANDIDATE_LIMIT: u64 = 1 << 20;

/// Cap on `entries × dim` for the subset-superposition rule.
pub const SUBSET_AMPLITUDE_LIMIT: usize = 1 << 22;

/// Candidate elementary states sorted by `K̂`, then by encoding.
#[derive(Debug, Clone, Default)]
pub struct Codebook {
    entries: Vec<ElementaryState>,
    rule: String,
    warning: Option<String>,
}

impl Codebook {
    pub fn from_states(states: Vec<ElementaryState>, rule: impl Into<String>) -> Self {
        let mut book = Self {
            entries: states,
            rule: rule.into(),
            warning: None,
        };
        book.normalize_order();
        book
    }

    fn normalize_order(&mut self) {
        self.entries.sort_by(|a, b| {
            a.proxy_complexity()
                .cmp(&b.proxy_complexity())
                .then_with(|| a.encoding().cmp(b.encoding()))
        });
        self.entries.dedup_by(|a, b| a.encoding() == b.encoding());
    }

    /// Union with another codebook, keeping the sort and uniqueness invariants.
    pub fn merge(&mut self, other: Codebook) {
        self.entries.extend(other.entries);
        self.rule = format!("{}+{}", self.rule, other.rule);
        self.normalize_order();
    }

    pub fn entries(&self) -> &[ElementaryState] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Identifier of the generation rule(s) that produced the entries.
    pub fn rule(&self) -> &str {
        &self.rule
    }

    /// Set when the budget was too small for any entry.
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }
}

/// Literal encoding length of any basis or ±1 subset state on `n` qubits: every
/// amplitude is `0/1` or `±1/1`, which all cost 16 bits.
pub fn basis_state_len(n_qubits: u32) -> usize {
    unsigned_len(n_qubits as u64) + 16 * (1usize << n_qubits)
}

/// Enumerate simple candidate states on `n_qubits` whose `K̂` fits in `budget_bits`.
///
/// Rules, in order:
/// 1. `basis`: all computational basis states.
/// 2. `subset`: for each `j` in `1..=n`, each aligned block of `2^j` basis states
///    and each Walsh sign pattern on it, the equal-weight `±1` superposition
///    (stored unnormalized).
/// 3. `grid`: for `g = 1, 2, ...` while `(2^(g+1)+1)^(2·2^n) <= 2^20`, all states
///    whose real and imaginary parts lie in `{k/2^g : |k| <= 2^g}` with squared
///    norm within `2^(1-g)` of 1.
///
/// Entries above the budget are dropped, so a larger budget never removes one.
pub fn enumerate_codebook(n_qubits: u32, budget_bits: u64) -> Result<Codebook> {
    let dim = checked_dim(n_qubits)?;
    let min_len = basis_state_len(n_qubits) as u64;
    if budget_bits < min_len {
        return Ok(Codebook {
            entries: Vec::new(),
            rule: "basis+subset+grid".into(),
            warning: Some(format!(
                "budget {budget_bits} bits is below the basis-state length {min_len}"
            )),
        });
    }
    let mut states = Vec::new();
    let one = ComplexRational::from_integer(1);
    let minus_one = ComplexRational::from_integer(-1);

    for i in 0..dim {
        let mut amps = vec![ComplexRational::zero(); dim];
        amps[i] = one;
        states.push(ElementaryState::from_rationals(amps)?);
    }

    'subset: for j in 1..=n_qubits {
        let block = 1usize << j;
        for start in (0..dim).step_by(block) {
            for pattern in 0..block {
                if (states.len() + 1) * dim > SUBSET_AMPLITUDE_LIMIT {
                    break 'subset;
                }
                let mut amps = vec![ComplexRational::zero(); dim];
                for t in 0..block {
                    let negative = (pattern & t).count_ones() % 2 == 1;
                    amps[start + t] = if negative { minus_one } else { one };
                }
                states.push(ElementaryState::from_rationals(amps)?);
            }
        }
    }

    let components = 2 * dim as u32;
    let mut g = 1u32;
    while ((1u64 << (g + 1)) + 1).checked_pow(components).is_some_and(|c| c <= GRID_CANDIDATE_LIMIT) {
        for s in grid_states(dim, g)? {
            if s.proxy_complexity() <= budget_bits {
                states.push(s);
            }
        }
        g += 1;
    }

    states.retain(|s| s.proxy_complexity() <= budget_bits);
    Ok(Codebook::from_states(states, "basis+subset+grid"))
}

fn grid_states(dim: usize, g: u32) -> Result<Vec<ElementaryState>> {
    let scale = 1i64 << g;
    let levels = (2 * scale + 1) as u64;
    let components = 2 * dim;
    let total = levels.pow(components as u32);
    let tolerance = Rational64::new(2, scale);
    let mut out = Vec::new();
    let mut digits = vec![0i64; components];
    for code in 0..total {
        let mut c = code;
        for d in digits.iter_mut() {
            *d = (c % levels) as i64 - scale;
            c /= levels;
        }
        let norm_sq: i64 = digits.iter().map(|d| d * d).sum();
        if norm_sq == 0 {
            continue;
        }
        let dev = Rational64::new((norm_sq - scale * scale).abs(), scale * scale);
        if dev > tolerance {
            continue;
        }
        let amps: Vec<ComplexRational> = digits
            .chunks(2)
            .map(|p| ComplexRational::new(Rational64::new(p[0], scale), Rational64::new(p[1], scale)))
            .collect();
        debug_assert!(literal_encoded_len(&amps) > 0);
        out.push(ElementaryState::from_rationals(amps)?);
    }
    Ok(out)
}
