//! Elementary (rational-amplitude) states and their two description formats.
//!
//! **Literal format** (always starts with `1`):
//!
//! ```text
//! write_unsigned(n_qubits)
//! for each of the 2^n amplitudes, in basis order:
//!     write_signed(re.numer) write_signed(re.denom)
//!     write_signed(im.numer) write_signed(im.denom)
//! ```
//!
//! where `write_unsigned(v) = 1^w 0 b` for the minimal `w`-bit binary `b` of `v`
//! (`0` is the one-bit string `0`), and `write_signed` prepends a sign bit
//! (`1` = negative). Fractions are reduced with a positive denominator, zero is
//! `0/1`. Since `n_qubits >= 1` has a nonempty binary form, a literal encoding
//! always begins with `1`.
//!
//! **Stream format** (always starts with `0`): names a rounded sample of the
//! sharded Haar stream.
//!
//! ```text
//! 0 write_unsigned(n) write_unsigned(m) write_unsigned(d)
//!   write_unsigned(precision_bits) write_unsigned(seed) index
//! ```
//!
//! with `index` in exactly `ceil(log2 N)` bits, `N = d·2^(2(n−m)+1)` being the
//! sample budget the stream was drawn under. Decoding regenerates the sample and
//! rounds it, so both formats decode to exact rational amplitudes.
//!
//! Both formats are prefix-free, and so is their union.

use num_rational::{Ratio, Rational64};
use num_traits::{CheckedAdd, CheckedMul, Zero};

use super::bits::{
    read_signed, read_unsigned, signed_len, unsigned_len, write_signed, write_unsigned, BitReader,
    BitString,
};
use crate::config::{checked_dim, MAX_PRECISION_BITS};
use crate::elfinder::sample_budget_for;
use crate::qcore::{haar_stream_sample, CVector, PureState, C64};
use crate::{QelError, Result};

/// Complex number with rational real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComplexRational {
    pub re: Rational64,
    pub im: Rational64,
}

impl ComplexRational {
    pub fn new(re: Rational64, im: Rational64) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational64) -> Self {
        Self {
            re,
            im: Rational64::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(Rational64::zero())
    }

    pub fn from_integer(v: i64) -> Self {
        Self::real(Rational64::from_integer(v))
    }

    /// Exact rational value of a finite double. Fails on NaN, infinities, and
    /// values whose exact fraction does not fit in 64-bit integers.
    pub fn from_f64_exact(z: C64) -> Result<Self> {
        Ok(Self::new(exact_f64(z.re)?, exact_f64(z.im)?))
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(ratio_f64(&self.re), ratio_f64(&self.im))
    }

    fn literal_len(&self) -> usize {
        signed_len(*self.re.numer())
            + signed_len(*self.re.denom())
            + signed_len(*self.im.numer())
            + signed_len(*self.im.denom())
    }
}

fn ratio_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn exact_f64(x: f64) -> Result<Rational64> {
    if !x.is_finite() {
        return Err(QelError::arg(format!("amplitude component {x} is not rational")));
    }
    if x == 0.0 {
        return Ok(Rational64::zero());
    }
    let mut scale = 0u32;
    let mut v = x;
    while v.fract() != 0.0 {
        if scale >= 62 {
            return Err(QelError::arg(format!(
                "amplitude component {x} needs a denominator above 2^62"
            )));
        }
        v *= 2.0;
        scale += 1;
    }
    if v.abs() >= 9.2e18 {
        return Err(QelError::arg(format!("amplitude component {x} is too large")));
    }
    Ok(Rational64::new(v as i64, 1i64 << scale))
}

/// Nearest multiple of `2^-precision_bits`.
pub fn round_dyadic(x: f64, precision_bits: u32) -> Rational64 {
    let num = (x * ((1i64 << precision_bits) as f64)).round() as i64;
    if num == 0 {
        return Rational64::zero();
    }
    let tz = num.trailing_zeros().min(precision_bits);
    Rational64::new_raw(num >> tz, 1i64 << (precision_bits - tz))
}

/// Position of a rounded sample in the sharded Haar stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamRef {
    pub n_qubits: u32,
    pub m: u32,
    pub d: u64,
    pub precision_bits: u32,
    pub seed: u64,
    pub index: u64,
}

impl StreamRef {
    /// `N`, the stream length implied by `(n, m, d)`.
    pub fn budget(&self) -> Result<u64> {
        sample_budget_for(self.n_qubits, self.m, self.d)
    }

    /// Width of the fixed-length index field, `ceil(log2 N)`.
    pub fn index_width(&self) -> Result<u32> {
        Ok(index_width(self.budget()?))
    }

    fn validate(&self) -> Result<u64> {
        if self.n_qubits == 0 {
            return Err(QelError::arg("stream state needs n >= 1"));
        }
        if !(2..=MAX_PRECISION_BITS).contains(&self.precision_bits) {
            return Err(QelError::arg(format!(
                "precision_bits {} outside 2..={MAX_PRECISION_BITS}",
                self.precision_bits
            )));
        }
        let budget = self.budget()?;
        if self.index >= budget {
            return Err(QelError::arg(format!(
                "stream index {} outside the budget {budget}",
                self.index
            )));
        }
        Ok(budget)
    }

    pub fn encode(&self) -> Result<BitString> {
        let budget = self.validate()?;
        let mut out = BitString::new();
        out.push(false);
        write_unsigned(&mut out, self.n_qubits as u64);
        write_unsigned(&mut out, self.m as u64);
        write_unsigned(&mut out, self.d);
        write_unsigned(&mut out, self.precision_bits as u64);
        write_unsigned(&mut out, self.seed);
        out.append(&BitString::from_u64_fixed(self.index, index_width(budget)));
        Ok(out)
    }

    pub fn encoded_len(&self) -> Result<usize> {
        let budget = self.validate()?;
        Ok(1 + unsigned_len(self.n_qubits as u64)
            + unsigned_len(self.m as u64)
            + unsigned_len(self.d)
            + unsigned_len(self.precision_bits as u64)
            + unsigned_len(self.seed)
            + index_width(budget) as usize)
    }
}

fn index_width(budget: u64) -> u32 {
    if budget <= 1 {
        0
    } else {
        64 - (budget - 1).leading_zeros()
    }
}

/// Where an elementary state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Description {
    /// Given directly by its rational amplitudes.
    Literal,
    /// Rounded sample of a Haar stream.
    Stream(StreamRef),
}

/// Pure state with exact rational amplitudes and its canonical description.
///
/// `encoding` is the shorter of the literal encoding and, for stream samples,
/// the stream encoding (ties go to the literal). `K̂ = ‖encoding‖`.
/// Amplitudes need not have unit norm; `state` is the exactly normalized
/// double-precision version used for every fidelity computation.
#[derive(Debug, Clone)]
pub struct ElementaryState {
    n_qubits: u32,
    amplitudes: Vec<ComplexRational>,
    description: Description,
    encoding: BitString,
    state: PureState,
    renormalized: bool,
}

impl PartialEq for ElementaryState {
    fn eq(&self, other: &Self) -> bool {
        self.amplitudes == other.amplitudes
    }
}

impl ElementaryState {
    /// Literal state from rational amplitudes (length `2^n`, not all zero).
    pub fn from_rationals(amplitudes: Vec<ComplexRational>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QelError::arg(format!("{len} amplitudes is not a power of two >= 2")));
        }
        let n_qubits = len.trailing_zeros();
        checked_dim(n_qubits)?;
        let encoding = encode_elementary_state(&amplitudes)?;
        Self::assemble(n_qubits, amplitudes, Description::Literal, encoding)
    }

    /// Round every amplitude component of `psi` to the nearest multiple of
    /// `2^-precision_bits`.
    pub fn from_dyadic_rounding(psi: &PureState, precision_bits: u32) -> Result<Self> {
        check_precision(precision_bits)?;
        Self::from_rationals(round_amplitudes(psi, precision_bits))
    }

    /// Regenerate and round the stream sample named by `stream`.
    pub fn from_stream(stream: StreamRef) -> Result<Self> {
        stream.validate()?;
        let psi = haar_stream_sample(stream.n_qubits, stream.seed, stream.index)?;
        Self::from_stream_sample(stream, &psi)
    }

    /// Like [`from_stream`](Self::from_stream) for a sample the caller already drew.
    pub(crate) fn from_stream_sample(stream: StreamRef, psi: &PureState) -> Result<Self> {
        let amplitudes = round_amplitudes(psi, stream.precision_bits);
        let literal_len = literal_encoded_len(&amplitudes);
        let stream_len = stream.encoded_len()?;
        let encoding = if stream_len < literal_len {
            stream.encode()?
        } else {
            encode_elementary_state(&amplitudes)?
        };
        Self::assemble(psi.n_qubits(), amplitudes, Description::Stream(stream), encoding)
    }

    fn assemble(
        n_qubits: u32,
        amplitudes: Vec<ComplexRational>,
        description: Description,
        encoding: BitString,
    ) -> Result<Self> {
        let v = CVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|a| a.to_c64()));
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(QelError::arg("elementary state has all-zero amplitudes"));
        }
        let renormalized = !exact_unit_norm(&amplitudes);
        let state = PureState::from_vector_unchecked(n_qubits, v.unscale(norm));
        Ok(Self {
            n_qubits,
            amplitudes,
            description,
            encoding,
            state,
            renormalized,
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[ComplexRational] {
        &self.amplitudes
    }

    pub fn description(&self) -> &Description {
        &self.description
    }

    pub fn encoding(&self) -> &BitString {
        &self.encoding
    }

    /// `K̂ = ‖encoding‖` in bits.
    pub fn proxy_complexity(&self) -> u64 {
        self.encoding.len() as u64
    }

    /// Unit-norm double-precision version of the amplitudes.
    pub fn state(&self) -> &PureState {
        &self.state
    }

    /// True when the rational amplitudes do not have exactly unit norm.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }
}

fn check_precision(precision_bits: u32) -> Result<()> {
    if !(2..=MAX_PRECISION_BITS).contains(&precision_bits) {
        return Err(QelError::arg(format!(
            "precision_bits {precision_bits} outside 2..={MAX_PRECISION_BITS}"
        )));
    }
    Ok(())
}

fn round_amplitudes(psi: &PureState, precision_bits: u32) -> Vec<ComplexRational> {
    psi.amplitudes()
        .iter()
        .map(|z| {
            ComplexRational::new(round_dyadic(z.re, precision_bits), round_dyadic(z.im, precision_bits))
        })
        .collect()
}

fn exact_unit_norm(amplitudes: &[ComplexRational]) -> bool {
    if let Some(result) = dyadic_unit_norm(amplitudes) {
        return result;
    }
    let widen = |r: &Rational64| Ratio::<i128>::new_raw(*r.numer() as i128, *r.denom() as i128);
    let mut acc = Ratio::<i128>::zero();
    for a in amplitudes {
        for part in [&a.re, &a.im] {
            let w = widen(part);
            let Some(sq) = w.checked_mul(&w) else { return false };
            let Some(next) = acc.checked_add(&sq) else { return false };
            acc = next;
        }
    }
    acc == Ratio::from_integer(1)
}

/// Integer check when every denominator is a power of two: scale all
/// components to the largest denominator `2^e` and compare `Σ a²` with `4^e`.
fn dyadic_unit_norm(amplitudes: &[ComplexRational]) -> Option<bool> {
    let parts = || amplitudes.iter().flat_map(|a| [&a.re, &a.im]);
    let mut e = 0u32;
    for r in parts() {
        let den = *r.denom();
        if den <= 0 || !(den as u64).is_power_of_two() {
            return None;
        }
        e = e.max(den.trailing_zeros());
    }
    if e > 62 {
        return None;
    }
    let mut sum: u128 = 0;
    for r in parts() {
        let shift = e - r.denom().trailing_zeros();
        let scaled = (r.numer().unsigned_abs() as u128).checked_shl(shift)?;
        if scaled >> 64 != 0 {
            return Some(false);
        }
        sum = sum.checked_add(scaled * scaled)?;
    }
    Some(sum == 1u128 << (2 * e))
}

/// Literal (dense) encoding of rational amplitudes; see the module docs.
pub fn encode_elementary_state(amplitudes: &[ComplexRational]) -> Result<BitString> {
    let len = amplitudes.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(QelError::arg(format!("{len} amplitudes is not a power of two >= 2")));
    }
    let mut out = BitString::with_capacity(literal_encoded_len(amplitudes));
    write_unsigned(&mut out, len.trailing_zeros() as u64);
    for a in amplitudes {
        write_signed(&mut out, *a.re.numer());
        write_signed(&mut out, *a.re.denom());
        write_signed(&mut out, *a.im.numer());
        write_signed(&mut out, *a.im.denom());
    }
    Ok(out)
}

/// Encode double-precision amplitudes, each taken at its exact rational value.
pub fn encode_f64_amplitudes(amplitudes: &[C64]) -> Result<BitString> {
    let rationals = amplitudes
        .iter()
        .map(|&z| ComplexRational::from_f64_exact(z))
        .collect::<Result<Vec<_>>>()?;
    encode_elementary_state(&rationals)
}

/// Length of the literal encoding without building it.
pub fn literal_encoded_len(amplitudes: &[ComplexRational]) -> usize {
    unsigned_len(amplitudes.len().trailing_zeros() as u64)
        + amplitudes.iter().map(ComplexRational::literal_len).sum::<usize>()
}

/// Decode a complete encoding (either format); trailing bits are an error.
pub fn decode_elementary_state(bits: &BitString) -> Result<ElementaryState> {
    let mut r = BitReader::new(bits);
    let state = read_elementary_state(&mut r)?;
    if r.remaining() != 0 {
        return r.fail(format!("{} trailing bits", r.remaining()));
    }
    Ok(state)
}

/// Decode one encoding from the front of a reader.
pub fn read_elementary_state(r: &mut BitReader<'_>) -> Result<ElementaryState> {
    let start = r.position();
    if !r.read_bit()? {
        return read_stream(r);
    }
    read_literal_from(r, start)
}

fn read_literal_from(r: &mut BitReader<'_>, start: usize) -> Result<ElementaryState> {
    // `r` has consumed the first header bit; restore it by re-reading the
    // unary length with one extra leading one.
    let mut ones = 1usize;
    while r.read_bit()? {
        ones += 1;
    }
    let n_bits = r.read_bits(ones)?;
    if !n_bits.bits()[0] {
        return Err(QelError::decode(start, "non-canonical qubit count"));
    }
    let n_qubits = n_bits
        .to_u64()
        .filter(|&n| n < 32)
        .ok_or_else(|| QelError::decode(start, "qubit count out of range"))? as u32;
    let dim = checked_dim(n_qubits)
        .map_err(|e| QelError::decode(start, e.to_string()))?;
    let mut amplitudes = Vec::with_capacity(dim);
    for _ in 0..dim {
        let re = read_fraction(r)?;
        let im = read_fraction(r)?;
        amplitudes.push(ComplexRational::new(re, im));
    }
    let encoding = encode_elementary_state(&amplitudes)?;
    ElementaryState::assemble(n_qubits, amplitudes, Description::Literal, encoding)
}

fn read_fraction(r: &mut BitReader<'_>) -> Result<Rational64> {
    let at = r.position();
    let num = read_signed(r)?;
    let den = read_signed(r)?;
    if den <= 0 {
        return Err(QelError::decode(at, "denominator must be positive"));
    }
    let reduced = Rational64::new(num, den);
    if *reduced.numer() != num || *reduced.denom() != den {
        return Err(QelError::decode(at, "fraction is not in lowest terms"));
    }
    Ok(reduced)
}

fn read_stream(r: &mut BitReader<'_>) -> Result<ElementaryState> {
    let at = r.position();
    let narrow = |v: u64| -> Result<u32> {
        u32::try_from(v).map_err(|_| QelError::decode(at, "field out of range"))
    };
    let n_qubits = narrow(read_unsigned(r)?)?;
    let m = narrow(read_unsigned(r)?)?;
    let d = read_unsigned(r)?;
    let precision_bits = narrow(read_unsigned(r)?)?;
    let seed = read_unsigned(r)?;
    let budget = sample_budget_for(n_qubits, m, d).map_err(|e| QelError::decode(at, e.to_string()))?;
    let index = r
        .read_bits(index_width(budget) as usize)?
        .to_u64()
        .ok_or_else(|| QelError::decode(at, "index wider than 64 bits"))?;
    let stream = StreamRef {
        n_qubits,
        m,
        d,
        precision_bits,
        seed,
        index,
    };
    let state = ElementaryState::from_stream(stream).map_err(|e| QelError::decode(at, e.to_string()))?;
    // keep the bits that were read, even where the literal form is shorter
    Ok(ElementaryState {
        encoding: stream.encode()?,
        ..state
    })
}
