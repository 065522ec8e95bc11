use std::fmt;
use std::str::FromStr;

use crate::{QelError, Result};

/// Finite bit sequence. Ordering is lexicographic with a proper prefix first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self(Vec::with_capacity(cap))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn append(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.append(other);
        out
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Minimal big-endian binary representation; `0` is `"0"`.
    pub fn from_u64(v: u64) -> Self {
        if v == 0 {
            return Self(vec![false]);
        }
        let width = 64 - v.leading_zeros();
        Self::from_u64_fixed(v, width)
    }

    /// `v` in exactly `width` bits, big-endian.
    pub fn from_u64_fixed(v: u64, width: u32) -> Self {
        Self((0..width).rev().map(|i| (v >> i) & 1 == 1).collect())
    }

    /// Interpret as a big-endian unsigned integer (at most 64 bits).
    pub fn to_u64(&self) -> Option<u64> {
        if self.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    /// Pack into bytes, MSB first, zero-padding the final byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))
            })
            .collect()
    }

    /// Inverse of [`to_bytes`](Self::to_bytes) given the original bit length.
    pub fn from_bytes(bytes: &[u8], bit_len: usize) -> Result<Self> {
        if bit_len > bytes.len() * 8 || bit_len + 8 <= bytes.len() * 8 {
            return Err(QelError::decode(0, format!(
                "{} bytes cannot hold exactly {bit_len} bits",
                bytes.len()
            )));
        }
        let bits = (0..bit_len).map(|i| bytes[i / 8] >> (7 - i % 8) & 1 == 1).collect();
        Ok(Self(bits))
    }
}

impl From<Vec<bool>> for BitString {
    fn from(v: Vec<bool>) -> Self {
        Self(v)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = QelError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(QelError::decode(i, format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Cursor over a bit string used by all decoders.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        Self {
            bits: bits.bits(),
            pos: 0,
        }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn rest(&self) -> BitString {
        BitString(self.bits[self.pos..].to_vec())
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let b = *self
            .bits
            .get(self.pos)
            .ok_or_else(|| QelError::decode(self.pos, "unexpected end of input"))?;
        self.pos += 1;
        Ok(b)
    }

    pub fn read_bits(&mut self, count: usize) -> Result<BitString> {
        if self.remaining() < count {
            return Err(QelError::decode(self.pos, format!("need {count} more bits")));
        }
        let out = BitString(self.bits[self.pos..self.pos + count].to_vec());
        self.pos += count;
        Ok(out)
    }

    pub fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(QelError::decode(self.pos, reason))
    }
}

/// Self-delimiting code `1^{‖x‖} 0 x`.
pub fn prefix_encode(x: &BitString) -> BitString {
    let mut out = BitString::with_capacity(2 * x.len() + 1);
    out.0.extend(std::iter::repeat_n(true, x.len()));
    out.push(false);
    out.append(x);
    out
}

/// Split `prefix_encode(x) ++ rest` into `(x, rest)`.
pub fn prefix_decode(bits: &BitString) -> Result<(BitString, BitString)> {
    let mut r = BitReader::new(bits);
    let x = read_prefixed(&mut r)?;
    Ok((x, r.rest()))
}

pub fn read_prefixed(r: &mut BitReader<'_>) -> Result<BitString> {
    let mut len = 0usize;
    while r.read_bit()? {
        len += 1;
    }
    r.read_bits(len)
}

/// `prefix_encode(binary(v))`.
pub fn write_unsigned(out: &mut BitString, v: u64) {
    out.append(&prefix_encode(&BitString::from_u64(v)));
}

/// Inverse of [`write_unsigned`]; rejects non-minimal binary forms.
pub fn read_unsigned(r: &mut BitReader<'_>) -> Result<u64> {
    let start = r.position();
    let x = read_prefixed(r)?;
    if x.is_empty() || (x.len() > 1 && !x.bits()[0]) {
        return Err(QelError::decode(start, "non-canonical binary integer"));
    }
    x.to_u64()
        .ok_or_else(|| QelError::decode(start, "integer wider than 64 bits"))
}

/// Sign bit (1 = negative) then `prefix_encode(binary(|v|))`.
pub fn write_signed(out: &mut BitString, v: i64) {
    out.push(v < 0);
    write_unsigned(out, v.unsigned_abs());
}

pub fn read_signed(r: &mut BitReader<'_>) -> Result<i64> {
    let start = r.position();
    let negative = r.read_bit()?;
    let mag = read_unsigned(r)?;
    match (negative, mag) {
        (true, 0) => Err(QelError::decode(start, "negative zero")),
        (false, m) if m <= i64::MAX as u64 => Ok(m as i64),
        (true, m) if m <= i64::MAX as u64 + 1 => Ok((m as i128).wrapping_neg() as i64),
        _ => Err(QelError::decode(start, "signed integer out of range")),
    }
}

/// Bit length of `write_unsigned(v)`.
pub fn unsigned_len(v: u64) -> usize {
    let w = if v == 0 { 1 } else { (64 - v.leading_zeros()) as usize };
    2 * w + 1
}

/// Bit length of `write_signed(v)`.
pub fn signed_len(v: i64) -> usize {
    1 + unsigned_len(v.unsigned_abs())
}
