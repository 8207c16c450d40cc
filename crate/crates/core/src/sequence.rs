//! Eventually periodic integer sequences: a finite prefix followed by an
//! optional tail that repeats forever.
//!
//! Command-line grammar: `"p0,p1,...;t0,t1,..."`. A spec without `;` is a
//! pure tail (`"2"` is the constant sequence 2), and a trailing `;` with
//! nothing after it is a finite prefix (`"1,2,1,0;"`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    prefix: Vec<u64>,
    tail: Option<Vec<u64>>,
}

impl SequenceSpec {
    pub fn new(prefix: Vec<u64>, tail: Option<Vec<u64>>) -> Result<Self> {
        if let Some(t) = &tail {
            if t.is_empty() {
                return Err(Error::InvalidSequence("tail must be nonempty".into()));
            }
        }
        if prefix.is_empty() && tail.is_none() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        Ok(Self { prefix, tail })
    }

    pub fn finite(prefix: Vec<u64>) -> Result<Self> {
        Self::new(prefix, None)
    }

    /// The purely periodic sequence `tail, tail, ...`.
    pub fn periodic(tail: Vec<u64>) -> Result<Self> {
        Self::new(Vec::new(), Some(tail))
    }

    pub fn constant(value: u64) -> Self {
        Self {
            prefix: Vec::new(),
            tail: Some(vec![value]),
        }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<&[u64]> {
        self.tail.as_deref()
    }

    pub fn value_at(&self, n: usize) -> Result<u64> {
        if let Some(&v) = self.prefix.get(n) {
            return Ok(v);
        }
        match &self.tail {
            Some(t) => Ok(t[(n - self.prefix.len()) % t.len()]),
            None => Err(Error::SequenceExhausted {
                index: n,
                prefix_len: self.prefix.len(),
            }),
        }
    }

    /// Values `0..len`.
    pub fn take(&self, len: usize) -> Result<Vec<u64>> {
        (0..len).map(|n| self.value_at(n)).collect()
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.tail {
            Some(t) if self.prefix.is_empty() => write!(f, "{}", join(t)),
            Some(t) => write!(f, "{};{}", join(&self.prefix), join(t)),
            None => write!(f, "{};", join(&self.prefix)),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidSequence(format!("not a nonnegative integer: {tok:?}")))
        })
        .collect()
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(';') {
            None => Self::periodic(parse_list(s)?),
            Some((p, t)) => {
                let prefix = parse_list(p)?;
                let tail = parse_list(t)?;
                Self::new(prefix, (!tail.is_empty()).then_some(tail))
            }
        }
    }
}

/// Block lengths `L_1..L_count` of the sparse construction,
/// `L_j = ceil(prod_{i=1..j} (kappa - 1 + ln i))`.
pub fn sparse_gamma_block_lengths(kappa: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut product = 1.0_f64;
    for i in 1..=count {
        product *= (kappa as f64) - 1.0 + (i as f64).ln();
        // exact integers in the product must not be bumped up by roundoff
        let nearest = product.round();
        let l = if (product - nearest).abs() <= 1e-9 * product.max(1.0) {
            nearest
        } else {
            product.ceil()
        };
        out.push(l as u64);
    }
    out
}

/// `gamma_1..gamma_length`: 1 exactly at the partial sums of the block
/// lengths, 0 elsewhere. Index 0 of the returned vector is `gamma_1`.
pub fn sparse_gamma_sequence(kappa: u64, length: usize) -> Result<Vec<u8>> {
    if kappa < 2 {
        return Err(Error::InvalidArgument(format!("kappa must be >= 2, got {kappa}")));
    }
    let mut bits = vec![0u8; length];
    let mut sum = 0u64;
    let mut j = 0usize;
    loop {
        j += 1;
        let l = *sparse_gamma_block_lengths(kappa, j).last().unwrap();
        sum += l;
        if sum as usize > length {
            break;
        }
        bits[sum as usize - 1] = 1;
    }
    Ok(bits)
}

/// The sparse gamma sequence as a finite spec indexed from sphere 0
/// (`gamma_0 = 0`, unused).
pub fn sparse_gamma_spec(kappa: u64, length: usize) -> Result<SequenceSpec> {
    let bits = sparse_gamma_sequence(kappa, length)?;
    let mut prefix = Vec::with_capacity(length + 1);
    prefix.push(0);
    prefix.extend(bits.into_iter().map(u64::from));
    SequenceSpec::finite(prefix)
}
