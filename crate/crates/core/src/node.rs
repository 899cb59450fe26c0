//! Node algebra on the complete binary tree: addresses, prefix order, the
//! left-to-right embedding into `(0, 1)` and the ends metric `d_V`.

use crate::error::{Error, Result};
use crate::rng::mix64;
use std::fmt;
use std::str::FromStr;

/// Deepest representable node. A node packs into one 64-bit word plus a
/// depth byte; desk-scale trees stay well below this.
pub const MAX_DEPTH: u32 = 62;

/// A finite 0-1 word. Bit `j` of `path` is step `j + 1` (0 = left, 1 = right);
/// bits at or beyond `depth` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    depth: u8,
    path: u64,
}

impl NodeId {
    pub const ROOT: NodeId = NodeId { depth: 0, path: 0 };

    pub fn root() -> Self {
        Self::ROOT
    }

    /// Builds a node from its steps, root first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut u = Self::ROOT;
        for &b in bits {
            u = u.child(b)?;
        }
        Ok(u)
    }

    pub fn depth(self) -> u32 {
        self.depth as u32
    }

    pub fn is_root(self) -> bool {
        self.depth == 0
    }

    /// Packed path word (bit `j` = step `j + 1`).
    pub fn path(self) -> u64 {
        self.path
    }

    /// Injective single-word key: a leading one above the path bits.
    pub fn packed(self) -> u64 {
        (1u64 << self.depth) | self.path
    }

    /// Step `k` of the word, 1-based.
    pub fn bit(self, k: u32) -> u8 {
        debug_assert!(k >= 1 && k <= self.depth());
        ((self.path >> (k - 1)) & 1) as u8
    }

    pub fn last_bit(self) -> Option<u8> {
        (self.depth > 0).then(|| self.bit(self.depth()))
    }

    pub fn child(self, dir: u8) -> Result<Self> {
        if self.depth() >= MAX_DEPTH {
            return Err(Error::DepthOverflow);
        }
        Ok(NodeId {
            depth: self.depth + 1,
            path: self.path | (((dir & 1) as u64) << self.depth),
        })
    }

    pub fn parent(self) -> Result<Self> {
        if self.depth == 0 {
            return Err(Error::RootHasNoParent);
        }
        Ok(self.prefix(self.depth() - 1))
    }

    /// The ancestor at depth `k` (`k <= depth`).
    pub fn prefix(self, k: u32) -> Self {
        debug_assert!(k <= self.depth());
        let mask = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
        NodeId {
            depth: k as u8,
            path: self.path & mask,
        }
    }

    /// Prefix order `self <= other`.
    pub fn is_prefix_of(self, other: NodeId) -> bool {
        self.depth <= other.depth && other.prefix(self.depth()) == self
    }

    /// Root path `∅ = u(0) < u(1) < ... < u(k) = self`.
    pub fn ancestors(self) -> impl Iterator<Item = NodeId> {
        (0..=self.depth()).map(move |k| self.prefix(k))
    }

    /// `β(u) = 1/2 + Σ_j (2u_j − 1)/2^{j+1}`; strictly monotone in the
    /// left-to-right order of the complete tree.
    pub fn beta(self) -> f64 {
        let mut b = 0.5;
        let mut w = 0.25;
        for k in 1..=self.depth() {
            if self.bit(k) == 1 {
                b += w;
            } else {
                b -= w;
            }
            w *= 0.5;
        }
        b
    }

    pub fn bits(self) -> impl Iterator<Item = u8> {
        (1..=self.depth()).map(move |k| self.bit(k))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            return f.write_str("e");
        }
        for b in self.bits() {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NodeId({self})")
    }
}

impl FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" {
            return Ok(Self::ROOT);
        }
        if s.is_empty() {
            return Err(Error::Parse { line: 0, msg: "empty node word".into() });
        }
        let mut u = Self::ROOT;
        for c in s.chars() {
            let dir = match c {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("unexpected character {other:?} in node word"),
                    })
                }
            };
            u = u.child(dir)?;
        }
        Ok(u)
    }
}

/// An infinite 0-1 sequence, queried bit by bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ray {
    /// Binary expansion of `num / 2^bits`, terminating in zeros.
    Dyadic { num: u64, bits: u32 },
    /// `word` followed by `tail` forever.
    ConstantTail { word: NodeId, tail: u8 },
    /// Pseudo-random bits derived from a seed.
    Seeded { seed: u64 },
}

impl Ray {
    pub fn dyadic(num: u64, bits: u32) -> Result<Self> {
        if bits > 63 || (bits < 64 && num >> bits != 0) {
            return Err(Error::InvalidParameter(format!(
                "dyadic ray {num}/2^{bits} is not in [0, 1)"
            )));
        }
        Ok(Ray::Dyadic { num, bits })
    }

    pub fn constant_tail(word: NodeId, tail: u8) -> Self {
        Ray::ConstantTail { word, tail: tail & 1 }
    }

    pub fn seeded(seed: u64) -> Self {
        Ray::Seeded { seed }
    }

    /// The binary-digit map `t ↦ (⌊2^k t⌋ − 2⌊2^{k−1} t⌋)_k` for `t ∈ [0, 1)`.
    ///
    /// Every finite `f64` is dyadic; digits past step 63 are dropped.
    pub fn from_unit(t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("{t} is not in [0, 1)")));
        }
        if t == 0.0 {
            return Ok(Ray::Dyadic { num: 0, bits: 0 });
        }
        // t = mant * 2^exp exactly, with exp < 0.
        let bits = t.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let shift = mant.trailing_zeros() as i64;
        let (mut mant, mut denom_bits) = (mant >> shift, -(exp + shift));
        if denom_bits > 63 {
            mant >>= denom_bits - 63;
            denom_bits = 63;
        }
        Ray::dyadic(mant, denom_bits as u32)
    }

    /// Bit `k` of the ray, 1-based.
    pub fn bit_at(&self, k: u32) -> u8 {
        debug_assert!(k >= 1);
        match *self {
            Ray::Dyadic { num, bits } => {
                if k <= bits {
                    ((num >> (bits - k)) & 1) as u8
                } else {
                    0
                }
            }
            Ray::ConstantTail { word, tail } => {
                if k <= word.depth() {
                    word.bit(k)
                } else {
                    tail
                }
            }
            Ray::Seeded { seed } => {
                let block = mix64(seed ^ mix64(((k - 1) / 64) as u64 ^ 0x5241_5953_5452_4541));
                ((block >> ((k - 1) % 64)) & 1) as u8
            }
        }
    }

    /// The node `v(k) = (v_1, ..., v_k)`.
    pub fn prefix(&self, k: u32) -> Result<NodeId> {
        if k > MAX_DEPTH {
            return Err(Error::DepthOverflow);
        }
        let mut path = 0u64;
        for j in 1..=k {
            path |= (self.bit_at(j) as u64) << (j - 1);
        }
        Ok(NodeId { depth: k as u8, path })
    }
}

/// A point of the completed node space: a finite node or a ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Point {
    Node(NodeId),
    Ray(Ray),
}

impl From<NodeId> for Point {
    fn from(u: NodeId) -> Self {
        Point::Node(u)
    }
}

impl From<Ray> for Point {
    fn from(v: Ray) -> Self {
        Point::Ray(v)
    }
}

impl Point {
    fn len(&self) -> Option<u32> {
        match self {
            Point::Node(u) => Some(u.depth()),
            Point::Ray(_) => None,
        }
    }

    fn bit_at(&self, k: u32) -> u8 {
        match self {
            Point::Node(u) => u.bit(k),
            Point::Ray(v) => v.bit_at(k),
        }
    }
}

/// Length of the longest common prefix. For two rays, agreement beyond
/// `cap` steps is reported as an error.
pub fn common_prefix_len(a: impl Into<Point>, b: impl Into<Point>, cap: u32) -> Result<u32> {
    let (a, b) = (a.into(), b.into());
    if let (Point::Node(u), Point::Node(v)) = (a, b) {
        let m = u.depth().min(v.depth());
        let diff = (u.path ^ v.path) & if m == 0 { 0 } else { u64::MAX >> (64 - m) };
        return Ok(if diff == 0 { m } else { diff.trailing_zeros() });
    }
    let limit = match (a.len(), b.len()) {
        (Some(m), _) | (_, Some(m)) => m,
        (None, None) => cap.saturating_add(1).min(MAX_DEPTH + 1),
    };
    let mut k = 0;
    while k < limit && a.bit_at(k + 1) == b.bit_at(k + 1) {
        k += 1;
    }
    if a.len().is_none() && b.len().is_none() && k > cap {
        return Err(Error::CommonPrefixExceedsCap { cap });
    }
    Ok(k)
}

/// Last common ancestor `u ∧ v`.
pub fn lca(a: impl Into<Point>, b: impl Into<Point>, cap: u32) -> Result<NodeId> {
    let a = a.into();
    let k = common_prefix_len(a, b, cap)?;
    Ok(match a {
        Point::Node(u) => u.prefix(k),
        Point::Ray(v) => v.prefix(k)?,
    })
}

/// `d_V(u, v) = 2^{−|u∧v|} − (2^{−|u|} + 2^{−|v|})/2`, with `2^{−∞} = 0` for rays.
pub fn d_v(a: impl Into<Point>, b: impl Into<Point>, cap: u32) -> Result<f64> {
    let (a, b) = (a.into(), b.into());
    let k = common_prefix_len(a, b, cap)?;
    let w = |p: &Point| p.len().map_or(0.0, |m| (-(m as f64)).exp2());
    Ok((-(k as f64)).exp2() - 0.5 * (w(&a) + w(&b)))
}
