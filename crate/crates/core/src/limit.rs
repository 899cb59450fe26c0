//! The limit tree `X∞` and its finite-`n` companions.
//!
//! `X∞` is parameterized by independent uniform split ratios `ξ_u`; the mass
//! of the cylinder below `u` is the product of `ξ` (left steps) and `1 − ξ`
//! (right steps) along the root path. Two sources of `ξ` implement
//! [`SplitField`]: [`LimitTree`] (a seeded, order-independent field) and
//! [`EtaCoupling`] (the BST chain run on uniform keys, which reveals `ξ_u`
//! exactly for every inserted node).

use crate::chains::{BstBuilder, DrivingMeasure};
use crate::error::{invalid, Error, Result};
use crate::node::{NodeId, Ray, MAX_DEPTH};
use crate::rng::{mix2, open01, RngStream};
use crate::scalar::Scalar;
use crate::tree::BinaryTree;

/// Euler's constant (OEIS A001620), to double precision.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A source of split ratios `ξ_u`, navigated with a cursor so that walks
/// down the tree cost O(1) per step.
pub trait SplitField {
    type Cursor: Copy;

    fn root_cursor(&self) -> Self::Cursor;

    fn child_cursor(&self, at: Self::Cursor, dir: u8) -> Self::Cursor;

    /// `(ξ_u, 1 − ξ_u)`; both entries are computed directly so neither loses
    /// relative precision when close to zero.
    fn split_at(&self, at: Self::Cursor, u: NodeId) -> (f64, f64);

    fn cursor_of(&self, u: NodeId) -> Self::Cursor {
        u.bits()
            .fold(self.root_cursor(), |c, b| self.child_cursor(c, b))
    }

    fn split(&self, u: NodeId) -> (f64, f64) {
        self.split_at(self.cursor_of(u), u)
    }

    fn xi(&self, u: NodeId) -> f64 {
        self.split(u).0
    }

    /// `X∞(A_u)` as the product of split factors along the root path.
    fn mass(&self, u: NodeId) -> f64 {
        let mut c = self.root_cursor();
        let mut m = 1.0;
        for k in 0..u.depth() {
            let (l, r) = self.split_at(c, u.prefix(k));
            let b = u.bit(k + 1);
            m *= if b == 0 { l } else { r };
            c = self.child_cursor(c, b);
        }
        m
    }
}

/// Masses of the cylinders `v(1), ..., v(k)` along a ray.
pub fn masses_along<F: SplitField>(field: &F, ray: &Ray, k: u32) -> Result<Vec<f64>> {
    if k > MAX_DEPTH {
        return Err(Error::DepthOverflow);
    }
    let mut c = field.root_cursor();
    let mut u = NodeId::ROOT;
    let mut m = 1.0;
    let mut out = Vec::with_capacity(k as usize);
    for j in 1..=k {
        let (l, r) = field.split_at(c, u);
        let b = ray.bit_at(j);
        m *= if b == 0 { l } else { r };
        c = field.child_cursor(c, b);
        u = u.child(b)?;
        out.push(m);
    }
    Ok(out)
}

/// Draws the first `depth` steps of a ray distributed according to `X∞`.
pub fn sample_ray<F: SplitField>(field: &F, rng: &mut RngStream, depth: u32) -> Result<NodeId> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthOverflow);
    }
    let mut c = field.root_cursor();
    let mut u = NodeId::ROOT;
    for _ in 0..depth {
        let (l, _) = field.split_at(c, u);
        let b = u8::from(!rng.bernoulli(l));
        c = field.child_cursor(c, b);
        u = u.child(b)?;
    }
    Ok(u)
}

/// Where to cut an infinite sum over nodes: at a depth, and below a mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub depth: u32,
    pub mass_cutoff: f64,
}

impl Truncation {
    pub const DEFAULT_DEPTH: u32 = 40;
    pub const DEFAULT_CUTOFF: f64 = 1e-7;

    pub fn new(depth: u32, mass_cutoff: f64) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthOverflow);
        }
        if mass_cutoff.is_nan() || mass_cutoff < 0.0 {
            return Err(invalid("mass cutoff must be nonnegative"));
        }
        Ok(Self { depth, mass_cutoff })
    }

    pub fn depth(depth: u32) -> Result<Self> {
        Self::new(depth, Self::DEFAULT_CUTOFF)
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            depth: Self::DEFAULT_DEPTH,
            mass_cutoff: Self::DEFAULT_CUTOFF,
        }
    }
}

/// A node reached by [`traverse`].
#[derive(Clone, Copy, Debug)]
pub struct Visit {
    pub node: NodeId,
    pub mass: f64,
    pub split: (f64, f64),
}

/// Depth-first walk over every node with `|u| <= depth` and
/// `mass(u) >= mass_cutoff` (the root is always visited). Children of visited
/// nodes that are cut off are reported to `on_frontier` with their mass.
pub fn traverse<F: SplitField>(
    field: &F,
    trunc: Truncation,
    mut on_node: impl FnMut(&Visit),
    mut on_frontier: impl FnMut(NodeId, f64),
) {
    let mut stack = vec![(NodeId::ROOT, field.root_cursor(), 1.0f64)];
    while let Some((u, c, m)) = stack.pop() {
        let split = field.split_at(c, u);
        on_node(&Visit { node: u, mass: m, split });
        for (dir, f) in [(1u8, split.1), (0u8, split.0)] {
            let cm = m * f;
            let child = u.child(dir);
            match child {
                Ok(v) if u.depth() < trunc.depth && cm >= trunc.mass_cutoff => {
                    stack.push((v, field.child_cursor(c, dir), cm));
                }
                Ok(v) => on_frontier(v, cm),
                Err(_) => {}
            }
        }
    }
}

/// Exact per-level maxima of `X∞(u)` over descendants (inclusive) of `roots`,
/// for levels `0..=max_depth`; levels without candidates report 0.
pub fn level_maxima_from<F: SplitField>(
    field: &F,
    roots: &[(NodeId, F::Cursor, f64)],
    max_depth: u32,
) -> Vec<f64> {
    level_extrema(field, roots, max_depth).into_iter().map(|(m, _)| m).collect()
}

/// Branch and bound: masses decrease along paths, so a subtree whose root
/// mass does not exceed the running maximum of every deeper level is skipped.
fn level_extrema<F: SplitField>(
    field: &F,
    roots: &[(NodeId, F::Cursor, f64)],
    max_depth: u32,
) -> Vec<(f64, Option<NodeId>)> {
    let k_max = max_depth as usize;
    let mut best = vec![(0.0f64, None); k_max + 1];

    // Greedy heavy-path descents give every level a lower bound up front.
    for &(u0, c0, m0) in roots {
        let (mut u, mut c, mut m) = (u0, c0, m0);
        loop {
            let d = u.depth() as usize;
            if d > k_max {
                break;
            }
            if best[d].1.is_none() || m > best[d].0 {
                best[d] = (m, Some(u));
            }
            if d == k_max {
                break;
            }
            let (l, r) = field.split_at(c, u);
            let dir = u8::from(r > l);
            m *= l.max(r);
            c = field.child_cursor(c, dir);
            u = match u.child(dir) {
                Ok(v) => v,
                Err(_) => break,
            };
        }
    }

    let mut stack: Vec<(NodeId, F::Cursor, f64)> = roots
        .iter()
        .copied()
        .filter(|(u, _, _)| u.depth() <= max_depth)
        .collect();
    while let Some((u, c, m)) = stack.pop() {
        let d = u.depth() as usize;
        if m > best[d].0 {
            best[d] = (m, Some(u));
        }
        if d == k_max {
            continue;
        }
        let floor = best[d + 1..].iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let (l, r) = field.split_at(c, u);
        let (first, second) = if l >= r { ((1u8, r), (0u8, l)) } else { ((0u8, l), (1u8, r)) };
        for (dir, f) in [first, second] {
            let cm = m * f;
            if cm > floor {
                if let Ok(v) = u.child(dir) {
                    stack.push((v, field.child_cursor(c, dir), cm));
                }
            }
        }
    }
    best
}

/// A heaviest node at each level `0..=max_depth`, with its mass.
pub fn level_argmax<F: SplitField>(field: &F, max_depth: u32) -> Result<Vec<(f64, NodeId)>> {
    if max_depth > MAX_DEPTH {
        return Err(Error::DepthOverflow);
    }
    Ok(level_extrema(field, &[(NodeId::ROOT, field.root_cursor(), 1.0)], max_depth)
        .into_iter()
        .map(|(m, u)| (m, u.expect("every level is reached from the root")))
        .collect())
}

/// Exact `max_{|u|=k} X∞(u)` for `k = 0..=max_depth`.
pub fn level_maxima<F: SplitField>(field: &F, max_depth: u32) -> Result<Vec<f64>> {
    if max_depth > MAX_DEPTH {
        return Err(Error::DepthOverflow);
    }
    Ok(level_maxima_from(
        field,
        &[(NodeId::ROOT, field.root_cursor(), 1.0)],
        max_depth,
    ))
}

/// Truncated weighted norm `Σ_{k=1..K} ρ^k max_{|u|=k} X∞(u)`.
pub fn rho_norm<F: SplitField>(field: &F, rho: f64, depth: u32) -> Result<f64> {
    if rho.is_nan() || rho < 1.0 {
        return Err(invalid(format!("rho = {rho} must be at least 1")));
    }
    let maxima = level_maxima(field, depth)?;
    Ok(weighted_level_sum(&maxima, rho))
}

/// `Σ_{k>=1} ρ^k a_k` for level-indexed `a`.
pub fn weighted_level_sum(levels: &[f64], rho: f64) -> f64 {
    levels
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| rho.powi(k as i32) * a)
        .sum()
}

/// `E[X∞(A_u) | F_n] = (σ(x,u) + 1)/(n + 1)` for `u ∈ x`.
pub fn projected_mass<S: Scalar>(tree: &BinaryTree, u: NodeId) -> Result<S> {
    let idx = tree.index_of(u).ok_or(Error::NotInTree(u))?;
    Ok(S::from_count(tree.sigma_at(idx) + 1) / S::from_count(tree.len() as u64 + 1))
}

/// `E[X∞(A_u) | F_n]` for any node: below the first external ancestor `e` of
/// `u` the remaining mass halves in expectation at every step.
pub fn projected_mass_any<S: Scalar>(tree: &BinaryTree, u: NodeId) -> S {
    let n1 = S::from_count(tree.len() as u64 + 1);
    let mut idx = 0usize;
    for k in 1..=u.depth() {
        match tree.child_index(idx, u.bit(k)) {
            Some(c) => idx = c,
            None => {
                let halvings = u.depth() - k;
                return S::one() / (n1 * S::from_count(2).powu(halvings));
            }
        }
    }
    S::from_count(tree.sigma_at(idx) + 1) / n1
}

/// Seeded limit tree: `ξ_u` is a keyed hash of `(seed, u)` mapped into `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LimitTree {
    seed: u64,
}

impl LimitTree {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl SplitField for LimitTree {
    type Cursor = ();

    fn root_cursor(&self) {}

    fn child_cursor(&self, _at: (), _dir: u8) {}

    fn split_at(&self, _at: (), u: NodeId) -> (f64, f64) {
        let xi = open01(mix2(self.seed, u.packed()));
        (xi, 1.0 - xi)
    }
}

impl DrivingMeasure for LimitTree {
    fn split(&self, u: NodeId) -> f64 {
        self.xi(u)
    }
}

const NO_NODE: u32 = u32::MAX;
const COUPLING_TAG: u64 = 0x434f_5550_4c49_4e47;

/// Joint realization of the BST trajectory and its limit from one stream of
/// uniform keys. Each inserted node `u` remembers the gap `(lo, hi)` of the
/// augmented order statistics its key fell into; `X∞(A_u) = hi − lo` and
/// `ξ_u = (key − lo)/(hi − lo)`. Nodes not yet inserted draw fresh
/// independent `ξ` from a field keyed by the seed.
#[derive(Clone, Debug)]
pub struct EtaCoupling {
    seed: u64,
    keys: Option<RngStream>,
    builder: BstBuilder,
    lo: Vec<f64>,
    hi: Vec<f64>,
    field_key: u64,
}

impl EtaCoupling {
    /// Coupling with its first key drawn; `n = 1`.
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut keys = RngStream::new(seed, stream_id);
        let first = keys.next_open01();
        Self {
            seed,
            keys: Some(keys),
            builder: BstBuilder::new(first),
            lo: vec![0.0],
            hi: vec![1.0],
            field_key: mix2(seed ^ COUPLING_TAG, stream_id),
        }
    }

    /// Runs the coupling for `n` keys; fails if the tree grows deeper than `max_depth`.
    pub fn couple(seed: u64, n: usize, max_depth: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let mut c = Self::new(seed, 0);
        c.advance_to(n)?;
        if c.tree().height() > max_depth {
            return Err(Error::DepthOverflow);
        }
        Ok(c)
    }

    /// Coupling driven by explicit keys in `(0, 1)`; no further steps can be drawn.
    pub fn from_keys(seed: u64, keys: &[f64]) -> Result<Self> {
        let (&first, rest) = keys
            .split_first()
            .ok_or_else(|| invalid("at least one key is required"))?;
        if keys.iter().any(|k| !(*k > 0.0 && *k < 1.0)) {
            return Err(invalid("keys must lie in (0, 1)"));
        }
        let mut c = Self {
            seed,
            keys: None,
            builder: BstBuilder::new(first),
            lo: vec![0.0],
            hi: vec![1.0],
            field_key: mix2(seed ^ COUPLING_TAG, u64::MAX),
        };
        for &k in rest {
            c.insert_key(k)?;
        }
        Ok(c)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tree(&self) -> &BinaryTree {
        self.builder.tree()
    }

    pub fn len(&self) -> usize {
        self.tree().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn insert_key(&mut self, key: f64) -> Result<NodeId> {
        let slot = self.builder.route(key)?;
        let p = slot.parent as usize;
        let pk = self.builder.label_at(p);
        let (lo, hi) = if slot.dir == 0 {
            (self.lo[p], pk)
        } else {
            (pk, self.hi[p])
        };
        let idx = self.builder.push(key)?;
        self.lo.push(lo);
        self.hi.push(hi);
        Ok(self.tree().node_at(idx))
    }

    /// Draws the next key and inserts it.
    pub fn step(&mut self) -> Result<NodeId> {
        let key = self
            .keys
            .as_mut()
            .ok_or_else(|| invalid("coupling built from explicit keys cannot be extended"))?
            .next_open01();
        self.insert_key(key)
    }

    pub fn advance_to(&mut self, n: usize) -> Result<()> {
        while self.len() < n {
            self.step()?;
        }
        Ok(())
    }

    /// The order-statistics gap bracketing `u`, for `u ∈ x ∪ ∂x`.
    pub fn interval(&self, u: NodeId) -> Option<(f64, f64)> {
        if let Some(i) = self.tree().index_of(u) {
            return Some((self.lo[i], self.hi[i]));
        }
        let slot = self.tree().slot_of(u)?;
        let p = slot.parent as usize;
        let k = self.builder.label_at(p);
        Some(if slot.dir == 0 {
            (self.lo[p], k)
        } else {
            (k, self.hi[p])
        })
    }

    /// `X∞(A_u)` read off as an interval width, for `u ∈ x ∪ ∂x`.
    pub fn width(&self, u: NodeId) -> Option<f64> {
        self.interval(u).map(|(a, b)| b - a)
    }

    /// The relative position of the key of an inserted node in its gap.
    pub fn recovered_xi(&self, u: NodeId) -> Option<f64> {
        let i = self.tree().index_of(u)?;
        Some(self.split_at(i as u32, u).0)
    }
}

impl SplitField for EtaCoupling {
    type Cursor = u32;

    fn root_cursor(&self) -> u32 {
        0
    }

    fn child_cursor(&self, at: u32, dir: u8) -> u32 {
        if at == NO_NODE {
            return NO_NODE;
        }
        self.tree()
            .child_index(at as usize, dir)
            .map_or(NO_NODE, |c| c as u32)
    }

    fn split_at(&self, at: u32, u: NodeId) -> (f64, f64) {
        if at == NO_NODE {
            let xi = open01(mix2(self.field_key, u.packed()));
            return (xi, 1.0 - xi);
        }
        let i = at as usize;
        let key = self.builder.label_at(i);
        let w = self.hi[i] - self.lo[i];
        ((key - self.lo[i]) / w, (self.hi[i] - key) / w)
    }
}

/// Truncated `Σ_{k=1..K} ρ^k max_{|u|=k} |X_n(u) − X∞(u)|` with
/// `X_n(u) = σ(X_n,u)/n` on the tree and 0 off it. Levels deeper than `K`
/// are ignored.
pub fn sup_discrepancy(c: &EtaCoupling, rho: f64, depth: u32) -> Result<f64> {
    if rho.is_nan() || rho < 1.0 {
        return Err(invalid(format!("rho = {rho} must be at least 1")));
    }
    if depth > MAX_DEPTH {
        return Err(Error::DepthOverflow);
    }
    let tree = c.tree();
    let n = tree.len() as f64;
    let k_max = depth as usize;
    let mut worst = vec![0.0f64; k_max + 1];

    // Arena order lists parents before children.
    let mut mass = vec![0.0f64; tree.len()];
    mass[0] = 1.0;
    for i in 1..tree.len() {
        let u = tree.node_at(i);
        let p = tree.parent_index(i).expect("non-root has a parent");
        let (l, r) = c.split_at(p as u32, tree.node_at(p));
        mass[i] = mass[p] * if u.last_bit() == Some(0) { l } else { r };
        let d = u.depth() as usize;
        if d <= k_max {
            let gap = (tree.sigma_at(i) as f64 / n - mass[i]).abs();
            worst[d] = worst[d].max(gap);
        }
    }

    let roots: Vec<(NodeId, u32, f64)> = tree
        .external_slots()
        .iter()
        .filter(|s| tree.slot_depth(**s) <= depth)
        .map(|s| {
            let p = s.parent as usize;
            let (l, r) = c.split_at(p as u32, tree.node_at(p));
            (tree.slot_node(*s), NO_NODE, mass[p] * if s.dir == 0 { l } else { r })
        })
        .collect();
    let off_tree = level_maxima_from(c, &roots, depth);
    for (w, o) in worst.iter_mut().zip(off_tree) {
        *w = w.max(o);
    }
    Ok(weighted_level_sum(&worst, rho))
}

/// Analytic constants of the limit theory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    /// Smaller root of `2e ln ρ = ρ`.
    pub rho0: f64,
    /// Roots of `x ln(2e/x) = 1`.
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    /// `log2 ρ0`.
    pub alpha0: f64,
    pub euler_gamma: f64,
}

/// Bisection on a sign-changing bracket, to an interval width of `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(invalid(format!("no sign change on [{a}, {b}]")));
    }
    let neg_left = fa < 0.0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == neg_left {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

pub fn constants() -> Constants {
    use std::f64::consts::E;
    let tol = 1e-12;
    let rho0 = bisect(|r| 2.0 * E * r.ln() - r, 1.0, 2.0 * E, tol).expect("bracket checked");
    let g = |x: f64| x * (2.0 * E / x).ln() - 1.0;
    let alpha_minus = bisect(g, 0.1, 1.0, tol).expect("bracket checked");
    let alpha_plus = bisect(g, 2.0, 6.0, tol).expect("bracket checked");
    Constants {
        rho0,
        alpha_minus,
        alpha_plus,
        alpha0: rho0.log2(),
        euler_gamma: EULER_GAMMA,
    }
}

/// Branching-random-walk rate function at speed `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    /// `m̃(a) = inf_θ e^{θa} m(θ) = 2a e^{1−a}`.
    pub m_tilde: f64,
    /// The minimizing `θ(a) = 1/a − 1`.
    pub theta: f64,
}

/// `m(θ) = 2/(1 + θ)`, the Laplace transform of the offspring displacements.
pub fn offspring_transform(theta: f64) -> f64 {
    2.0 / (1.0 + theta)
}

pub fn branching_envelope(a: f64) -> Result<Envelope> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("speed a = {a} must be positive")));
    }
    Ok(Envelope {
        m_tilde: 2.0 * a * (1.0 - a).exp(),
        theta: 1.0 / a - 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn n(s: &str) -> NodeId {
        s.parse().unwrap()
    }

    #[test]
    fn mass_products() {
        let lt = LimitTree::new(9);
        assert_eq!(lt.mass(NodeId::ROOT), 1.0);
        let xi = lt.xi(NodeId::ROOT);
        assert_eq!(lt.mass(n("0")), xi);
        assert_eq!(lt.mass(n("1")), 1.0 - xi);
        assert_eq!(LimitTree::new(9).xi(n("0110")), lt.xi(n("0110")));
    }

    #[test]
    fn flow_conservation() {
        let lt = LimitTree::new(3);
        let mut rng = RngStream::new(3, 1);
        for _ in 0..500 {
            let depth = 1 + rng.below(30) as u32;
            let u = sample_ray(&lt, &mut rng, depth).unwrap();
            let m = lt.mass(u);
            let s = lt.mass(u.child(0).unwrap()) + lt.mass(u.child(1).unwrap());
            assert!((s - m).abs() <= 1e-15 * m, "{u}");
        }
    }

    #[test]
    fn coupling_hand_example() {
        let c = EtaCoupling::from_keys(0, &[0.4, 0.7, 0.2]).unwrap();
        assert!((c.width(n("1")).unwrap() - 0.6).abs() < 1e-15);
        assert!((c.width(n("0")).unwrap() - 0.4).abs() < 1e-15);
        assert!((c.recovered_xi(NodeId::ROOT).unwrap() - 0.4).abs() < 1e-15);
        assert!((c.mass(n("1")) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn coupling_widths_partition_and_match_products() {
        let c = EtaCoupling::couple(17, 3000, MAX_DEPTH).unwrap();
        let t = c.tree();
        for u in t.nodes() {
            let w = c.width(u).unwrap();
            let (a, b) = (c.width(u.child(0).unwrap()).unwrap(), c.width(u.child(1).unwrap()).unwrap());
            assert!(((a + b) - w).abs() <= 1e-15);
            assert!((c.mass(u) - w).abs() <= 1e-12 * w, "{u}");
        }
        assert_eq!(c.width(NodeId::ROOT), Some(1.0));
    }

    #[test]
    fn projected_mass_examples() {
        let t = BinaryTree::singleton();
        assert_eq!(projected_mass::<BigRational>(&t, NodeId::ROOT).unwrap(), ratio(1, 1));
        let t = BinaryTree::from_insertions([n("0"), n("1")]).unwrap();
        assert_eq!(projected_mass::<BigRational>(&t, n("0")).unwrap(), ratio(2, 4));
        assert_eq!(projected_mass::<f64>(&t, n("00")), Err(Error::NotInTree(n("00"))));
        assert_eq!(projected_mass_any::<BigRational>(&t, n("001")), ratio(1, 8));
    }

    #[test]
    fn level_maxima_match_brute_force() {
        for seed in 0..5 {
            let lt = LimitTree::new(seed);
            let fast = level_maxima(&lt, 12).unwrap();
            for k in 0..=12u32 {
                let brute = (0..(1u64 << k))
                    .map(|p| {
                        let bits: Vec<u8> = (0..k).map(|j| ((p >> j) & 1) as u8).collect();
                        lt.mass(NodeId::from_bits(&bits).unwrap())
                    })
                    .fold(0.0f64, f64::max);
                assert_eq!(fast[k as usize], brute, "seed {seed} level {k}");
            }
        }
    }

    #[test]
    fn rho_norm_examples() {
        let lt = LimitTree::new(1);
        let xi = lt.xi(NodeId::ROOT);
        assert_eq!(rho_norm(&lt, 1.0, 1).unwrap(), xi.max(1.0 - xi));
        let mut prev = 0.0;
        for k in 1..20 {
            let v = rho_norm(&lt, 1.2, k).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        assert!(rho_norm(&lt, 0.9, 3).is_err());
    }

    #[test]
    fn sup_discrepancy_at_n_one() {
        let c = EtaCoupling::new(5, 0);
        let xi = c.xi(NodeId::ROOT);
        let d = sup_discrepancy(&c, 1.3, 1).unwrap();
        assert!((d - 1.3 * xi.max(1.0 - xi)).abs() < 1e-15);
        assert!(sup_discrepancy(&c, 1.3, 10).unwrap() >= 0.0);
    }

    #[test]
    fn constants_values() {
        let c = constants();
        assert!((c.rho0 - 1.26107).abs() < 1e-5);
        assert!((c.alpha_minus - 0.373).abs() < 1e-3);
        assert!((c.alpha_plus - 4.311).abs() < 1e-3);
        assert!((2.0 * std::f64::consts::E / c.alpha_plus - c.rho0).abs() < 1e-9);
        assert!((c.alpha0 - 0.33464).abs() < 1e-5);
    }

    #[test]
    fn envelope_examples() {
        let e = branching_envelope(1.0).unwrap();
        assert_eq!((e.m_tilde, e.theta), (2.0, 0.0));
        let e = branching_envelope(constants().rho0.ln()).unwrap();
        assert!((e.m_tilde - 1.0).abs() < 1e-9);
        for i in 1..50 {
            let a = i as f64 * 0.1;
            let e = branching_envelope(a).unwrap();
            let direct = (e.theta * a).exp() * offspring_transform(e.theta);
            assert!((direct - e.m_tilde).abs() < 1e-12 * e.m_tilde);
        }
        assert!(branching_envelope(0.0).is_err());
    }

    #[test]
    fn sampled_ray_first_bit_and_reproducibility() {
        let lt = LimitTree::new(21);
        let a = sample_ray(&lt, &mut RngStream::new(1, 2), 30).unwrap();
        let b = sample_ray(&lt, &mut RngStream::new(1, 2), 30).unwrap();
        assert_eq!(a, b);
        let reps = 20_000;
        let left = (0..reps)
            .filter(|&r| sample_ray(&lt, &mut RngStream::new(2, r), 1).unwrap() == n("0"))
            .count() as f64;
        let p = lt.xi(NodeId::ROOT);
        let sd = (reps as f64 * p * (1.0 - p)).sqrt();
        assert!((left - reps as f64 * p).abs() < 3.0 * sd);
    }
}
