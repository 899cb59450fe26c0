//! Tree functionals, their martingale projections, and the limit series
//! they converge to.

use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};
use crate::limit::{level_argmax, traverse, SplitField, Truncation, EULER_GAMMA};
use crate::node::{common_prefix_len, NodeId, Ray, MAX_DEPTH};
use crate::quad::integrate;
use crate::scalar::{is_positive, Scalar};
use crate::tree::BinaryTree;

/// `H(n) = Σ_{i≤n} 1/i`, summed in `S` (exact for rational `S`).
pub fn harmonic<S: Scalar>(n: u64) -> S {
    let mut h = S::zero();
    for i in 1..=n {
        h = h + S::one() / S::from_count(i);
    }
    h
}

/// `H(n)` in double precision; asymptotic expansion beyond `2^20`.
pub fn harmonic_f64(n: u64) -> f64 {
    if n <= 1 << 20 {
        return (1..=n).rev().map(|i| 1.0 / i as f64).sum();
    }
    let x = n as f64;
    let x2 = x * x;
    x.ln() + EULER_GAMMA + 0.5 / x - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2)
}

fn from_u128<S: Scalar>(v: u128) -> S {
    let hi = (v >> 64) as u64;
    let lo = v as u64;
    if hi == 0 {
        S::from_count(lo)
    } else {
        S::from_count(hi) * S::from_count(1 << 32) * S::from_count(1 << 32) + S::from_count(lo)
    }
}

/// Internal path length `Σ_{u∈x} |u|`.
pub fn ipl(x: &BinaryTree) -> u64 {
    x.path_length()
}

/// Internal path length read off subtree sizes: `Σ_u σ(x,u) − #x`.
pub fn ipl_from_sizes(x: &BinaryTree) -> u64 {
    (0..x.len()).map(|i| x.sigma_at(i)).sum::<u64>() - x.len() as u64
}

/// Wiener index `n·IPL + n² − Σ_u σ(x,u)²`.
pub fn wiener(x: &BinaryTree) -> u128 {
    let n = x.len() as u128;
    n * ipl(x) as u128 + n * n - x.sigma_square_sum()
}

/// `IPL/n − 2 ln n`.
pub fn ipl_centered(x: &BinaryTree) -> f64 {
    let n = x.len() as f64;
    ipl(x) as f64 / n - 2.0 * n.ln()
}

/// `WI/n² − 2 ln n`.
pub fn wiener_centered(x: &BinaryTree) -> f64 {
    let n = x.len() as f64;
    wiener(x) as f64 / (n * n) - 2.0 * n.ln()
}

/// `E[Y∞ | F_n] = (IPL + 2n)/(n + 1) + 2 − 2H(n + 1)`.
pub fn ipl_projection<S: Scalar>(x: &BinaryTree) -> S {
    let n = x.len() as u64;
    let two = S::from_count(2);
    S::from_count(ipl(x) + 2 * n) / S::from_count(n + 1) + two.clone()
        - two * harmonic::<S>(n + 1)
}

/// `E[Z∞ | F_n] = Σ_u (σ+1)(σ+2)/((n+1)(n+2)) + 6/(n+2)`.
pub fn wiener_projection<S: Scalar>(x: &BinaryTree) -> S {
    let n = x.len() as u128;
    let sigma_sum = (ipl(x) as u128) + n;
    let total = x.sigma_square_sum() + 3 * sigma_sum + 2 * n;
    from_u128::<S>(total) / from_u128::<S>((n + 1) * (n + 2))
        + S::from_count(6) / from_u128::<S>(n + 2)
}

/// Exit level `min{k : v(k) ∉ x}`.
pub fn silhouette(x: &BinaryTree, v: &Ray) -> u32 {
    let mut idx = 0usize;
    for k in 1..=MAX_DEPTH + 1 {
        match x.child_index(idx, v.bit_at(k)) {
            Some(c) => idx = c,
            None => return k,
        }
    }
    MAX_DEPTH + 1
}

/// `Σ_k σ(x, v(k))`.
pub fn metric_silhouette(x: &BinaryTree, v: &Ray) -> u64 {
    let mut idx = 0usize;
    let mut total = 0;
    for k in 1..=MAX_DEPTH {
        match x.child_index(idx, v.bit_at(k)) {
            Some(c) => {
                idx = c;
                total += x.sigma_at(c);
            }
            None => break,
        }
    }
    total
}

/// `E[Σ∞(v) | F_n] = (mSil(x)(v) + Sil(x)(v) + 1)/(n + 1)`.
pub fn msil_projection<S: Scalar>(x: &BinaryTree, v: &Ray) -> S {
    let num = metric_silhouette(x, v) + silhouette(x, v) as u64 + 1;
    S::from_count(num) / S::from_count(x.len() as u64 + 1)
}

fn check_z<S: Scalar>(z: &S) -> Result<()> {
    if is_positive(z) {
        Ok(())
    } else {
        Err(invalid(format!("z = {z:?} must be positive")))
    }
}

/// `Y_n = Σ_{u∈∂x} z^{|u|}`.
pub fn external_generating_function<S: Scalar>(x: &BinaryTree, z: &S) -> Result<S> {
    check_z(z)?;
    let mut y = S::zero();
    for (k, slots) in (0..=x.max_external_depth()).map(|k| (k, x.externals_at_depth(k))) {
        if !slots.is_empty() {
            y = y + S::from_count(slots.len() as u64) * z.powu(k as u32);
        }
    }
    Ok(y)
}

/// `M_n = C(n)·Y_n` with `C(n) = Π_{k=1}^{n−1} (k+1)/(k+2z)`.
pub fn jabbour_martingale<S: Scalar>(x: &BinaryTree, z: &S) -> Result<S> {
    let y = external_generating_function(x, z)?;
    let two_z = S::from_count(2) * z.clone();
    let mut c = S::one();
    for k in 1..x.len() as u64 {
        c = c * S::from_count(k + 1) / (S::from_count(k) + two_z.clone());
    }
    Ok(c * y)
}

/// `Ψ_z(x) = Σ_{u∈x} σ(x,u) z^{|u|}`.
pub fn psi_z<S: Scalar>(x: &BinaryTree, z: &S) -> Result<S> {
    check_z(z)?;
    let mut by_depth: Vec<u64> = Vec::new();
    for i in 0..x.len() {
        let d = x.node_at(i).depth() as usize;
        if by_depth.len() <= d {
            by_depth.resize(d + 1, 0);
        }
        by_depth[d] += x.sigma_at(i);
    }
    let mut psi = S::zero();
    for (k, s) in by_depth.into_iter().enumerate() {
        psi = psi + S::from_count(s) * z.powu(k as u32);
    }
    Ok(psi)
}

/// Both sides of `Y_n = (2z − 3 + 1/z) Ψ_z + (2 − 1/z) n + 1`.
pub fn yn_identity<S: Scalar>(x: &BinaryTree, z: &S) -> Result<(S, S)> {
    let lhs = external_generating_function(x, z)?;
    let inv = S::one() / z.clone();
    let two = S::from_count(2);
    let n = S::from_count(x.len() as u64);
    let rhs = (two.clone() * z.clone() - S::from_count(3) + inv.clone()) * psi_z(x, z)?
        + (two - inv) * n
        + S::one();
    Ok((lhs, rhs))
}

/// `E[C(ξ_u) | F_n] = 1 + 2(τ(u0) + τ(u1))/(s + 2) − 2H(s + 2)`, where
/// `s = σ(u0) + σ(u1)` and `τ(v) = (σ(v) + 1) H(σ(v) + 1)`.
pub fn cond_c_expectation<S: Scalar>(x: &BinaryTree, u: NodeId) -> S {
    let child = |d: u8| u.child(d).map_or(0, |v| x.subtree_size(v));
    let (s0, s1) = (child(0), child(1));
    let tau = |s: u64| S::from_count(s + 1) * harmonic::<S>(s + 1);
    let two = S::from_count(2);
    S::one() + two.clone() * (tau(s0) + tau(s1)) / S::from_count(s0 + s1 + 2)
        - two * harmonic::<S>(s0 + s1 + 2)
}

/// `C(s) = 1 + 2(s ln s + (1−s) ln(1−s))`, with `C(0) = C(1) = 1`.
pub fn c_function(s: f64) -> f64 {
    let xlx = |t: f64| if t <= 0.0 { 0.0 } else { t * t.ln() };
    1.0 + 2.0 * (xlx(s) + xlx(1.0 - s))
}

/// `C` evaluated from a split `(ξ, 1 − ξ)` without recomputing `1 − ξ`.
fn c_split((l, r): (f64, f64)) -> f64 {
    1.0 + 2.0 * (l * l.ln() + r * r.ln())
}

/// `κ = ∫_0^1 C(s)² ds`.
pub fn kappa() -> f64 {
    static KAPPA: OnceLock<f64> = OnceLock::new();
    *KAPPA.get_or_init(|| {
        integrate(|s| c_function(s).powi(2), 0.0, 1.0, 1e-12).expect("smooth bounded integrand")
    })
}

/// Which limit a [`LimitSeries`] approximates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeriesKind {
    Y,
    Z,
    W,
    Sigma(Ray),
}

/// A truncated limit series. `tail_bound` is the conditional size of what
/// was cut off given the computed part: root mean square for `Y` and `W`,
/// conditional mean for `Z` and `Σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitSeries {
    pub kind: SeriesKind,
    pub truncation_depth: u32,
    pub mass_cutoff: f64,
    pub value: f64,
    pub tail_bound: f64,
}

/// `Y∞`, `Z∞` and `W∞` from one pass over the limit tree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    pub y: LimitSeries,
    pub z: LimitSeries,
    pub w: LimitSeries,
}

/// `Y∞ = Σ_u X∞(u) C(ξ_u)`, `Z∞ = Σ_u X∞(u)²`, `W∞ = 2γ − 3 + Y∞ − Z∞`.
pub fn limits<F: SplitField>(field: &F, trunc: Truncation) -> Limits {
    let (mut y, mut z, mut frontier_sq) = (0.0f64, 0.0f64, 0.0f64);
    traverse(
        field,
        trunc,
        |v| {
            y += v.mass * c_split(v.split);
            z += v.mass * v.mass;
        },
        |_, m| frontier_sq += m * m,
    );
    let y_tail = (3.0 * kappa() * frontier_sq).sqrt();
    let z_tail = 3.0 * frontier_sq;
    let series = |kind, value, tail_bound| LimitSeries {
        kind,
        truncation_depth: trunc.depth,
        mass_cutoff: trunc.mass_cutoff,
        value,
        tail_bound,
    };
    Limits {
        y: series(SeriesKind::Y, y, y_tail),
        z: series(SeriesKind::Z, z, z_tail),
        w: series(
            SeriesKind::W,
            2.0 * EULER_GAMMA - 3.0 + y - z,
            y_tail + z_tail,
        ),
    }
}

pub fn y_limit<F: SplitField>(field: &F, trunc: Truncation) -> LimitSeries {
    limits(field, trunc).y
}

pub fn z_limit<F: SplitField>(field: &F, trunc: Truncation) -> LimitSeries {
    limits(field, trunc).z
}

pub fn w_limit<F: SplitField>(field: &F, trunc: Truncation) -> LimitSeries {
    limits(field, trunc).w
}

/// Per-level contributions `Σ_{|u|=k} X∞(u) C(ξ_u)` to `Y∞`, `k = 0..=depth`.
pub fn y_level_terms<F: SplitField>(field: &F, trunc: Truncation) -> Vec<f64> {
    let mut levels = vec![0.0; trunc.depth as usize + 1];
    traverse(
        field,
        trunc,
        |v| levels[v.node.depth() as usize] += v.mass * c_split(v.split),
        |_, _| {},
    );
    levels
}

/// `Σ∞(v) = Σ_{k=1..K} X∞(v(k))`.
pub fn sigma_potential<F: SplitField>(field: &F, v: &Ray, depth: u32) -> Result<LimitSeries> {
    let masses = crate::limit::masses_along(field, v, depth)?;
    Ok(LimitSeries {
        kind: SeriesKind::Sigma(*v),
        truncation_depth: depth,
        mass_cutoff: 0.0,
        value: masses.iter().sum(),
        tail_bound: masses.last().copied().unwrap_or(1.0),
    })
}

/// `max |Σ̂∞(u) − Σ̂∞(v)| / d_V(u,v)^α` over the given ray pairs, with both
/// potentials truncated at depth `K`. Pairs agreeing to depth `K` have equal
/// truncated potentials and contribute 0.
pub fn holder_quotient<F: SplitField>(
    field: &F,
    alpha: f64,
    pairs: &[(Ray, Ray)],
    depth: u32,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let mut q = 0.0f64;
    for (u, v) in pairs {
        let k = match common_prefix_len(*u, *v, depth) {
            Ok(k) => k,
            Err(Error::CommonPrefixExceedsCap { .. }) => continue,
            Err(e) => return Err(e),
        };
        let du = sigma_potential(field, u, depth)?.value;
        let dv = sigma_potential(field, v, depth)?.value;
        let dist = (-(k as f64)).exp2();
        q = q.max((du - dv).abs() / dist.powf(alpha));
    }
    Ok(q)
}

/// Ray pairs that separate at the heaviest node `w` of each level
/// `0..max_depth` and then follow heavier children to depth `max_depth`.
pub fn holder_probe_pairs<F: SplitField>(field: &F, max_depth: u32) -> Result<Vec<(Ray, Ray)>> {
    let heaviest = level_argmax(field, max_depth)?;
    let mut pairs = Vec::with_capacity(heaviest.len());
    for &(_, w) in &heaviest[..max_depth as usize] {
        let left = heavy_continuation(field, w.child(0)?, max_depth)?;
        let right = heavy_continuation(field, w.child(1)?, max_depth)?;
        pairs.push((Ray::constant_tail(left, 0), Ray::constant_tail(right, 0)));
    }
    Ok(pairs)
}

fn heavy_continuation<F: SplitField>(field: &F, start: NodeId, depth: u32) -> Result<NodeId> {
    let mut u = start;
    let mut c = field.cursor_of(u);
    while u.depth() < depth {
        let (l, r) = field.split_at(c, u);
        let dir = u8::from(r > l);
        c = field.child_cursor(c, dir);
        u = u.child(dir)?;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit::LimitTree;
    use crate::scalar::ratio;
    use crate::Exact;

    fn t(words: &[&str]) -> BinaryTree {
        BinaryTree::from_insertions(words.iter().map(|w| w.parse().unwrap())).unwrap()
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic::<Exact>(0), ratio(0, 1));
        assert_eq!(harmonic::<Exact>(1), ratio(1, 1));
        assert_eq!(harmonic::<Exact>(4), ratio(25, 12));
        let n = 1_000_000u64;
        assert!((harmonic_f64(n) - (n as f64).ln() - EULER_GAMMA).abs() < 1e-3);
        let m = (1u64 << 20) + 1;
        let direct: f64 = (1..=m).rev().map(|i| 1.0 / i as f64).sum();
        assert!((harmonic_f64(m) - direct).abs() < 1e-12);
    }

    #[test]
    fn small_tree_functionals() {
        let x = t(&["0", "1"]);
        assert_eq!(ipl(&x), 2);
        assert_eq!(ipl_from_sizes(&x), 2);
        assert_eq!(wiener(&x), 4);
        assert_eq!(wiener(&BinaryTree::singleton()), 0);
        assert_eq!(ipl_centered(&BinaryTree::singleton()), 0.0);
    }

    #[test]
    fn projections_at_small_n() {
        let one = BinaryTree::singleton();
        assert_eq!(ipl_projection::<Exact>(&one), ratio(0, 1));
        assert_eq!(wiener_projection::<Exact>(&one), ratio(3, 1));
        let complete = t(&["0", "1"]);
        let path = t(&["0", "00"]);
        let zc = ipl_projection::<Exact>(&complete);
        let zp = ipl_projection::<Exact>(&path);
        assert_eq!(zc, -ratio::<Exact>(1, 6));
        assert_eq!(zp, ratio(1, 12));
        assert_eq!(
            ratio::<Exact>(1, 3) * zc + ratio::<Exact>(2, 3) * zp,
            ratio(0, 1)
        );
        let mean_w = ratio::<Exact>(1, 3) * wiener_projection::<Exact>(&complete)
            + ratio::<Exact>(2, 3) * wiener_projection::<Exact>(&path);
        assert_eq!(mean_w, ratio(3, 1));
    }

    #[test]
    fn silhouettes() {
        let zeros = Ray::constant_tail(NodeId::ROOT, 0);
        let ones = Ray::constant_tail(NodeId::ROOT, 1);
        let one = BinaryTree::singleton();
        assert_eq!(silhouette(&one, &zeros), 1);
        assert_eq!(metric_silhouette(&one, &zeros), 0);
        let x = t(&["0"]);
        assert_eq!(silhouette(&x, &zeros), 2);
        assert_eq!(silhouette(&x, &ones), 1);
        assert_eq!(metric_silhouette(&x, &zeros), 1);
        assert_eq!(msil_projection::<Exact>(&one, &Ray::seeded(4)), ratio(1, 1));
    }

    #[test]
    fn jabbour_examples() {
        let x = t(&["0", "00", "1", "01"]);
        assert_eq!(jabbour_martingale(&x, &ratio::<Exact>(1, 2)).unwrap(), ratio(1, 1));
        assert_eq!(jabbour_martingale(&x, &ratio::<Exact>(1, 1)).unwrap(), ratio(2, 1));
        let z = ratio::<Exact>(3, 7);
        assert_eq!(
            jabbour_martingale(&BinaryTree::singleton(), &z).unwrap(),
            ratio::<Exact>(6, 7)
        );
        assert!(jabbour_martingale(&x, &0.0).is_err());
    }

    #[test]
    fn yn_identity_examples() {
        let x = t(&["0"]);
        let z = ratio::<Exact>(2, 1);
        assert_eq!(psi_z(&x, &z).unwrap(), ratio(4, 1));
        let (l, r) = yn_identity(&x, &z).unwrap();
        assert_eq!((l, r), (ratio(10, 1), ratio(10, 1)));
        let y = t(&["1", "10", "11", "0"]);
        let (l, r) = yn_identity(&y, &ratio::<Exact>(1, 1)).unwrap();
        assert_eq!(l, ratio(6, 1));
        assert_eq!(r, ratio(6, 1));
    }

    #[test]
    fn c_function_and_kappa() {
        assert_eq!(c_function(0.0), 1.0);
        assert_eq!(c_function(1.0), 1.0);
        assert!((c_function(0.5) - (1.0 - 2.0 * std::f64::consts::LN_2)).abs() < 1e-15);
        assert!((c_function(0.3) - c_function(0.7)).abs() < 1e-15);
        assert!(integrate(c_function, 0.0, 1.0, 1e-12).unwrap().abs() < 1e-10);
        let k = kappa();
        assert!(k > 0.0 && k < 1.0);
    }

    #[test]
    fn cond_c_off_tree_vanishes() {
        let x = t(&["0"]);
        assert_eq!(cond_c_expectation::<Exact>(&x, "1".parse().unwrap()), ratio(0, 1));
    }

    #[test]
    fn limit_series_shallow() {
        let lt = LimitTree::new(8);
        let l0 = limits(&lt, Truncation::new(0, 0.0).unwrap());
        assert_eq!(l0.z.value, 1.0);
        assert_eq!(l0.y.value, c_function(lt.xi(NodeId::ROOT)));
        let l = limits(&lt, Truncation::default());
        assert!((l.w.value + l.z.value - l.y.value - (2.0 * EULER_GAMMA - 3.0)).abs() < 1e-12);
        let mut prev = 0.0;
        for k in 0..30 {
            let z = z_limit(&lt, Truncation::new(k, 1e-6).unwrap()).value;
            assert!(z >= prev);
            prev = z;
        }
    }

    #[test]
    fn sigma_potential_examples() {
        let lt = LimitTree::new(2);
        let v = Ray::seeded(11);
        let s1 = sigma_potential(&lt, &v, 1).unwrap();
        let first: NodeId = v.prefix(1).unwrap();
        assert_eq!(s1.value, lt.mass(first));
        let a = sigma_potential(&lt, &v, 20).unwrap().value;
        let b = sigma_potential(&lt, &v, 30).unwrap().value;
        assert!(b >= a);
    }

    #[test]
    fn holder_bound_holds() {
        for seed in 0..5 {
            let lt = LimitTree::new(seed);
            let alpha = 0.2;
            let rho = 2f64.powf(alpha);
            let pairs = holder_probe_pairs(&lt, 40).unwrap();
            let q = holder_quotient(&lt, alpha, &pairs, 40).unwrap();
            let norm = crate::limit::rho_norm(&lt, rho, 40).unwrap();
            assert!(q <= 2.0 * norm / (rho - 1.0));
            let same = [(Ray::seeded(1), Ray::seeded(1))];
            assert_eq!(holder_quotient(&lt, alpha, &same, 40).unwrap(), 0.0);
        }
        assert!(holder_quotient(&LimitTree::new(0), 1.0, &[], 10).is_err());
    }
}
