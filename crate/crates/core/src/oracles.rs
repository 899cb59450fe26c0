//! Brute-force references and goodness-of-fit helpers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete, DiscreteCDF};

use crate::chains::bst_from_keys;
use crate::error::{invalid, Error, Result};
use crate::functionals::harmonic_f64;
use crate::node::common_prefix_len;
use crate::quad::integrate;
use crate::tree::BinaryTree;

/// Exact law of the BST shape after `n` insertions.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeDistribution {
    pub n: usize,
    pub entries: BTreeMap<String, BigRational>,
    pub shapes: BTreeMap<String, BinaryTree>,
}

impl ShapeDistribution {
    pub fn probability(&self, x: &BinaryTree) -> BigRational {
        self.entries.get(&x.shape_key()).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `E f(X_n)` in exact arithmetic.
    pub fn expectation(&self, f: impl Fn(&BinaryTree) -> BigRational) -> BigRational {
        self.entries
            .iter()
            .map(|(k, p)| p * f(&self.shapes[k]))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Shapes with their probabilities, in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&BinaryTree, &BigRational)> {
        self.entries.iter().map(|(k, p)| (&self.shapes[k], p))
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub const MAX_ENUMERATION: usize = 8;

/// Runs the BST on every rank sequence of `1..=n`.
pub fn enumerate_shapes(n: usize) -> Result<ShapeDistribution> {
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge {
            what: "enumeration size",
            got: n,
            limit: MAX_ENUMERATION,
        });
    }
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut counts: BTreeMap<String, (u64, BinaryTree)> = BTreeMap::new();
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut total = 0u64;
    loop {
        let keys: Vec<f64> = perm.iter().map(|&r| r as f64).collect();
        let x = bst_from_keys(&keys)?;
        counts.entry(x.shape_key()).or_insert((0, x)).0 += 1;
        total += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut entries = BTreeMap::new();
    let mut shapes = BTreeMap::new();
    for (k, (c, x)) in counts {
        entries.insert(k.clone(), BigRational::new(BigInt::from(c), BigInt::from(total)));
        shapes.insert(k, x);
    }
    Ok(ShapeDistribution { n, entries, shapes })
}

pub const MAX_WIENER_BRUTEFORCE: usize = 200;
pub const MAX_LCA_DOUBLE_SUM: usize = 60;

/// `Σ_{u<v} (|u| + |v| − 2|u∧v|)` over unordered pairs of tree nodes.
pub fn wiener_bruteforce(x: &BinaryTree) -> Result<u64> {
    if x.len() > MAX_WIENER_BRUTEFORCE {
        return Err(Error::TooLarge {
            what: "tree size",
            got: x.len(),
            limit: MAX_WIENER_BRUTEFORCE,
        });
    }
    let nodes: Vec<_> = x.nodes().collect();
    let mut total = 0u64;
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            let k = common_prefix_len(u, v, 0)? as u64;
            total += u.depth() as u64 + v.depth() as u64 - 2 * k;
        }
    }
    Ok(total)
}

/// `Σ_{(u,v)∈x×x} |u∧v|` over ordered pairs.
pub fn lca_double_sum(x: &BinaryTree) -> Result<u64> {
    if x.len() > MAX_LCA_DOUBLE_SUM {
        return Err(Error::TooLarge {
            what: "tree size",
            got: x.len(),
            limit: MAX_LCA_DOUBLE_SUM,
        });
    }
    let mut total = 0u64;
    for u in x.nodes() {
        for v in x.nodes() {
            total += common_prefix_len(u, v, 0)? as u64;
        }
    }
    Ok(total)
}

/// `ln( Γ(i+j+2) / (Γ(i+1) Γ(j+1)) )`.
fn ln_beta_normalizer(i: u32, j: u32) -> f64 {
    let ln_fact = |m: u32| (1..=m).map(|k| (k as f64).ln()).sum::<f64>();
    ln_fact(i + j + 1) - ln_fact(i) - ln_fact(j)
}

/// `E[ln ξ]` for `ξ ~ Beta(i+1, j+1)`, by quadrature.
pub fn lemma41_integral(i: u32, j: u32) -> Result<f64> {
    if i > 20 || j > 20 {
        return Err(invalid(format!("(i, j) = ({i}, {j}) outside 0..=20")));
    }
    let ln_c = ln_beta_normalizer(i, j);
    integrate(
        |x| {
            let ln_x = x.ln();
            (ln_c + i as f64 * ln_x + j as f64 * (-x).ln_1p()).exp() * ln_x
        },
        0.0,
        1.0,
        1e-10,
    )
}

/// The closed form `H(i) − H(i+j+1)` the quadrature is compared against.
pub fn harmonic_gap(i: u32, j: u32) -> f64 {
    harmonic_f64(i as u64) - harmonic_f64(i as u64 + j as u64 + 1)
}

pub const MIN_GOF_SAMPLES: u64 = 1000;
/// Two-sided 3σ level.
pub const CHI_SQUARE_LEVEL: f64 = 0.0027;
pub const KS_LEVEL: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub level: f64,
    pub passed: bool,
}

/// Pearson χ² of observed counts against cell probabilities. Cells with zero
/// probability must be empty and do not count towards the degrees of freedom.
pub fn chi_square_counts(observed: &[u64], probs: &[f64]) -> Result<GofResult> {
    if observed.len() != probs.len() {
        return Err(invalid("observed and expected cell counts differ"));
    }
    let total: u64 = observed.iter().sum();
    if total < MIN_GOF_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: total as usize,
            need: MIN_GOF_SAMPLES as usize,
        });
    }
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            if o > 0 {
                stat = f64::INFINITY;
            }
            continue;
        }
        cells += 1;
        let e = p * total as f64;
        stat += (o as f64 - e).powi(2) / e;
    }
    let dof = cells.saturating_sub(1).max(1);
    let p_value = if stat.is_finite() {
        ChiSquared::new(dof as f64).expect("positive dof").sf(stat)
    } else {
        0.0
    };
    Ok(GofResult {
        statistic: stat,
        dof,
        p_value,
        level: CHI_SQUARE_LEVEL,
        passed: p_value >= CHI_SQUARE_LEVEL,
    })
}

/// Asymptotic Kolmogorov tail `P(K > λ)`.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against `Unif(0,1)`.
pub fn ks_uniform(samples: &[f64]) -> Result<GofResult> {
    let n = samples.len();
    if (n as u64) < MIN_GOF_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: n,
            need: MIN_GOF_SAMPLES as usize,
        });
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / nf).max((i + 1) as f64 / nf - x))
        .fold(0.0f64, f64::max);
    let sq = nf.sqrt();
    let p_value = kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d);
    Ok(GofResult {
        statistic: d,
        dof: 0,
        p_value,
        level: KS_LEVEL,
        passed: p_value >= KS_LEVEL,
    })
}

/// Standardized deviation of a binomial count from its mean.
pub fn binomial_z(successes: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    let sd = (n * p * (1.0 - p)).sqrt();
    if sd == 0.0 {
        return if successes as f64 == n * p { 0.0 } else { f64::INFINITY };
    }
    (successes as f64 - n * p) / sd
}

/// Randomized probability integral transform of `s ~ Bin(m, p)`: uniform on
/// `(0, 1)` exactly when the binomial law is right. `v` is an independent uniform.
pub fn binomial_pit(s: u64, m: u64, p: f64, v: f64) -> Result<f64> {
    if s > m {
        return Err(invalid(format!("{s} successes out of {m} trials")));
    }
    let b = Binomial::new(p, m).map_err(|e| invalid(e.to_string()))?;
    let below = if s == 0 { 0.0 } else { b.cdf(s - 1) };
    Ok(below + v * b.pmf(s))
}

/// Sample Pearson correlation.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Median, averaging the two middle values for even lengths.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
