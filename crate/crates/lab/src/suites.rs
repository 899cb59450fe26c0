//! Deterministic check suites that need no Monte Carlo: exact identities,
//! one-step martingale tests, and the quadrature oracle.

use bst_limit::chains::{bst_law, bst_step, dst_step, tilted_law, tilted_step, ConstSplit};
use bst_limit::functionals::{
    external_generating_function, ipl, ipl_from_sizes, ipl_projection, jabbour_martingale,
    msil_projection, wiener, wiener_projection, yn_identity,
};
use bst_limit::limit::projected_mass;
use bst_limit::oracles::{harmonic_gap, lemma41_integral, wiener_bruteforce};
use bst_limit::rng::mix2;
use bst_limit::scalar::ratio;
use bst_limit::{BinaryTree, Exact, NodeId, Ray, RngStream};
use num_traits::Zero;

use crate::output::Criterion;

/// A tree of size `n` grown by a chain picked from the seed: uniform,
/// digital with a constant split, or depth-tilted.
pub fn random_tree(seed: u64, n: usize) -> bst_limit::Result<BinaryTree> {
    let mut rng = RngStream::new(seed, 0xA11);
    let mut x = BinaryTree::singleton();
    let kind = rng.below(4);
    let p = 0.25 + 0.5 * rng.next_f64();
    while x.len() < n {
        match kind {
            0 => bst_step(&mut x, &mut rng)?,
            1 => dst_step(&mut x, &ConstSplit(p), &mut rng)?,
            2 => tilted_step(&mut x, 2.0 * p, &mut rng)?,
            _ => dst_step(&mut x, &ConstSplit(0.5), &mut rng)?,
        };
    }
    Ok(x)
}

fn size(seed: u64, max: usize) -> usize {
    1 + RngStream::new(seed, 0xB22).below(max as u64) as usize
}

/// Counts failures of each named check over `trees` random trees.
struct Tally {
    names: Vec<&'static str>,
    failures: Vec<u64>,
}

impl Tally {
    fn new(names: &[&'static str]) -> Self {
        Self {
            names: names.to_vec(),
            failures: vec![0; names.len()],
        }
    }

    fn check(&mut self, i: usize, ok: bool) {
        if !ok {
            self.failures[i] += 1;
        }
    }

    fn into_criteria(self, trees: u64, what: &str) -> Vec<Criterion> {
        self.names
            .into_iter()
            .zip(self.failures)
            .map(|(name, f)| {
                Criterion::new(name, f == 0, f as f64, format!("0 failures over {trees} {what}"))
            })
            .collect()
    }
}

/// Exact identities on `trees` random trees with up to `max_n` nodes.
pub fn exact_identities(seed: u64, trees: u64, max_n: usize) -> bst_limit::Result<Vec<Criterion>> {
    let mut t = Tally::new(&[
        "path length from depths equals path length from subtree sizes",
        "Wiener index formula equals all-pairs distance sum",
        "summation by parts",
        "profile identity",
        "Kraft equality on the frontier",
        "generating function identity at z in {3/10, 1/2, 2}",
        "Jabbour martingale is 1 at z=1/2 and 2 at z=1",
        "tilted transition law sums to 1",
    ]);
    let half = ratio::<Exact>(1, 2);
    let one = ratio::<Exact>(1, 1);
    let two = ratio::<Exact>(2, 1);
    let zs = [ratio::<Exact>(3, 10), half.clone(), two.clone()];
    let tilts = [ratio::<Exact>(3, 10), ratio(7, 10), two.clone()];
    for i in 0..trees {
        let s = mix2(seed, i);
        let x = random_tree(s, size(s, max_n))?;
        t.check(0, ipl(&x) == ipl_from_sizes(&x));
        t.check(1, wiener(&x) == wiener_bruteforce(&x)? as u128);

        let psi = |u: NodeId| Exact::new((mix2(s, u.packed()) % 1_000_003).into(), 997.into());
        let lhs = x
            .nodes()
            .map(|u| psi(u) - psi(u.child(0).unwrap()) - psi(u.child(1).unwrap()))
            .fold(Exact::zero(), |a, b| a + b);
        let rhs = x.externals().fold(psi(NodeId::ROOT), |a, u| a - psi(u));
        t.check(2, lhs == rhs);

        let p = x.profiles();
        t.check(
            3,
            (0..=x.height() as usize + 1)
                .all(|k| p.external_at(k + 1) + p.internal_at(k + 1) == 2 * p.internal_at(k)),
        );
        t.check(4, external_generating_function(&x, &half)? == one);
        t.check(
            5,
            zs.iter()
                .map(|z| yn_identity(&x, z))
                .collect::<bst_limit::Result<Vec<_>>>()?
                .into_iter()
                .all(|(l, r)| l == r),
        );
        t.check(
            6,
            jabbour_martingale(&x, &half)? == one && jabbour_martingale(&x, &one)? == two,
        );
        let mut normalized = true;
        for z in &tilts {
            let total = tilted_law(&x, z)?
                .into_iter()
                .fold(Exact::zero(), |a, (_, q)| a + q);
            normalized &= total == one;
        }
        t.check(7, normalized);
    }
    Ok(t.into_criteria(trees, "random trees"))
}

/// `Σ_v Q(x, x∪{v}) f(x∪{v}) = f(x)` under uniform insertion, exactly.
fn preserved(x: &BinaryTree, f: impl Fn(&BinaryTree) -> bst_limit::Result<Exact>) -> bst_limit::Result<bool> {
    let mut next = Exact::zero();
    for (v, q) in bst_law::<Exact>(x) {
        next += q * f(&x.with_inserted(v)?)?;
    }
    Ok(next == f(x)?)
}

/// One-step martingale checks in exact arithmetic on `trees` random trees.
pub fn one_step_martingales(seed: u64, trees: u64, max_n: usize) -> bst_limit::Result<Vec<Criterion>> {
    let mut t = Tally::new(&[
        "Jabbour martingale at z in {3/10, 17/10}",
        "path length projection",
        "Wiener projection",
        "projected masses",
        "metric silhouette projection",
    ]);
    let zs = [ratio::<Exact>(3, 10), ratio(17, 10)];
    let rays: Vec<Ray> = (0..8u64)
        .map(|i| Ray::dyadic(2 * i + 1, 4))
        .chain([Ok(Ray::seeded(seed)), Ok(Ray::constant_tail(NodeId::ROOT, 1))])
        .collect::<bst_limit::Result<_>>()?;
    for i in 0..trees {
        let s = mix2(seed ^ 0x5eed, i);
        let x = random_tree(s, size(s, max_n))?;
        let mut ok = true;
        for z in &zs {
            ok &= preserved(&x, |y| jabbour_martingale(y, z))?;
        }
        t.check(0, ok);
        t.check(1, preserved(&x, |y| Ok(ipl_projection::<Exact>(y)))?);
        t.check(2, preserved(&x, |y| Ok(wiener_projection::<Exact>(y)))?);
        let mut ok = true;
        for u in x.nodes() {
            ok &= preserved(&x, |y| projected_mass::<Exact>(y, u))?;
        }
        t.check(3, ok);
        let mut ok = true;
        for v in &rays {
            ok &= preserved(&x, |y| Ok(msil_projection::<Exact>(y, v)))?;
        }
        t.check(4, ok);
    }
    Ok(t.into_criteria(trees, "random trees"))
}

/// Largest deviation of the quadrature from `H(i) − H(i+j+1)` over `0 ≤ i, j ≤ 20`.
pub fn log_beta_mean_max_error() -> bst_limit::Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..=20 {
        for j in 0..=20 {
            worst = worst.max((lemma41_integral(i, j)? - harmonic_gap(i, j)).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(exact_identities(1, 20, 40).unwrap().iter().all(|c| c.passed));
        assert!(one_step_martingales(1, 5, 12).unwrap().iter().all(|c| c.passed));
    }
}
