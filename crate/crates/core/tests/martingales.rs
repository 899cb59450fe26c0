mod common;

use bst_limit::chains::{bst_law, tilted_law};
use bst_limit::functionals::{
    cond_c_expectation, ipl_projection, jabbour_martingale, msil_projection, wiener_projection,
};
use bst_limit::limit::projected_mass;
use bst_limit::scalar::ratio;
use bst_limit::{BinaryTree, Exact, NodeId, Ray};
use common::{random_size, random_tree};
use num_traits::Zero;

/// `Σ_v Q(x, x∪{v}) f(x∪{v})` under uniform insertion.
fn one_step<F: Fn(&BinaryTree) -> Exact>(x: &BinaryTree, f: F) -> Exact {
    bst_law::<Exact>(x)
        .into_iter()
        .map(|(v, q)| q * f(&x.with_inserted(v).unwrap()))
        .fold(Exact::zero(), |a, b| a + b)
}

#[test]
fn jabbour_is_a_martingale() {
    for seed in 0..60 {
        let x = random_tree(seed, random_size(seed, 40));
        for z in [ratio::<Exact>(3, 10), ratio(17, 10)] {
            let m = jabbour_martingale(&x, &z).unwrap();
            assert_eq!(one_step(&x, |y| jabbour_martingale(y, &z).unwrap()), m);
        }
    }
}

#[test]
fn jabbour_martingale_in_floats() {
    for seed in 0..40 {
        let x = random_tree(seed, random_size(seed, 200));
        for z in [0.3f64, 1.7] {
            let m = jabbour_martingale(&x, &z).unwrap();
            let step: f64 = x
                .externals()
                .map(|v| jabbour_martingale(&x.with_inserted(v).unwrap(), &z).unwrap())
                .sum::<f64>()
                / (x.len() + 1) as f64;
            assert!((step - m).abs() <= 1e-12 * m.abs());
        }
    }
}

#[test]
fn path_length_and_wiener_projections() {
    for seed in 0..60 {
        let x = random_tree(seed, random_size(seed, 40));
        assert_eq!(one_step(&x, ipl_projection::<Exact>), ipl_projection::<Exact>(&x));
        assert_eq!(one_step(&x, wiener_projection::<Exact>), wiener_projection::<Exact>(&x));
    }
}

#[test]
fn projected_masses_are_martingales() {
    for seed in 0..40 {
        let x = random_tree(seed, random_size(seed, 30));
        for u in x.nodes() {
            let now = projected_mass::<Exact>(&x, u).unwrap();
            assert_eq!(one_step(&x, |y| projected_mass::<Exact>(y, u).unwrap()), now);
        }
    }
}

#[test]
fn silhouette_projection_is_a_martingale() {
    let rays: Vec<Ray> = (0..16u64)
        .map(|i| Ray::dyadic(2 * i + 1, 5).unwrap())
        .chain([Ray::seeded(3), Ray::constant_tail(NodeId::ROOT, 1)])
        .collect();
    for seed in 0..40 {
        let x = random_tree(seed, random_size(seed, 40));
        for v in &rays {
            let now = msil_projection::<Exact>(&x, v);
            assert_eq!(one_step(&x, |y| msil_projection::<Exact>(y, v)), now);
        }
    }
}

#[test]
fn conditional_c_reassembles_the_path_length_projection() {
    for seed in 0..60 {
        let x = random_tree(seed, random_size(seed, 30));
        let total = x
            .nodes()
            .map(|u| projected_mass::<Exact>(&x, u).unwrap() * cond_c_expectation::<Exact>(&x, u))
            .fold(Exact::zero(), |a, b| a + b);
        assert_eq!(total, ipl_projection::<Exact>(&x), "seed {seed}");
    }
}

#[test]
fn tilted_law_agrees_with_bst_at_one() {
    for seed in 0..20 {
        let x = random_tree(seed, random_size(seed, 30));
        assert_eq!(tilted_law(&x, &ratio::<Exact>(1, 1)).unwrap(), bst_law::<Exact>(&x));
        assert_eq!(tilted_law(&x, &ratio::<Exact>(1, 2)).unwrap(), bst_law::<Exact>(&x));
    }
}
