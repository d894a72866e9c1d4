// SPDX-License-Identifier: Apache-2.0

//! Cross-module invariants on enumerated and randomized inputs.
//!
//! The unit tests inside the library pin concrete values; the checks here
//! sweep whole families: every admissible completion on desk-size triples
//! classifies into the case catalog and conserves the Euler characteristic,
//! strictly increasing degree triples reject all nontrivial actions,
//! relabeling equal sphere factors permutes the admissible set, and the GF(2)
//! kernels and images obey rank arithmetic on arbitrary matrices.

use orbits_core::{
    admissible_set, match_theorem, nontrivial_involutions, poincare, BitMatrix,
    DifferentialPattern, FiberElement, FiberInvolution, FiberMonomial, GenFate, SpectralSystem,
    SphereTriple, Subspace,
};
use proptest::collection::vec;
use proptest::prelude::*;

fn triple(n: usize, m: usize, l: usize) -> SphereTriple {
    SphereTriple::new(n, m, l).expect("test degrees are valid")
}

fn trivial_system(degrees: SphereTriple) -> SpectralSystem {
    SpectralSystem::new(degrees, FiberInvolution::identity())
}

#[test]
fn admissible_runs_conserve_euler_and_vanish_above_the_top_degree() {
    for (n, m, l) in [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2), (1, 2, 3)] {
        let degrees = triple(n, m, l);
        // A free involution halves the Euler characteristic of the product:
        // 8 / 2 when all three spheres are even-dimensional, else 0.
        let expected_euler: i64 = if n % 2 == 0 && m % 2 == 0 && l % 2 == 0 {
            4
        } else {
            0
        };
        let set = admissible_set(&trivial_system(degrees)).unwrap();
        assert!(!set.is_empty(), "({n},{m},{l})");
        for (pattern, report) in &set {
            assert!(report.verdict.is_admissible(), "{pattern}");
            let einfinity = report.einfinity.as_ref().unwrap();

            let euler: i64 = poincare(einfinity)
                .coefficients()
                .iter()
                .enumerate()
                .map(|(degree, &dim)| {
                    let signed = i64::try_from(dim).unwrap();
                    if degree % 2 == 0 {
                        signed
                    } else {
                        -signed
                    }
                })
                .sum();
            assert_eq!(euler, expected_euler, "{pattern} at ({n},{m},{l})");

            // Freeness: nothing survives above the fiber's total degree, out
            // to the end of the reported window.
            for total in degrees.top() + 1..=einfinity.reported_columns() {
                let above: usize = (0..=degrees.top().min(total))
                    .map(|q| einfinity.dim(total - q, q))
                    .sum();
                assert_eq!(above, 0, "{pattern} leaves degree {total} alive");
            }

            // Structural counters ran on every admissible run, and the
            // completion resolves each pattern entry.
            assert!(report.stats.rank_checks > 0);
            assert!(report.stats.t_periodicity_checks > 0);
            assert!(report.stats.alternating_checks > 0);
            for entry in pattern.entries() {
                assert!(
                    report
                        .completion
                        .iter()
                        .any(|fate| fate.element == entry.element),
                    "{pattern} lost the entry for {}",
                    entry.element
                );
            }
        }
    }
}

#[test]
fn every_admissible_completion_classifies_into_the_catalog() {
    let desk = [
        (1, 1, 1),
        (1, 1, 2),
        (1, 2, 2),
        (2, 2, 2),
        (1, 2, 3),
        (1, 2, 4),
        (1, 3, 4),
        (2, 3, 5),
    ];
    for (n, m, l) in desk {
        let degrees = triple(n, m, l);
        let mut actions = vec![FiberInvolution::identity()];
        actions.extend(
            nontrivial_involutions(&degrees)
                .into_iter()
                .filter(|action| !action.fixed_point_obstruction(&degrees)),
        );
        for action in actions {
            let system = SpectralSystem::new(degrees, action.clone());
            for (pattern, report) in admissible_set(&system).unwrap() {
                assert!(
                    match_theorem(&degrees, &action, &report.completion).is_some(),
                    "unclassified completion {pattern} at ({n},{m},{l})"
                );
            }
        }
    }
}

#[test]
fn strictly_increasing_triples_reject_every_nontrivial_action() {
    for n in 1..=10 {
        for m in n + 1..=10 {
            for l in m + 1..=10 {
                if n + m + l > 12 {
                    continue;
                }
                let degrees = triple(n, m, l);
                let candidates = nontrivial_involutions(&degrees);
                if l == n + m {
                    // The only candidate adds the top product of the two
                    // small generators to the third one; it has fixed points.
                    assert_eq!(candidates.len(), 1, "({n},{m},{l})");
                    for action in candidates {
                        assert!(action.fixed_point_obstruction(&degrees), "({n},{m},{l})");
                        let system = SpectralSystem::new(degrees, action);
                        assert!(
                            admissible_set(&system).unwrap().is_empty(),
                            "({n},{m},{l}) admits an obstructed action"
                        );
                    }
                } else {
                    assert!(candidates.is_empty(), "({n},{m},{l})");
                }
            }
        }
    }
}

#[test]
fn involutions_square_to_the_identity_and_count_by_degree_shape() {
    // Counts: 21 involutive matrices in GL(3, 2) when all degrees agree, 3
    // involutive matrices in GL(2, 2) for one equal pair, doubled when the
    // top generator can also absorb the product of the two lower ones.
    for (n, m, l, expected) in [
        (1, 1, 1, 21),
        (3, 3, 3, 21),
        (1, 2, 2, 3),
        (2, 2, 3, 3),
        (1, 1, 2, 7),
        (1, 2, 4, 0),
        (1, 2, 3, 1),
    ] {
        let degrees = triple(n, m, l);
        let actions = nontrivial_involutions(&degrees);
        assert_eq!(actions.len(), expected, "({n},{m},{l})");
        for action in &actions {
            assert!(!action.is_identity());
            for index in 0..3 {
                let generator = FiberElement::from(FiberMonomial::from_mask(1 << index));
                assert_eq!(
                    action.apply(action.apply(generator)),
                    generator,
                    "({n},{m},{l}) action is not an involution on generator {index}"
                );
            }
        }
    }
}

/// Swaps the two equal-degree generators `b` and `c` in every monomial.
fn swap_equal_pair(element: FiberElement) -> FiberElement {
    let mut bits = 0_u8;
    for monomial in element.monomials() {
        let mask = monomial.mask();
        let swapped = (mask & 1) | ((mask & 2) << 1) | ((mask & 4) >> 1);
        bits |= 1 << swapped;
    }
    FiberElement::from_bits(bits)
}

/// Order-free form of a pattern, optionally relabeled through the swap.
///
/// Base generators keep their names; a generator discovered inside a product
/// span is only one basis choice among equals (ab against ac when ab+ac is
/// derived), so discovered entries are keyed by total degree instead.
fn canonical(
    degrees: SphereTriple,
    pattern: &DifferentialPattern,
    swap: bool,
) -> Vec<(String, Option<(usize, u8)>)> {
    let base: [u8; 3] = [
        FiberElement::from(FiberMonomial::from_mask(1)).bits(),
        FiberElement::from(FiberMonomial::from_mask(2)).bits(),
        FiberElement::from(FiberMonomial::from_mask(4)).bits(),
    ];
    let mut entries: Vec<(String, Option<(usize, u8)>)> = pattern
        .entries()
        .iter()
        .map(|entry| {
            let element = if swap {
                swap_equal_pair(entry.element)
            } else {
                entry.element
            };
            let fate = match entry.fate {
                GenFate::Survives => None,
                GenFate::Fires { page, target } => {
                    let target = if swap { swap_equal_pair(target) } else { target };
                    Some((page, target.bits()))
                }
                GenFate::Undecided => unreachable!("patterns hold definite fates"),
            };
            let label = if base.contains(&element.bits()) {
                format!("base{}", element.bits())
            } else {
                let degree = element
                    .monomials()
                    .map(|monomial| monomial.degree(&degrees))
                    .max()
                    .unwrap_or(0);
                format!("deg{degree}")
            };
            (label, fate)
        })
        .collect();
    entries.sort();
    entries
}

#[test]
fn equal_sphere_relabeling_permutes_the_admissible_set() {
    let degrees = triple(2, 3, 3);
    let set = admissible_set(&trivial_system(degrees)).unwrap();
    assert!(!set.is_empty());
    let mut plain: Vec<_> = set
        .iter()
        .map(|(pattern, _)| canonical(degrees, pattern, false))
        .collect();
    let mut swapped: Vec<_> = set
        .iter()
        .map(|(pattern, _)| canonical(degrees, pattern, true))
        .collect();
    plain.sort();
    swapped.sort();
    assert_eq!(plain, swapped);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_arithmetic_holds_on_random_matrices(
        (rows, cols, bits) in (1_usize..10, 1_usize..10)
            .prop_flat_map(|(rows, cols)| (Just(rows), Just(cols), vec(any::<bool>(), rows * cols)))
    ) {
        let mut matrix = BitMatrix::zeros(rows, cols);
        for (position, &bit) in bits.iter().enumerate() {
            if bit {
                matrix.set(position / cols, position % cols, true);
            }
        }
        let rank = matrix.rank();
        prop_assert!(rank <= rows.min(cols));
        prop_assert_eq!(matrix.transpose().rank(), rank);
        prop_assert_eq!(matrix.kernel_basis().len(), rows - rank);
        prop_assert_eq!(matrix.image_basis().len(), rank);

        for vector in matrix.kernel_basis() {
            prop_assert!(matrix.apply(&vector).unwrap().is_zero());
        }
        let mut image = Subspace::zero(cols);
        for vector in matrix.image_basis() {
            prop_assert!(image.insert(&vector));
        }
        for row in 0..rows {
            prop_assert!(image.contains(matrix.row(row)));
        }
    }
}
