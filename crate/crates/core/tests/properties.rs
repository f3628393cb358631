use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use proptest::prelude::*;

use integral_cayley::arith::{is_prime, units_mod};
use integral_cayley::{
    build_character_table, canonical_functional, enumerate_functionals, find_nondegenerate, is_additively_closed,
    is_integral, is_nondegenerate, is_stable, negation_classes, numeric_spectrum_oracle, quadratic_character,
    scalar_orbits, spectrum, transport_functional, CayleyGraph, FiniteRing, LinearFunctional, RingSpec, SpectrumReport,
    Transport,
};

fn arb_spec() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        (2u64..=40).prop_map(|n| RingSpec::Zn { n }),
        (2u64..=4, 2u64..=4).prop_map(|(n, m)| RingSpec::GroupAlgebra { n, factors: vec![m] }),
        (2u64..=3).prop_map(|n| RingSpec::GroupAlgebra { n, factors: vec![2, 2] }),
        (2u64..=8).prop_map(RingSpec::gaussian),
        (2u64..=4, prop::collection::vec(-2i64..=2, 2)).prop_map(|(n, mut g)| {
            g.push(1);
            RingSpec::Monogenic { n, g }
        }),
        (prop::sample::select(vec![2u64, 3, 5]), 1usize..=3).prop_map(|(p, a)| RingSpec::truncated(p, a)),
        (2u64..=5, 2u64..=5).prop_map(|(a, b)| RingSpec::Product {
            specs: vec![RingSpec::Zn { n: a }, RingSpec::Zn { n: b }],
            declared_n: integral_cayley::arith::lcm(a, b),
        }),
    ]
}

/// A symmetric connection set: a random union of negation classes.
fn pick_set(ring: &FiniteRing, mask: u64) -> Vec<usize> {
    let classes = negation_classes(ring);
    let mut set: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(i, _)| (mask >> (i % 64)) & 1 == 1)
        .flat_map(|(_, c)| c.clone())
        .collect();
    set.sort_unstable();
    set
}

/// The union of the scalar orbits meeting `set`.
fn stable_hull(ring: &FiniteRing, set: &[usize]) -> Vec<usize> {
    let orbits = scalar_orbits(ring);
    let mut out = BTreeSet::new();
    for &s in set {
        out.extend(orbits.orbits()[orbits.orbit_of(s)].iter().copied());
    }
    out.into_iter().collect()
}

fn canonical(spec: &RingSpec) -> (FiniteRing, LinearFunctional) {
    (spec.build().unwrap(), canonical_functional(spec).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn element_enumeration_is_a_stable_bijection(spec in arb_spec()) {
        let ring = spec.build().unwrap();
        let again = spec.build().unwrap();
        prop_assert_eq!(ring.id(), again.id());
        let mut seen = HashSet::new();
        for (i, e) in ring.elements().enumerate() {
            prop_assert_eq!(ring.index_of(&e).unwrap(), i);
            let twin = again.element_at(i).unwrap();
            prop_assert_eq!(twin.coords(), e.coords());
            prop_assert!(seen.insert(e.coords().to_vec()));
        }
        prop_assert_eq!(seen.len(), ring.size());
    }

    #[test]
    fn principal_ideals_are_ideals(spec in arb_spec(), pick in any::<prop::sample::Index>()) {
        let ring = spec.build().unwrap();
        prop_assume!(ring.size() <= 256);
        let r = ring.element_at(pick.index(ring.size())).unwrap();
        let ideal: HashSet<usize> = ring.principal_ideal_indices(&r).unwrap().into_iter().collect();
        for &a in &ideal {
            let ea = ring.element_at(a).unwrap();
            for &b in &ideal {
                let sum = ring.add(&ea, &ring.element_at(b).unwrap()).unwrap();
                prop_assert!(ideal.contains(&ring.index_of(&sum).unwrap()));
            }
            for t in ring.elements() {
                prop_assert!(ideal.contains(&ring.index_of(&ring.mul(&t, &ea).unwrap()).unwrap()));
            }
        }
    }

    #[test]
    fn crt_product_matches_zn(a in 2u64..=9, b in 2u64..=9) {
        prop_assume!(integral_cayley::arith::gcd(a, b) == 1);
        let n = a * b;
        let product = RingSpec::Product {
            specs: vec![RingSpec::Zn { n: a }, RingSpec::Zn { n: b }],
            declared_n: n,
        }
        .build()
        .unwrap();
        let zn = RingSpec::Zn { n }.build().unwrap();
        // m ↦ (m mod a, m mod b)
        let image = |m: u64| product.element(vec![m % a, m % b]).unwrap();
        let images: HashSet<Vec<u64>> = (0..n).map(|m| image(m).coords().to_vec()).collect();
        prop_assert_eq!(images.len() as u64, n);
        for x in 0..n {
            for y in 0..n {
                let (ex, ey) = (zn.element_at(x as usize).unwrap(), zn.element_at(y as usize).unwrap());
                let xy = zn.index_of(&zn.mul(&ex, &ey).unwrap()).unwrap() as u64;
                prop_assert_eq!(product.mul(&image(x), &image(y)).unwrap(), image(xy));
                prop_assert_eq!(product.add(&image(x), &image(y)).unwrap(), image((x + y) % n));
            }
        }
    }

    #[test]
    fn canonical_functionals_are_nondegenerate(spec in arb_spec()) {
        let (ring, psi) = canonical(&spec);
        prop_assert!(is_nondegenerate(&ring, &psi).unwrap());
    }

    #[test]
    fn induction_preserves_the_verdict(spec in arb_spec(), k in 1u64..=4, pick in any::<prop::sample::Index>()) {
        let ring = spec.build().unwrap();
        prop_assume!(ring.size() <= 64);
        let all: Vec<LinearFunctional> = enumerate_functionals(&ring).collect();
        let psi = &all[pick.index(all.len())];
        let m = ring.modulus() * k;
        let induced = transport_functional(psi, Transport::Induce(m)).unwrap();
        let big = ring.with_scalar_modulus(m).unwrap();
        prop_assert_eq!(is_nondegenerate(&ring, psi).unwrap(), is_nondegenerate(&big, &induced).unwrap());
    }

    #[test]
    fn stable_sets_are_integral_and_conversely(spec in arb_spec(), mask in any::<u64>()) {
        let (ring, psi) = canonical(&spec);
        let set = pick_set(&ring, mask);
        let graph = CayleyGraph::new(&ring, set.clone()).unwrap();
        prop_assert_eq!(is_stable(&ring, &graph).unwrap(), is_integral(&ring, &graph, &psi).unwrap());
        let hull = CayleyGraph::new(&ring, stable_hull(&ring, &set)).unwrap();
        prop_assert!(is_integral(&ring, &hull, &psi).unwrap());
    }

    #[test]
    fn spectrum_sum_rule_and_bound(spec in arb_spec(), mask in any::<u64>()) {
        let (ring, psi) = canonical(&spec);
        let graph = CayleyGraph::new(&ring, pick_set(&ring, mask)).unwrap();
        let report = spectrum(&ring, &graph, &psi).unwrap();
        let zero = integral_cayley::CyclotomicInt::zero(ring.modulus());
        let total = report.eigenvalues.iter().fold(zero, |acc, e| &acc + &e.value);
        prop_assert!(total.is_zero());
        let degree = graph.degree() as f64;
        for e in &report.eigenvalues {
            let (re, im) = e.value.to_complex();
            prop_assert!(im.abs() < 1e-9);
            prop_assert!(re.abs() <= degree + 1e-9);
        }
        prop_assert_eq!(report.eigenvalues[0].integer.clone(), Some(BigInt::from(graph.degree())));
    }

    #[test]
    fn exact_and_numeric_spectra_agree(spec in arb_spec(), mask in any::<u64>()) {
        let (ring, psi) = canonical(&spec);
        prop_assume!(ring.size() <= 512);
        let graph = CayleyGraph::new(&ring, pick_set(&ring, mask)).unwrap();
        let mut exact = spectrum(&ring, &graph, &psi).unwrap().numeric_values();
        let mut numeric = numeric_spectrum_oracle(&ring, &graph).unwrap();
        exact.sort_by(f64::total_cmp);
        numeric.sort_by(f64::total_cmp);
        for (a, b) in exact.iter().zip(&numeric) {
            prop_assert!((a - b).abs() < 1e-6, "{} vs {}", a, b);
        }
    }

    #[test]
    fn reports_survive_a_json_round_trip(spec in arb_spec(), mask in any::<u64>()) {
        let (ring, psi) = canonical(&spec);
        let graph = CayleyGraph::new(&ring, pick_set(&ring, mask)).unwrap();
        let report = spectrum(&ring, &graph, &psi).unwrap();
        let text = report.to_json().to_string();
        let back = SpectrumReport::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, report);
    }

    #[test]
    fn projection_property(spec in arb_spec(), weights in prop::collection::vec(-4i64..=4, 64)) {
        let (ring, psi) = canonical(&spec);
        prop_assume!(ring.size() <= 32);
        let a = integral_cayley::dft_matrix(&ring, &psi).unwrap();
        let orbits = scalar_orbits(&ring);
        let constant: Vec<BigInt> = (0..ring.size()).map(|t| BigInt::from(weights[orbits.orbit_of(t) % 64])).collect();
        let image = a.apply(&constant);
        let ints: Vec<BigInt> = image.iter().map(|c| c.as_integer().expect("integer entry")).collect();
        for orbit in orbits.orbits() {
            prop_assert!(orbit.iter().all(|&t| ints[t] == ints[orbit[0]]));
        }
        // arbitrary v: a rational image is orbit-constant
        let free: Vec<BigInt> = (0..ring.size()).map(|t| BigInt::from(weights[t % 64])).collect();
        let image = a.apply(&free);
        if let Some(ints) = image.iter().map(|c| c.as_integer()).collect::<Option<Vec<BigInt>>>() {
            for orbit in orbits.orbits() {
                prop_assert!(orbit.iter().all(|&t| ints[t] == ints[orbit[0]]));
            }
        }
    }
}

#[test]
fn nondegenerate_iff_bijective_on_small_rings() {
    let mut specs = vec![
        RingSpec::Zn { n: 12 },
        RingSpec::GroupAlgebra {
            n: 2,
            factors: vec![2, 2],
        },
        RingSpec::Monogenic { n: 4, g: vec![0, 0, 1] },
        RingSpec::gaussian(5),
        RingSpec::truncated(2, 3),
        RingSpec::square_zero(2, 2),
        RingSpec::square_zero(3, 2),
        RingSpec::square_zero(2, 3),
    ];
    specs.push(RingSpec::Product {
        specs: vec![RingSpec::Zn { n: 4 }, RingSpec::truncated(2, 2)],
        declared_n: 4,
    });
    for spec in specs {
        let ring = spec.build().unwrap();
        assert!(ring.size() <= 64);
        let mut count = 0;
        for psi in enumerate_functionals(&ring) {
            let table = build_character_table(&ring, &psi).unwrap();
            assert_eq!(
                is_nondegenerate(&ring, &psi).unwrap(),
                table.is_bijective(),
                "{spec:?} {psi:?}"
            );
            count += 1;
        }
        assert_eq!(count, ring.size(), "|Hom| for {spec:?}");
    }
}

#[test]
fn no_functional_means_every_kernel_holds_an_ideal() {
    for spec in [
        RingSpec::square_zero(2, 2),
        RingSpec::square_zero(3, 2),
        RingSpec::square_zero(2, 3),
    ] {
        let ring = spec.build().unwrap();
        assert!(find_nondegenerate(&ring).is_none());
        for psi in enumerate_functionals(&ring) {
            let found = ring.elements().skip(1).any(|r| {
                ring.principal_ideal(&r)
                    .unwrap()
                    .iter()
                    .all(|t| psi.apply(t).unwrap() == 0)
            });
            assert!(found, "{spec:?}: no ideal inside ker {psi:?}");
        }
    }
}

#[test]
fn unitary_cayley_graph_is_a_ramanujan_sum() {
    for n in 2..=40u64 {
        let (ring, psi) = canonical(&RingSpec::Zn { n });
        let units: Vec<usize> = units_mod(n).into_iter().map(|u| u as usize).collect();
        let report = spectrum(&ring, &CayleyGraph::new(&ring, units).unwrap(), &psi).unwrap();
        for (r, e) in report.eigenvalues.iter().enumerate() {
            assert_eq!(
                e.integer,
                Some(BigInt::from(integral_cayley::ramanujan_sum(n, r as u64)))
            );
        }
    }
}

#[test]
fn even_characters_have_symmetric_kernels() {
    for p in (3u64..60).filter(|&p| is_prime(p)) {
        let ring = RingSpec::Zn { n: p }.build().unwrap();
        let chi = quadratic_character(&ring).unwrap();
        let kernel: HashSet<usize> = integral_cayley::character_kernel(&chi).into_iter().collect();
        let symmetric = kernel
            .iter()
            .all(|&k| kernel.contains(&((p as usize - k) % p as usize)));
        assert_eq!(chi.is_even(&ring).unwrap(), symmetric, "p = {p}");
        assert_eq!(chi.is_even(&ring).unwrap(), p % 4 == 1);
        assert_eq!(integral_cayley::paley_graph(&ring, &chi).is_ok(), p % 4 == 1);
    }
}

/// The orbit criterion and the "S ∪ {0} is a subspace" criterion compared
/// exhaustively on small prime-characteristic rings.
#[test]
fn subspace_criterion_probe() {
    let cases = [
        (RingSpec::Zn { n: 5 }, 0usize),
        (RingSpec::Zn { n: 7 }, 0),
        (RingSpec::truncated(3, 2), 10),
        (RingSpec::truncated(2, 3), 112),
        (RingSpec::gaussian(3), 10),
    ];
    for (spec, expected) in cases {
        let (ring, psi) = canonical(&spec);
        let report = integral_cayley::verify_theorem(&ring, &psi, &integral_cayley::VerifyMode::Exhaustive).unwrap();
        let mismatches = report
            .verdicts
            .iter()
            .filter(|v| v.integral && !is_additively_closed(&ring, &v.connection).unwrap())
            .count();
        assert_eq!(mismatches, expected, "{spec:?}");
        // a subspace minus zero is always stable, so the other direction never fails
        for v in &report.verdicts {
            if is_additively_closed(&ring, &v.connection).unwrap() {
                assert!(v.integral, "{spec:?} {:?}", v.connection);
            }
        }
    }
}
