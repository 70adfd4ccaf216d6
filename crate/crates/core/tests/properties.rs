mod common;

use common::*;
use k3lag::criteria::{certificate_in, classify, decompose_positive, lag_lattice, split_radical, verify_certificate, Case};
use k3lag::eichler::{canonical_form, orth_witnesses};
use k3lag::enumerate::{find_isotropic, short_vectors, IsotropicSearch};
use k3lag::{LVector, Lattice, Omega, Sublattice};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_gram(max_rank: usize, range: i64) -> impl Strategy<Value = Gram> {
    (1..=max_rank).prop_flat_map(move |n| {
        proptest::collection::vec(-range..=range, n * n).prop_map(move |e| {
            (0..n)
                .map(|i| (0..n).map(|j| if i <= j { e[i * n + j] } else { e[j * n + i] }).collect())
                .collect()
        })
    })
}

fn neg_definite() -> impl Strategy<Value = Gram> {
    (1usize..=4)
        .prop_flat_map(|n| proptest::collection::vec(-2i64..=2, n * n).prop_map(move |a| (n, a)))
        .prop_filter_map("singular", |(n, a)| {
            let g: Gram = (0..n)
                .map(|i| (0..n).map(|j| -(0..n).map(|k| a[k * n + i] * a[k * n + j]).sum::<i64>()).collect())
                .collect();
            (det(&widen(&g)) != 0).then_some(g)
        })
}

/// A unimodular matrix built from elementary row operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for &(a, b, k) in ops {
        let (a, b) = (a % n, b % n);
        if a != b {
            for c in 0..n {
                m[a][c] += k * m[b][c];
            }
        }
    }
    m
}

fn congruent(g: &Gram, u: &[Vec<i64>]) -> Gram {
    let n = g.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|a| (0..n).map(|b| u[i][a] * g[a][b] * u[j][b]).sum::<i64>()).sum())
                .collect()
        })
        .collect()
}

fn k3_vector(u: Vec<i64>, e: Vec<i64>) -> LVector {
    let mut c = u;
    c.extend(e);
    c.resize(22, 0);
    v(&c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn saturation_is_idempotent(gens in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 4), 0..4)) {
        let host = Lattice::diagonal(&[1, -1, 2, -3]);
        let s = Sublattice::from_generators(host.clone(), &gens.iter().map(|g| v(g)).collect::<Vec<_>>()).unwrap();
        let sat = host.saturate(&s).unwrap();
        prop_assert!(sat.is_saturated());
        prop_assert!(sat.contains_sublattice(&s));
        prop_assert_eq!(sat.rank(), s.rank());
        prop_assert_eq!(host.saturate(&sat).unwrap(), sat);
    }

    #[test]
    fn signature_is_basis_invariant(g in small_gram(5, 4), ops in proptest::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..8)) {
        let u = unimodular(g.len(), &ops);
        let s = lat(&g).signature();
        prop_assert_eq!(s.0 + s.1 + s.2, g.len());
        prop_assert_eq!(lat(&congruent(&g, &u)).signature(), s);
        prop_assert_eq!(s.2, lat(&g).radical().rank());
    }

    #[test]
    fn short_vectors_match_brute_force(g in neg_definite(), bound in 1i64..=8) {
        let got: Vec<Vec<i64>> = short_vectors(&lat(&g), &int(bound)).unwrap().iter().map(to_i64).collect();
        prop_assert_eq!(got, brute_short_vectors(&g, bound));
    }

    #[test]
    fn orth_complement_is_orthogonal(g in small_gram(4, 3), gens in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 1..3)) {
        let n = g.len();
        let host = lat(&g);
        let gens: Vec<LVector> = gens.iter().map(|x| v(&x[..n])).collect();
        let s = Sublattice::from_generators(host.clone(), &gens).unwrap();
        let perp = host.orth_complement(&s).unwrap();
        prop_assert!(perp.is_saturated());
        for a in perp.basis_vectors() {
            for b in &gens {
                prop_assert!(host.inner(&a, b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn canonical_form_on_random_classes(u in proptest::collection::vec(-5i64..=5, 6), e in proptest::collection::vec(-1i64..=1, 16)) {
        let w = k3_vector(u, e);
        let k3 = Lattice::k3();
        let w2 = k3.norm(&w).unwrap();
        prop_assume!(!w.is_zero() && w.is_primitive() && !w2.is_negative());
        let r = canonical_form(&w).unwrap();
        prop_assert!(r.g.preserves(&k3));
        let mut t = LVector::unit(22, 0);
        t.0[1] = &w2 / BigInt::from(2);
        prop_assert_eq!(r.g.apply(&w), t.clone());
        prop_assert_eq!(r.apply_inverse(&t), w.clone());
        if w2.is_positive() {
            let o = orth_witnesses(&w).unwrap();
            prop_assert!(k3.inner(&o.ell, &w).unwrap().is_zero());
            prop_assert!(k3.norm(&o.ell).unwrap().is_zero());
            prop_assert_eq!(k3.norm(&o.v).unwrap(), BigInt::from(2));
        }
    }

    #[test]
    fn isotropic_search_is_sound(g in small_gram(3, 4)) {
        let l = lat(&g);
        match find_isotropic(&l, 6) {
            IsotropicSearch::Found(x) => {
                prop_assert!(!x.is_zero());
                prop_assert!(l.norm(&x).unwrap().is_zero());
            }
            IsotropicSearch::NoneExists => {
                let gw = widen(&g);
                for p in box_points(&vec![4; g.len()]) {
                    if p.iter().any(|&c| c != 0) {
                        prop_assert!(pair(&gw, &p, &p) != 0, "isotropic {:?} missed", p);
                    }
                }
            }
            IsotropicSearch::Unknown { .. } => {}
        }
    }

    #[test]
    fn split_radical_reassembles(g in small_gram(4, 3)) {
        let l = lat(&g);
        prop_assume!(k3lag::enumerate::find_positive(&l).is_none());
        let s = split_radical(&l).unwrap();
        let mut all = s.rad.basis_vectors();
        all.extend(s.complement.basis_vectors());
        prop_assert!(Sublattice::from_generators(l.clone(), &all).unwrap().is_full());
        prop_assert_eq!(all.len(), g.len());
        for r in s.rad.basis_vectors() {
            for i in 0..g.len() {
                prop_assert!(l.inner(&r, &LVector::unit(g.len(), i)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn certificates_round_trip(g in small_gram(4, 3), coords in proptest::collection::vec(-4i64..=4, 4)) {
        let l = lat(&g);
        let n = g.len();
        let full = Sublattice::full(l.clone());
        let gamma = v(&coords[..n]);
        let report = classify(&l).unwrap();
        match certificate_in(&full, &gamma) {
            Ok(cert) => prop_assert!(verify_certificate(&full, &gamma, &cert).ok),
            Err(k3lag::Error::NotDecomposable(_)) => {
                prop_assert_eq!(report.case, Case::Split);
                prop_assert!(!report.equal);
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
        if report.case == Case::PositiveWitness {
            let x = report.witness.unwrap();
            for b in full.basis_vectors() {
                let s = decompose_positive(&full, &b, &x).unwrap();
                prop_assert!(l.norm(&s.alpha).unwrap().is_positive() && l.norm(&s.beta).unwrap().is_positive());
            }
        }
    }

    #[test]
    fn rational_period_lag_has_positive_vector(a in 1i64..=5, b in 1i64..=5, c in 1i64..=5) {
        // θ = a(e1+f1) + i·a(e2+f2), ω = b·e3 + c·f3 on U³
        let u = Lattice::hyperbolic_plane();
        let h = Lattice::direct_sum(&[&u, &u, &u]);
        let w = v(&[0, 0, 0, 0, b, c]).to_rational();
        let lag = lag_lattice(&h, &Omega::Rational(w)).unwrap();
        let theta_re = v(&[a, a, 0, 0, 0, 0]).primitive_part();
        prop_assert!(lag.contains(&theta_re));
        prop_assert_eq!(classify(&lag.gram_lattice()).unwrap().case, Case::PositiveWitness);
    }
}
