mod common;

use num::{BigInt, Signed, Zero};
use proptest::prelude::*;

use common::*;
use spincount::classify::{classify_two_spin, classify_with_updown, UpDownTag};
use spincount::funcs::{
    add_fictitious, bit_flip, fourier, inverse_fourier, is_in_cp, is_log_modular, is_lsm, is_permissive, is_product_type,
    is_trivial_binary, permute, pin, product, sum_out, PBFunction, Q,
};
use spincount::gadgets::{pinning_analysis, verdict_holds};
use spincount::instances::{
    near_assignment_total, to_holant, z_exact, z_product_type, CspInstance, HolantInstance,
};
use spincount::matching::{
    build_triangle_graph, count_npm_exact, count_pm_exact, estimate_pm, estimate_z_fpras, holant_fourier_form,
    lift_instance, EstimatorConfig, FourierForm, Multigraph,
};
use spincount::Caps;

fn rat() -> impl Strategy<Value = Q> {
    prop_oneof![
        1 => Just(Q::zero()),
        4 => (1i64..=12, 1i64..=5).prop_map(|(n, d)| Q::new(BigInt::from(n), BigInt::from(d))),
    ]
}

fn func(max_arity: usize) -> impl Strategy<Value = PBFunction> {
    (0..=max_arity).prop_flat_map(|k| prop::collection::vec(rat(), 1 << k).prop_map(move |t| PBFunction::new(k, t).unwrap()))
}

fn bin() -> impl Strategy<Value = PBFunction> {
    prop::collection::vec(rat(), 4).prop_map(|t| PBFunction::new(2, t).unwrap())
}

fn lsm_func() -> impl Strategy<Value = PBFunction> {
    (1usize..=2).prop_flat_map(|k| {
        prop::collection::vec(0i64..=3, 1 << k).prop_map(move |t| PBFunction::ints(k, &t)).prop_filter("lsm", is_lsm)
    })
}

fn closure_suite(f: &PBFunction, g: &PBFunction, pinned: u8) -> Vec<PBFunction> {
    let t = tensor(f, g);
    let k = t.arity();
    let mut out = vec![t.clone(), add_fictitious(f).unwrap(), sum_out(&t, k - 1).unwrap(), pin(&t, 0, pinned).unwrap()];
    let perm: Vec<usize> = (0..k).rev().collect();
    out.push(permute(&t, &perm).unwrap());
    if f.arity() == g.arity() {
        out.push(product(f, g).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_round_trip(f in func(6)) {
        prop_assert_eq!(inverse_fourier(&fourier(&f)), f.to_signed());
    }

    #[test]
    fn nonnegative_spectrum_peaks_at_zero(seed in any::<u64>(), k in 1usize..=4) {
        let f = cp_function(&mut rng(seed), k);
        prop_assert!(f.table().iter().all(|v| v <= f.at(0)));
    }

    #[test]
    fn binary_fourier_under_flip_and_swap(f in bin()) {
        let (a, b, c) = (fourier(&f), fourier(&bit_flip(&f)), fourier(&permute(&f, &[1, 0]).unwrap()));
        prop_assert_eq!(b.at(0), a.at(0));
        prop_assert_eq!(b.at(3), a.at(3));
        prop_assert_eq!(b.at(1), &-a.at(1));
        prop_assert_eq!(b.at(2), &-a.at(2));
        prop_assert_eq!((c.at(1), c.at(2)), (a.at(2), a.at(1)));
    }

    #[test]
    fn lsm_is_closed(f in lsm_func(), g in lsm_func()) {
        for h in closure_suite(&f, &g, 1) {
            prop_assert!(is_lsm(&h), "{:?}", h);
        }
    }

    #[test]
    fn nonnegative_spectrum_is_closed(seed in any::<u64>(), k in 1usize..=2, l in 1usize..=2) {
        let mut r = rng(seed);
        let (f, g) = (cp_function(&mut r, k), cp_function(&mut r, l));
        // Pinning to 1 multiplies by a function with a negative coefficient.
        for h in closure_suite(&f, &g, 0) {
            prop_assert!(is_in_cp(&h), "{:?}", h);
        }
    }

    #[test]
    fn permissive_binary_trivial_iff_log_modular(t in prop::collection::vec(1i64..=6, 4)) {
        let f = PBFunction::ints(2, &t);
        prop_assert!(is_permissive(&f));
        prop_assert_eq!(is_trivial_binary(&f), Some(is_log_modular(&f)));
    }

    #[test]
    fn product_type_invariances(seed in any::<u64>(), k in 1usize..=4) {
        let mut r = rng(seed);
        let f = product_type(&mut r, k);
        prop_assert!(is_product_type(&f).is_some());
        prop_assert!(is_product_type(&bit_flip(&f)).is_some());
        let perm: Vec<usize> = (0..k).rev().collect();
        prop_assert!(is_product_type(&permute(&f, &perm).unwrap()).is_some());
        let u = function(&mut r, 1, 0.2);
        let lifted = spincount::funcs::reindex(&u, &[k - 1], k).unwrap();
        prop_assert!(is_product_type(&product(&f, &lifted).unwrap()).is_some());
    }

    #[test]
    fn pinning_verdicts_hold(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let fs: Vec<PBFunction> = (0..n).map(|i| small_function(&mut r, 1 + (i + seed as usize) % 3)).collect();
        let v = pinning_analysis(&fs).unwrap();
        prop_assert!(verdict_holds(&fs, &v));
    }

    #[test]
    fn two_spin_verdict_invariances(f in bin(), c in rat().prop_filter("positive", |c| c.is_positive())) {
        let tag = classify_two_spin(&f).unwrap().tag;
        prop_assert_eq!(classify_two_spin(&bit_flip(&f)).unwrap().tag, tag);
        prop_assert_eq!(classify_two_spin(&permute(&f, &[1, 0]).unwrap()).unwrap().tag, tag);
        prop_assert_eq!(classify_two_spin(&f.scale(&c).unwrap()).unwrap().tag, tag);
    }

    #[test]
    fn updown_fp_means_product_evaluable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fs: Vec<PBFunction> = (1..=3).map(|k| product_type(&mut r, k)).collect();
        prop_assert_eq!(classify_with_updown(&fs).tag, UpDownTag::Fp);
        let mut inst = CspInstance::new();
        for (i, f) in fs.iter().enumerate() {
            inst.add_function(&format!("p{i}"), f.clone()).unwrap();
            let scope = (0..f.arity()).map(|j| format!("x{}", (j * 7 + i + seed as usize) % 5)).collect::<Vec<_>>();
            let scope: Vec<&str> = scope.iter().map(String::as_str).collect();
            inst.add_constraint(&format!("p{i}"), &scope).unwrap();
        }
        prop_assert_eq!(z_product_type(&inst).unwrap(), z_exact(&inst).unwrap());
    }

    #[test]
    fn bit_flip_and_holant_preserve_z(seed in any::<u64>(), n in 1usize..=6, m in 0usize..=5) {
        let mut r = rng(seed);
        let f = random_binary(&mut r);
        let inst = binary_instance(&mut r, &f, n, m);
        let z = z_exact(&inst).unwrap();
        prop_assert_eq!(z_exact(&inst.bit_flipped()).unwrap(), z.clone());
        prop_assert_eq!(z_exact(to_holant(&inst).instance()).unwrap(), z);
    }

    #[test]
    fn near_assignments_bounded(seed in any::<u64>(), m in 1usize..=2) {
        let mut r = rng(seed);
        let fs: Vec<PBFunction> = (0..2 * m).map(|_| w_tilde_cp(&mut r)).collect();
        let h = holant(&mut r, &fs);
        let caps = Caps::default();
        let n = Q::from_integer(h.instance().n_vars().into());
        let z = z_exact(h.instance()).unwrap();
        let zp = near_assignment_total(&h, &caps).unwrap();
        prop_assert!(zp <= Q::from_integer(2.into()) * &n * &n * &z);
        let g = build_triangle_graph(&h).unwrap();
        prop_assert_eq!(count_pm_exact(&g, &caps).unwrap(), z.clone());
        prop_assert!(count_npm_exact(&g, &caps).unwrap() <= &n * &z + zp);
    }

    #[test]
    fn pipeline_graph_npm_ratio(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = cp_function(&mut r, 2);
        let inst = binary_instance(&mut r, &f, 2, 2);
        let lifted = lift_instance(&inst).unwrap();
        if let FourierForm::Holant { holant, kappa } = holant_fourier_form(&lifted).unwrap() {
            let g = build_triangle_graph(&holant).unwrap();
            let caps = Caps::default();
            prop_assume!(g.n_vertices() <= caps.matching);
            let n = Q::from_integer(holant.instance().n_vars().into());
            let pm = count_pm_exact(&g, &caps).unwrap();
            prop_assert_eq!(&kappa * &pm, z_exact(&lifted).unwrap());
            prop_assert!(count_npm_exact(&g, &caps).unwrap() <= Q::from_integer(3.into()) * &n * &n * pm);
        }
    }

    #[test]
    fn exact_path_matches_z_exact(seed in any::<u64>(), n in 1usize..=5, m in 0usize..=6) {
        let mut r = rng(seed);
        let f = cp_function(&mut r, 2);
        let inst = binary_instance(&mut r, &f, n, m);
        let cfg = EstimatorConfig { exact_cap: 128, ..EstimatorConfig::default() };
        let e = estimate_z_fpras(&f, &inst, &cfg).unwrap();
        prop_assert!(e.exact);
        prop_assert_eq!(e.value, z_exact(&inst).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn estimates_are_seed_deterministic(seed in any::<u64>()) {
        // 4-regular circulant with mixed multiplicities; too dense for the reductions.
        let mut edges = Vec::new();
        for i in 0..16 {
            edges.push((i, (i + 1) % 16, 1 + (i as u64 % 3)));
            edges.push((i, (i + 3) % 16, 1));
        }
        let g = Multigraph::new(16, edges).unwrap();
        let cfg = EstimatorConfig { seed, exact_cap: 4, min_steps: 2_000, ..EstimatorConfig::default() };
        prop_assert_eq!(estimate_pm(&g, &cfg).unwrap(), estimate_pm(&g, &cfg).unwrap());
    }
}

#[test]
fn sampled_pipeline_estimates_within_tolerance() {
    let mut r = rng(21);
    let mut sampled = 0;
    for _ in 0..4 {
        let f = cp_function(&mut r, 2);
        let inst = binary_instance(&mut r, &f, 5, 7);
        let exact = z_exact(&inst).unwrap();
        let mut hits = 0;
        for seed in 0..20 {
            let cfg = EstimatorConfig { seed, exact_cap: 2, ..EstimatorConfig::default() };
            let e = estimate_z_fpras(&f, &inst, &cfg).unwrap();
            sampled += (e.levels > 0) as usize;
            hits += within(&e.value, &exact, 0.1) as usize;
        }
        assert!(hits >= 15, "{hits}/20 within tolerance of {exact}");
    }
    assert!(sampled > 0);
}

#[test]
fn holant_instances_round_trip_through_text() {
    let mut r = rng(22);
    for _ in 0..20 {
        let fs: Vec<PBFunction> = (0..4).map(|_| w_tilde(&mut r)).collect();
        let h = holant(&mut r, &fs);
        let text = h.instance().serialize();
        let back = HolantInstance::new(CspInstance::parse(&text).unwrap()).unwrap();
        assert_eq!(back, h);
    }
}
