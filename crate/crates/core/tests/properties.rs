use optbench::analysis::{check_stepsize_domination, lemma_log_ratio_check, lemma_seq_check};
use optbench::harness::telemetry_io::{read_csv_from, write_csv_to};
use optbench::numeric::{dist, norm};
use optbench::problems::{
    make_nonsmooth_lipschitz, make_quadratic_1d, make_ridge_regression, NonsmoothKind, ProblemSpec,
};
use optbench::{iterates, Domain, OptimizerKind, StepRecord};
use proptest::prelude::*;

fn vec_in(d: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..scale, d)
}

fn domain_strategy(d: usize) -> impl Strategy<Value = Domain> {
    prop_oneof![
        Just(Domain::full()),
        (vec_in(d, 5.0), 0.01..10.0f64).prop_map(|(c, r)| Domain::ball(c, r).unwrap()),
        (vec_in(d, 5.0), prop::collection::vec(0.0..4.0f64, d)).prop_map(|(lo, w)| {
            let hi = lo.iter().zip(&w).map(|(l, w)| l + w).collect();
            Domain::boxed(lo, hi).unwrap()
        }),
    ]
}

fn point_pair_and_domain() -> impl Strategy<Value = (Domain, Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|d| (domain_strategy(d), vec_in(d, 50.0), vec_in(d, 50.0)))
}

/// A smooth or nonsmooth instance with a random start.
fn problem_strategy() -> impl Strategy<Value = ProblemSpec> {
    (0u64..1000, 0usize..4, -3.0..3.0f64).prop_map(|(seed, kind, shift)| {
        let p = match kind {
            0 => make_quadratic_1d(1.0 + seed as f64 / 10.0).unwrap(),
            1 => make_ridge_regression(30, 4, 1e-2, seed).unwrap(),
            2 => make_nonsmooth_lipschitz(NonsmoothKind::AbsSum, 3, seed).unwrap(),
            _ => make_nonsmooth_lipschitz(NonsmoothKind::MaxAffine, 2, seed).unwrap(),
        };
        let x0: Vec<f64> = p.initial_point.iter().map(|v| v + shift).collect();
        p.with_initial_point(x0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn projection_is_nonexpansive_and_idempotent((dom, x, y) in point_pair_and_domain()) {
        let px = dom.project(&x).unwrap();
        let py = dom.project(&y).unwrap();
        prop_assert!(dist(&px, &py) <= dist(&x, &y) + 1e-12);
        let ppx = dom.project(&px).unwrap();
        if matches!(dom, Domain::FullSpace) {
            prop_assert_eq!(&ppx, &px);
            prop_assert_eq!(&px, &x);
        } else {
            prop_assert!(dist(&ppx, &px) <= 1e-12);
        }
        prop_assert!(dom.contains(&px, 1e-12));
    }

    #[test]
    fn projection_is_the_closest_feasible_point((dom, x, y) in point_pair_and_domain()) {
        // Any feasible point is at least as far from x as the projection.
        let px = dom.project(&x).unwrap();
        let feasible = dom.project(&y).unwrap();
        prop_assert!(dist(&x, &px) <= dist(&x, &feasible) + 1e-12);
    }

    #[test]
    fn objective_evaluation_is_deterministic(p in problem_strategy()) {
        let x = &p.initial_point;
        prop_assert_eq!(p.objective.value(x).to_bits(), p.objective.value(x).to_bits());
        let (g1, g2) = (p.objective.gradient(x), p.objective.gradient(x));
        prop_assert!(g1.iter().zip(&g2).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn dowg_estimators_are_monotone_and_recomputable(p in problem_strategy(), r_exp in -8.0..-1.0f64, steps in 1usize..300) {
        let r_eps = 10f64.powf(r_exp);
        let config = p.config(OptimizerKind::Dowg, steps).with_r_eps(r_eps);
        let report = p.run(&config).unwrap();
        let xs = iterates(&config, &p.objective, &p.initial_point).unwrap();
        let mut v = 0.0;
        let mut num = vec![0.0; p.dim()];
        let mut den = 0.0;
        let mut prev: Option<&StepRecord> = None;
        for (k, r) in report.records.iter().enumerate() {
            let rbar = r.rbar.unwrap();
            prop_assert!(rbar >= r_eps);
            // rbar_k = max(r_eps, max_{j<=k} |x_j - x_0|)
            let expected = xs[..=k].iter().map(|x| dist(x, &xs[0])).fold(r_eps, f64::max);
            prop_assert_eq!(rbar, expected);
            if let Some(q) = prev {
                prop_assert!(rbar >= q.rbar.unwrap());
                prop_assert!(r.v.unwrap() >= q.v.unwrap());
            }
            v += rbar * rbar * r.grad_norm * r.grad_norm;
            prop_assert!((r.v.unwrap() - v).abs() <= 1e-10 * v);
            for (n, x) in num.iter_mut().zip(&xs[k]) {
                *n += rbar * rbar * x;
            }
            den += rbar * rbar;
            prev = Some(r);
        }
        if let Some(avg) = &report.avg_x {
            let recomputed: Vec<f64> = num.iter().map(|n| n / den).collect();
            prop_assert!(dist(avg, &recomputed) <= 1e-10 * norm(&recomputed).max(1e-300));
        }
    }

    #[test]
    fn dog_and_dowg_share_the_first_step(p in problem_strategy()) {
        let a = p.run(&p.config(OptimizerKind::Dowg, 1)).unwrap();
        let b = p.run(&p.config(OptimizerKind::Dog, 1)).unwrap();
        // r^2 / sqrt(r^2 g^2) and r / sqrt(g^2) round differently.
        prop_assert!(dist(&a.final_x, &b.final_x) <= 1e-12 * norm(&a.final_x).max(1.0));
        if let (Some(ra), Some(rb)) = (a.records.first(), b.records.first()) {
            prop_assert!((ra.stepsize - rb.stepsize).abs() <= 1e-14 * ra.stepsize);
            prop_assert_eq!(ra.rbar, Some(1e-6));
        }
    }

    #[test]
    fn dowg_stepsize_dominates_dog_formula(p in problem_strategy(), steps in 1usize..400) {
        let report = p.run(&p.config(OptimizerKind::Dowg, steps)).unwrap();
        let s = check_stepsize_domination(&report).unwrap();
        prop_assert_eq!(s.violations, 0);
        prop_assert!(s.max_stepsize_error <= 1e-12);
        prop_assert!(s.max_v_error <= 1e-10);
    }

    #[test]
    fn ngd_is_scale_free_on_sign_gradient_problems(
        kind in 0usize..3,
        seed in 0u64..500,
        eta in 0.001..1.0f64,
        alpha in prop::sample::select(vec![0.01, 1.0, 100.0]),
    ) {
        let p = match kind {
            0 => make_quadratic_1d(100.0).unwrap(),
            1 => make_nonsmooth_lipschitz(NonsmoothKind::AbsSum, 4, seed).unwrap(),
            _ => make_ridge_regression(20, 1, 1e-2, seed).unwrap(),
        };
        let scaled = p.scaled(alpha).unwrap();
        let config = p.config(OptimizerKind::Ngd, 100).with_eta(eta);
        let a = iterates(&config, &p.objective, &p.initial_point).unwrap();
        let b = iterates(&config, &scaled.objective, &p.initial_point).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(x.iter().zip(y).all(|(u, v)| u.to_bits() == v.to_bits()));
        }
    }

    #[test]
    fn gd_gap_is_nonincreasing_below_two_over_l(l in 0.1..1000.0f64, factor in 0.01..1.99f64, x0 in -100.0..100.0f64) {
        let p = make_quadratic_1d(l).unwrap().with_initial_point(vec![x0]);
        let report = p.run(&p.config(OptimizerKind::Gd, 200).with_eta(factor / l)).unwrap();
        for w in report.records.windows(2) {
            prop_assert!(w[1].f_gap.unwrap() <= w[0].f_gap.unwrap());
        }
    }

    #[test]
    fn ngd_best_value_is_nonincreasing(p in problem_strategy(), eta in 0.001..1.0f64, steps in 1usize..200) {
        let report = p.run(&p.config(OptimizerKind::Ngd, steps).with_eta(eta)).unwrap();
        let running_min = report.records.iter().map(|r| r.f_value).fold(f64::INFINITY, f64::min);
        prop_assert!(report.best_value <= running_min);
        for r in &report.records {
            prop_assert_eq!(r.effective_stepsize, eta / r.grad_norm);
        }
    }

    #[test]
    fn iterates_stay_feasible(p in problem_strategy(), opt in prop::sample::select(vec![OptimizerKind::Gd, OptimizerKind::Ngd, OptimizerKind::Dog, OptimizerKind::Dowg])) {
        let mut config = p.config(opt, 100);
        if opt.needs_eta() {
            config = config.with_eta(0.05);
        }
        for x in iterates(&config, &p.objective, &p.initial_point).unwrap() {
            prop_assert!(p.domain.contains(&x, 1e-9));
        }
    }

    #[test]
    fn csv_round_trips_arbitrary_floats(vals in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 6), flags in prop::collection::vec(any::<bool>(), 5)) {
        let opt = |i: usize, v: f64| flags[i].then_some(v);
        let rec = StepRecord {
            step: 7,
            f_value: vals[0],
            f_gap: opt(0, vals[1]),
            grad_norm: vals[2].abs(),
            stepsize: vals[3],
            effective_stepsize: vals[4],
            rbar: opt(1, vals[5]),
            v: opt(2, vals[0]),
            distance_to_opt: opt(3, vals[1]),
            avg_f_gap: opt(4, -vals[2]),
        };
        let mut buf = Vec::new();
        write_csv_to(std::slice::from_ref(&rec), &mut buf).unwrap();
        let back = read_csv_from(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(back[0].f_value.to_bits(), rec.f_value.to_bits());
        prop_assert_eq!(&back[0], &rec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn nondecreasing_sequence_lemma(start in 0.0..100.0f64, incs in prop::collection::vec(prop_oneof![Just(0.0), 0.0..1e3f64, 0.0..1e-3f64], 0..100)) {
        let mut a = vec![start];
        for inc in incs {
            let next = a.last().unwrap() + inc;
            a.push(next);
        }
        let (lhs, rhs) = lemma_seq_check(&a).unwrap();
        prop_assert!(lhs <= rhs + 1e-12, "{} > {}", lhs, rhs);
    }

    #[test]
    fn log_ratio_lemma(start in 1e-3..1e3f64, ratios in prop::collection::vec(prop_oneof![Just(1.0), 1.0..1.001f64, 1.0..3.0f64], 1..100)) {
        let mut s = vec![start];
        for r in ratios {
            let next = s.last().unwrap() * r;
            s.push(next);
        }
        let (lhs, rhs) = lemma_log_ratio_check(&s).unwrap();
        prop_assert!(lhs >= rhs - 1e-12, "{} < {}", lhs, rhs);
    }
}
