use qmc_core::cubature::*;
use qmc_core::integrands::*;
use qmc_core::ld::{child_seed, Family, Ordering, RandomizationKind};
use qmc_core::measures::*;
use qmc_core::QmcError;

fn tol(eps: f64) -> ToleranceSpec {
    ToleranceSpec::absolute(eps).unwrap()
}

fn run(p: &Problem, criterion: &str, seed: u64, eps: f64) -> CubatureResult {
    let c = CriterionSpec::by_name(criterion).unwrap();
    integrate(
        p,
        &SamplerSpec::new(c.default_family(), seed),
        &c,
        &tol(eps),
    )
    .unwrap()
}

#[test]
fn criteria_cover_the_keister_value() {
    let p = keister_problem(3, None).unwrap();
    let mu = keister_oracle(3).unwrap();
    for criterion in ["qmc-rep", "qmc-net-decay", "qmc-lattice-decay", "mc-clt"] {
        let eps = if criterion == "mc-clt" { 2e-2 } else { 1e-3 };
        let mut misses = 0;
        for s in 0..20 {
            let r = run(&p, criterion, child_seed(40, s), eps);
            assert!(r.converged(), "{criterion}: {r}");
            assert!(r.error_bound <= eps);
            if (r.estimate - mu).abs() > eps {
                misses += 1;
            }
        }
        assert!(misses <= 1, "{criterion}: {misses} misses");
    }
}

#[test]
fn replications_over_every_ld_family() {
    let p = keister_problem(2, None).unwrap();
    let mu = keister_oracle(2).unwrap();
    let c = CriterionSpec::by_name("qmc-rep").unwrap();
    for spec in [
        SamplerSpec::lattice(3),
        SamplerSpec::net(3),
        SamplerSpec::halton(3),
    ] {
        let r = integrate(&p, &spec, &c, &tol(1e-3)).unwrap();
        assert!(r.converged());
        assert!((r.estimate - mu).abs() < 1e-3);
        assert_eq!(r.n_total % 16, 0);
    }
}

#[test]
fn net_decay_sample_size_near_paper_scale() {
    let p = keister_problem(5, None).unwrap();
    for s in 0..10 {
        let r = run(&p, "qmc-net-decay", child_seed(2, s), 1e-3);
        assert!(r.converged());
        assert!(
            (1 << 10..=1 << 16).contains(&r.n_total),
            "n = {}",
            r.n_total
        );
    }
}

#[test]
fn importance_sampling_leaves_keister_unchanged() {
    let d = 1;
    let eps = 1e-4;
    let gauss = keister_problem(
        d,
        Some(TransformLadder::matching(
            isotropic_gaussian_transform(d, 0.75).unwrap(),
        )),
    )
    .unwrap();
    let kuma = keister_problem(
        d,
        Some(
            TransformLadder::new(
                vec![
                    kumaraswamy_transform(vec![0.8], vec![0.8]).unwrap(),
                    isotropic_gaussian_transform(d, 1.0).unwrap(),
                ],
                Measure::Lebesgue(d),
            )
            .unwrap(),
        ),
    )
    .unwrap();
    let problems = [keister_problem(d, None).unwrap(), gauss, kuma];
    let estimates: Vec<f64> = problems
        .iter()
        .map(|p| run(p, "qmc-net-decay", 5, eps).estimate)
        .collect();
    for a in &estimates {
        for b in &estimates {
            assert!((a - b).abs() <= 2.0 * eps, "{estimates:?}");
        }
    }
}

#[test]
fn constant_integrands_stop_immediately() {
    let opt = AsianCall {
        s0: 100.0,
        strike: 90.0,
        rate: 0.05,
        sigma: 0.0,
        tau: 1.0,
        d: 8,
    };
    let p = asian_call_problem(opt, 0.0).unwrap();
    let price = asian_zero_volatility_price(&opt);
    for criterion in ["qmc-rep", "qmc-net-decay", "qmc-lattice-decay", "mc-clt"] {
        let r = run(&p, criterion, 1, 1e-6);
        assert!(r.converged());
        assert_eq!(r.error_bound, 0.0, "{criterion}");
        assert!((r.estimate - price).abs() < 1e-12);
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let p = keister_problem(5, None).unwrap();
    let c = CriterionSpec::NetCoeffDecay(DecayParams {
        m_max: 12,
        ..DecayParams::default()
    });
    let r = integrate(&p, &SamplerSpec::net(1), &c, &tol(1e-9)).unwrap();
    assert_eq!(r.termination, Termination::BudgetExhausted);
    assert_eq!(r.n_total, 1 << 12);
    assert!(r.error_bound > 1e-9);
    assert!(r.to_json(false).contains("\"budget_exhausted\""));
    let c = CriterionSpec::McClt(CltParams {
        n_max: 1 << 14,
        ..CltParams::default()
    });
    let r = integrate(&p, &SamplerSpec::iid(1), &c, &tol(1e-6)).unwrap();
    assert_eq!(r.termination, Termination::BudgetExhausted);
    assert_eq!(r.n_total, 1024 + (1 << 14));
}

#[test]
fn relative_tolerance() {
    let p = keister_problem(10, None).unwrap();
    let t = ToleranceSpec::new(1e-12, 1e-2).unwrap();
    let c = CriterionSpec::by_name("qmc-rep").unwrap();
    let r = integrate(&p, &SamplerSpec::net(4), &c, &t).unwrap();
    assert!(r.converged());
    let mu = keister_oracle(10).unwrap();
    assert!((r.estimate - mu).abs() <= 1e-2 * mu.abs());
    assert!(r.tolerance > 1.0);
}

#[test]
fn pairing_rules() {
    let p = keister_problem(2, None).unwrap();
    let t = tol(1e-2);
    let usage = |s: SamplerSpec, c: &str| {
        matches!(
            integrate(&p, &s, &CriterionSpec::by_name(c).unwrap(), &t),
            Err(QmcError::Usage(_))
        )
    };
    assert!(usage(SamplerSpec::lattice(1), "qmc-net-decay"));
    assert!(usage(SamplerSpec::net(1), "qmc-lattice-decay"));
    assert!(usage(SamplerSpec::iid(1), "qmc-rep"));
    assert!(usage(SamplerSpec::net(1), "mc-clt"));
    assert!(usage(
        SamplerSpec::net(1).with_randomization(RandomizationKind::None),
        "qmc-rep"
    ));
    assert!(usage(
        SamplerSpec::lattice(1).with_ordering(Ordering::Linear),
        "qmc-lattice-decay"
    ));
    assert!(usage(
        SamplerSpec::lattice(1).with_randomization(RandomizationKind::None),
        "qmc-lattice-decay"
    ));
    assert!(CriterionSpec::by_name("bayes").is_err());
    assert!(ToleranceSpec::absolute(0.0).is_err());
    assert!(ToleranceSpec::new(1e-3, -1.0).is_err());
    assert_eq!(
        CriterionSpec::by_name("mc-clt").unwrap().default_family(),
        Family::Iid
    );
}

#[test]
fn deterministic_given_seed() {
    let p = keister_problem(4, None).unwrap();
    for criterion in ["qmc-rep", "qmc-net-decay", "qmc-lattice-decay", "mc-clt"] {
        let a = run(&p, criterion, 77, 1e-2);
        let b = run(&p, criterion, 77, 1e-2);
        assert_eq!(a.to_json(false), b.to_json(false));
    }
}

#[test]
fn json_record() {
    let p = keister_problem(2, None).unwrap();
    let r = run(&p, "qmc-net-decay", 3, 1e-2);
    let j = r.to_json(false);
    assert!(j.starts_with("{\"estimate\":"));
    assert!(j.contains("\"time_sec\":null"));
    assert!(j.contains("\"criterion\":\"qmc-net-decay\""));
    assert!(j.contains(&format!("\"n\":{}", r.n_total)));
    assert!(!r.to_json(true).contains("null"));
}
