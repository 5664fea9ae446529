use irrlab::ffpoly::{count_irreducibles, factor, reduce_i64_monic, MonicPoly, Prime};
use irrlab::lab::{em_statistics, SamplerConfig};
use irrlab::pspace::{friable_profile, PTuple, PrimeTuple};
use num_bigint::BigUint;

#[test]
fn linear_friable_part_matches_direct_factorization() {
    let ctx = PrimeTuple::from_u64(&[2, 3]).unwrap();
    let cfg = SamplerConfig::new(15, -2, 6, 8).unwrap();
    for t in 0..500 {
        let coeffs = cfg.sample_coeffs(t);
        let comps: Vec<MonicPoly> = ctx
            .primes()
            .iter()
            .map(|&p| reduce_i64_monic(&coeffs, p).unwrap())
            .collect();
        let a = PTuple::new(ctx.clone(), comps.clone()).unwrap();
        let prof = friable_profile(&a, 1);
        let mut expected_deg = 0;
        let mut expected_omega = 0;
        for (slot, comp) in comps.iter().enumerate() {
            let p = ctx.get(slot);
            let mut direct = MonicPoly::one(p);
            for (f, m) in factor(comp).factors() {
                if f.degree() == 1 && !f.is_x() {
                    direct = direct.mul(&f.pow(*m));
                    expected_deg += *m as usize;
                    expected_omega += 1;
                }
            }
            assert_eq!(prof.friable_part.component(slot), &direct, "trial {t}, slot {slot}");
            // supported on X + 1 (mod 2) and X + 1, X + 2 (mod 3)
            for (f, _) in factor(prof.friable_part.component(slot)).factors() {
                assert!(f.degree() == 1 && f.coeffs()[0] != 0);
            }
        }
        assert_eq!(prof.total_deg_friable, expected_deg);
        assert_eq!(prof.omega_friable, expected_omega);
        assert_eq!(prof.friable_part.mul(&prof.nonfriable_part), a);
    }
}

#[test]
fn em_report_is_consistent() {
    let ctx = PrimeTuple::from_u64(&[2, 3, 5]).unwrap();
    let cfg = SamplerConfig::new(60, 0, 30, 4).unwrap();
    let trials = 3000;
    let mut previous = None;
    for m in 1..=4 {
        let r = em_statistics(&cfg, &ctx, m, trials, 0).unwrap();
        assert_eq!(r.deg_hist.values().sum::<u64>(), trials);
        assert_eq!(r.tau_hist.values().sum::<u64>(), trials);
        assert_eq!(r.omega_hist.values().sum::<u64>(), trials);
        assert!(r.not_em <= r.degree_fail + r.tau_fail);
        assert!(r.not_em >= r.degree_fail.max(r.tau_fail));
        assert!((r.degree_threshold - m as f64 * (r.sigma_m - 2.0)).abs() < 1e-12);
        assert!((r.log_tau_threshold - (1.0 - 1.0 / 3.0) * r.sigma_m).abs() < 1e-12);
        assert_eq!(r.x_power.len(), 3);
        for diag in &r.x_power {
            // N = 30 is a multiple of every prime: P(X | A_p) = 1/p exactly
            let first = &diag.rows[0];
            let p = diag.prime as f64;
            let sd = (1.0 / p * (1.0 - 1.0 / p) / trials as f64).sqrt();
            assert!((first.prob - 1.0 / p).abs() < 5.0 * sd, "p = {p}: {}", first.prob);
            assert!(diag.rows.windows(2).all(|w| w[1].count <= w[0].count));
        }
        if let Some(prev_sigma) = previous {
            assert!(r.sigma_m > prev_sigma);
        }
        previous = Some(r.sigma_m);
    }
}

#[test]
fn necklace_identity() {
    // sum_{d | k} d * I_p(d) = p^k
    for p in [2u64, 3, 5, 7] {
        let prime = Prime::new(p).unwrap();
        for k in 1..=8usize {
            let total: BigUint = (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| count_irreducibles(prime, d, false) * BigUint::from(d))
                .sum();
            assert_eq!(total, num_traits::pow(BigUint::from(p), k), "p = {p}, k = {k}");
        }
    }
}
