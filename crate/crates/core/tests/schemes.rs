use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabcorr_core::schemes::{douglas_step, hv_step, hw_step, sc1a_step, sc1b_step};
use stabcorr_core::stability::stability_r;
use stabcorr_core::{
    step, AffineOperator, DiagonalOperator, Layout, SchemeConfig, SplitSystem, StateF32, StateF64,
    StateVector,
};

fn scalar_sys(z: &[f64]) -> SplitSystem<f64> {
    SplitSystem::diagonal(vec![z[0]], z[1..].iter().map(|&l| vec![l]).collect()).unwrap()
}

fn one() -> StateF64 {
    StateVector::scalar(vec![1.0]).unwrap()
}

fn prod(z: &[f64], theta: f64) -> f64 {
    z.iter().map(|&x| 1.0 - theta * x).product()
}

/// Amplification factor of the Douglas method on `u' = (z0 + ... + zs) u`, `dt = 1`.
fn douglas_oracle(z: &[f64], theta: f64) -> f64 {
    1.0 + z.iter().sum::<f64>() / prod(&z[1..], theta)
}

fn hv_oracle(z: &[f64], theta: f64) -> f64 {
    let big = z.iter().sum::<f64>();
    let p = prod(&z[1..], theta);
    let vs = 1.0 + big / p;
    let v0 = 1.0 + 0.5 * (big + big * vs);
    vs + (v0 - vs) / p
}

fn hw_oracle(z: &[f64], theta: f64) -> f64 {
    let big = z.iter().sum::<f64>();
    let tail: f64 = z[1..].iter().sum();
    let p = prod(&z[1..], theta);
    let vs = 1.0 + big / p;
    let v0 = 1.0 + big + 0.5 * z[0] * (vs - 1.0) + (0.5 - theta) * tail * (vs - 1.0);
    1.0 + (v0 - 1.0) / p
}

fn random_z(rng: &mut ChaCha8Rng, s: usize) -> Vec<f64> {
    (0..=s)
        .map(|_| {
            if rng.random_bool(0.8) {
                -rng.random_range(0.0..20.0)
            } else {
                rng.random_range(0.0..1.0)
            }
        })
        .collect()
}

#[test]
fn sc1a_and_sc1b_reproduce_stability_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let s = rng.random_range(1..=4);
        let z = random_z(&mut rng, s);
        let zc: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let r = stability_r(&zc).unwrap();
        assert!(r.im == 0.0);
        let sys = scalar_sys(&z);
        let a = sc1a_step(&sys, &one(), 0.0, 1.0).unwrap()[0];
        let b = sc1b_step(&sys, &one(), 0.0, 1.0).unwrap()[0];
        let scale = r.re.abs().max(1.0);
        assert!((a - r.re).abs() <= 1e-13 * scale, "SC1A z={z:?}: {a} vs {}", r.re);
        assert!((b - r.re).abs() <= 1e-13 * scale, "SC1B z={z:?}: {b} vs {}", r.re);
    }
}

#[test]
fn douglas_hv_hw_match_scalar_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let theta_l = 1.0 - 0.5 * 2f64.sqrt();
    for _ in 0..2000 {
        let s = rng.random_range(1..=4);
        let z = random_z(&mut rng, s);
        let sys = scalar_sys(&z);
        for theta in [0.5, theta_l, 1.0] {
            let d = douglas_step(&sys, &one(), 0.0, 1.0, theta.max(0.5)).unwrap()[0];
            let e = douglas_oracle(&z, theta.max(0.5));
            assert!((d - e).abs() <= 1e-13 * e.abs().max(1.0));
            let h = hv_step(&sys, &one(), 0.0, 1.0, theta).unwrap()[0];
            let e = hv_oracle(&z, theta);
            assert!((h - e).abs() <= 1e-12 * e.abs().max(1.0), "HV {z:?} {theta}");
            let w = hw_step(&sys, &one(), 0.0, 1.0, theta).unwrap()[0];
            let e = hw_oracle(&z, theta);
            assert!((w - e).abs() <= 1e-12 * e.abs().max(1.0), "HW {z:?} {theta}");
        }
    }
}

fn all_configs() -> Vec<SchemeConfig<f64>> {
    let tl = SchemeConfig::<f64>::l_stable_theta();
    vec![
        SchemeConfig::douglas(0.5),
        SchemeConfig::sc1a(),
        SchemeConfig::sc1b(),
        SchemeConfig::hv(tl),
        SchemeConfig::hw(tl),
        SchemeConfig::craig_sneyd(),
    ]
}

#[test]
fn steady_states_are_preserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = 6;
    let u_star: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
    let l0: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..0.5)).collect();
    let parts: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..m).map(|_| -rng.random_range(0.0..50.0)).collect())
        .collect();
    let g: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    // explicit constant chosen so that F(u*) = 0
    let c0: Vec<f64> = (0..m)
        .map(|i| {
            -(l0[i] * u_star[i]
                + (0..3).map(|j| parts[j][i] * u_star[i] + g[j][i]).sum::<f64>())
        })
        .collect();
    let f0 = move |_t: f64, v: &[f64], out: &mut [f64]| {
        for i in 0..v.len() {
            out[i] = l0[i] * v[i] + c0[i];
        }
    };
    let ops: Vec<Box<dyn AffineOperator<f64>>> = parts
        .iter()
        .zip(&g)
        .map(|(d, gj)| {
            Box::new(DiagonalOperator::new(d.clone()).with_constant_source(gj.clone()))
                as Box<dyn AffineOperator<f64>>
        })
        .collect();
    let sys = SplitSystem::new(m, Layout::Scalar, Box::new(f0), ops).unwrap();
    let u = StateVector::scalar(u_star.clone()).unwrap();
    for cfg in all_configs() {
        for dt in [0.01, 0.3, 2.0] {
            let next = step(&sys, &cfg, &u, 0.7, dt).unwrap();
            for (a, b) in next.iter().zip(&u_star) {
                assert!((a - b).abs() < 1e-13, "{cfg} dt={dt}");
            }
        }
    }
}

fn global_error(cfg: &SchemeConfig<f64>, n: usize) -> f64 {
    let sys = scalar_sys(&[0.3, 0.3, 0.4]);
    let dt = 1.0 / n as f64;
    let mut u = one();
    for k in 0..n {
        u = step(&sys, cfg, &u, k as f64 * dt, dt).unwrap();
    }
    (u[0] - 1f64.exp()).abs()
}

#[test]
fn classical_orders_on_scalar_problem() {
    for cfg in all_configs() {
        let ratio = global_error(&cfg, 40) / global_error(&cfg, 80);
        let order = ratio.log2();
        let expected = if cfg.label() == "DOUGLAS" { 1.0 } else { 2.0 };
        assert!((order - expected).abs() < 0.1, "{cfg}: order {order}");
    }
}

#[test]
fn without_explicit_part_modified_schemes_equal_douglas() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = 5;
    let parts: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..m).map(|_| -rng.random_range(0.0..30.0)).collect())
        .collect();
    let sys = SplitSystem::diagonal(vec![0.0; m], parts).unwrap();
    let u = StateVector::scalar((0..m).map(|i| 1.0 + i as f64).collect()).unwrap();
    let d = douglas_step(&sys, &u, 0.0, 0.2, 0.5).unwrap();
    let a = sc1a_step(&sys, &u, 0.0, 0.2).unwrap();
    let b = sc1b_step(&sys, &u, 0.0, 0.2).unwrap();
    for i in 0..m {
        assert!((d[i] - a[i]).abs() < 1e-15);
        assert!((d[i] - b[i]).abs() < 1e-15);
    }
}

#[test]
fn single_precision_path() {
    let sys: SplitSystem<f32> =
        SplitSystem::diagonal(vec![-0.5], vec![vec![-1.0], vec![-2.0]]).unwrap();
    let u: StateF32 = StateVector::scalar(vec![1.0]).unwrap();
    let next = step(&sys, &SchemeConfig::sc1a(), &u, 0.0, 0.1).unwrap();
    let z = [-0.05f64, -0.1, -0.2];
    let zc: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let r = stability_r(&zc).unwrap().re;
    assert!((next[0] as f64 - r).abs() < 1e-6);
}

#[test]
fn stage_count_matches_passes() {
    let sys = scalar_sys(&[-0.1, -1.0, -2.0, -3.0]);
    for cfg in all_configs() {
        sys.reset_stage_solve_count();
        step(&sys, &cfg, &one(), 0.0, 0.1).unwrap();
        assert_eq!(sys.stage_solve_count(), 3 * cfg.kind.passes(), "{cfg}");
    }
}
