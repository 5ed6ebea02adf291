use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabcorr_core::femdd::{
    assemble_split_fem, build_schnakenberg_system, schnakenberg_initial_state, stage_solve_dd,
    triangulate_hexagon, write_snapshot_csv, MeshHex, PartitionOfUnity, SplitStiffness, PARTS,
};
use stabcorr_core::problems::SchnakParams;
use stabcorr_core::{
    step, AffineOperator, Layout, SchemeConfig, SplitSystem, StateVector, ZeroExplicit,
};

fn setup(n: usize, d: f64) -> (MeshHex<f64>, SplitStiffness<f64>) {
    let mesh = triangulate_hexagon(n).unwrap();
    let s = assemble_split_fem(&mesh, &PartitionOfUnity::squares(), d).unwrap();
    (mesh, s)
}

fn random_vec(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

#[test]
fn parts_sum_to_full_stiffness() {
    let (_, s) = setup(8, 1.0);
    let n = s.nodes();
    let scale = s.full.max_abs();
    for i in 0..n {
        let (cols, vals) = s.full.row(i);
        for (&j, &a) in cols.iter().zip(vals) {
            let sum: f64 = (0..PARTS).map(|k| s.parts[k].get(i, j)).sum();
            assert!((sum - a).abs() <= 1e-14 * scale);
        }
    }
}

#[test]
fn parts_are_symmetric_negative_semidefinite() {
    let (_, s) = setup(6, 0.7);
    for (j, a) in s.parts.iter().enumerate() {
        assert!(a.is_symmetric(1e-14), "part {j}");
        for seed in 0..20 {
            let v = random_vec(s.nodes(), seed);
            let mut av = vec![0.0; v.len()];
            a.mul_vec(&v, &mut av);
            let q: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
            assert!(q <= 1e-12, "part {j}: v^T A v = {q}");
        }
    }
}

#[test]
fn unsupported_rows_are_empty() {
    let (mesh, s) = setup(10, 1.0);
    let pou = PartitionOfUnity::squares();
    for j in 0..PARTS {
        for (i, p) in mesh.nodes.iter().enumerate() {
            // a node whose surrounding elements all have zero weight carries no row
            let touching: Vec<usize> = mesh
                .triangles
                .iter()
                .enumerate()
                .filter(|(_, t)| t.contains(&i))
                .map(|(e, _)| e)
                .collect();
            let any_weight = touching.iter().any(|&e| {
                let c = mesh.centroid(e);
                pou.weight(j, c[0], c[1]) > 0.0
            });
            assert_eq!(s.parts[j].row_is_active(i), any_weight, "node {i} {p:?} part {j}");
        }
    }
}

#[test]
fn square_subdomains_have_four_components() {
    let (_, s) = setup(16, 1.0);
    for j in 0..PARTS {
        assert_eq!(s.components[j].len(), 4, "part {j}");
        let mut seen = vec![false; s.nodes()];
        for comp in &s.components[j] {
            for &i in comp {
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
    }
}

#[test]
fn stage_solve_residual() {
    let (_, s) = setup(8, 1.0);
    let rhs = random_vec(s.nodes(), 9);
    for j in 0..PARTS {
        for gamma in [1e-3, 0.1, 10.0] {
            let w = stage_solve_dd(&s, j, gamma, &rhs).unwrap();
            let mut aw = vec![0.0; w.len()];
            s.parts[j].mul_vec(&w, &mut aw);
            let mrhs: Vec<f64> = rhs.iter().zip(&s.mass).map(|(r, m)| r * m).collect();
            let scale = mrhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let res = (0..w.len())
                .map(|i| (s.mass[i] * w[i] - gamma * aw[i] - mrhs[i]).abs())
                .fold(0.0, f64::max);
            assert!(res / scale <= 1e-10, "part {j} gamma {gamma}: {res}");
        }
    }
}

#[test]
fn zero_gamma_and_unsupported_nodes_pass_through() {
    let (_, s) = setup(8, 1.0);
    let rhs = random_vec(s.nodes(), 4);
    assert_eq!(stage_solve_dd(&s, 2, 0.0, &rhs).unwrap(), rhs);
    let w = stage_solve_dd(&s, 2, 0.5, &rhs).unwrap();
    for i in 0..s.nodes() {
        if !s.parts[2].row_is_active(i) {
            assert_eq!(w[i], rhs[i]);
        }
    }
}

#[test]
fn stage_solves_are_thread_count_independent() {
    let rhs = random_vec(3 * 12 * 12 + 3 * 12 + 1, 5);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let (_, s) = setup(12, 0.3);
            (0..PARTS)
                .map(|j| stage_solve_dd(&s, j, 0.02, &rhs).unwrap())
                .collect::<Vec<_>>()
        })
    };
    let a = run(1);
    let b = run(4);
    for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn stage_chain_conserves_mass_weighted_mean() {
    let (_, s) = setup(8, 1.0);
    let mut v = random_vec(s.nodes(), 11);
    let total = |v: &[f64]| v.iter().zip(&s.mass).map(|(a, m)| a * m).sum::<f64>();
    let before = total(&v);
    for j in 0..PARTS {
        v = stage_solve_dd(&s, j, 0.05, &v).unwrap();
    }
    assert!((total(&v) - before).abs() < 1e-12);
}

#[test]
fn schnakenberg_steady_state_is_equilibrium() {
    let mesh = triangulate_hexagon(6).unwrap();
    let p = SchnakParams::default();
    let sys = build_schnakenberg_system(&mesh, &PartitionOfUnity::squares(), &p).unwrap();
    assert_eq!(sys.s(), 4);
    let (us, vs) = p.steady_state();
    let state: Vec<f64> = (0..mesh.node_count()).flat_map(|_| [us, vs]).collect();
    let f = sys.eval(0.0, &state);
    assert!(f.iter().all(|v| v.abs() < 1e-9));
}

#[test]
fn constant_state_follows_reaction_ode() {
    let mesh = triangulate_hexagon(6).unwrap();
    let p = SchnakParams::default();
    let sys = build_schnakenberg_system(&mesh, &PartitionOfUnity::squares(), &p).unwrap();
    let (u, v) = (0.5, 1.3);
    let state: Vec<f64> = (0..mesh.node_count()).flat_map(|_| [u, v]).collect();
    let f = sys.eval(0.0, &state);
    let fu = p.kappa * (p.a - u + u * u * v);
    let fv = p.kappa * (p.b - u * u * v);
    for c in f.chunks_exact(2) {
        assert!((c[0] - fu).abs() < 1e-8 && (c[1] - fv).abs() < 1e-8);
    }
}

#[test]
fn initial_condition_drives_nonzero_rhs_near_bump() {
    let mesh = triangulate_hexagon::<f64>(8).unwrap();
    let p = SchnakParams::default();
    let sys = build_schnakenberg_system(&mesh, &PartitionOfUnity::squares(), &p).unwrap();
    let u0 = schnakenberg_initial_state(&mesh, &p).unwrap();
    let f = sys.eval(0.0, &u0);
    assert!(f.iter().all(|v| v.is_finite()));
    let near = mesh
        .nodes
        .iter()
        .position(|q| (q[0] - 0.25).abs() < 0.07 && (q[1] - 1.0 / 6.0).abs() < 0.07)
        .unwrap();
    assert!(f[2 * near].abs() > 1e-3);

    let mut csv = Vec::new();
    write_snapshot_csv(&mesh, &u0, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,u,v"));
    assert_eq!(text.lines().count(), mesh.node_count() + 1);
}

/// Unsplit system with the single implicit part `M^{-1} A`.
struct FullLaplacian(std::sync::Arc<SplitStiffness<f64>>);

impl AffineOperator<f64> for FullLaplacian {
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.0.full.mul_vec(v, out);
        for (o, m) in out.iter_mut().zip(&self.0.mass) {
            *o /= m;
        }
    }
    fn source(&self, _t: f64, out: &mut [f64]) {
        out.fill(0.0);
    }
    fn stage_solve(&self, gamma: f64, rhs: &[f64], out: &mut [f64]) -> stabcorr_core::Result<()> {
        // dense Gaussian elimination oracle on (M - gamma A) w = M rhs
        let n = rhs.len();
        let mut a = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            let (cols, vals) = self.0.full.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                a[i][j] = -gamma * v;
            }
            a[i][i] += self.0.mass[i];
            a[i][n] = self.0.mass[i] * rhs[i];
        }
        for k in 0..n {
            let p = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs())).unwrap();
            a.swap(k, p);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                if f != 0.0 {
                    for j in k..=n {
                        a[i][j] -= f * a[k][j];
                    }
                }
            }
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * out[j]).sum();
            out[i] = (a[i][n] - s) / a[i][i];
        }
        Ok(())
    }
}

#[test]
fn split_step_converges_to_unsplit_trapezoidal_at_third_order() {
    let mesh = triangulate_hexagon(3).unwrap();
    let s = std::sync::Arc::new(
        assemble_split_fem(&mesh, &PartitionOfUnity::squares(), 1.0).unwrap(),
    );
    let n = mesh.node_count();
    let layout = Layout::Mesh { nodes: n, species: 1 };
    let split_ops: Vec<Box<dyn AffineOperator<f64>>> = (0..PARTS)
        .map(|j| {
            Box::new(stabcorr_core::femdd::DdOperator::new(vec![s.clone()], j).unwrap())
                as Box<dyn AffineOperator<f64>>
        })
        .collect();
    let split = SplitSystem::new(n, layout, Box::new(ZeroExplicit), split_ops).unwrap();
    let unsplit = SplitSystem::new(
        n,
        layout,
        Box::new(ZeroExplicit),
        vec![Box::new(FullLaplacian(s.clone()))],
    )
    .unwrap();
    let u0 = StateVector::new(
        mesh.nodes.iter().map(|p| (1.5 * p[0]).cos() * (p[1] + 0.3).sin()).collect(),
        layout,
    )
    .unwrap();
    let diff = |dt: f64| {
        let a = step(&split, &SchemeConfig::sc1a(), &u0, 0.0, dt).unwrap();
        let b = step(&unsplit, &SchemeConfig::sc1a(), &u0, 0.0, dt).unwrap();
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    let (d1, d2) = (diff(2e-4), diff(1e-4));
    let order = (d1 / d2).log2();
    assert!((order - 3.0).abs() < 0.3, "ratio order {order} ({d1:e}, {d2:e})");
}
