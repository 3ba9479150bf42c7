use approx::assert_abs_diff_eq;
use convfem::*;

fn free() -> OscillatorProblem {
    OscillatorProblem::free(1.0, 9.0, 0.0, 2.0, 10.0).unwrap()
}

fn forced() -> OscillatorProblem {
    OscillatorProblem::free(1.0, 9.0, 0.0, 0.0, 10.0)
        .unwrap()
        .with_forcing(Forcing::sinusoid(5.0, 3.6).unwrap())
}

#[test]
fn fem_and_marching_agree_on_uniform_meshes() {
    for p in [free(), forced()] {
        for n in [20, 100, 400] {
            let mesh = uniform_mesh(10.0, n).unwrap();
            let f = fem_trajectory(&p, &mesh).unwrap();
            let o = march_mesh(&p, &mesh).unwrap();
            for (a, b) in f.displacements.iter().zip(&o.displacements) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn fem_and_marching_agree_on_graded_mesh() {
    let mesh = Mesh::from_half_lengths(&[0.05, 0.1, 0.2, 0.15, 0.3], Some(0.07)).unwrap();
    let p = forced().with_horizon(mesh.horizon()).unwrap();
    let f = fem_trajectory(&p, &mesh).unwrap();
    let o = march_mesh(&p, &mesh).unwrap();
    for (a, b) in f.displacements.iter().zip(&o.displacements) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-11);
    }
}

#[test]
fn recovered_final_velocity_matches_marching() {
    for p in [free(), forced()] {
        let mesh = uniform_mesh(10.0, 200).unwrap();
        let gs = assemble_global(&mesh, &p).unwrap();
        let f = fem_trajectory(&p, &mesh).unwrap();
        let v = recover_final_velocity(&gs, &f.displacements).unwrap();
        let o = march_mesh(&p, &mesh).unwrap();
        assert_abs_diff_eq!(v, *o.velocities.unwrap().last().unwrap(), epsilon = 1e-9);
    }
}

#[test]
fn error_decreases_as_the_step_shrinks() {
    for p in [free(), forced()] {
        let errors: Vec<f64> = [0.1, 0.05, 0.025, 0.0125]
            .iter()
            .map(|&tau| {
                let n = (10.0f64 / tau).round() as usize;
                let traj = fem_trajectory(&p, &uniform_mesh(10.0, n).unwrap()).unwrap();
                error_metrics(&traj, &p).unwrap().max_abs_error
            })
            .collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    }
}

#[test]
fn solution_is_stationary_point_of_functional() {
    let p = forced();
    let mesh = uniform_mesh(10.0, 50).unwrap();
    let u = fem_trajectory(&p, &mesh).unwrap().displacements;
    let h = 1e-4;
    for i in 1..u.len() {
        let mut up = u.clone();
        let mut dn = u.clone();
        up[i] += h;
        dn[i] -= h;
        let g = (evaluate_global_functional(&mesh, &p, &up).unwrap()
            - evaluate_global_functional(&mesh, &p, &dn).unwrap())
            / (2.0 * h);
        assert!(g.abs() < 1e-8, "component {i}: {g}");
    }
}

#[test]
fn small_step_march_stays_bounded() {
    let traj = march(&free(), 0.01, 100_000).unwrap();
    let max = traj
        .displacements
        .iter()
        .fold(0.0f64, |m, u| m.max(u.abs()));
    assert!(max <= 2.0 / 3.0 * 1.01, "{max}");
}

#[test]
fn unstable_step_grows() {
    let traj = march(&free(), 1.2, 200).unwrap();
    let max = traj
        .displacements
        .iter()
        .fold(0.0f64, |m, u| m.max(u.abs()));
    assert!(max > 1e3);
}

#[test]
fn pointwise_forcing_matches_sinusoid() {
    let mesh = uniform_mesh(10.0, 100).unwrap();
    let p = forced();
    let q = forced().with_forcing(Forcing::pointwise(|s| 5.0 * (3.6 * s).sin()));
    let a = fem_trajectory(&p, &mesh).unwrap();
    let b = fem_trajectory(&q, &mesh).unwrap();
    for (x, y) in a.displacements.iter().zip(&b.displacements) {
        assert_abs_diff_eq!(x, y, epsilon = 1e-11);
    }
}
