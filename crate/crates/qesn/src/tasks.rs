//! Benchmark target generators: random inputs, the two linear-update maps
//! with polynomial readout, and the aircraft ODE pair.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reservoir::InputSequence;

/// L i.i.d. uniform draws in [0, 1].
pub fn generate_input<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<InputSequence> {
    if len == 0 {
        return Err(Error::InvalidArgument("input length must be >= 1".into()));
    }
    InputSequence::new((0..len).map(|_| rng.gen::<f64>()).collect())
}

/// Structure of the internal update matrix A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixKind {
    Dense,
    Sparse95,
}

/// Largest singular value of `a` by power iteration on A^T A.
pub fn sigma_max(a: &DMatrix<f64>, rel_tol: f64) -> f64 {
    let n = a.ncols();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0f64;
    for _ in 0..10_000 {
        let w = a.transpose() * (a * &v);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm; // Rayleigh quotient of A^T A at unit v
        v = w / norm;
        if (next - lambda).abs() <= rel_tol * next.abs() {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

/// Random matrix with entries uniform in [-1, 1] (95% zeroed for
/// `Sparse95`), rescaled so its largest singular value hits the target.
pub fn build_matrix_a<R: Rng + ?Sized>(
    kind: MatrixKind,
    n: usize,
    target_sigma_max: f64,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
    }
    if target_sigma_max <= 0.0 {
        return Err(Error::InvalidArgument(
            "target singular value must be positive".into(),
        ));
    }
    loop {
        let mut a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..=1.0));
        if kind == MatrixKind::Sparse95 {
            for entry in a.iter_mut() {
                if rng.gen::<f64>() < 0.95 {
                    *entry = 0.0;
                }
            }
        }
        let sigma = sigma_max(&a, 1e-9);
        if sigma == 0.0 {
            continue; // all-zero draw, resample
        }
        a *= target_sigma_max / sigma;
        return Ok(a);
    }
}

/// Linear internal update z(k) = A z(k-1) + u(k) c with a diagonal
/// second-degree polynomial readout y = d0 + d1.z + d2.(z*z).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMapTask {
    pub a: DMatrix<f64>,
    pub c: DVector<f64>,
    pub d0: f64,
    pub d1: DVector<f64>,
    pub d2: DVector<f64>,
    pub z0: DVector<f64>,
}

impl LinearMapTask {
    /// Draw a task with all free parameters uniform in [-1, 1] and z(0) = 0.
    pub fn generate<R: Rng + ?Sized>(
        kind: MatrixKind,
        n: usize,
        target_sigma_max: f64,
        rng: &mut R,
    ) -> Result<LinearMapTask> {
        let a = build_matrix_a(kind, n, target_sigma_max, rng)?;
        let uniform = |rng: &mut R| rng.gen_range(-1.0..=1.0);
        let c = DVector::from_fn(n, |_, _| uniform(rng));
        let d0 = uniform(rng);
        let d1 = DVector::from_fn(n, |_, _| uniform(rng));
        let d2 = DVector::from_fn(n, |_, _| uniform(rng));
        Ok(LinearMapTask {
            a,
            c,
            d0,
            d1,
            d2,
            z0: DVector::zeros(n),
        })
    }

    /// Iterate the map over the inputs, returning {y(k)} for k = 1..L.
    pub fn run(&self, inputs: &InputSequence) -> Result<Vec<f64>> {
        let n = self.a.nrows();
        if self.c.len() != n || self.d1.len() != n || self.d2.len() != n || self.z0.len() != n {
            return Err(Error::DimensionMismatch(
                "linear map parameter sizes disagree".into(),
            ));
        }
        let mut z = self.z0.clone();
        let mut targets = Vec::with_capacity(inputs.len());
        for k in 1..=inputs.len() {
            z = &self.a * &z + &self.c * inputs.at(k);
            let quadratic: f64 = self
                .d2
                .iter()
                .zip(z.iter())
                .map(|(d, zi)| d * zi * zi)
                .sum();
            targets.push(self.d0 + self.d1.dot(&z) + quadratic);
        }
        Ok(targets)
    }
}

/// How the [0, 1] input maps to the rudder deflection. The literal published
/// formula lands outside the stated deflection range and drives the dynamics
/// into a regime where the reset-rate optimum disappears, so the
/// range-consistent form is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RudderMapping {
    /// The published formula 0.5 u - 1, landing in [-1, -0.5].
    PaperLiteral,
    /// u - 0.5, landing in the stated deflection range [-0.5, 0.5].
    #[default]
    RangeConsistent,
}

pub fn map_input_to_rudder(u: f64, mapping: RudderMapping) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("input {u} outside [0, 1]")));
    }
    Ok(match mapping {
        RudderMapping::PaperLiteral => 0.5 * u - 1.0,
        RudderMapping::RangeConsistent => u - 0.5,
    })
}

/// Right-hand side of the horizontal-plane aircraft dynamics.
pub fn aircraft_derivative(x1: f64, x2: f64, u_tilde: f64) -> (f64, f64) {
    let poly1 = 5.0 * x1 - 4.0 * x1.powi(3) + x1.powi(5);
    let dx1 = x2 - 0.1 * poly1 * x1.cos() - 0.5 * u_tilde * x1.cos();
    let dx2 = -65.0 * x1 + 50.0 * x1.powi(3) - 15.0 * x1.powi(5) - x2 - 100.0 * u_tilde;
    (dx1, dx2)
}

/// Aircraft target generator: adaptive Dormand-Prince 5(4) integration under
/// zero-order-hold input, sampled once per unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AircraftTask {
    pub input_mapping: RudderMapping,
    pub initial_state: (f64, f64),
    pub sample_interval: f64,
    pub solver_rel_tol: f64,
    pub solver_abs_tol: f64,
}

impl Default for AircraftTask {
    fn default() -> AircraftTask {
        AircraftTask {
            input_mapping: RudderMapping::RangeConsistent,
            initial_state: (0.0, 0.0),
            sample_interval: 1.0,
            solver_rel_tol: 1e-8,
            solver_abs_tol: 1e-10,
        }
    }
}

impl AircraftTask {
    /// Returns x1 sampled at t = k * sample_interval for k = 1..L. The rudder
    /// is held constant on each interval at the value mapped from u(k).
    pub fn integrate(&self, inputs: &InputSequence) -> Result<Vec<f64>> {
        let mut state = [self.initial_state.0, self.initial_state.1];
        let mut samples = Vec::with_capacity(inputs.len());
        for k in 1..=inputs.len() {
            let u_tilde = map_input_to_rudder(inputs.at(k), self.input_mapping)?;
            let t0 = (k - 1) as f64 * self.sample_interval;
            let t1 = k as f64 * self.sample_interval;
            state = dopri5_interval(
                state,
                t0,
                t1,
                u_tilde,
                self.solver_rel_tol,
                self.solver_abs_tol,
            )?;
            samples.push(state[0]);
        }
        Ok(samples)
    }
}

// Dormand-Prince 5(4) Butcher tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn rhs(state: [f64; 2], u_tilde: f64) -> [f64; 2] {
    let (dx1, dx2) = aircraft_derivative(state[0], state[1], u_tilde);
    [dx1, dx2]
}

fn dopri5_interval(
    mut y: [f64; 2],
    t0: f64,
    t1: f64,
    u_tilde: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<[f64; 2]> {
    let mut t = t0;
    let mut h = (t1 - t0) * 0.1;
    let min_step = (t1 - t0) * 1e-14;
    while t < t1 {
        if h > t1 - t {
            h = t1 - t;
        }
        let mut k = [[0.0f64; 2]; 7];
        k[0] = rhs(y, u_tilde);
        for stage in 1..7 {
            let mut arg = y;
            for prev in 0..stage {
                let coeff = A[stage - 1][prev];
                if coeff != 0.0 {
                    arg[0] += h * coeff * k[prev][0];
                    arg[1] += h * coeff * k[prev][1];
                }
            }
            k[stage] = rhs(arg, u_tilde);
        }
        let mut y5 = y;
        let mut y4 = y;
        for stage in 0..7 {
            for dim in 0..2 {
                y5[dim] += h * B5[stage] * k[stage][dim];
                y4[dim] += h * B4[stage] * k[stage][dim];
            }
        }
        // Scaled RMS error of the embedded pair.
        let mut err = 0.0f64;
        for dim in 0..2 {
            let scale = abs_tol + rel_tol * y[dim].abs().max(y5[dim].abs());
            let e = (y5[dim] - y4[dim]) / scale;
            err += e * e;
        }
        err = (err / 2.0).sqrt();

        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < min_step && t < t1 {
            return Err(Error::StepSizeUnderflow {
                interval_start: t0,
                interval_end: t1,
            });
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generate_input_range_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let a = generate_input(1000, &mut rng).unwrap();
        assert!(a.values().iter().all(|&u| (0.0..=1.0).contains(&u)));

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let b = generate_input(1000, &mut rng).unwrap();
        assert_eq!(a.values(), b.values());

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let long = generate_input(100_000, &mut rng).unwrap();
        let mean = long.values().iter().sum::<f64>() / long.len() as f64;
        assert!((mean - 0.5).abs() < 0.01, "sample mean {mean}");
    }

    #[test]
    fn sigma_max_matches_full_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 5, 20, 80] {
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let reference = a.clone().svd(false, false).singular_values[0];
            let estimate = sigma_max(&a, 1e-12);
            assert_abs_diff_eq!(estimate, reference, epsilon = 1e-6 * reference.max(1.0));
        }
        // 1x1 scalar case.
        let a = DMatrix::from_element(1, 1, -3.5);
        assert_abs_diff_eq!(sigma_max(&a, 1e-12), 3.5, epsilon = 1e-12);
    }

    #[test]
    fn build_matrix_hits_target_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let dense = build_matrix_a(MatrixKind::Dense, 100, 0.5, &mut rng).unwrap();
        let sigma = dense.clone().svd(false, false).singular_values[0];
        assert_abs_diff_eq!(sigma, 0.5, epsilon = 1e-6);

        let sparse = build_matrix_a(MatrixKind::Sparse95, 200, 0.99, &mut rng).unwrap();
        let sigma = sparse.clone().svd(false, false).singular_values[0];
        assert_abs_diff_eq!(sigma, 0.99, epsilon = 1e-6);
        let nonzero = sparse.iter().filter(|v| **v != 0.0).count() as f64
            / (sparse.nrows() * sparse.ncols()) as f64;
        assert!(
            (0.04..=0.06).contains(&nonzero),
            "nonzero fraction {nonzero}"
        );
    }

    #[test]
    fn linear_map_single_step_expansion() {
        // One step from z0 = 0: z(1) = u(1) c, y(1) = d0 + u d1.c + u^2 d2.(c*c).
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let task = LinearMapTask::generate(MatrixKind::Dense, 6, 0.5, &mut rng).unwrap();
        let u = 0.37;
        let y = task.run(&InputSequence::new(vec![u]).unwrap()).unwrap();
        let z1 = &task.c * u;
        let expected = task.d0
            + task.d1.dot(&z1)
            + task
                .d2
                .iter()
                .zip(z1.iter())
                .map(|(d, z)| d * z * z)
                .sum::<f64>();
        assert_abs_diff_eq!(y[0], expected, epsilon = 1e-12);
    }

    #[test]
    fn linear_map_zero_input_gives_constant_d0() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let task = LinearMapTask::generate(MatrixKind::Dense, 4, 0.5, &mut rng).unwrap();
        let y = task
            .run(&InputSequence::new(vec![0.0; 8]).unwrap())
            .unwrap();
        for yk in y {
            assert_abs_diff_eq!(yk, task.d0, epsilon = 1e-12);
        }
    }

    #[test]
    fn linear_map_matches_hand_recursion() {
        // n = 3 recursion written out independently of the implementation.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let task = LinearMapTask::generate(MatrixKind::Dense, 3, 0.5, &mut rng).unwrap();
        let u = [0.2, 0.9, 0.4];
        let y = task
            .run(&InputSequence::new(u.to_vec()).unwrap())
            .unwrap();

        let mut z = [0.0f64; 3];
        for (k, &uk) in u.iter().enumerate() {
            let mut next = [0.0f64; 3];
            for i in 0..3 {
                for j in 0..3 {
                    next[i] += task.a[(i, j)] * z[j];
                }
                next[i] += task.c[i] * uk;
            }
            z = next;
            let mut expected = task.d0;
            for i in 0..3 {
                expected += task.d1[i] * z[i] + task.d2[i] * z[i] * z[i];
            }
            assert_abs_diff_eq!(y[k], expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn aircraft_derivative_values() {
        // Origin with zero rudder is an equilibrium.
        assert_eq!(aircraft_derivative(0.0, 0.0, 0.0), (0.0, 0.0));
        // At x1 = 0, cos x1 = 1 and the polynomial terms vanish.
        let (dx1, dx2) = aircraft_derivative(0.0, 2.0, 0.5);
        assert_abs_diff_eq!(dx1, 2.0 - 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(dx2, -2.0 - 50.0, epsilon = 1e-15);
        // Generic point checked against a separate evaluation of the formulas.
        let (x1, x2, ut) = (0.2f64, -0.3f64, -0.75f64);
        let poly = 5.0 * 0.2 - 4.0 * 0.2f64.powi(3) + 0.2f64.powi(5);
        let want1 = -0.3 - 0.1 * poly * 0.2f64.cos() - 0.5 * (-0.75) * 0.2f64.cos();
        let want2 =
            -65.0 * 0.2 + 50.0 * 0.2f64.powi(3) - 15.0 * 0.2f64.powi(5) - (-0.3) - 100.0 * (-0.75);
        let (dx1, dx2) = aircraft_derivative(x1, x2, ut);
        assert_abs_diff_eq!(dx1, want1, epsilon = 1e-15);
        assert_abs_diff_eq!(dx2, want2, epsilon = 1e-15);
    }

    #[test]
    fn rudder_mapping_values() {
        assert_abs_diff_eq!(
            map_input_to_rudder(0.0, RudderMapping::PaperLiteral).unwrap(),
            -1.0
        );
        assert_abs_diff_eq!(
            map_input_to_rudder(1.0, RudderMapping::PaperLiteral).unwrap(),
            -0.5
        );
        assert_abs_diff_eq!(
            map_input_to_rudder(0.0, RudderMapping::RangeConsistent).unwrap(),
            -0.5
        );
        assert_abs_diff_eq!(
            map_input_to_rudder(1.0, RudderMapping::RangeConsistent).unwrap(),
            0.5
        );
        assert!(map_input_to_rudder(1.5, RudderMapping::PaperLiteral).is_err());
    }

    #[test]
    fn aircraft_equilibrium_stays_at_origin() {
        // Range-consistent mapping sends u = 0.5 to zero rudder, so the origin
        // is an equilibrium and x1 must stay at zero.
        let task = AircraftTask {
            input_mapping: RudderMapping::RangeConsistent,
            ..AircraftTask::default()
        };
        let x1 = task
            .integrate(&InputSequence::new(vec![0.5; 20]).unwrap())
            .unwrap();
        for v in x1 {
            assert!(v.abs() < 1e-9, "drift {v}");
        }
    }

    fn rk4_fixed_step(inputs: &InputSequence, mapping: RudderMapping, dt: f64) -> Vec<f64> {
        let mut state = [0.0f64, 0.0];
        let mut out = Vec::new();
        for k in 1..=inputs.len() {
            let u = map_input_to_rudder(inputs.at(k), mapping).unwrap();
            let steps = (1.0 / dt).round() as usize;
            for _ in 0..steps {
                let f = |s: [f64; 2]| {
                    let (a, b) = aircraft_derivative(s[0], s[1], u);
                    [a, b]
                };
                let k1 = f(state);
                let k2 = f([state[0] + 0.5 * dt * k1[0], state[1] + 0.5 * dt * k1[1]]);
                let k3 = f([state[0] + 0.5 * dt * k2[0], state[1] + 0.5 * dt * k2[1]]);
                let k4 = f([state[0] + dt * k3[0], state[1] + dt * k3[1]]);
                state[0] += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
                state[1] += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
            }
            out.push(state[0]);
        }
        out
    }

    #[test]
    fn adaptive_solver_matches_fixed_step_rk4() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let inputs = generate_input(10, &mut rng).unwrap();
        let task = AircraftTask::default();
        let adaptive = task.integrate(&inputs).unwrap();
        let reference = rk4_fixed_step(&inputs, RudderMapping::RangeConsistent, 1e-4);
        for (a, r) in adaptive.iter().zip(&reference) {
            assert!((a - r).abs() < 1e-6, "adaptive {a} vs rk4 {r}");
        }
    }

    #[test]
    fn tightening_tolerances_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let inputs = generate_input(10, &mut rng).unwrap();
        let loose = AircraftTask {
            solver_rel_tol: 1e-6,
            solver_abs_tol: 1e-8,
            ..AircraftTask::default()
        };
        let tight = AircraftTask {
            solver_rel_tol: 1e-10,
            solver_abs_tol: 1e-12,
            ..AircraftTask::default()
        };
        let a = loose.integrate(&inputs).unwrap();
        let b = tight.integrate(&inputs).unwrap();
        let diff = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(diff < 1e-5, "solutions diverge by {diff}");
    }
}
