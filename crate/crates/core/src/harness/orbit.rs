//! RK4 integration of the dynamical phase connection `γ` and the
//! law-of-motion residual along the resulting trajectory.

use thiserror::Error;

use crate::einstein::{gamma_field as e_gamma, law_of_motion_residual, EPhasePoint, EinsteinError, EinsteinModel};
use crate::galilei::{gamma_field as g_gamma, velocity_var, GPhasePoint, GalileiModel, PHASE_DIM};
use crate::modelspec::{ChartBox, Framework};
use crate::smooth::{EvalError, Evaluator, Field, VectorField};

/// Phase chart state `(x⁰, x¹, x², x³, x¹₀, x²₀, x³₀)`.
pub type State = [f64; PHASE_DIM];

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error("orbit left the chart box at parameter {param} (point {point:?})")]
    BoxExit { param: f64, point: Vec<f64> },
    #[error("orbit left the light cone at parameter {param} (point {point:?})")]
    LightconeExit { param: f64, point: Vec<f64> },
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("initial point is not timelike: {0}")]
    NotTimelike(#[source] EinsteinError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Samples of an orbit at uniformly spaced flow parameters: coordinate time
/// `x⁰` for Galilei, proper time for Einstein.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: Vec<f64>,
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn last(&self) -> &State {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn positions(&self) -> impl Iterator<Item = [f64; 4]> + '_ {
        self.states.iter().map(|s| [s[0], s[1], s[2], s[3]])
    }
}

#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub framework: Framework,
    pub trajectory: Trajectory,
    /// Law-of-motion residual at each interior sample, from central
    /// differences of the positions alone.
    pub law_residuals: Vec<f64>,
}

impl OrbitReport {
    pub fn max_law_residual(&self) -> f64 {
        self.law_residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn eval_field(field: &VectorField, s: &State) -> Result<State, EvalError> {
    let mut ev = Evaluator::new(s.to_vec());
    let mut out = [0.0; PHASE_DIM];
    for (o, c) in out.iter_mut().zip(&field.comps) {
        *o = ev.eval(c)?;
    }
    Ok(out)
}

fn axpy(s: &State, h: f64, k: &State) -> State {
    std::array::from_fn(|i| s[i] + h * k[i])
}

/// Classical fourth-order Runge–Kutta for the flow of `field` over
/// `duration` (negative for backward flow). The step is shrunk so that it
/// divides the duration evenly; `guard` runs on every accepted state.
pub fn rk4(
    field: &VectorField,
    start: State,
    duration: f64,
    step: f64,
    mut guard: impl FnMut(f64, &State) -> Result<(), OrbitError>,
) -> Result<Trajectory, OrbitError> {
    if !(step.is_finite() && step > 0.0) || !duration.is_finite() {
        return Err(OrbitError::BadStep(step));
    }
    let n = (duration.abs() / step).ceil().max(1.0) as usize;
    let h = duration / n as f64;
    let mut params = vec![0.0];
    let mut states = vec![start];
    guard(0.0, &start)?;
    let mut s = start;
    for k in 1..=n {
        let k1 = eval_field(field, &s)?;
        let k2 = eval_field(field, &axpy(&s, h / 2.0, &k1))?;
        let k3 = eval_field(field, &axpy(&s, h / 2.0, &k2))?;
        let k4 = eval_field(field, &axpy(&s, h, &k3))?;
        s = std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        let t = k as f64 * h;
        guard(t, &s)?;
        params.push(t);
        states.push(s);
    }
    Ok(Trajectory { params, states })
}

fn box_guard(chart: &ChartBox) -> impl Fn(f64, &State) -> Result<(), OrbitError> + '_ {
    move |param, s| {
        if chart.contains(&s[..4]) {
            Ok(())
        } else {
            Err(OrbitError::BoxExit { param, point: s.to_vec() })
        }
    }
}

/// Central first and second differences of the positions at interior
/// sample `k`.
fn differences(tr: &Trajectory, k: usize) -> ([f64; 4], [f64; 4]) {
    let h = tr.params[1] - tr.params[0];
    let (a, b, c) = (&tr.states[k - 1], &tr.states[k], &tr.states[k + 1]);
    let d1 = std::array::from_fn(|l| (c[l] - a[l]) / (2.0 * h));
    let d2 = std::array::from_fn(|l| (c[l] - 2.0 * b[l] + a[l]) / (h * h));
    (d1, d2)
}

/// Integrates `ẍⁱ = γⁱ(x, ẋ)` in coordinate time from `start`.
pub fn integrate_galilei(
    m: &GalileiModel,
    start: &GPhasePoint,
    duration: f64,
    step: f64,
) -> Result<OrbitReport, OrbitError> {
    let gamma = g_gamma(m);
    let s0: State = start.coords().try_into().expect("phase chart state");
    let tr = rk4(&gamma, s0, duration, step, box_guard(&m.chart_box))?;
    let mut law_residuals = Vec::new();
    for k in 1..tr.states.len().saturating_sub(1) {
        let (d1, d2) = differences(&tr, k);
        let x = &tr.states[k];
        let mut p = x.to_vec();
        for i in 1..4 {
            p[velocity_var(i)] = d1[i] / d1[0];
        }
        let mut ev = Evaluator::new(p);
        let mut worst = (d1[0] - 1.0).abs();
        for i in 1..4 {
            worst = worst.max((d2[i] - ev.eval(&gamma.comps[velocity_var(i)])?).abs());
        }
        law_residuals.push(worst);
    }
    Ok(OrbitReport { framework: Framework::Galilei, trajectory: tr, law_residuals })
}

/// Integrates the `γ`-flow in proper time from a timelike `start`.
pub fn integrate_einstein(
    m: &EinsteinModel,
    start: &EPhasePoint,
    duration: f64,
    step: f64,
) -> Result<OrbitReport, OrbitError> {
    m.check_timelike(start).map_err(OrbitError::NotTimelike)?;
    let gamma = e_gamma(m);
    let radicand: &Field = &m.contact.radicand;
    let in_box = box_guard(&m.chart_box);
    let guard = |param: f64, s: &State| {
        in_box(param, s)?;
        if radicand.value(s)? < 0.0 {
            Ok(())
        } else {
            Err(OrbitError::LightconeExit { param, point: s.to_vec() })
        }
    };
    let s0: State = start.coords().try_into().expect("phase chart state");
    let tr = rk4(&gamma, s0, duration, step, guard)?;
    let mut law_residuals = Vec::new();
    for k in 1..tr.states.len().saturating_sub(1) {
        let (d1, d2) = differences(&tr, k);
        let x = &tr.states[k];
        let r = law_of_motion_residual(m, &[x[0], x[1], x[2], x[3]], &d1, &d2).map_err(|e| match e {
            EinsteinError::Eval(e) => OrbitError::Eval(e),
            other => OrbitError::NotTimelike(other),
        })?;
        law_residuals.push(r.iter().fold(0.0f64, |a, v| a.max(v.abs())));
    }
    Ok(OrbitReport { framework: Framework::Einstein, trajectory: tr, law_residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_galilei_motion_is_a_straight_line() {
        let m = GalileiModel::from_source(include_str!("../../models/flat_galilei.model")).unwrap();
        let start = GPhasePoint::new([-0.5, 0.1, -0.2, 0.3], [0.7, -0.4, 0.25]);
        let r = integrate_galilei(&m, &start, 1.0, 1e-2).unwrap();
        for (t, x) in r.trajectory.params.iter().zip(r.trajectory.positions()) {
            for i in 0..3 {
                let line = start.x[i + 1] + start.v[i] * t;
                assert!((x[i + 1] - line).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn free_einstein_motion_is_a_straight_line() {
        let m = EinsteinModel::from_source(include_str!("../../models/minkowski.model")).unwrap();
        let v = [0.3, -0.2, 0.1];
        let start = EPhasePoint::new([-0.8, 0.0, 0.0, 0.0], v);
        let r = integrate_einstein(&m, &start, 1.0, 1e-2).unwrap();
        let gamma_factor = 1.0 / (1.0f64 - 0.09 - 0.04 - 0.01).sqrt();
        let end = r.trajectory.last();
        assert!((end[0] - (-0.8 + gamma_factor)).abs() < 1e-12);
        for i in 0..3 {
            assert!((end[i + 1] - v[i] * gamma_factor).abs() < 1e-12);
            assert!((end[velocity_var(i + 1)] - v[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn box_exit_is_reported() {
        let m = GalileiModel::from_source(include_str!("../../models/flat_galilei.model")).unwrap();
        let start = GPhasePoint::new([0.0; 4], [5.0, 0.0, 0.0]);
        let err = integrate_galilei(&m, &start, 0.9, 1e-2).unwrap_err();
        assert!(matches!(err, OrbitError::BoxExit { .. }));
    }

    #[test]
    fn spacelike_start_is_rejected() {
        let m = EinsteinModel::from_source(include_str!("../../models/minkowski.model")).unwrap();
        let start = EPhasePoint::new([0.0; 4], [1.2, 0.0, 0.0]);
        assert!(matches!(integrate_einstein(&m, &start, 0.1, 1e-2), Err(OrbitError::NotTimelike(_))));
    }

    #[test]
    fn step_divides_duration() {
        let m = GalileiModel::from_source(include_str!("../../models/flat_galilei.model")).unwrap();
        let r = integrate_galilei(&m, &GPhasePoint::new([0.0; 4], [0.0; 3]), 0.25, 0.1).unwrap();
        assert_eq!(r.trajectory.params.len(), 4);
        assert!((r.trajectory.params[3] - 0.25).abs() < 1e-15);
    }
}
