//! Deterministic sampling of points and random test objects.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::einstein::{EPhasePoint, EinsteinModel};
use crate::galilei::GPhasePoint;
use crate::modelspec::ChartBox;
use crate::smooth::{Evaluator, Field, VectorField};

/// Fraction of the chart box used for sampling.
pub const BOX_SHRINK: f64 = 0.9;
/// Bound on each Galilei velocity component.
pub const GALILEI_SPEED: f64 = 2.0;
/// Einstein samples keep `g₀₀ + 2g₀ⱼvʲ + gᵢⱼvⁱvʲ ≤ −TIMELIKE_MARGIN·|g₀₀|`.
pub const TIMELIKE_MARGIN: f64 = 0.2;

/// Seeded source of independent random streams, one per check.
#[derive(Debug, Clone, Copy)]
pub struct Sampler {
    pub seed: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { seed }
    }

    /// Generator for stream `k`; streams do not overlap.
    pub fn stream(&self, k: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k);
        rng
    }
}

/// Uniform spacetime point in the shrunk chart box.
pub fn spacetime_point(rng: &mut impl Rng, chart: &ChartBox) -> [f64; 4] {
    let inner = chart.shrunk(BOX_SHRINK);
    chart_point(rng, &inner)
}

/// Uniform point of `chart` itself, without shrinking.
pub fn chart_point(rng: &mut impl Rng, chart: &ChartBox) -> [f64; 4] {
    let mut u = [0.0; 4];
    for x in &mut u {
        *x = rng.gen::<f64>();
    }
    chart.from_unit(u)
}

pub fn spacetime_points(rng: &mut impl Rng, chart: &ChartBox, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| spacetime_point(rng, chart).to_vec()).collect()
}

pub fn galilei_points(rng: &mut impl Rng, chart: &ChartBox, n: usize) -> Vec<GPhasePoint> {
    (0..n)
        .map(|_| {
            let x = spacetime_point(rng, chart);
            let v = [(); 3].map(|_| rng.gen_range(-GALILEI_SPEED..=GALILEI_SPEED));
            GPhasePoint::new(x, v)
        })
        .collect()
}

/// Timelike velocity at `x` by rejection from a velocity cube scaled to the
/// local light cone; `None` if none is found.
pub fn timelike_velocity(rng: &mut impl Rng, m: &EinsteinModel, x: [f64; 4]) -> Result<Option<[f64; 3]>, HarnessError> {
    let mut ev = Evaluator::new(x.to_vec());
    let g00 = ev.eval(&m.g[0][0])?;
    let mut gmax: f64 = 0.0;
    for i in 1..4 {
        gmax = gmax.max(ev.eval(&m.g[i][i])?);
    }
    let reach = (g00.abs() / gmax).sqrt();
    for _ in 0..10_000 {
        let v = [(); 3].map(|_| rng.gen_range(-reach..=reach));
        let radicand = m.contact.radicand.value(&EPhasePoint::new(x, v).coords())?;
        if radicand <= -TIMELIKE_MARGIN * g00.abs() {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// `n` timelike phase points over the shrunk chart box.
pub fn einstein_points(rng: &mut impl Rng, m: &EinsteinModel, n: usize) -> Result<Vec<EPhasePoint>, HarnessError> {
    einstein_points_in(rng, m, &m.chart_box.shrunk(BOX_SHRINK), n)
}

pub fn einstein_points_in(
    rng: &mut impl Rng,
    m: &EinsteinModel,
    region: &ChartBox,
    n: usize,
) -> Result<Vec<EPhasePoint>, HarnessError> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = chart_point(rng, region);
        let v = timelike_velocity(rng, m, x)?
            .ok_or(HarnessError::Sampling { what: "timelike velocity", point: x.to_vec() })?;
        out.push(EPhasePoint::new(x, v));
    }
    Ok(out)
}

/// Random polynomial of total degree at most `degree` in the box-normalised
/// coordinates `(xᵢ − cᵢ)/wᵢ`, with `c` the box center and `w` its half
/// widths, and coefficients uniform in `[-scale, scale]`.
pub fn random_polynomial(rng: &mut impl Rng, degree: u32, scale: f64, chart: &ChartBox) -> Field {
    let center = chart.center();
    let shifted: Vec<Field> =
        (0..4).map(|i| (Field::var(i) - center[i]) * (2.0 / (chart.hi[i] - chart.lo[i]))).collect();
    let mut terms = vec![Field::constant(rng.gen_range(-scale..=scale))];
    let mut monomials: Vec<(usize, Field)> = vec![(0, Field::one())];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (start, mono) in &monomials {
            for (i, s) in shifted.iter().enumerate().skip(*start) {
                next.push((i, mono * s));
            }
        }
        for (_, mono) in &next {
            terms.push(mono * rng.gen_range(-scale..=scale));
        }
        monomials = next;
    }
    Field::sum(terms)
}

pub fn random_vector_field(rng: &mut impl Rng, degree: u32, scale: f64, chart: &ChartBox) -> VectorField {
    VectorField::new((0..4).map(|_| random_polynomial(rng, degree, scale, chart)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let s = Sampler::new(42);
        let a: Vec<u64> = (0..4).map(|_| s.stream(3).gen()).collect();
        let b: Vec<u64> = (0..4).map(|_| s.stream(3).gen()).collect();
        assert_eq!(a, b);
        let c: u64 = s.stream(4).gen();
        assert_ne!(a[0], c);
    }

    #[test]
    fn polynomial_degree_and_reproducibility() {
        let chart = ChartBox { lo: [-1.0; 4], hi: [3.0; 4] };
        let p = random_polynomial(&mut Sampler::new(1).stream(0), 2, 1.0, &chart);
        let q = random_polynomial(&mut Sampler::new(1).stream(0), 2, 1.0, &chart);
        let x = [0.3, -0.2, 0.5, 0.1];
        assert_eq!(p.value(&x).unwrap(), q.value(&x).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert!(p.diff(i).diff(j).diff(k).is_zero());
                }
            }
        }
    }
}
