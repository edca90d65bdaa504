//! End-to-end acceptance run: one line per criterion, non-zero exit on any failure.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use covq::einstein::EPhasePoint;
use covq::galilei::GPhasePoint;
use covq::harness::{
    integrate_einstein, integrate_galilei, load_model, run_suite_on, LoadedModel, RunConfig, SuiteReport,
};

const GALILEI_MODELS: [&str; 3] = ["flat_galilei", "uniform_b_galilei", "curved_galilei"];
const EINSTEIN_MODELS: [&str; 3] = ["minkowski", "minkowski_uniformF", "schwarzschild_like"];

fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(format!("{name}.model"))
}

fn model(name: &str) -> LoadedModel {
    load_model(model_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn suite(name: &str, suite: &str, points: usize, seed: u64) -> (SuiteReport, Duration) {
    let loaded = model(name);
    let start = Instant::now();
    let r = run_suite_on(&loaded, suite, &RunConfig::new(points, seed))
        .unwrap_or_else(|e| panic!("{suite} on {name}: {e}"));
    (r, start.elapsed())
}

fn residual(r: &SuiteReport, check: &str) -> f64 {
    r.checks.iter().find(|c| c.name == check).unwrap_or_else(|| panic!("{} has no check {check}", r.suite)).residual
}

/// Collects the individual comparisons behind one criterion.
#[derive(Default)]
struct Criterion {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn below(&mut self, what: String, value: f64, limit: f64) {
        self.notes.push(format!("{what} {value:.2e}"));
        if !(value < limit) {
            self.failures.push(format!("{what} = {value:.3e}, want < {limit:.0e}"));
        }
    }

    fn above(&mut self, what: String, value: f64, limit: f64) {
        self.notes.push(format!("{what} {value:.2e}"));
        if !(value > limit) {
            self.failures.push(format!("{what} = {value:.3e}, want > {limit:.0e}"));
        }
    }

    fn within(&mut self, what: &str, elapsed: Duration, limit: Duration) {
        self.notes.push(format!("{what} {:.2} s", elapsed.as_secs_f64()));
        if elapsed >= limit {
            self.failures.push(format!("{what} took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()));
        }
    }

    fn fail(&mut self, why: String) {
        self.failures.push(why);
    }
}

fn section1() -> Criterion {
    let mut c = Criterion::default();
    let (r, t) = suite("flat_galilei", "section1-general", 100, 42);
    c.below("classification".into(), residual(&r, "section1-classification-isomorphism"), 1e-8);
    c.below("jacobi".into(), residual(&r, "pair-bracket-jacobi"), 1e-8);
    c.above("non-closed witness".into(), residual(&r, "pair-bracket-non-closed-witness"), 1e-3);
    c.within("runtime", t, Duration::from_secs(10));
    c
}

fn galilei_bracket_equivalence() -> Criterion {
    let mut c = Criterion::default();
    for name in ["flat_galilei", "uniform_b_galilei"] {
        let (r, t) = suite(name, "galilei-brackets", 100, 42);
        c.below(format!("{name} closed form"), residual(&r, "bracket-closed-form-vs-definition"), 1e-8);
        c.within(name, t, Duration::from_secs(10));
    }
    c
}

fn galilei_golden() -> Criterion {
    let mut c = Criterion::default();
    let (brackets, _) = suite("flat_galilei", "galilei-brackets", 100, 42);
    let (quantum, _) = suite("flat_galilei", "galilei-quantum", 100, 42);
    c.below("brackets".into(), residual(&brackets, "golden-brackets"), 1e-10);
    c.below("quantum lift".into(), residual(&quantum, "golden-quantum"), 1e-10);
    c
}

fn galilei_observer_independence() -> Criterion {
    let mut c = Criterion::default();
    for name in GALILEI_MODELS {
        let (r, _) = suite(name, "galilei-quantum", 100, 42);
        c.below(name.into(), residual(&r, "galilei-observer-independence"), 1e-8);
    }
    c
}

fn einstein_identities() -> Criterion {
    let mut c = Criterion::default();
    for name in ["minkowski", "schwarzschild_like"] {
        let (r, _) = suite(name, "einstein-identities", 200, 7);
        c.below(format!("{name} technical"), residual(&r, "technical-identities"), 1e-8);
        c.below(format!("{name} g(d,d)+c²"), residual(&r, "contact-unit-norm"), 1e-9);
        c.below(format!("{name} τ(d)-1"), residual(&r, "time-form-on-contact"), 1e-9);
        for f in r.failures() {
            c.fail(format!("{name}: {} = {:.3e}", f.name, f.residual));
        }
    }
    c
}

fn einstein_brackets() -> Criterion {
    let mut c = Criterion::default();
    for name in EINSTEIN_MODELS {
        let (b, _) = suite(name, "einstein-brackets", 100, 42);
        let (q, _) = suite(name, "einstein-quantum", 100, 42);
        c.below(format!("{name} closed form"), residual(&b, "bracket-closed-form-vs-definition"), 1e-7);
        c.below(format!("{name} isomorphism"), residual(&q, "einstein-classification-isomorphism"), 1e-8);
        c.below(format!("{name} observer note"), residual(&q, "einstein-observer-note"), 1e-8);
    }
    c
}

fn connections() -> Criterion {
    let mut c = Criterion::default();
    for name in GALILEI_MODELS {
        let (r, _) = suite(name, "galilei-core", 100, 42);
        c.below(format!("{name} ∇dt"), residual(&r, "connection-time-form-parallel"), 1e-8);
        c.below(format!("{name} ∇g"), residual(&r, "connection-metric-parallel"), 1e-8);
    }
    for name in EINSTEIN_MODELS {
        let (r, _) = suite(name, "einstein-identities", 100, 42);
        c.below(format!("{name} ∇g"), residual(&r, "connection-metric-parallel"), 1e-8);
        c.below(format!("{name} torsion"), residual(&r, "connection-torsion-free"), 1e-8);
    }
    c
}

fn cosymplectic() -> Criterion {
    let mut c = Criterion::default();
    for (name, suite_name, time_form) in [
        ("flat_galilei", "galilei-core", "dt"),
        ("minkowski", "einstein-identities", "τ"),
        ("minkowski_uniformF", "einstein-identities", "τ"),
    ] {
        let (r, _) = suite(name, suite_name, 100, 42);
        c.below(format!("{name} dΩ"), residual(&r, "omega-closed"), 1e-7);
        c.below(format!("{name} i(γ)Ω"), residual(&r, "gamma-omega-kernel"), 1e-8);
        c.below(format!("{name} i(γ){time_form}-1"), residual(&r, "gamma-time-form"), 1e-9);
        c.above(format!("{name} volume"), residual(&r, "cosymplectic-volume"), 1e-6);
    }
    c
}

fn cyclotron(c: &mut Criterion) {
    let LoadedModel::Galilei(m) = model("uniform_b_galilei") else { unreachable!("galilei model") };
    let (mass, charge, field, speed) = (2.0, 1.5, 0.8, 0.5);
    let radius = mass * speed / (charge * field);
    let period = 2.0 * std::f64::consts::PI * mass / (charge * field);
    let start = Instant::now();
    let orbit = match integrate_galilei(&m, &GPhasePoint::new([0.0; 4], [speed, 0.0, 0.0]), period, 1e-3) {
        Ok(o) => o,
        Err(e) => return c.fail(format!("cyclotron: {e}")),
    };
    let elapsed = start.elapsed();
    let xs: Vec<[f64; 4]> = orbit.trajectory.positions().collect();
    // Centre from the diametrically opposite sample.
    let (far, _) = xs.iter().enumerate().fold((0, 0.0), |(k, d), (j, x)| {
        let dj = x[1].hypot(x[2]);
        if dj > d {
            (j, dj)
        } else {
            (k, d)
        }
    });
    let centre = [xs[far][1] / 2.0, xs[far][2] / 2.0];
    let worst =
        xs.iter().map(|x| ((x[1] - centre[0]).hypot(x[2] - centre[1]) - radius).abs() / radius).fold(0.0, f64::max);
    let last = xs.last().expect("non-empty");
    let closure = last[1].hypot(last[2]) / radius;
    c.below("cyclotron radius".into(), worst, 1e-5);
    c.below("cyclotron closure".into(), closure, 1e-5);
    c.within("cyclotron", elapsed, Duration::from_secs(30));
}

fn hyperbolic(c: &mut Criterion) {
    let LoadedModel::Einstein(m) = model("minkowski_uniformF") else { unreachable!("einstein model") };
    let k = 1.5 * 0.6 / 2.0;
    let start = Instant::now();
    let orbit = match integrate_einstein(&m, &EPhasePoint::new([0.0; 4], [0.0; 3]), 4.0, 1e-3) {
        Ok(o) => o,
        Err(e) => return c.fail(format!("hyperbolic: {e}")),
    };
    let elapsed = start.elapsed();
    let tr = &orbit.trajectory;
    let worst = tr
        .params
        .iter()
        .zip(tr.positions())
        .map(|(&s, x)| {
            let exact = [(k * s).sinh() / k, ((k * s).cosh() - 1.0) / k, 0.0, 0.0];
            x.iter().zip(exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    c.below("hyperbolic worldline".into(), worst, 1e-5);
    c.within("hyperbolic", elapsed, Duration::from_secs(30));
}

fn orbits() -> Criterion {
    let mut c = Criterion::default();
    cyclotron(&mut c);
    hyperbolic(&mut c);
    c
}

fn determinism() -> Criterion {
    let mut c = Criterion::default();
    let run = |name: &str, suite: &str| {
        Command::new(env!("CARGO_BIN_EXE_covq"))
            .args(["verify", "--suite", suite, "--seed", "11", "--points", "40", "--report", "json", "--model"])
            .arg(model_path(name))
            .output()
            .expect("covq runs")
    };
    for (name, suite) in [("curved_galilei", "galilei-brackets"), ("schwarzschild_like", "einstein-quantum")] {
        let (a, b) = (run(name, suite), run(name, suite));
        if a.stdout.is_empty() || a.stdout != b.stdout {
            c.fail(format!("{suite} on {name}: reports differ"));
        } else {
            c.notes.push(format!("{suite} on {name} identical ({} bytes)", a.stdout.len()));
        }
    }
    c
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Criterion); 10] = [
        ("general classification theorem", section1),
        ("galilei bracket equivalence", galilei_bracket_equivalence),
        ("galilei golden values", galilei_golden),
        ("galilei observer independence", galilei_observer_independence),
        ("einstein identities", einstein_identities),
        ("einstein brackets and isomorphism", einstein_brackets),
        ("connection certification", connections),
        ("cosymplectic structure", cosymplectic),
        ("orbits", orbits),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let c = check();
        let status = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("[{status}] {:>2} {title}: {}", k + 1, c.notes.join(", "));
        for f in &c.failures {
            println!("         {f}");
        }
        failed += usize::from(!c.failures.is_empty());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
