//! Model files: a chart box, dimensioned constants, metric, electromagnetic
//! potential, observers and an optional gravitational 2-form.
//!
//! ```text
//! [model]
//! framework = galilei
//! name = uniform_b
//!
//! [box]
//! x0 = "-1,1"
//!
//! [constants]
//! m = 1.0, M
//! B = 0.5, T^-1 L^-1/2 M^1/2
//!
//! [metric]
//! g11 = "1"
//!
//! [empotential]
//! A1 = "-B/2*x2"
//!
//! [observer.drift]
//! o1 = "0.3"
//!
//! [gravPhi]
//! Phi01 = "x1"
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::expr::{parse_expr_in, Expr, ExprError, Scope};
use crate::dims::{DimError, DimScalar, Dimension};
use crate::smooth::linalg::{det, leading_minors};
use crate::smooth::{exterior_derivative, EvalError, Evaluator, Field, PForm};

/// Number of low-discrepancy points used for model validation.
pub const VALIDATION_POINTS: usize = 49;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("entry `{key}`: {source}")]
    Expr { key: String, source: ExprError },
    #[error("constant `{name}`: {source}")]
    Dim { name: String, source: DimError },
    #[error("missing {0}")]
    Missing(String),
    #[error("validation failed ({check}) at {point:?}")]
    Validation { check: String, point: Vec<f64> },
    #[error("cannot read model: {0}")]
    Io(String),
    #[error("model `{name}` is a {found} model, expected {expected}")]
    FrameworkMismatch { name: String, expected: Framework, found: Framework },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Framework {
    Galilei,
    Einstein,
}

impl FromStr for Framework {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "galilei" | "g" => Ok(Framework::Galilei),
            "einstein" | "e" => Ok(Framework::Einstein),
            other => Err(format!("unknown framework `{other}`")),
        }
    }
}

impl fmt::Display for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Framework::Galilei => "galilei",
            Framework::Einstein => "einstein",
        })
    }
}

/// Coordinate box `lo[i] ≤ x^i ≤ hi[i]` on which the model is declared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartBox {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl ChartBox {
    pub fn contains(&self, x: &[f64]) -> bool {
        (0..4).all(|i| x[i] >= self.lo[i] && x[i] <= self.hi[i])
    }

    pub fn center(&self) -> [f64; 4] {
        std::array::from_fn(|i| 0.5 * (self.lo[i] + self.hi[i]))
    }

    /// The box scaled about its center by `factor`.
    pub fn shrunk(&self, factor: f64) -> ChartBox {
        let c = self.center();
        ChartBox {
            lo: std::array::from_fn(|i| c[i] - factor * (c[i] - self.lo[i])),
            hi: std::array::from_fn(|i| c[i] + factor * (self.hi[i] - c[i])),
        }
    }

    /// Maps a point of the unit cube into the box.
    pub fn from_unit(&self, u: [f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| self.lo[i] + u[i] * (self.hi[i] - self.lo[i]))
    }

    /// `n` interior Sobol points.
    pub fn sobol_points(&self, n: usize) -> Vec<[f64; 4]> {
        let inner = self.shrunk(0.98);
        (0..n as u32)
            .map(|k| inner.from_unit(std::array::from_fn(|d| sobol_burley::sample(k, d as u32, 0) as f64)))
            .collect()
    }
}

/// Named dimensioned constants. `m`, `q` and `hbar` are always present,
/// `c` for Einstein models.
#[derive(Debug, Clone, PartialEq)]
pub struct Constants {
    pub table: BTreeMap<String, DimScalar>,
}

impl Constants {
    pub fn get(&self, name: &str) -> Option<DimScalar> {
        self.table.get(name).copied()
    }

    fn value(&self, name: &str) -> f64 {
        self.table[name].value
    }

    pub fn m(&self) -> f64 {
        self.value("m")
    }

    pub fn q(&self) -> f64 {
        self.value("q")
    }

    pub fn hbar(&self) -> f64 {
        self.value("hbar")
    }

    /// Light speed, when declared.
    pub fn c(&self) -> Option<f64> {
        self.table.get("c").map(|s| s.value)
    }

    pub fn q_over_hbar(&self) -> f64 {
        self.q() / self.hbar()
    }

    pub fn m_over_hbar(&self) -> f64 {
        self.m() / self.hbar()
    }

    pub fn values(&self) -> BTreeMap<String, f64> {
        self.table.iter().map(|(k, v)| (k.clone(), v.value)).collect()
    }
}

/// Parsed but not yet compiled model file.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub framework: Framework,
    pub name: String,
    pub chart_box: ChartBox,
    pub constants: Constants,
    /// Metric entries on index pairs `(i, j)` with `i ≤ j`.
    pub metric: BTreeMap<(usize, usize), Expr>,
    pub empotential: [Expr; 4],
    pub observers: BTreeMap<String, [Expr; 3]>,
    /// Gravitational 2-form entries on `(λ, μ)` with `λ < μ`.
    pub grav_phi: BTreeMap<(usize, usize), Expr>,
}

/// Model with every entry compiled to a field on the spacetime chart.
#[derive(Debug, Clone)]
pub struct CompiledModel {
    pub framework: Framework,
    pub name: String,
    pub chart_box: ChartBox,
    pub constants: Constants,
    /// Symmetric metric: 3×3 spacelike block (Galilei) or 4×4 (Einstein).
    pub metric: Vec<Vec<Field>>,
    pub empotential: Vec<Field>,
    pub observers: BTreeMap<String, Vec<Field>>,
    pub grav_phi: PForm,
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(v: &str) -> &str {
    let v = v.trim();
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

type Sections = Vec<(String, usize, Vec<Entry>)>;

fn split_sections(src: &str) -> Result<Sections, ModelError> {
    let mut out: Sections = Vec::new();
    for (n, raw) in src.lines().enumerate() {
        let line = n + 1;
        let text = strip_comment(raw).trim();
        if text.is_empty() {
            continue;
        }
        if let Some(head) = text.strip_prefix('[') {
            let name = head
                .strip_suffix(']')
                .ok_or(ModelError::Parse { line, message: "unterminated section header".into() })?
                .trim();
            if out.iter().any(|(s, _, _)| s == name) {
                return Err(ModelError::Parse { line, message: format!("duplicate section [{name}]") });
            }
            out.push((name.to_string(), line, Vec::new()));
            continue;
        }
        let (key, value) =
            text.split_once('=').ok_or(ModelError::Parse { line, message: "expected `key = value`".into() })?;
        let (_, _, entries) =
            out.last_mut().ok_or(ModelError::Parse { line, message: "entry before any section".into() })?;
        let key = key.trim().to_string();
        if entries.iter().any(|e: &Entry| e.key == key) {
            return Err(ModelError::Parse { line, message: format!("duplicate key `{key}`") });
        }
        entries.push(Entry { line, key, value: unquote(value).to_string() });
    }
    Ok(out)
}

fn index_pair(key: &str, prefix: &str, lo: usize) -> Option<(usize, usize)> {
    let rest = key.strip_prefix(prefix)?;
    let b = rest.as_bytes();
    if b.len() != 2 {
        return None;
    }
    let i = (b[0] as char).to_digit(10)? as usize;
    let j = (b[1] as char).to_digit(10)? as usize;
    if i < lo || j < lo || i > 3 || j > 3 {
        return None;
    }
    Some((i.min(j), i.max(j)))
}

fn required_dimension(name: &str) -> Option<Dimension> {
    Some(match name {
        "m" => Dimension::mass(),
        "q" => Dimension::charge(),
        "hbar" => Dimension::action(),
        "c" => Dimension::velocity(),
        _ => return None,
    })
}

fn unknown_key(e: &Entry, section: &str) -> ModelError {
    ModelError::Parse { line: e.line, message: format!("unknown key `{}` in [{section}]", e.key) }
}

/// Parses the text of a model file.
pub fn parse_model(src: &str) -> Result<ModelFile, ModelError> {
    let sections = split_sections(src)?;
    let section = |name: &str| sections.iter().find(|(s, _, _)| s == name).map(|(_, _, e)| e.as_slice());

    let header = section("model").ok_or_else(|| ModelError::Missing("[model] section".into()))?;
    let mut framework = None;
    let mut name = None;
    for e in header {
        match e.key.as_str() {
            "framework" => {
                framework = Some(e.value.parse().map_err(|message| ModelError::Parse { line: e.line, message })?)
            }
            "name" => name = Some(e.value.clone()),
            _ => return Err(unknown_key(e, "model")),
        }
    }
    let framework: Framework = framework.ok_or_else(|| ModelError::Missing("framework tag".into()))?;
    let name = name.ok_or_else(|| ModelError::Missing("model name".into()))?;

    let mut lo = [f64::NAN; 4];
    let mut hi = [f64::NAN; 4];
    for e in section("box").ok_or_else(|| ModelError::Missing("[box] section".into()))? {
        let i = match e.key.as_str() {
            "x0" => 0,
            "x1" => 1,
            "x2" => 2,
            "x3" => 3,
            _ => return Err(unknown_key(e, "box")),
        };
        let bad = || ModelError::Parse { line: e.line, message: format!("box entry `{}` must be `min,max`", e.value) };
        let (a, b) = e.value.split_once(',').ok_or_else(bad)?;
        lo[i] = a.trim().parse().map_err(|_| bad())?;
        hi[i] = b.trim().parse().map_err(|_| bad())?;
        if !(lo[i] < hi[i]) {
            return Err(bad());
        }
    }
    if lo.iter().any(|v| v.is_nan()) {
        return Err(ModelError::Missing("box range for every coordinate".into()));
    }

    let mut table = BTreeMap::new();
    for e in section("constants").unwrap_or(&[]) {
        let bad = |message: String| ModelError::Parse { line: e.line, message };
        let (v, d) =
            e.value.split_once(',').ok_or_else(|| bad(format!("constant `{}` must be `value, dimension`", e.key)))?;
        let value: f64 = v.trim().parse().map_err(|_| bad(format!("bad number `{}`", v.trim())))?;
        let dim: Dimension = d.trim().parse().map_err(|source| ModelError::Dim { name: e.key.clone(), source })?;
        if let Some(want) = required_dimension(&e.key) {
            if dim != want {
                return Err(ModelError::Dim {
                    name: e.key.clone(),
                    source: DimError::Mismatch { left: dim, right: want },
                });
            }
        }
        if e.key.starts_with('x') && e.key[1..].parse::<u32>().is_ok() {
            return Err(bad(format!("constant name `{}` clashes with a coordinate", e.key)));
        }
        table.insert(e.key.clone(), DimScalar::new(value, dim));
    }
    let mut required = vec!["m", "q", "hbar"];
    if framework == Framework::Einstein {
        required.push("c");
    }
    for r in required {
        if !table.contains_key(r) {
            return Err(ModelError::Missing(format!("constant `{r}`")));
        }
    }
    let constants = Constants { table };
    let scope = Scope::with_constants(constants.table.keys().cloned());
    let parse =
        |e: &Entry| parse_expr_in(&e.value, &scope).map_err(|source| ModelError::Expr { key: e.key.clone(), source });

    let metric_lo = if framework == Framework::Galilei { 1 } else { 0 };
    let mut metric = BTreeMap::new();
    for e in section("metric").ok_or_else(|| ModelError::Missing("[metric] section".into()))? {
        let pair = index_pair(&e.key, "g", metric_lo).ok_or_else(|| unknown_key(e, "metric"))?;
        if metric.insert(pair, parse(e)?).is_some() {
            return Err(ModelError::Parse { line: e.line, message: format!("metric entry {pair:?} given twice") });
        }
    }
    for i in metric_lo..4 {
        for j in i..4 {
            if !metric.contains_key(&(i, j)) {
                return Err(ModelError::Missing(format!("metric entry g{i}{j}")));
            }
        }
    }

    let mut empotential: [Expr; 4] = std::array::from_fn(|_| Expr::Num(0.0));
    for e in section("empotential").unwrap_or(&[]) {
        let i = match e.key.as_str() {
            "A0" => 0,
            "A1" => 1,
            "A2" => 2,
            "A3" => 3,
            _ => return Err(unknown_key(e, "empotential")),
        };
        empotential[i] = parse(e)?;
    }

    let mut observers = BTreeMap::new();
    for (sec, _, entries) in &sections {
        let Some(obs_name) = sec.strip_prefix("observer.") else { continue };
        let mut comps: [Expr; 3] = std::array::from_fn(|_| Expr::Num(0.0));
        for e in entries {
            let i = match e.key.as_str() {
                "o1" => 0,
                "o2" => 1,
                "o3" => 2,
                _ => return Err(unknown_key(e, sec)),
            };
            comps[i] = parse(e)?;
        }
        observers.insert(obs_name.to_string(), comps);
    }

    let mut grav_phi = BTreeMap::new();
    if let Some(entries) = section("gravPhi") {
        if framework == Framework::Einstein {
            return Err(ModelError::Parse {
                line: sections.iter().find(|(s, _, _)| s == "gravPhi").map_or(0, |(_, l, _)| *l),
                message: "[gravPhi] applies to galilei models only".into(),
            });
        }
        for e in entries {
            let pair = index_pair(&e.key, "Phi", 0).filter(|(a, b)| a != b).ok_or_else(|| unknown_key(e, "gravPhi"))?;
            let expr = parse(e)?;
            let expr = if e.key[3..4] > e.key[4..5] { Expr::Neg(Box::new(expr)) } else { expr };
            if grav_phi.insert(pair, expr).is_some() {
                return Err(ModelError::Parse { line: e.line, message: format!("gravPhi entry {pair:?} given twice") });
            }
        }
    }

    for (sec, line, _) in &sections {
        let known = ["model", "box", "constants", "metric", "empotential", "gravPhi"];
        if !known.contains(&sec.as_str()) && !sec.starts_with("observer.") {
            return Err(ModelError::Parse { line: *line, message: format!("unknown section [{sec}]") });
        }
    }

    Ok(ModelFile {
        framework,
        name,
        chart_box: ChartBox { lo, hi },
        constants,
        metric,
        empotential,
        observers,
        grav_phi,
    })
}

impl ModelFile {
    pub fn compile(&self) -> Result<CompiledModel, ModelError> {
        let consts = self.constants.values();
        let compile = |key: String, e: &Expr| e.compile(&consts).map_err(|source| ModelError::Expr { key, source });
        let offset = if self.framework == Framework::Galilei { 1 } else { 0 };
        let n = 4 - offset;
        let mut metric = vec![vec![Field::zero(); n]; n];
        for (&(i, j), e) in &self.metric {
            let f = compile(format!("g{i}{j}"), e)?;
            metric[i - offset][j - offset] = f.clone();
            metric[j - offset][i - offset] = f;
        }
        let empotential =
            self.empotential.iter().enumerate().map(|(i, e)| compile(format!("A{i}"), e)).collect::<Result<_, _>>()?;
        let mut observers = BTreeMap::new();
        for (name, comps) in &self.observers {
            let fields = comps
                .iter()
                .enumerate()
                .map(|(i, e)| compile(format!("observer.{name}.o{}", i + 1), e))
                .collect::<Result<_, _>>()?;
            observers.insert(name.clone(), fields);
        }
        let mut grav_phi = PForm::zero(4, 2);
        for (&(a, b), e) in &self.grav_phi {
            grav_phi.set(&[a, b], compile(format!("Phi{a}{b}"), e)?);
        }
        Ok(CompiledModel {
            framework: self.framework,
            name: self.name.clone(),
            chart_box: self.chart_box,
            constants: self.constants.clone(),
            metric,
            empotential,
            observers,
            grav_phi,
        })
    }
}

impl CompiledModel {
    /// Metric matrix at a spacetime point.
    pub fn metric_at(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, EvalError> {
        let mut ev = Evaluator::new(x.to_vec());
        self.metric.iter().map(|row| row.iter().map(|f| ev.eval(f)).collect()).collect()
    }

    /// Sampled checks: metric signature and closure of the gravitational
    /// 2-form, at [`VALIDATION_POINTS`] Sobol points of the box.
    pub fn validate(&self) -> Result<(), ModelError> {
        let closure = exterior_derivative(&self.grav_phi).expect("2-form on a 4-chart");
        for x in self.chart_box.sobol_points(VALIDATION_POINTS) {
            let g = self.metric_at(&x)?;
            let fail = |check: &str| ModelError::Validation { check: check.into(), point: x.to_vec() };
            match self.framework {
                Framework::Galilei => {
                    if leading_minors(&g).iter().any(|&d| d <= 0.0) {
                        return Err(fail("spacelike metric not positive definite"));
                    }
                }
                Framework::Einstein => {
                    let spatial: Vec<Vec<f64>> = g[1..].iter().map(|row| row[1..].to_vec()).collect();
                    if leading_minors(&spatial).iter().any(|&d| d <= 0.0) || det(&g) >= 0.0 {
                        return Err(fail("metric signature is not (-+++)"));
                    }
                }
            }
            if closure.max_abs_at(&x)? > 1e-9 {
                return Err(fail("gravitational 2-form not closed"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT: &str = r#"
# flat Galilei chart with a uniform magnetic field
[model]
framework = galilei
name = "flat"

[box]
x0 = "-1,1"
x1 = "-2, 2"
x2 = "-2,2"
x3 = "-2,2"

[constants]
m = 1.0, M
q = 1.0, T^-1 L^3/2 M^1/2
hbar = 1.0, T^-1 L^2 M
B = 0.5, T^-1 L^-1/2 M^1/2

[metric]
g11 = "1"
g12 = "0"
g13 = "0"
g22 = "1"
g23 = "0"
g33 = "1"

[empotential]
A1 = "-B/2*x2"
A2 = "B/2*x1"   # symmetric gauge

[observer.drift]
o1 = "0.3"
"#;

    #[test]
    fn flat_model_parses_and_validates() {
        let file = parse_model(FLAT).unwrap();
        assert_eq!(file.framework, Framework::Galilei);
        assert_eq!(file.chart_box.lo[1], -2.0);
        let model = file.compile().unwrap();
        model.validate().unwrap();
        let f = crate::smooth::exterior_derivative(&PForm::one_form(model.empotential.clone())).unwrap();
        assert_eq!(f.get(&[1, 2]).as_constant(), Some(0.5));
        assert_eq!(model.observers["drift"][0].as_constant(), Some(0.3));
    }

    #[test]
    fn negative_metric_rejected() {
        let src = FLAT.replace("g11 = \"1\"", "g11 = \"-1\"");
        let err = parse_model(&src).unwrap().compile().unwrap().validate().unwrap_err();
        assert!(matches!(err, ModelError::Validation { .. }));
    }

    #[test]
    fn minkowski_signature() {
        let src = r#"
[model]
framework = einstein
name = minkowski
[box]
x0 = -1,1
x1 = -1,1
x2 = -1,1
x3 = -1,1
[constants]
m = 1, M
q = 1, T^-1 L^3/2 M^1/2
hbar = 1, T^-1 L^2 M
c = 1, T^-1 L
[metric]
g00 = -1
g01 = 0
g02 = 0
g03 = 0
g11 = 1
g12 = 0
g13 = 0
g22 = 1
g23 = 0
g33 = 1
"#;
        let model = parse_model(src).unwrap().compile().unwrap();
        model.validate().unwrap();
        let flipped = src.replace("g00 = -1", "g00 = 1");
        assert!(parse_model(&flipped).unwrap().compile().unwrap().validate().is_err());
    }

    #[test]
    fn constant_dimension_checked() {
        let src = FLAT.replace("m = 1.0, M", "m = 1.0, L");
        assert!(matches!(parse_model(&src), Err(ModelError::Dim { .. })));
        let src = FLAT.replace("hbar = 1.0, T^-1 L^2 M\n", "");
        assert!(matches!(parse_model(&src), Err(ModelError::Missing(_))));
    }

    #[test]
    fn open_grav_phi_rejected() {
        let src = format!("{FLAT}\n[gravPhi]\nPhi12 = \"x3\"\n");
        let err = parse_model(&src).unwrap().compile().unwrap().validate().unwrap_err();
        assert!(matches!(err, ModelError::Validation { check, .. } if check.contains("closed")));
        let src = format!("{FLAT}\n[gravPhi]\nPhi12 = \"x1\"\n");
        parse_model(&src).unwrap().compile().unwrap().validate().unwrap();
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse_model("x = 1"), Err(ModelError::Parse { line: 1, .. })));
        let src = FLAT.replace("g33 = \"1\"", "");
        assert!(matches!(parse_model(&src), Err(ModelError::Missing(_))));
        let src = FLAT.replace("A1 = \"-B/2*x2\"", "A1 = \"-C*x2\"");
        assert!(matches!(parse_model(&src), Err(ModelError::Expr { source: ExprError::UnknownIdentifier { .. }, .. })));
        let src = FLAT.replace("[observer.drift]", "[observers]");
        assert!(parse_model(&src).is_err());
    }
}
