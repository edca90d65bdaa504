//! Reading, validating and compiling a model file.

use covq::modelspec::{parse_model, ModelError};

const WELL: &str = r#"
# Galilei chart with a weak gravitational well.
[model]
framework = galilei
name = well

[box]
x0 = "0, 5"
x1 = "-2, 2"
x2 = "-2, 2"
x3 = "-2, 2"

[constants]
m = 1.0, M
q = 0.5, T^-1 L^3/2 M^1/2
hbar = 1.0, T^-1 L^2 M
k = 0.1, T^-2

[metric]
g11 = "1"
g12 = "0"
g13 = "0"
g22 = "1"
g23 = "0"
g33 = "1"

[empotential]
A0 = "-k*(x1^2 + x2^2)/2"
A1 = "0"
A2 = "0"
A3 = "0"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = parse_model(WELL)?;
    println!("{} ({}), constants {:?}", file.name, file.framework, file.constants.values());
    let model = file.compile()?;
    model.validate()?;
    println!("metric at box centre: {:?}", model.metric_at(&model.chart_box.center())?);
    println!("A0 at (0, 1, 1, 0) = {}", model.empotential[0].value(&[0.0, 1.0, 1.0, 0.0])?);

    let broken = WELL.replace("g22 = \"1\"", "g22 = \"-1\"");
    match parse_model(&broken).and_then(|f| f.compile()).and_then(|m| m.validate().map(|_| m)) {
        Ok(_) => println!("indefinite metric accepted"),
        Err(ModelError::Validation { check, point }) => println!("rejected by {check} at {point:?}"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
