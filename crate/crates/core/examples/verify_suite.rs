//! Running a named check suite from code, with a tolerance override, and
//! rendering the report both ways.

use covq::harness::{emit_report, run_suite, ReportFormat, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = concat!(env!("CARGO_MANIFEST_DIR"), "/models/curved_galilei.model");
    let args: Vec<String> = std::env::args().skip(1).collect();
    let suite = args.first().map(String::as_str).unwrap_or("galilei-core");

    let cfg = RunConfig::new(50, 7).with_override("omega-closed=1e-9")?;
    let report = run_suite(model, suite, &cfg)?;
    print!("{}", String::from_utf8(emit_report(&report, ReportFormat::Text))?);

    let json = emit_report(&report, ReportFormat::Json);
    println!("json report: {} bytes, exit code {}", json.len(), report.exit_code());

    // An impossible demand shows up as a failing row, not an error.
    let strict = RunConfig::new(50, 7).with_override("cosymplectic-volume=1e12")?;
    let failing = run_suite(model, "galilei-core", &strict)?;
    for f in failing.failures() {
        println!("failed: {} ({:.3e} vs {:.0e})", f.name, f.residual, f.tolerance);
    }
    Ok(())
}
