//! Script parsing, command dispatch, and reports for the `wsc` binary.

pub mod examples;
pub mod parse;
pub mod run;

pub use parse::{parse, parse_ideal, parse_poly, Command, ParseError, Request};
pub use run::{run, Options, Report, Status, SCHEMA_VERSION};

/// Run every request of a script; the status is the worst one seen.
pub fn run_script(input: &str, opts: &Options) -> Result<(Vec<Report>, Status), ParseError> {
    let reqs = parse(input)?;
    let reports: Vec<Report> = reqs.iter().map(|r| run(r, opts)).collect();
    let status = reports.iter().map(Report::status).max().unwrap_or(Status::Definite);
    Ok((reports, status))
}

/// The JSON document for a script: one object, or an array for several commands.
pub fn reports_json(reports: &[Report]) -> serde_json::Value {
    match reports {
        [one] => one.to_json(),
        many => serde_json::Value::Array(many.iter().map(Report::to_json).collect()),
    }
}
