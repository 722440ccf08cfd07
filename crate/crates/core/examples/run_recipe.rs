//! Parses a `key = value` recipe and runs it.

use aqrm::config::{resolve, ParsedConfig, RunConfig};
use aqrm::sweep::{gamma_map, run_sweep};

const RECIPE: &str = "
# photon number along the bias axis
delta = 1
g = 0.9
axis = epsilon
start = 0
stop = 2
steps = 5
exact = true
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::parse_str(RECIPE)?;
    match resolve(&cfg)? {
        ParsedConfig::Sweep(spec) => {
            for r in run_sweep(&spec, 1)? {
                let (var, exact) = (r.var.unwrap(), r.exact.unwrap());
                println!("eps={:.2}  <a+a> {:.6} vs {:.6}", r.model.epsilon, var.photon_number, exact.photon_number);
            }
        }
        ParsedConfig::GammaMap(spec) => println!("{} map rows", gamma_map(&spec, 1)?.len()),
    }

    let err = RunConfig::parse_str("steps = 10\ngama = 0.1\n").unwrap_err();
    println!("{err}");
    Ok(())
}
