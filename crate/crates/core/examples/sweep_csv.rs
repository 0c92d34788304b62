//! A sweep described in the flat config format, written as CSV to stdout.

use consensus_sim::experiments::parse_config;
use consensus_sim::{run_sweep, write_csv};

const CONFIG: &str = "
name = rounds-vs-fraction
protocol = fpc
topology = torus
side = 10
runs = 30
seed = 42
adversary_kind = cautious
sweep.adversary.fraction = 0, 0.1, 0.2
sweep.protocol.rounds = 10, 30
sweep.p0 = 0.3:0.7:0.2
";

fn main() -> consensus_sim::Result<()> {
    let spec = parse_config(CONFIG)?;
    eprintln!("{}: {} points x {} runs", spec.name, spec.point_count(), spec.runs_per_point);
    let result = run_sweep(&spec, 0)?;
    write_csv(&result, std::io::stdout().lock())
}
