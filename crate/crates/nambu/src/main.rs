use clap::Parser;
use nambu::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
