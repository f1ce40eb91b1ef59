use clap::Parser;
use slh_extension::cli::{execute, Cli};

fn main() {
    std::process::exit(execute(&Cli::parse()));
}
