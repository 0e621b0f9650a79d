use clap::Parser;

fn main() {
    std::process::exit(fsapprox_cli::run(fsapprox_cli::Cli::parse()));
}
