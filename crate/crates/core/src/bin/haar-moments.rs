use clap::Parser;
use haar_moments::cli::{run, Cli};

fn main() {
    let code = run(Cli::parse(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
