use clap::Parser;

use qnd_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("qnd: {err}");
        std::process::exit(err.exit_code());
    }
}
