use clap::Parser;
use spinmarket::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = execute(&cli) {
        eprintln!("spinmarket: {e}");
        std::process::exit(e.exit_code());
    }
}
