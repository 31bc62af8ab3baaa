use clap::Parser;
use schatten_cli::cli::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = schatten_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
