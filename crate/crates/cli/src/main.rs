use clap::Parser;

fn main() {
    let cli = randdiag_cli::Cli::parse();
    if let Err(e) = randdiag_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}
