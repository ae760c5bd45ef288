use clap::Parser;

fn main() {
    let cli = ismatch::cli::Cli::parse();
    if let Err(err) = ismatch::cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
