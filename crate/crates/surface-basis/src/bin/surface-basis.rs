use clap::Parser;

fn main() {
    let cli = surface_basis::cli::Cli::parse();
    std::process::exit(surface_basis::cli::run(cli));
}
