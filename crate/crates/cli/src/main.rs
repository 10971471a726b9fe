use clap::Parser;

fn main() {
    let cli = geonet_cli::Cli::parse();
    if let Err(e) = geonet_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
