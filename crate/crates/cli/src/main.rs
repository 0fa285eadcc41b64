use clap::Parser;
use gtm_cli::args::Cli;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    if let Err(e) = gtm_cli::run(&cli) {
        eprintln!("gtm: {e}");
        std::process::exit(e.exit_code());
    }
}
