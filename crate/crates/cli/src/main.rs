use clap::Parser;
use vacuumforge::Cli;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match vacuumforge::run(&cli) {
        Ok(manifest) => {
            log::info!("wrote {} files to {}", manifest.files.len(), cli.out.display());
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
