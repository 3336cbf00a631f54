use clap::Parser;
use copylink::cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outputs) => {
            for p in outputs {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            std::process::exit(e.exit_code());
        }
    }
}
