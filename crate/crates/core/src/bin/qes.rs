use clap::Parser;
use qes::cli::{run, Cli, EXIT_ERROR};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.table);
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_ERROR);
        }
    }
}
