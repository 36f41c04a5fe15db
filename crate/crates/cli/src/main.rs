use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = rigidsim::Cli::parse();
    if let Err(e) = rigidsim::run(cli) {
        eprintln!("rigidsim: {e}");
        std::process::exit(e.exit_code());
    }
}
