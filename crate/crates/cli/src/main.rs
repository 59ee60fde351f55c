use std::io;

fn main() {
    let env_seed = std::env::var(exactcat_cli::SEED_ENV).ok();
    let code = exactcat_cli::run_from(std::env::args_os(), env_seed.as_deref(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
