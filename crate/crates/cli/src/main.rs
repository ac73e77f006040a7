use std::io;

use selfnorm_cli::config::SEED_ENV;

fn main() {
    let env_seed = std::env::var(SEED_ENV).ok();
    let code = selfnorm_cli::run(
        std::env::args_os(),
        env_seed.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
