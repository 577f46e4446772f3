mod args;
mod config;
mod run;
mod svg;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let argv = match config::expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("qmc: usage error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("qmc: usage error: --jobs must be at least 1");
            return 2;
        }
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let result = match &cli.command {
        Command::Points(a) => run::cmd_points(a),
        Command::Integrate(a) => run::cmd_integrate(a),
        Command::Compare(a) => run::cmd_compare(a),
        Command::Discrepancy(a) => run::cmd_discrepancy(a),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("qmc: {e}");
            e.exit_code()
        }
    }
}
