use clap::Parser;

use voaform_cli::{bit_cap_violation, render, run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    };
    match bit_cap_violation(out.max_bits) {
        Ok(None) => {}
        Ok(Some(diag)) => {
            eprintln!("error: {diag}");
            std::process::exit(2);
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
    print!("{}", render(&out.report, cli.output));
    std::process::exit(out.exit_code);
}
