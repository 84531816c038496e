use std::io::{stderr, stdout};

fn main() {
    let cfg = nullrel::cli::parse_args();
    let code = nullrel::cli::run(&cfg, &mut stdout(), &mut stderr());
    std::process::exit(code);
}
