use std::io::{stderr, stdout};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let argv: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let code = circpeak_cli::run(&argv, &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
