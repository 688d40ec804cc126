use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let argv: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let mut out = String::new();
    let code = s3real::cli::run(&argv, &mut out);
    let mut stdout = std::io::stdout();
    let _ = stdout.write_all(out.as_bytes());
    std::process::exit(code);
}
