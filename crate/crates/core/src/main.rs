use std::io::Write;

fn main() {
    let (status, output) = lenscheck::cli::run(std::env::args_os());
    let stream: &mut dyn Write = if status == 2 { &mut std::io::stderr() } else { &mut std::io::stdout() };
    let _ = stream.write_all(output.as_bytes());
    std::process::exit(status);
}
