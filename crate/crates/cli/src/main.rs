use std::io::Write;

fn main() {
    let out = unicrit_cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    // a closed pipe leaves nothing useful to report
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
