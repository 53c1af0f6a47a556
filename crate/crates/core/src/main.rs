use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = {
        let stdout = std::io::stdout();
        let stderr = std::io::stderr();
        let mut out = stdout.lock();
        let mut err = stderr.lock();
        let code = slpseq::cli::run(std::env::args_os(), &mut out, &mut err);
        let _ = out.flush();
        code
    };
    std::process::exit(code);
}
