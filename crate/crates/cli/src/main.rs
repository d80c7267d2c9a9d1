use diffint_cli::{parse_args, run_command};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (cfg, payload) = match parse_args(std::env::args_os()) {
        Ok(parsed) => parsed,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let rendered = run_command(&cfg, &payload).and_then(|r| Ok((r.render(cfg.format)?, r.verified)));
    match rendered {
        Ok((text, verified)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(if verified { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
