use std::process::ExitCode;

/// Worker cap from `QWR_THREADS`; 0 or unset leaves the pool automatic.
fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("QWR_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("QWR_THREADS must be a number, got {v:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Err(e) = init_threads() {
        eprintln!("qwr: {e}");
        return ExitCode::from(1);
    }
    let code = qwr_cli::app::main_with_args(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
