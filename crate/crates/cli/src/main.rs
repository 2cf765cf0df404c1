use std::io::{stderr, stdout};

fn main() {
    if let Ok(v) = std::env::var("FRAMEPROOF_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global()
                    .expect("the global pool is configured once");
            }
            _ => {
                eprintln!("frameproof: FRAMEPROOF_THREADS must be a positive integer, got {v:?}");
                std::process::exit(64);
            }
        }
    }
    let code = frameproof_cli::run(std::env::args_os(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
