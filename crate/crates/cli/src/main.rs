use clap::Parser;
use cli::{render, run, write_atomic, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let parsed = Cli::parse();
    match run(parsed) {
        Ok((out, global)) => {
            let text = render(&out, global.format.unwrap_or_default());
            let written = match &global.output {
                Some(p) => write_atomic(p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
