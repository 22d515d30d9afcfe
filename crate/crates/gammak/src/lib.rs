//! File formats, reports and the `gammak` command line over `gammak-core`.

pub mod cli;
pub mod config;
pub mod exit;
pub mod io;
pub mod report;
pub mod text;

use std::ffi::OsString;

use clap::Parser;

/// Parses `args`, runs the command, and returns (exit code, stdout, stderr).
pub fn run<I, T>(args: I) -> (u8, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match cli::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INVALID_INPUT } else { exit::PASS };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                (code, String::new(), format!("{rendered}gammak: exit {code} [usage]\n"))
            } else {
                (code, rendered, String::new())
            };
        }
    };
    let (code, out, err) = cli::execute(&parsed);
    (code, out, err.map(|l| l + "\n").unwrap_or_default())
}
