use clap::error::ErrorKind;
use clap::Parser;
use moprl_cli::run::{main_with, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // exit code 2 is reserved for non-normal indices
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            std::process::exit(code);
        }
    };
    let out = cli.command.out_dir();
    std::process::exit(main_with(cli, out));
}
