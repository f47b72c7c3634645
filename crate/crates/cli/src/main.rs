use clap::Parser;

fn main() {
    let cli = tripath_cli::Cli::parse();
    if let Err(err) = tripath_cli::run(&cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
