use clap::Parser;

fn main() {
    let cli = graphflow::Cli::parse();
    if let Err(e) = graphflow::run(&cli) {
        eprintln!("graphflow: {e}");
        std::process::exit(e.exit_code());
    }
}
