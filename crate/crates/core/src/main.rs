use clap::Parser;

fn main() {
    let cli = specbound::cli::Cli::parse();
    let code = specbound::cli::execute(cli, &mut std::io::stdout().lock());
    std::process::exit(code);
}
