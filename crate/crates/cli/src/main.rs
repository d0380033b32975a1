use clap::Parser;

fn main() {
    let cli = addel_cli::Cli::parse();
    let code = addel_cli::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
