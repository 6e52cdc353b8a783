fn main() {
    let code = ramsey_balance::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
