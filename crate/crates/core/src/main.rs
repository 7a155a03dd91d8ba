fn main() {
    std::process::exit(factorx::cli::run(std::env::args_os()));
}
